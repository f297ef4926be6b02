"""Real Cl(6) on Delta = R^8, spinor complex structure, and SU(3)-structures from spinors.

The six generators are the integer matrices

    e1 = +E18 + E27 - E36 - E45      e2 = -E17 + E28 + E35 - E46
    e3 = -E16 + E25 - E38 + E47      e4 = -E15 - E26 - E37 - E48
    e5 = -E13 - E24 + E57 + E68      e6 = +E14 - E23 - E58 + E67

where ``E_ij`` sends ``e_i -> e_j`` and ``e_j -> -e_i``.  Their product
``J = e1 e2 e3 e4 e5 e6`` squares to ``-1`` and anticommutes with every
generator, so it doubles as a seventh generator and turns the same eight
dimensional space into a Cl(7)-module for spinors of R^7 restricted to S^6.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import combinations

import numpy as np

from .linalg import rank


class TranscriptionError(AssertionError):
    """A Clifford relation fails for the hard-coded generator matrices."""


class ZeroSpinor(ValueError):
    pass


_GENERATORS = (
    ((+1, 1, 8), (+1, 2, 7), (-1, 3, 6), (-1, 4, 5)),
    ((-1, 1, 7), (+1, 2, 8), (+1, 3, 5), (-1, 4, 6)),
    ((-1, 1, 6), (+1, 2, 5), (-1, 3, 8), (+1, 4, 7)),
    ((-1, 1, 5), (-1, 2, 6), (-1, 3, 7), (-1, 4, 8)),
    ((-1, 1, 3), (-1, 2, 4), (+1, 5, 7), (+1, 6, 8)),
    ((+1, 1, 4), (-1, 2, 3), (-1, 5, 8), (+1, 6, 7)),
)


def elementary(i: int, j: int) -> np.ndarray:
    """``E_ij`` in so(8), 1-based: ``e_i -> e_j``, ``e_j -> -e_i``."""
    m = np.zeros((8, 8), dtype=np.int64)
    m[j - 1, i - 1] = 1
    m[i - 1, j - 1] = -1
    return m


@dataclass(frozen=True)
class CliffordRep:
    gens: np.ndarray  # (6, 8, 8) integer
    volume: np.ndarray  # e1 e2 ... e6, integer

    @property
    def gens7(self) -> np.ndarray:
        """Generators of Cl(7): the six of Cl(6) followed by the volume element."""
        return np.concatenate([self.gens, self.volume[None]], axis=0)

    def gamma(self, x) -> np.ndarray:
        """Clifford multiplication by a vector of R^6 (or R^7 via the extra generator)."""
        x = np.asarray(x, dtype=float)
        g = self.gens if x.shape[-1] == 6 else self.gens7
        return np.tensordot(x, g, axes=1)


def clifford_relations(gens: np.ndarray) -> np.ndarray:
    """``g_i g_j + g_j g_i + 2 delta_ij`` for all pairs (integer array)."""
    n = gens.shape[0]
    eye = np.eye(gens.shape[1], dtype=gens.dtype)
    return np.array(
        [[gens[i] @ gens[j] + gens[j] @ gens[i] + 2 * (i == j) * eye for j in range(n)] for i in range(n)]
    )


@lru_cache(maxsize=None)
def build_cl6() -> CliffordRep:
    gens = np.array([sum(s * elementary(i, j) for s, i, j in row) for row in _GENERATORS])
    if np.any(clifford_relations(gens)):
        raise TranscriptionError("generators violate e_i e_j + e_j e_i = -2 delta_ij")
    volume = reduce(np.matmul, gens)
    gens.setflags(write=False)
    volume.setflags(write=False)
    return CliffordRep(gens, volume)


def volume_J(rep: CliffordRep | None = None) -> np.ndarray:
    return (rep or build_cl6()).volume


def generated_dimension(rep: CliffordRep | None = None) -> int:
    """Dimension of the span of all ordered products of distinct generators."""
    rep = rep or build_cl6()
    eye = np.eye(8, dtype=np.int64)
    words = []
    for k in range(7):
        for idx in combinations(range(6), k):
            words.append(reduce(np.matmul, [rep.gens[i] for i in idx], eye).ravel())
    return rank(np.array(words, dtype=float))


def _unit(phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    n = np.linalg.norm(phi)
    if n < 1e-14:
        raise ZeroSpinor("spinor has zero length")
    return phi / n


def spinor_decomposition(rep: CliffordRep, phi, cliff=None, Jspin=None):
    """Orthonormal bases of ``R phi``, ``R J(phi)`` and ``{X . phi}`` (columns)."""
    phi = _unit(phi)
    cliff = rep.gens if cliff is None else cliff
    Jspin = rep.volume if Jspin is None else Jspin
    line1 = phi[:, None]
    line2 = (Jspin @ phi)[:, None]
    images = np.stack([c @ phi for c in cliff], axis=1)
    q, _ = np.linalg.qr(images)
    return line1, line2, q


def jphi(rep: CliffordRep, phi, cliff=None, Jspin=None) -> np.ndarray:
    """Complex structure on R^6 with ``J_phi(X) . phi = J(X . phi)``, as a 6x6 matrix.

    ``cliff`` and ``Jspin`` default to the flat Cl(6) generators and their
    volume element; pass the tangential Clifford maps of a hypersurface to
    get the pointwise structure there.
    """
    phi = _unit(phi)
    cliff = rep.gens if cliff is None else cliff
    Jspin = rep.volume if Jspin is None else Jspin
    images = np.stack([c @ phi for c in cliff], axis=1)  # (8, 6), orthonormal columns
    return images.T @ (Jspin @ images)


def omega_phi(rep: CliffordRep, phi, cliff=None) -> np.ndarray:
    """``omega(X, Y, Z) = -(X.Y.Z.phi, phi)`` on frame triples, shape (6, 6, 6)."""
    phi = _unit(phi)
    cliff = rep.gens if cliff is None else cliff
    c = np.asarray(cliff, dtype=float)
    return -np.einsum("i,aij,bjk,ckl,l->abc", phi, c, c, c, phi)


def type_30_residual(omega: np.ndarray, J: np.ndarray) -> float:
    """``|omega(JX, JY, Z) + omega(X, Y, Z)|`` over frame triples."""
    rot = np.einsum("abc,ax,by->xyc", omega, J, J)
    return float(np.abs(rot + omega).max())


@lru_cache(maxsize=None)
def g2_spinor() -> np.ndarray:
    """Unit spinor whose 3-form ``-(x.y.z.phi, phi)`` on R^7 is the cross-product 3-form.

    It spans the simple eigenspace of the Clifford action of the 3-form
    ``sum f_abc g_a g_b g_c`` (a symmetric matrix); the overall sign of the
    spinor is fixed by a positive first nonzero entry.
    """
    from .octonion import cross_constants

    rep = build_cl6()
    g = rep.gens7.astype(float)
    f = cross_constants()
    m = sum(
        f[a, b, c] * g[a] @ g[b] @ g[c]
        for a, b, c in combinations(range(7), 3)
        if f[a, b, c]
    )
    vals, vecs = np.linalg.eigh(m)
    rounded = np.round(vals, 8)
    simple = [k for k in range(8) if np.sum(rounded == rounded[k]) == 1]
    if len(simple) != 1:
        raise ArithmeticError(f"no simple eigenvalue in {vals}")
    phi = vecs[:, simple[0]]
    first = phi[np.flatnonzero(np.abs(phi) > 1e-9)[0]]
    return phi * np.sign(first)


def spinor_three_form_r7(phi) -> np.ndarray:
    """``-(x.y.z.phi, phi)`` on the standard basis of R^7, shape (7, 7, 7)."""
    rep = build_cl6()
    return omega_phi(rep, phi, cliff=rep.gens7)


# --- spinors restricted to a hypersurface of R^7 ------------------------------


def tangent_clifford(rep: CliffordRep, frame: np.ndarray, N) -> np.ndarray:
    """Tangential Clifford maps ``X . phi = gamma(X) gamma(N) phi`` for the frame vectors."""
    gN = rep.gamma(np.asarray(N, dtype=float))
    return np.array([rep.gamma(e) @ gN for e in frame])


def tangent_volume(cliff: np.ndarray) -> np.ndarray:
    return reduce(np.matmul, cliff)


def killing_check(rep: CliffordRep, phi0, p, X, S=None) -> dict[str, float]:
    """Fit ``nabla_X phi = lambda X . phi`` for a constant spinor restricted to a hypersurface.

    ``nabla_X phi = 1/2 gamma(K X) gamma(N) phi`` (the ambient derivative of a
    constant spinor vanishes) and ``X . phi = gamma(X) gamma(N) phi``.
    """
    from .hypersurface import normal, shape_operator, unit_sphere

    S = unit_sphere() if S is None else S
    phi0 = _unit(phi0)
    N = normal(S, p)
    gN = rep.gamma(N)
    deriv = 0.5 * rep.gamma(shape_operator(S, p) @ X) @ gN @ phi0
    action = rep.gamma(np.asarray(X, dtype=float)) @ gN @ phi0
    lam = float(deriv @ action / (action @ action))
    return {"lambda": lam, "residual": float(np.linalg.norm(deriv - lam * action))}


def pointwise_jphi(rep: CliffordRep, phi0, S, p) -> tuple[np.ndarray, np.ndarray]:
    """``J_phi`` at ``p`` as a 7x7 ambient operator, together with the frame used."""
    from .hypersurface import normal, tangent_frame

    E = tangent_frame(S, p)
    cliff = tangent_clifford(rep, E, normal(S, p))
    J6 = jphi(rep, phi0, cliff=cliff, Jspin=tangent_volume(cliff))
    return E.T @ J6 @ E, E


def grunewald_match(rep: CliffordRep, phi0, S, p) -> tuple[int, float]:
    """Compare ``J_phi`` at ``p`` with ``N x .``; returns ``(sign, residual)``."""
    from .hypersurface import acs_matrix

    Jphi, _ = pointwise_jphi(rep, phi0, S, p)
    Joct = acs_matrix(S, p)
    errs = {s: float(np.abs(Jphi - s * Joct).max()) for s in (1, -1)}
    sign = min(errs, key=errs.get)
    return sign, errs[sign]


def jphi_nk_residual(rep: CliffordRep, phi0, S, p, X, h: float = 1e-5) -> float:
    """``|(nabla_X J_phi) X|`` by finite differences of the pointwise spinor structure."""
    from .hypersurface import cov_deriv, projected_field

    Xf = projected_field(S, X)
    JXf = lambda q: pointwise_jphi(rep, phi0, S, q)[0] @ Xf(q)  # noqa: E731
    Jp, _ = pointwise_jphi(rep, phi0, S, p)
    d = cov_deriv(S, p, X, JXf, h) - Jp @ cov_deriv(S, p, X, Xf, h)
    return float(np.linalg.norm(d))
