"""S^6 as the reductive homogeneous space G2/SU(3), at the Lie algebra level.

``g2`` is computed as the derivations of the cross product, i.e. the
nullspace of the Leibniz equations over 7x7 matrices.  The isotropy algebra
at an anchor point ``p0`` is the kernel of ``D -> D p0`` and ``m`` its
trace-form complement, identified with ``T_{p0} S^6`` by evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import RankDeficiency, complement, nullspace
from .octonion import cross
from .sampling import rng_for


class UnexpectedDimension(RankDeficiency):
    pass


def _leibniz_residual(D: np.ndarray) -> np.ndarray:
    """Stack of ``D(e_i x e_j) - D e_i x e_j - e_i x D e_j`` over ``i < j``."""
    E = np.eye(7)
    rows = []
    for i in range(7):
        for j in range(i + 1, 7):
            rows.append(D @ cross(E[i], E[j]) - cross(D[:, i], E[j]) - cross(E[i], D[:, j]))
    return np.concatenate(rows)


def _inner(a, b):
    return np.einsum("...ij,...ij->...", a, b)


@dataclass(frozen=True)
class DerivationAlgebra:
    """Frobenius-orthonormal basis of the derivation algebra, with structure constants."""

    basis: np.ndarray  # (dim, 7, 7)
    structure: np.ndarray  # [D_a, D_b] = sum_c structure[a, b, c] D_c

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def element(self, coeffs) -> np.ndarray:
        return np.tensordot(coeffs, self.basis, axes=1)

    def leibniz_residual(self) -> float:
        return float(max(np.abs(_leibniz_residual(D)).max() for D in self.basis))

    def skew_residual(self) -> float:
        return float(np.abs(self.basis + self.basis.transpose(0, 2, 1)).max())

    def closure_residual(self) -> float:
        worst = 0.0
        for a in range(self.dim):
            for b in range(self.dim):
                br = self.basis[a] @ self.basis[b] - self.basis[b] @ self.basis[a]
                worst = max(worst, np.abs(br - self.element(self.structure[a, b])).max())
        return float(worst)

    def jacobi_residual(self) -> float:
        c = self.structure
        # sum over cyclic (a, b, c) of [D_a, [D_b, D_c]] in coordinates
        jac = (
            np.einsum("bcd,ade->abce", c, c)
            + np.einsum("cad,bde->abce", c, c)
            + np.einsum("abd,cde->abce", c, c)
        )
        return float(np.abs(jac).max())


@lru_cache(maxsize=None)
def derivation_algebra(expected_dim: int = 14) -> DerivationAlgebra:
    cols = []
    for k in range(49):
        D = np.zeros(49)
        D[k] = 1.0
        cols.append(_leibniz_residual(D.reshape(7, 7)))
    system = np.array(cols).T  # (147, 49)
    kern = nullspace(system)
    if kern.shape[1] != expected_dim:
        raise RankDeficiency(f"derivation algebra has dimension {kern.shape[1]}, expected {expected_dim}")
    basis = kern.T.reshape(-1, 7, 7)
    comm = np.einsum("aij,bjk->abik", basis, basis)
    comm = comm - comm.transpose(1, 0, 2, 3)
    structure = np.einsum("abij,cij->abc", comm, basis)
    basis.setflags(write=False)
    structure.setflags(write=False)
    return DerivationAlgebra(basis, structure)


@dataclass(frozen=True)
class ReductiveSplit:
    """``g2 = h + m`` at an anchor point, with ``m`` identified with ``T_{p0} S^6``."""

    h_basis: np.ndarray  # (8, 7, 7)
    m_basis: np.ndarray  # (6, 7, 7)
    p0: np.ndarray
    evaluation: np.ndarray  # (7, 6): column a is m_a p0

    @property
    def eval_singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.evaluation, compute_uv=False)

    @property
    def condition_number(self) -> float:
        s = self.eval_singular_values
        return float(s[0] / s[-1])

    def m_coords(self, A: np.ndarray) -> np.ndarray:
        """Coordinates of the trace-form projection of ``A`` onto ``m``."""
        return _inner(self.m_basis, A)

    def h_coords(self, A: np.ndarray) -> np.ndarray:
        return _inner(self.h_basis, A)

    def bracket_m(self, x, y) -> np.ndarray:
        """``[X, Y]_m`` for ``X, Y`` given by m-coordinates; returns m-coordinates."""
        X = np.tensordot(x, self.m_basis, axes=1)
        Y = np.tensordot(y, self.m_basis, axes=1)
        return self.m_coords(X @ Y - Y @ X)

    def metric(self, x, y) -> float:
        """Inner product on ``m`` pulled back from ``T_{p0}`` through evaluation."""
        return float((self.evaluation @ x) @ (self.evaluation @ y))

    def torsion(self, x, y, z) -> float:
        """Canonical torsion ``-<[X, Y]_m, Z>``."""
        return -self.metric(self.bracket_m(x, y), z)

    def torsion_table(self) -> np.ndarray:
        return np.array(
            [[[self.torsion(*np.eye(6)[[a, b, c]]) for c in range(6)] for b in range(6)] for a in range(6)]
        )


def isotropy_split(g2: DerivationAlgebra | None = None, p0=None) -> ReductiveSplit:
    g2 = derivation_algebra() if g2 is None else g2
    p0 = np.eye(7)[6] if p0 is None else np.asarray(p0, dtype=float)
    if abs(np.linalg.norm(p0) - 1.0) > 1e-12:
        raise ValueError("anchor point must be a unit vector")
    ev = np.einsum("aij,j->ia", g2.basis, p0)  # (7, 14)
    h_coef = nullspace(ev)
    if h_coef.shape[1] != 8:
        raise UnexpectedDimension(f"isotropy algebra has dimension {h_coef.shape[1]}, expected 8")
    m_coef = complement(h_coef)
    h = np.einsum("ka,kij->aij", h_coef, g2.basis)
    m = np.einsum("ka,kij->aij", m_coef, g2.basis)
    return ReductiveSplit(h, m, p0, np.einsum("aij,j->ia", m, p0))


def split_residuals(split: ReductiveSplit) -> dict[str, float]:
    """Algebraic invariants of the splitting."""
    h, m = split.h_basis, split.m_basis
    J = np.array([cross(split.p0, e) for e in np.eye(7)]).T
    P = np.eye(7) - np.outer(split.p0, split.p0)
    out = {
        "h_kills_p0": float(np.abs(np.einsum("aij,j->ai", h, split.p0)).max()),
        "h_commutes_with_J": float(max(np.abs(P @ (D @ J - J @ D) @ P).max() for D in h)),
    }
    hh = mm = hm = 0.0
    for A in h:
        for B in h:
            br = A @ B - B @ A
            hh = max(hh, np.abs(split.m_coords(br)).max())
        for B in m:
            br = A @ B - B @ A
            hm = max(hm, np.abs(split.h_coords(br)).max())
    out["h_bracket_h_in_h"] = float(hh)
    out["h_bracket_m_in_m"] = float(hm)
    out["eval_min_singular_value"] = float(split.eval_singular_values[-1])
    return out


def natural_reductivity_check(split: ReductiveSplit, seed: int = 0, n: int = 1000) -> float:
    """Max of ``|<[X,Y]_m, Z> + <[X,Z]_m, Y>|`` over random triples in ``m``."""
    rng = rng_for(seed, "reductive.natural_reductivity")
    worst = 0.0
    for x, y, z in rng.standard_normal((n, 3, 6)):
        r = split.metric(split.bracket_m(x, y), z) + split.metric(split.bracket_m(x, z), y)
        worst = max(worst, abs(r))
    return float(worst)


def table_antisymmetry(table: np.ndarray) -> float:
    perms = [(1, 0, 2), (0, 2, 1), (2, 1, 0)]
    return float(max(np.abs(table + table.transpose(p)).max() for p in perms))


def canonical_torsion_match(split: ReductiveSplit, seed: int = 0, n: int = 1000) -> dict[str, float]:
    """Fit ``T_bracket = kappa * T_octonionic`` on evaluated vectors; report kappa and the residual."""
    from .connection import octonionic_torsion

    rng = rng_for(seed, "reductive.canonical_torsion")
    can, octo = [], []
    for x, y, z in rng.standard_normal((n, 3, 6)):
        can.append(split.torsion(x, y, z))
        ev = split.evaluation
        octo.append(octonionic_torsion(split.p0, ev @ x, ev @ y, ev @ z))
    can, octo = np.array(can), np.array(octo)
    kappa = float(can @ octo / (octo @ octo))
    return {"kappa": kappa, "residual": float(np.abs(can - kappa * octo).max())}


def torsion_invariance_residual(split: ReductiveSplit) -> float:
    """``T([D,X],Y,Z) + T(X,[D,Y],Z) + T(X,Y,[D,Z])`` for ``D`` in ``h``, over basis triples."""
    T = split.torsion_table()
    worst = 0.0
    for D in split.h_basis:
        ad = np.array([split.m_coords(D @ X - X @ D) for X in split.m_basis]).T  # ad[c, a]
        var = (
            np.einsum("da,dbc->abc", ad, T)
            + np.einsum("db,adc->abc", ad, T)
            + np.einsum("dc,abd->abc", ad, T)
        )
        worst = max(worst, np.abs(var).max())
    return float(worst)
