"""Pointwise Gray-Hervella decomposition and the Theta map.

Everything lives in a fixed orthonormal frame of R^6 with a reference
orthogonal complex structure ``J0`` (a 6x6 matrix, ``J0[a, b] = <e_a, J e_b>``).
A covariant-derivative tensor is the array ``A[x, y, z] = <(nabla_x J) y, z>``;
it is skew in ``(y, z)`` and ``A(x, J0 y, J0 z) = -A(x, y, z)``, which cuts out
the 36-dimensional space ``R^6 (x) m`` with ``m = {B in so(6) : B J0 = -J0 B}``.

The four classes are realised as orthonormal bases of subspaces of R^216:

* ``W1 + W2``: ``A(J0 x, J0 y, z) = -A(x, y, z)``; ``W1`` its totally skew part
* ``W3 + W4``: ``A(J0 x, J0 y, z) = +A(x, y, z)``; ``W4`` is the complement of the
  Lee-form kernel ``sum_i A(e_i, e_i, z) = 0`` inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .linalg import complement, intersection, nullspace, orth, rank

MEMBER_TOL = 1e-10


class MembershipFailure(ValueError):
    pass


def _as_key(J0: np.ndarray) -> bytes:
    return np.round(np.asarray(J0, dtype=float), 13).tobytes()


def transform(A: np.ndarray, M1, M2, M3) -> np.ndarray:
    """``A'(x, y, z) = A(M1 x, M2 y, M3 z)`` in frame components."""
    return np.einsum("abc,ax,by,cz->xyz", A, M1, M2, M3)


def _operator(fn) -> np.ndarray:
    cols = []
    for k in range(216):
        e = np.zeros(216)
        e[k] = 1.0
        cols.append(fn(e.reshape(6, 6, 6)).ravel())
    return np.array(cols).T


@dataclass(frozen=True)
class GHSpaces:
    J0: np.ndarray
    V: np.ndarray  # (216, 36) membership space
    W: tuple  # four (216, d_k) bases
    L3: np.ndarray  # (216, 20) totally skew tensors
    L3_W: tuple  # (W1, W3, W4) bases of Lambda^3, (216, d)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(w.shape[1] for w in self.W)

    @property
    def skew_ranks(self) -> tuple[int, ...]:
        return tuple(w.shape[1] for w in self.L3_W)

    def projectors(self) -> tuple[np.ndarray, ...]:
        return tuple(w @ w.T for w in self.W)


def gh_spaces(J0: np.ndarray) -> GHSpaces:
    return _gh_spaces(_as_key(J0))


@lru_cache(maxsize=64)
def _gh_spaces(key: bytes) -> GHSpaces:
    J0 = np.frombuffer(key, dtype=float).reshape(6, 6)
    I6 = np.eye(6)
    eye = np.eye(216)
    swap = _operator(lambda A: A.transpose(0, 2, 1))
    janti = _operator(lambda A: transform(A, I6, J0, J0))
    V = nullspace(np.vstack([eye + swap, eye + janti]))

    L = _operator(lambda A: transform(A, J0, J0, I6))
    W12 = intersection(V, nullspace(eye + L))
    W34 = intersection(V, nullspace(eye - L))

    from .connection import antisymmetrize

    alt = _operator(antisymmetrize)
    L3 = orth(alt)
    W1 = intersection(W12, L3)
    W2 = complement(W1, within=W12)
    lee = np.array([[1.0 if (k // 36 == (k // 6) % 6 and k % 6 == z) else 0.0 for k in range(216)] for z in range(6)])
    W3 = intersection(W34, nullspace(lee))
    W4 = complement(W3, within=W34)

    # Lambda^3 by type: eigenvalue -3 of T -> T(J,J,.) + T(J,.,J) + T(.,J,J) is (3,0)+(0,3)
    typ = _operator(lambda T: transform(T, J0, J0, I6) + transform(T, J0, I6, J0) + transform(T, I6, J0, J0))
    L3_30 = intersection(L3, nullspace(typ + 3 * eye))
    L3_21 = intersection(L3, nullspace(typ - eye))
    kahler = J0.T
    theta_wedge = np.array([_wedge_12(np.eye(6)[i], kahler).ravel() for i in range(6)]).T
    L3_W4 = orth(theta_wedge)
    L3_W3 = complement(L3_W4, within=L3_21)
    return GHSpaces(J0, V, (W1, W2, W3, W4), L3, (L3_30, L3_W3, L3_W4))


def _wedge_12(theta: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """``(theta ^ omega)(x, y, z) = theta(x) omega(y, z) + theta(y) omega(z, x) + theta(z) omega(x, y)``."""
    t = np.einsum("a,bc->abc", theta, omega)
    return t + t.transpose(1, 2, 0) + t.transpose(2, 0, 1)


# --- covariant derivative tensors ------------------------------------------------


@dataclass(frozen=True)
class CovDerivTensor:
    A: np.ndarray  # (6, 6, 6)
    J0: np.ndarray
    frame: np.ndarray | None = None


def membership_residuals(A: np.ndarray, J0: np.ndarray) -> dict[str, float]:
    I6 = np.eye(6)
    return {
        "skew": float(np.abs(A + A.transpose(0, 2, 1)).max()),
        "j_anti": float(np.abs(transform(A, I6, J0, J0) + A).max()),
    }


def make_tensor(A, J0, frame=None, tol: float = MEMBER_TOL) -> CovDerivTensor:
    A = np.asarray(A, dtype=float)
    res = membership_residuals(A, J0)
    scale = max(1.0, float(np.abs(A).max()))
    if max(res.values()) > tol * scale:
        raise MembershipFailure(f"tensor is not in R^6 (x) m: {res}")
    return CovDerivTensor(A, np.asarray(J0, dtype=float), frame)


def build_A(S, p) -> CovDerivTensor:
    """``A(x, y, z) = <(nabla_x J) y, z>`` from the closed-form Calabi formula."""
    from .hypersurface import acs_matrix, nablaJ_closed, tangent_frame, to_frame

    E = tangent_frame(S, p)
    A = np.array([[[nablaJ_closed(S, p, x, y) @ z for z in E] for y in E] for x in E])
    return make_tensor(A, to_frame(E, acs_matrix(S, p)), E)


@dataclass(frozen=True)
class GHSplit:
    w: tuple  # four (6, 6, 6) components

    @property
    def norms(self) -> tuple[float, ...]:
        return tuple(float(np.linalg.norm(c)) for c in self.w)


def gh_project(t: CovDerivTensor) -> GHSplit:
    sp = gh_spaces(t.J0)
    a = t.A.ravel()
    return GHSplit(tuple((W @ (W.T @ a)).reshape(6, 6, 6) for W in sp.W))


def skew3_split(T: np.ndarray, J0: np.ndarray) -> tuple[np.ndarray, ...]:
    """Components of a 3-form in ``W1 + W3 + W4`` of ``Lambda^3``."""
    sp = gh_spaces(J0)
    t = np.asarray(T, dtype=float).ravel()
    return tuple((W @ (W.T @ t)).reshape(6, 6, 6) for W in sp.L3_W)


# --- intrinsic torsion and Theta -------------------------------------------------


def gamma_from_nablaJ(t: CovDerivTensor) -> np.ndarray:
    """``Gamma_x = -1/2 (nabla_x J) J0``, shape (6, 6, 6) indexed ``[x, row, col]``."""
    M = t.A.transpose(0, 2, 1)  # M[x] is the matrix of nabla_x J
    G = -0.5 * np.einsum("xij,jk->xik", M, t.J0)
    res = m_membership(G, t.J0)
    if res > MEMBER_TOL * max(1.0, float(np.abs(G).max())):
        raise MembershipFailure(f"Gamma not m-valued (residual {res:.3e})")
    return G


def m_membership(G: np.ndarray, J0: np.ndarray) -> float:
    skew = np.abs(G + G.transpose(0, 2, 1)).max()
    anti = np.abs(np.einsum("xij,jk->xik", G, J0) + np.einsum("ij,xjk->xik", J0, G)).max()
    return float(max(skew, anti))


def nablaJ_from_gamma(G: np.ndarray, J0: np.ndarray) -> np.ndarray:
    """Inverse of :func:`gamma_from_nablaJ`: ``nabla_x J = 2 Gamma_x J0`` as an ``A`` array."""
    M = 2.0 * np.einsum("xij,jk->xik", G, J0)
    return M.transpose(0, 2, 1)


def pr_m(B: np.ndarray, J0: np.ndarray) -> np.ndarray:
    return 0.5 * (B + J0 @ B @ J0)


def theta_map(T: np.ndarray, J0: np.ndarray) -> np.ndarray:
    """``Theta(T) = sum_i e_i (x) pr_m(e_i -| T)``; 2-forms become matrices via ``<B x, y> = beta(x, y)``."""
    T = np.asarray(T, dtype=float)
    return np.array([pr_m(T[i].T, J0) for i in range(6)])


def theta_matrix(J0: np.ndarray) -> np.ndarray:
    """Theta as a (216, 20) matrix on the basis of ``Lambda^3`` from :func:`gh_spaces`."""
    sp = gh_spaces(J0)
    return np.array([theta_map(b.reshape(6, 6, 6), J0).ravel() for b in sp.L3.T]).T


def theta_image_in_A(J0: np.ndarray) -> np.ndarray:
    """Images ``Theta(T)`` carried into the ``A`` space through ``nabla J = 2 Gamma J0``."""
    sp = gh_spaces(J0)
    return np.array(
        [nablaJ_from_gamma(theta_map(b.reshape(6, 6, 6), J0), J0).ravel() for b in sp.L3.T]
    ).T


@dataclass(frozen=True)
class ThetaConvention:
    """``2 Gamma = factor * Theta(T^c)``, fitted on the round sphere."""

    factor: float
    residual: float


@lru_cache(maxsize=None)
def theta_convention() -> ThetaConvention:
    from .connection import torsion_octonionic
    from .hypersurface import unit_sphere

    p = np.eye(7)[6]
    t = build_A(unit_sphere(), p)
    G = gamma_from_nablaJ(t)
    Tc, _ = torsion_octonionic(p, t.frame)
    th = theta_map(Tc.values, t.J0)
    factor = float(np.sum(2 * G * th) / np.sum(th * th))
    rounded = float(np.round(factor))
    if abs(factor - rounded) > 1e-8 or rounded == 0:
        raise ArithmeticError(f"2 Gamma / Theta(T) = {factor} is not a nonzero integer")
    return ThetaConvention(rounded, float(np.abs(2 * G - rounded * th).max()))


def char_connection_exists(t: CovDerivTensor, tol: float = 1e-8) -> dict:
    """Decide existence of a characteristic connection and recover its torsion.

    Exists iff the W2 component vanishes; the torsion is then the least
    squares solution of ``factor * Theta(T) = 2 Gamma`` on ``Lambda^3``.
    """
    split = gh_project(t)
    scale = max(1.0, float(np.linalg.norm(t.A)))
    w2 = split.norms[1]
    if w2 > tol * scale:
        return {"exists": False, "T": None, "w2": w2, "residual": float("nan")}
    conv = theta_convention()
    G = gamma_from_nablaJ(t)
    sp = gh_spaces(t.J0)
    mat = conv.factor * theta_matrix(t.J0)
    coef, *_ = np.linalg.lstsq(mat, 2.0 * G.ravel(), rcond=None)
    T = (sp.L3 @ coef).reshape(6, 6, 6)
    res = float(np.abs(2.0 * G - conv.factor * theta_map(T, t.J0)).max())
    return {"exists": True, "T": T, "w2": w2, "residual": res}


def projector_residuals(J0: np.ndarray) -> dict[str, float]:
    """Idempotence, symmetry, mutual annihilation and completeness of the four projectors."""
    P = gh_spaces(J0).projectors()
    V = gh_spaces(J0).V
    out = {
        "idempotent": max(float(np.abs(p @ p - p).max()) for p in P),
        "self_adjoint": max(float(np.abs(p - p.T).max()) for p in P),
        "annihilating": max(float(np.abs(P[i] @ P[j]).max()) for i, j in combinations(range(4), 2)),
        "complete": float(np.abs(sum(P) - V @ V.T).max()),
    }
    return out


def theta_image_report(J0: np.ndarray) -> dict[str, float]:
    sp = gh_spaces(J0)
    img = theta_image_in_A(J0)
    W2 = sp.W[1]
    return {
        "rank": rank(theta_matrix(J0)),
        "image_vs_W2": float(np.abs(W2.T @ img).max()),
        "rank_with_W2": rank(np.hstack([orth(img), W2])),
    }
