"""Octonions, the Cayley space of imaginary octonions and its cross product.

The algebra is built from quaternion pairs with the Cayley-Dickson rule

    (a, b)(c, d) = (ac - conj(d) b,  d a + b conj(c))

and the basis 1, e1..e7 is laid out as

    e0 = (1, 0), e1 = (i, 0), e2 = (j, 0), e3 = (k, 0),
    e4 = (0, 1), e5 = (0, i), e6 = (0, j), e7 = (0, k).

so e1, e2, e3 span the imaginary quaternions.  Basis products are computed
in integer arithmetic once and cached as a signed-index table; general
products contract against the resulting integer structure constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .sampling import rng_for

__all__ = [
    "Octonion",
    "MultiplicationTable",
    "multiplication_table",
    "structure_constants",
    "cross_constants",
    "oct_mul",
    "oct_conj",
    "oct_norm",
    "cayley_dickson_mul",
    "embed",
    "imag",
    "basis",
    "cross",
    "triple",
    "jacobi",
    "identity_suite",
]

# quaternion basis products: _QUAT[a][b] = (sign, index) with 1, i, j, k = 0..3
_QUAT = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)


def _quat_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    out = [0, 0, 0, 0]
    for a in range(4):
        if p[a] == 0:
            continue
        for b in range(4):
            if q[b] == 0:
                continue
            s, c = _QUAT[a][b]
            out[c] += s * p[a] * q[b]
    return tuple(out)


def _quat_conj(q: tuple[int, ...]) -> tuple[int, ...]:
    return (q[0], -q[1], -q[2], -q[3])


def _add(p, q):
    return tuple(x + y for x, y in zip(p, q))


def _sub(p, q):
    return tuple(x - y for x, y in zip(p, q))


def _cd_mul_exact(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    a, b = x[:4], x[4:]
    c, d = y[:4], y[4:]
    first = _sub(_quat_mul(a, c), _quat_mul(_quat_conj(d), b))
    second = _add(_quat_mul(d, a), _quat_mul(b, _quat_conj(c)))
    return first + second


@dataclass(frozen=True)
class MultiplicationTable:
    """Signed basis table: ``e_i e_j = sign[i, j] * e_{index[i, j]}``."""

    index: np.ndarray
    sign: np.ndarray

    def product(self, i: int, j: int) -> tuple[int, int]:
        return int(self.sign[i, j]), int(self.index[i, j])

    def __str__(self) -> str:
        names = ["1"] + [f"e{k}" for k in range(1, 8)]
        rows = []
        for i in range(8):
            cells = []
            for j in range(8):
                s, k = self.product(i, j)
                cells.append(("-" if s < 0 else "+") + names[k])
            rows.append(" ".join(f"{c:>4}" for c in cells))
        return "\n".join(rows)


@lru_cache(maxsize=None)
def multiplication_table() -> MultiplicationTable:
    index = np.zeros((8, 8), dtype=np.int64)
    sign = np.zeros((8, 8), dtype=np.int64)
    for i in range(8):
        for j in range(8):
            ei = tuple(int(k == i) for k in range(8))
            ej = tuple(int(k == j) for k in range(8))
            prod = _cd_mul_exact(ei, ej)
            (nz,) = [k for k in range(8) if prod[k] != 0]
            index[i, j] = nz
            sign[i, j] = prod[nz]
    index.setflags(write=False)
    sign.setflags(write=False)
    return MultiplicationTable(index, sign)


@lru_cache(maxsize=None)
def structure_constants() -> np.ndarray:
    """Integer tensor ``C[i, j, k]`` with ``e_i e_j = sum_k C[i, j, k] e_k``."""
    tab = multiplication_table()
    c = np.zeros((8, 8, 8), dtype=np.int64)
    for i in range(8):
        for j in range(8):
            c[i, j, tab.index[i, j]] = tab.sign[i, j]
    c.setflags(write=False)
    return c


@lru_cache(maxsize=None)
def cross_constants() -> np.ndarray:
    """Totally antisymmetric ``f[a, b, c]`` with ``(A x B)_c = f[a, b, c] A_a B_b``."""
    c = structure_constants()[1:, 1:, 1:]
    f = (c - c.transpose(1, 0, 2)) // 2
    f.setflags(write=False)
    return f


def oct_mul(a, b) -> np.ndarray:
    """Octonion product of coefficient arrays of shape ``(..., 8)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.einsum("...i,...j,ijk->...k", a, b, structure_constants())


def cayley_dickson_mul(a, b) -> np.ndarray:
    """Product evaluated through quaternion pairs, independent of the table."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    def qmul(p, q):
        p0, p1, p2, p3 = np.moveaxis(p, -1, 0)
        q0, q1, q2, q3 = np.moveaxis(q, -1, 0)
        return np.stack(
            [
                p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
                p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
                p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
                p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
            ],
            axis=-1,
        )

    def qconj(q):
        return q * np.array([1.0, -1.0, -1.0, -1.0])

    x, y = a[..., :4], a[..., 4:]
    z, w = b[..., :4], b[..., 4:]
    return np.concatenate(
        [qmul(x, z) - qmul(qconj(w), y), qmul(w, x) + qmul(y, qconj(z))], axis=-1
    )


def oct_conj(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a[..., 1:] *= -1.0
    return a


def oct_norm(a) -> np.ndarray:
    return np.linalg.norm(np.asarray(a, dtype=float), axis=-1)


def embed(v) -> np.ndarray:
    """Cayley vector (7 coefficients) -> octonion with zero real part."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (8,))
    out[..., 1:] = v
    return out


def imag(a) -> np.ndarray:
    return np.asarray(a, dtype=float)[..., 1:].copy()


def basis(i: int) -> np.ndarray:
    """Imaginary unit e_i (i = 1..7) as a Cayley vector."""
    if not 1 <= i <= 7:
        raise ValueError(f"imaginary units are e1..e7, got e{i}")
    v = np.zeros(7)
    v[i - 1] = 1.0
    return v


@dataclass(frozen=True, eq=False)
class Octonion:
    """Convenience value wrapper around an 8-vector of coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(8)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def unit(cls, i: int = 0) -> Octonion:
        c = np.zeros(8)
        c[i] = 1.0
        return cls(c)

    @classmethod
    def from_cayley(cls, v) -> Octonion:
        return cls(embed(v))

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    @property
    def cayley(self) -> np.ndarray:
        return imag(self.coeffs)

    def conj(self) -> Octonion:
        return Octonion(oct_conj(self.coeffs))

    def norm(self) -> float:
        return float(oct_norm(self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(oct_mul(self.coeffs, other.coeffs))
        return Octonion(self.coeffs * float(other))

    __rmul__ = lambda self, other: Octonion(self.coeffs * float(other))  # noqa: E731

    def __add__(self, other: Octonion) -> Octonion:
        return Octonion(self.coeffs + other.coeffs)

    def __sub__(self, other: Octonion) -> Octonion:
        return Octonion(self.coeffs - other.coeffs)

    def __neg__(self) -> Octonion:
        return Octonion(-self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Octonion) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        return f"Octonion({np.array2string(self.coeffs, precision=6)})"


def cross(a, b) -> np.ndarray:
    """Cross product ``(AB - BA)/2`` on the Cayley space, shape ``(..., 7)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.einsum("...i,...j,ijk->...k", a, b, cross_constants())


def triple(a, b, c) -> np.ndarray:
    """Scalar triple product ``<a, b x c>``."""
    return np.einsum("...k,...k->...", np.asarray(a, dtype=float), cross(b, c))


def jacobi(a, b, c) -> np.ndarray:
    """Jacobiator ``a x (b x c) + b x (c x a) + c x (a x b)``."""
    return cross(a, cross(b, c)) + cross(b, cross(c, a)) + cross(c, cross(a, b))


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def identity_suite(seed: int = 0, n_samples: int = 10_000) -> dict[str, float]:
    """Maximum residuals of the cross-product identities over random samples.

    Returns a mapping from identity name to the largest residual seen.  The
    ``jacobi`` entry is the largest Jacobiator norm and is expected to be
    large, since the 7-dimensional cross product is not a Lie bracket.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = rng_for(seed, "octonion.identity_suite")
    x8 = rng.standard_normal((n_samples, 8))
    y8 = rng.standard_normal((n_samples, 8))
    a, b, c = (rng.standard_normal((n_samples, 7)) for _ in range(3))

    xy = oct_mul(x8, y8)
    norm_mult = np.abs(oct_norm(xy) - oct_norm(x8) * oct_norm(y8)) / (
        oct_norm(x8) * oct_norm(y8)
    )
    conj_rev = np.linalg.norm(oct_conj(xy) - oct_mul(oct_conj(y8), oct_conj(x8)), axis=-1)
    cd = np.linalg.norm(xy - cayley_dickson_mul(x8, y8), axis=-1)

    ab = cross(a, b)
    commutator = 0.5 * (oct_mul(embed(a), embed(b)) - oct_mul(embed(b), embed(a)))
    comm_res = np.linalg.norm(commutator - embed(ab), axis=-1)

    malcev = np.linalg.norm(
        cross(a, cross(a, b)) - (-_dot(a, a)[:, None] * b + _dot(a, b)[:, None] * a), axis=-1
    )

    # C orthogonalised against span{A, B}
    q, _ = np.linalg.qr(np.stack([a, b], axis=-1))
    c_perp = c - np.einsum("nij,nj->ni", q, np.einsum("nij,ni->nj", q, c))
    lhs = cross(ab, c_perp)
    orth_c = np.linalg.norm(
        lhs - (-cross(a, cross(b, c_perp)) - _dot(a, b)[:, None] * c_perp), axis=-1
    )
    orth_c_printed = np.linalg.norm(
        lhs - (cross(a, cross(b, c_perp)) - _dot(a, b)[:, None] * c_perp), axis=-1
    )

    t_abc = triple(a, b, c)
    tp = np.maximum(np.abs(t_abc - _dot(ab, c)), np.abs(t_abc + triple(b, a, c)))
    tp = np.maximum(tp, np.abs(t_abc + triple(a, c, b)))
    scale = np.linalg.norm(a, axis=-1) * np.linalg.norm(b, axis=-1) * np.linalg.norm(c, axis=-1)

    return {
        "norm_multiplicativity": float(norm_mult.max()),
        "conj_reverses_products": float((conj_rev / (oct_norm(x8) * oct_norm(y8))).max()),
        "table_vs_cayley_dickson": float(cd.max() / 1.0),
        "cross_is_commutator": float(comm_res.max()),
        "malcev": float((malcev / (_dot(a, a) * np.linalg.norm(b, axis=-1))).max()),
        "orthogonal_c": float((orth_c / scale).max()),
        "orthogonal_c_as_printed": float((orth_c_printed / scale).max()),
        "triple_product": float((tp / scale).max()),
        "jacobi": float((np.linalg.norm(jacobi(a, b, c), axis=-1) / scale).max()),
    }
