"""Characteristic connection of nearly Kähler level surfaces.

Torsion is stored as a 3-form in the orthonormal tangent frame of
:func:`nkahler.hypersurface.tangent_frame`; :class:`ThreeForm` evaluates on
ambient vectors through that frame.  The connection is
``nabla^c_X Y = nabla^g_X Y + 1/2 T(X, Y, .)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import factorial
from typing import Callable

import numpy as np

from . import clifford
from .hypersurface import (
    FD_STEP,
    FD_TOL,
    LevelSurface,
    acs,
    cov_deriv,
    directional,
    nablaJ_closed,
    normal,
    projected_field,
    random_points,
    tangent_frame,
    tangent_projector,
    unit_sphere,
)
from .octonion import cross
from .sampling import rng_for


class NotNearlyKahler(ValueError):
    pass


def _perm_sign(p) -> int:
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def antisymmetrize(t: np.ndarray) -> np.ndarray:
    k = t.ndim
    return sum(_perm_sign(p) * t.transpose(p) for p in permutations(range(k))) / factorial(k)


def skew_residual(t: np.ndarray) -> float:
    """Largest deviation from total antisymmetry, over single transpositions."""
    k = t.ndim
    worst = 0.0
    for i, j in combinations(range(k), 2):
        axes = list(range(k))
        axes[i], axes[j] = axes[j], axes[i]
        worst = max(worst, np.abs(t + t.transpose(axes)).max())
    return float(worst)


@dataclass(frozen=True)
class ThreeForm:
    values: np.ndarray  # (6, 6, 6), totally antisymmetric
    frame: np.ndarray  # (6, 7)

    def __call__(self, X, Y, Z) -> float:
        E = self.frame
        return float(np.einsum("abc,a,b,c->", self.values, E @ X, E @ Y, E @ Z))

    def vector(self, X, Y) -> np.ndarray:
        """``T(X, Y, .)`` raised to an ambient tangent vector."""
        E = self.frame
        return np.einsum("abc,a,b->c", self.values, E @ X, E @ Y) @ E

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)))


@dataclass(frozen=True)
class TwoForm:
    values: np.ndarray  # (6, 6)
    frame: np.ndarray

    def __call__(self, X, Y) -> float:
        return float((self.frame @ X) @ self.values @ (self.frame @ Y))


# --- torsion -----------------------------------------------------------------


def octonionic_torsion(N, X, Y, Z) -> float:
    """``-<J(X x Y), Z> = -<N x (X x Y), Z>``."""
    return float(-(cross(N, cross(X, Y)) @ Z))


def octonionic_torsion_alt(N, X, Y, Z) -> float:
    """``-<N, (X x Y) x Z>``."""
    return float(-(np.asarray(N) @ cross(cross(X, Y), Z)))


def nk_probe(S: LevelSurface, p) -> float:
    """Largest ``|(nabla_X J) X|`` over frame vectors and their pairwise unit sums."""
    E = tangent_frame(S, p)
    probes = list(E) + [(E[a] + E[b]) / np.sqrt(2) for a, b in combinations(range(6), 2)]
    return float(max(np.linalg.norm(nablaJ_closed(S, p, X, X)) for X in probes))


def torsion_from_nablaJ(S: LevelSurface, p, nk_tol: float = 1e-5, skew_tol: float = FD_TOL) -> ThreeForm:
    """``T(X, Y, Z) = <(nabla_X J)(J Y), Z>`` in the tangent frame at ``p``."""
    p = np.asarray(p, dtype=float)
    probe = nk_probe(S, p)
    if probe > nk_tol:
        raise NotNearlyKahler(f"|(nabla_X J)X| reaches {probe:.3e} at p")
    E = tangent_frame(S, p)
    raw = np.array(
        [[[nablaJ_closed(S, p, Ea, acs(S, p, Eb)) @ Ec for Ec in E] for Eb in E] for Ea in E]
    )
    res = skew_residual(raw)
    if res > skew_tol:
        raise NotNearlyKahler(f"torsion is not totally skew (residual {res:.3e})")
    return ThreeForm(antisymmetrize(raw), E)


def torsion_octonionic(p, frame=None) -> tuple[ThreeForm, float]:
    """Octonionic torsion on the unit sphere and the disagreement of its two expressions."""
    p = np.asarray(p, dtype=float)
    E = tangent_frame(unit_sphere(), p) if frame is None else frame
    a = np.array([[[octonionic_torsion(p, x, y, z) for z in E] for y in E] for x in E])
    b = np.array([[[octonionic_torsion_alt(p, x, y, z) for z in E] for y in E] for x in E])
    return ThreeForm(a, E), float(np.abs(a - b).max())


def torsion_identities(T: ThreeForm, J6: np.ndarray) -> dict[str, float]:
    """Residuals of ``T(X,JY,Z) = -T(Y,JX,Z)`` and ``T(X,Y,JZ) = T(X,JY,Z)`` on the frame."""
    t = T.values
    tJ2 = np.einsum("abc,by->ayc", t, J6)  # T(X, JY, Z)
    tJ3 = np.einsum("abc,cz->abz", t, J6)  # T(X, Y, JZ)
    return {
        "swap": float(np.abs(tJ2 + tJ2.transpose(1, 0, 2)).max()),
        "move": float(np.abs(tJ3 - tJ2).max()),
    }


def hermitian_defect(S: LevelSurface, p, T: ThreeForm) -> float:
    """Max over frame triples of ``|<(nabla^g_X J)Y, Z> + T(X, JY, Z)|``.

    Vanishes exactly for the characteristic torsion; for any other skew
    ``T`` the connection ``nabla^g + T/2`` fails to preserve ``J``.
    """
    E = T.frame
    worst = 0.0
    for X in E:
        for Y in E:
            A = nablaJ_closed(S, p, X, Y)
            JY = acs(S, p, Y)
            for Z in E:
                worst = max(worst, abs(A @ Z + T(X, JY, Z)))
    return float(worst)


def connection_J_defect(S: LevelSurface, p, T: ThreeForm) -> float:
    """Max over frame pairs of ``|(nabla_X J)Y|`` for ``nabla = nabla^g + T/2`` (closed form)."""
    E = T.frame
    worst = 0.0
    for X in E:
        for Y in E:
            JY = acs(S, p, Y)
            d = nablaJ_closed(S, p, X, Y) + 0.5 * T.vector(X, JY) - acs(S, p, 0.5 * T.vector(X, Y))
            worst = max(worst, np.linalg.norm(d))
    return float(worst)


# --- the characteristic connection ---------------------------------------------


def nabla_c(S: LevelSurface, p, X, Yfield, T: ThreeForm | None = None,
            h: float = FD_STEP, tol: float = FD_TOL) -> np.ndarray:
    """``nabla^c_X Y = nabla^g_X Y + 1/2 T(X, Y, .)``."""
    p = np.asarray(p, dtype=float)
    T = torsion_from_nablaJ(S, p) if T is None else T
    return cov_deriv(S, p, X, Yfield, h, tol) + 0.5 * T.vector(X, Yfield(p))


def zero_torsion(frame) -> ThreeForm:
    return ThreeForm(np.zeros((6, 6, 6)), frame)


def parallel_torsion_check(S: LevelSurface | None = None, seed: int = 0, n: int = 100,
                           connection: str = "c", h: float = FD_STEP,
                           torsion: Callable | None = None) -> float:
    """Max ``|(nabla_X T)(Y, Z, W)|`` over random unit tangent vectors.

    ``T`` is the torsion field ``q -> torsion(N(q), ., ., .)`` (octonionic by
    default), differentiated along surface curves; ``connection`` selects
    ``nabla^c`` (``"c"``) or Levi-Civita (``"g"``) for the correction terms.
    """
    if connection not in ("c", "g"):
        raise ValueError("connection must be 'c' or 'g'")
    S = unit_sphere() if S is None else S
    torsion = octonionic_torsion if torsion is None else torsion
    rng = rng_for(seed, f"connection.parallel_torsion.{connection}")
    pts = random_points(S, rng, n)
    worst = 0.0
    for p, vecs in zip(pts, rng.standard_normal((n, 4, 7))):
        P = tangent_projector(S, p)
        X, Y, Z, W = (P @ v / np.linalg.norm(P @ v) for v in vecs)
        Np = normal(S, p)
        Tp = lambda a, b, c: torsion(Np, a, b, c)  # noqa: E731
        fields = [projected_field(S, V) for V in (Y, Z, W)]
        scalar = lambda q: torsion(normal(S, q), *(f(q) for f in fields))  # noqa: E731
        derivs = []
        for f in fields:
            d = cov_deriv(S, p, X, f, h, check=False)
            if connection == "c":
                d = d + 0.5 * _torsion_vector(Tp, P, X, f(p))
            derivs.append(d)
        val = directional(S, p, X, scalar, h)
        val -= Tp(derivs[0], Z, W) + Tp(Y, derivs[1], W) + Tp(Y, Z, derivs[2])
        worst = max(worst, abs(val))
    return float(worst)


def _torsion_vector(Tp, P, X, Y) -> np.ndarray:
    E = np.eye(7)
    v = np.array([Tp(X, Y, e) for e in E])
    return P @ v


# --- nearly Kähler forms ---------------------------------------------------------


def _radial(x):
    r = np.linalg.norm(x)
    n = x / r
    return n, (np.eye(7) - np.outer(n, n)) / r


def kahler_form_ambient(x, U, V) -> float:
    """Pullback of ``Omega = g(J., .)`` through ``x -> x/|x|``."""
    n, dr = _radial(np.asarray(x, dtype=float))
    return float(cross(n, dr @ U) @ (dr @ V))


def spinor_forms_ambient(x, U, V, W, phi=None) -> tuple[float, float]:
    """Pullbacks of ``Re omega`` and ``Im omega`` through ``x -> x/|x|``.

    ``Re omega(X,Y,Z) = -(X.Y.Z.phi, phi)`` and
    ``Im omega(X,Y,Z) = -(X.Y.Z.phi, J phi)`` with tangential Clifford
    multiplication ``X.phi = gamma(X) gamma(N) phi`` and ``J`` the tangential
    volume element, for the restriction of a constant spinor ``phi``.
    """
    rep = clifford.build_cl6()
    phi = clifford.g2_spinor() if phi is None else phi
    n, dr = _radial(np.asarray(x, dtype=float))
    gN = rep.gamma(n)
    c = [rep.gamma(dr @ v) @ gN for v in (U, V, W)]
    psi = c[0] @ c[1] @ c[2] @ phi
    Jspin = _tangent_volume_at(rep, n)
    return float(-(psi @ phi)), float(-(psi @ (Jspin @ phi)))


def _tangent_volume_at(rep, n):
    E = tangent_frame(unit_sphere(), n)
    return clifford.tangent_volume(clifford.tangent_clifford(rep, E, n))


def exterior_derivative(form: Callable, x, vectors, h: float = FD_STEP) -> float:
    """``d beta(V_0..V_k) = sum_i (-1)^i V_i beta(..no V_i..)`` for constant fields, by central differences."""
    x = np.asarray(x, dtype=float)
    total = 0.0
    for i, v in enumerate(vectors):
        rest = vectors[:i] + vectors[i + 1:]
        d = (form(x + h * v, *rest) - form(x - h * v, *rest)) / (2 * h)
        total += (-1) ** i * d
    return total


def wedge_22(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """``(alpha ^ beta)(X1..X4)`` summed over (2,2)-shuffles, frame arrays (6,6) -> (6,6,6,6)."""
    out = np.einsum("ab,cd->abcd", alpha, beta)
    return antisymmetrize(out) * 6.0


def nk_forms_at(p, h: float = FD_STEP, phi=None) -> dict[str, np.ndarray]:
    """Independent frame components at ``p`` of the forms entering the nearly Kähler equations.

    Keys: ``d_kahler`` and the spinor forms ``re``, ``im`` (3-forms, 20
    components), ``d_re``, ``d_im`` and ``kahler_sq`` = ``Omega ^ Omega``
    (4-forms, 15 components).  Exterior derivatives are central differences
    of the radially extended forms.
    """
    p = np.asarray(p, dtype=float)
    E = tangent_frame(unit_sphere(), p)
    re = lambda x, u, v, w: spinor_forms_ambient(x, u, v, w, phi)[0]  # noqa: E731
    im = lambda x, u, v, w: spinor_forms_ambient(x, u, v, w, phi)[1]  # noqa: E731
    triples = list(combinations(range(6), 3))
    quads = list(combinations(range(6), 4))
    out = {
        "d_kahler": np.array([exterior_derivative(kahler_form_ambient, p, [E[i] for i in t], h) for t in triples]),
        "re": np.array([re(p, *E[list(t)]) for t in triples]),
        "im": np.array([im(p, *E[list(t)]) for t in triples]),
        "d_re": np.array([exterior_derivative(re, p, [E[i] for i in q], h) for q in quads]),
        "d_im": np.array([exterior_derivative(im, p, [E[i] for i in q], h) for q in quads]),
    }
    kahler = np.array([[kahler_form_ambient(p, u, v) for v in E] for u in E])
    sq = wedge_22(kahler, kahler)
    out["kahler_sq"] = np.array([sq[q] for q in quads])
    out["kahler"] = kahler
    return out


@dataclass(frozen=True)
class OmegaConvention:
    """``omega = scale * exp(i phase) * w`` with ``w`` the spinor (3,0)-form or its conjugate."""

    conjugate: bool
    phase: float
    scale: float
    a: float

    def parts(self, forms: dict[str, np.ndarray]) -> tuple[np.ndarray, ...]:
        """Re omega, Im omega, d Im omega from :func:`nk_forms_at` output."""
        s = -1.0 if self.conjugate else 1.0
        c, sn = np.cos(self.phase), np.sin(self.phase)
        re = self.scale * (c * forms["re"] - sn * s * forms["im"])
        im = self.scale * (sn * forms["re"] + c * s * forms["im"])
        d_im = self.scale * (sn * forms["d_re"] + c * s * forms["d_im"])
        return re, im, d_im


def calibrate_omega(p=None, h: float = FD_STEP, phi=None) -> OmegaConvention:
    """Fix the phase and scale of ``omega`` at one point.

    ``d Omega = 12 a Re(omega)`` determines the phase; the two equations
    together fix ``scale**2``, which must come out positive.  Only one of
    ``w`` and its conjugate admits a real scale; that one is selected.
    """
    p = np.eye(7)[6] if p is None else np.asarray(p, dtype=float)
    f = nk_forms_at(p, h, phi)
    for conjugate in (False, True):
        s = -1.0 if conjugate else 1.0
        basis = np.stack([f["re"], s * f["im"]], axis=1)
        (x, y), *_ = np.linalg.lstsq(basis, f["d_kahler"], rcond=None)
        phase = float(np.arctan2(-y, x))
        zeta = float(np.hypot(x, y))  # = 12 a scale
        d_im_unit = np.sin(phase) * f["d_re"] + np.cos(phase) * s * f["d_im"]
        k2 = float(d_im_unit @ f["kahler_sq"] / (f["kahler_sq"] @ f["kahler_sq"]))  # = a / scale
        if zeta / k2 > 0:
            scale = float(np.sqrt(zeta / (12.0 * k2)))
            a = zeta / (12.0 * scale)
            if a < 0:
                phase, a = phase + np.pi, -a
            phase = float(np.mod(phase + np.pi, 2 * np.pi) - np.pi)
            return OmegaConvention(conjugate, phase, scale, float(a))
    raise ArithmeticError("no real normalisation of omega satisfies both equations")


def nk_forms_check(p, convention: OmegaConvention | None = None, h: float = FD_STEP,
                   phi=None) -> dict[str, float]:
    """Fit ``a`` from ``d Omega = 12 a Re(omega)`` at ``p``; residuals of both equations with that ``a``."""
    conv = calibrate_omega(h=h, phi=phi) if convention is None else convention
    f = nk_forms_at(p, h, phi)
    re, _, d_im = conv.parts(f)
    a = float(f["d_kahler"] @ re / (12.0 * re @ re))
    return {
        "a": a,
        "residual_dOmega": float(np.abs(f["d_kahler"] - 12.0 * a * re).max()),
        "residual_dImOmega": float(np.abs(d_im - a * f["kahler_sq"]).max()),
    }


def d_kahler_skew_residual(p, h: float = FD_STEP) -> float:
    """Antisymmetry defect of the finite-difference ``d Omega`` over all frame triples."""
    E = tangent_frame(unit_sphere(), np.asarray(p, dtype=float))
    full = np.array([[[exterior_derivative(kahler_form_ambient, p, [x, y, z], h) for z in E] for y in E] for x in E])
    return skew_residual(full)


def kahler_cube(p) -> float:
    """``(Omega ^ Omega ^ Omega)(E_1, ..., E_6)`` on the oriented tangent frame."""
    E = tangent_frame(unit_sphere(), np.asarray(p, dtype=float))
    k = np.array([[kahler_form_ambient(p, u, v) for v in E] for u in E])
    sq = wedge_22(k, k)
    cube = np.einsum("abcd,ef->abcdef", sq, k)
    return float(antisymmetrize(cube)[0, 1, 2, 3, 4, 5] * factorial(6) / (factorial(4) * factorial(2)))
