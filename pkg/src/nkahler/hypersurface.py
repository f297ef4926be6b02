"""Level-set hypersurfaces of the Cayley space and their induced geometry.

A hypersurface is ``S = {x in R^7 : F(x) = 0}`` given with analytic gradient
and Hessian oracles.  Points and tangent vectors are plain length-7 arrays in
ambient coordinates; operators on ``T_pS`` are 7x7 ambient matrices that kill
the normal direction.

Levi-Civita derivatives are taken by central differences of ambient vector
fields along curves ``t -> retract(p + tX)`` that stay on ``S``, followed by
tangential projection.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .octonion import cross
from .sampling import rng_for, unit_vectors

Field = Callable[[np.ndarray], np.ndarray]

FD_STEP = 1e-5
FD_TOL = 1e-6


class DegeneratePoint(ValueError):
    """The gradient of the defining function vanishes (numerically)."""


class NotOnSurface(ValueError):
    pass


class StepTooSmall(RuntimeError):
    """Finite differences are dominated by rounding."""


class StepTooLarge(RuntimeError):
    """Finite differences are dominated by truncation error."""


class AllSamplesDegenerate(ValueError):
    pass


@dataclass(frozen=True)
class LevelSurface:
    """Oriented hypersurface ``F = 0`` with analytic derivative oracles."""

    F: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    hess: Callable[[np.ndarray], np.ndarray]
    orientation: int = 1
    name: str = "surface"

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def flipped(self) -> LevelSurface:
        return LevelSurface(self.F, self.grad, self.hess, -self.orientation, self.name)


def unit_sphere(orientation: int = 1) -> LevelSurface:
    return LevelSurface(
        F=lambda x: float(x @ x - 1.0),
        grad=lambda x: 2.0 * np.asarray(x, dtype=float),
        hess=lambda x: 2.0 * np.eye(7),
        orientation=orientation,
        name="sphere",
    )


def ellipsoid(semi_axes, orientation: int = 1) -> LevelSurface:
    """Axis-aligned ellipsoid ``sum x_i^2 / a_i^2 = 1``."""
    a = np.asarray(semi_axes, dtype=float)
    if a.shape != (7,) or np.any(a <= 0):
        raise ValueError("need 7 positive semi-axes")
    w = 1.0 / a**2
    return LevelSurface(
        F=lambda x: float(np.sum(w * np.asarray(x) ** 2) - 1.0),
        grad=lambda x: 2.0 * w * np.asarray(x, dtype=float),
        hess=lambda x: np.diag(2.0 * w),
        orientation=orientation,
        name="ellipsoid",
    )


# --- points, frames, projections ------------------------------------------


def retract(S: LevelSurface, x, tol: float = 1e-15, max_iter: int = 60) -> np.ndarray:
    """Move ``x`` onto ``S`` along the fixed direction ``grad F(x)``.

    Solving ``F(x + s g) = 0`` for the scalar ``s`` keeps the result a smooth
    function of ``x``, which finite differences along curves rely on.
    """
    x = np.asarray(x, dtype=float)
    g = S.grad(x)
    gg = g @ g
    if gg < 1e-20:
        raise DegeneratePoint("gradient vanishes; cannot retract")
    s = -S.F(x) / gg
    for _ in range(max_iter):
        y = x + s * g
        f = S.F(y)
        slope = S.grad(y) @ g
        step = f / slope
        s -= step
        if abs(step) <= tol * (1.0 + abs(s)):
            break
    return x + s * g


def radial_point(S: LevelSurface, direction) -> np.ndarray:
    """Point of a star-shaped surface on the ray through ``direction``."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    t = 1.0
    for _ in range(100):
        step = S.F(t * d) / (S.grad(t * d) @ d)
        t -= step
        if abs(step) < 1e-16 * t:
            break
    return t * d


def random_points(S: LevelSurface, rng: np.random.Generator, n: int) -> np.ndarray:
    return np.array([radial_point(S, d) for d in unit_vectors(rng, n, 7)])


def check_point(S: LevelSurface, p, tol: float = 1e-10) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if abs(S.F(p)) > tol:
        raise NotOnSurface(f"|F(p)| = {abs(S.F(p)):.3e} exceeds {tol:g}")
    return p


def normal(S: LevelSurface, p) -> np.ndarray:
    g = S.grad(np.asarray(p, dtype=float))
    ng = np.linalg.norm(g)
    if ng < 1e-10:
        raise DegeneratePoint(f"|grad F| = {ng:.3e} at p")
    return S.orientation * g / ng


def tangent_projector(S: LevelSurface, p) -> np.ndarray:
    n = normal(S, p)
    return np.eye(7) - np.outer(n, n)


def tangent_frame(S: LevelSurface, p) -> np.ndarray:
    """Orthonormal frame of ``T_pS`` as the rows of a 6x7 matrix.

    Gram-Schmidt on the six coordinate axes with the largest tangential
    projections (taken in index order), oriented so that ``(E_1..E_6, N)`` is
    a positive basis of R^7.
    """
    n = normal(S, p)
    proj = np.eye(7) - np.outer(n, n)
    keep = np.sort(np.argsort(-np.linalg.norm(proj, axis=0), kind="stable")[:6])
    q, r = np.linalg.qr(proj[:, keep])
    q = q * np.sign(np.diag(r))
    frame = q.T
    if np.linalg.det(np.vstack([frame, n])) < 0:
        frame[-1] *= -1.0
    return frame


def to_frame(frame: np.ndarray, op: np.ndarray) -> np.ndarray:
    return frame @ op @ frame.T


# --- extrinsic geometry ------------------------------------------------------


@lru_cache(maxsize=None)
def shape_sign() -> int:
    """Global sign making ``(nabla_X J)Y = P(K(X) x Y)`` hold.

    Determined once against the finite-difference route on the unit sphere.
    """
    S = unit_sphere()
    rng = rng_for(0, "hypersurface.shape_sign")
    p = random_points(S, rng, 1)[0]
    P = tangent_projector(S, p)
    X, Y = (P @ v for v in rng.standard_normal((2, 7)))
    fd = _nablaJ_fd(S, p, X, Y, FD_STEP, FD_TOL)
    raw = P @ cross(_unsigned_shape(S, p) @ X, Y)
    errs = {s: np.linalg.norm(fd - s * raw) for s in (1, -1)}
    sigma = min(errs, key=errs.get)
    if errs[sigma] > FD_TOL or errs[-sigma] < 0.1 * np.linalg.norm(raw):
        raise RuntimeError(f"cannot fix shape-operator sign: residuals {errs}")
    return sigma


def _unsigned_shape(S: LevelSurface, p) -> np.ndarray:
    g = S.grad(p)
    ng = np.linalg.norm(g)
    if ng < 1e-10:
        raise DegeneratePoint(f"|grad F| = {ng:.3e} at p")
    P = tangent_projector(S, p)
    return S.orientation * P @ S.hess(p) @ P / ng


def shape_operator(S: LevelSurface, p) -> np.ndarray:
    """Shape operator at ``p`` as a symmetric 7x7 ambient matrix.

    ``K = sigma * orientation * P Hess(F) P / |grad F|`` with the global sign
    ``sigma`` from :func:`shape_sign`; eigenvalues on ``T_pS`` are the
    principal curvatures.
    """
    return shape_sign() * _unsigned_shape(S, p)


def principal_curvatures(S: LevelSurface, p) -> np.ndarray:
    return np.linalg.eigvalsh(to_frame(tangent_frame(S, p), shape_operator(S, p)))


def acs(S: LevelSurface, p, X) -> np.ndarray:
    """Induced almost complex structure ``J(X) = N x X``."""
    return cross(normal(S, p), X)


def acs_matrix(S: LevelSurface, p) -> np.ndarray:
    """``J`` at ``p`` as an ambient 7x7 matrix (zero on the normal line)."""
    n = normal(S, p)
    P = np.eye(7) - np.outer(n, n)
    return cross(n, P.T).T


# --- finite differences ------------------------------------------------------


def directional(S: LevelSurface, p, X, f: Callable, h: float = FD_STEP):
    """Central difference of ``f`` along the surface curve through ``p`` with velocity ``X``."""
    p = np.asarray(p, dtype=float)
    X = np.asarray(X, dtype=float)
    fp = np.asarray(f(retract(S, p + h * X)))
    fm = np.asarray(f(retract(S, p - h * X)))
    return (fp - fm) / (2.0 * h)


def checked_directional(S, p, X, f, h: float = FD_STEP, tol: float = FD_TOL):
    """:func:`directional` with a step-halving self-consistency check."""
    p = np.asarray(p, dtype=float)
    d1 = directional(S, p, X, f, h)
    d2 = directional(S, p, X, f, h / 2)
    if np.max(np.abs(d1 - d2), initial=0.0) > 10.0 * tol:
        scale = max(np.max(np.abs(np.asarray(f(p))), initial=0.0), 1.0)
        scale *= max(np.linalg.norm(X), 1.0)
        if np.finfo(float).eps * scale / h > tol:
            raise StepTooSmall(f"rounding dominates at step {h:g}")
        raise StepTooLarge(f"truncation dominates at step {h:g}")
    return d1


def projected_field(S: LevelSurface, V) -> Field:
    """Tangent field obtained by projecting the constant ambient field ``V``."""
    V = np.asarray(V, dtype=float)

    def field(q):
        n = normal(S, q)
        return V - (n @ V) * n

    return field


def j_field(S: LevelSurface, Y: Field) -> Field:
    return lambda q: cross(normal(S, q), Y(q))


def cov_deriv(S, p, X, Yfield: Field, h: float = FD_STEP, tol: float = FD_TOL, check: bool = True):
    """Levi-Civita derivative ``nabla_X Y = P(D_X Y)`` at ``p``."""
    p = np.asarray(p, dtype=float)
    if check:
        d = checked_directional(S, p, X, Yfield, h, tol)
    else:
        d = directional(S, p, X, Yfield, h)
    return tangent_projector(S, p) @ d


def ambient_deriv(S, p, X, Yfield: Field, h: float = FD_STEP):
    """Unprojected derivative ``D_X Y`` of an ambient-valued field along ``S``."""
    return directional(S, p, X, Yfield, h)


def lie_bracket(S, p, Xfield: Field, Yfield: Field, h: float = FD_STEP):
    p = np.asarray(p, dtype=float)
    return ambient_deriv(S, p, Xfield(p), Yfield, h) - ambient_deriv(S, p, Yfield(p), Xfield, h)


# --- Calabi lemma and consequences ------------------------------------------


def _nablaJ_fd(S, p, X, Y, h, tol):
    Yf = projected_field(S, Y)
    return cov_deriv(S, p, X, j_field(S, Yf), h, tol) - acs(S, p, cov_deriv(S, p, X, Yf, h, tol))


def nablaJ_closed(S: LevelSurface, p, X, Y) -> np.ndarray:
    """``(nabla_X J)Y = P(K(X) x Y)``."""
    return tangent_projector(S, p) @ cross(shape_operator(S, p) @ X, Y)


def nablaJ(S, p, X, Y, route: str = "closed", h: float = FD_STEP, tol: float = FD_TOL):
    """``(nabla_X J)(Y)`` at ``p``.

    ``route`` is ``"closed"`` (shape operator formula), ``"fd"`` (finite
    differences of ``J Y`` and ``Y``) or ``"both"``, which returns the closed
    form after asserting that the two routes agree to ``tol``.
    """
    p = np.asarray(p, dtype=float)
    if route == "closed":
        return nablaJ_closed(S, p, X, Y)
    fd = _nablaJ_fd(S, p, X, Y, h, tol)
    if route == "fd":
        return fd
    if route != "both":
        raise ValueError(f"unknown route {route!r}")
    closed = nablaJ_closed(S, p, X, Y)
    err = np.linalg.norm(fd - closed)
    if err > tol:
        raise AssertionError(f"FD and closed-form nabla J disagree by {err:.3e}")
    return closed


def nijenhuis(S, p, X, Y, h: float = FD_STEP) -> np.ndarray:
    """``[JX,JY] - J[JX,Y] - J[X,JY] - [X,Y]`` from finite-difference brackets."""
    p = np.asarray(p, dtype=float)
    Xf, Yf = projected_field(S, X), projected_field(S, Y)
    JXf, JYf = j_field(S, Xf), j_field(S, Yf)
    br = lambda a, b: lie_bracket(S, p, a, b, h)  # noqa: E731
    out = br(JXf, JYf) - acs(S, p, br(JXf, Yf)) - acs(S, p, br(Xf, JYf)) - br(Xf, Yf)
    return tangent_projector(S, p) @ out


def constant_type_alpha(S: LevelSurface, seed: int = 0, n_samples: int = 1000,
                        route: str = "closed") -> dict[str, float]:
    """Estimate the constant-type constant from random ``(p, X, Y)``.

    Samples whose right-hand side ``|X|^2|Y|^2 - <X,Y>^2 - <JX,Y>^2`` is
    negligible (``Y`` nearly in ``span{X, JX}``) are skipped.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be >= 2")
    rng = rng_for(seed, f"hypersurface.constant_type.{S.name}")
    pts = random_points(S, rng, n_samples)
    ratios = []
    for p, (u, v) in zip(pts, rng.standard_normal((n_samples, 2, 7))):
        P = tangent_projector(S, p)
        X, Y = P @ u, P @ v
        rhs = (X @ X) * (Y @ Y) - (X @ Y) ** 2 - (acs(S, p, X) @ Y) ** 2
        if rhs < 1e-8 * (X @ X) * (Y @ Y):
            continue
        lhs = np.sum(nablaJ(S, p, X, Y, route=route) ** 2)
        ratios.append(lhs / rhs)
    if not ratios:
        raise AllSamplesDegenerate("every sample had Y in span{X, JX}")
    r = np.array(ratios)
    alpha = float(r.mean())
    return {"alpha": alpha, "max_deviation": float(np.abs(r - alpha).max()), "samples": len(r)}


def anti_linear_defect(K6: np.ndarray, J6: np.ndarray) -> float:
    """Frobenius norm of ``KJ + JK`` for frame matrices."""
    return float(np.linalg.norm(K6 @ J6 + J6 @ K6))


def eigen_pairing_residual(K6: np.ndarray, J6: np.ndarray) -> float:
    """Max ``|K(JX) + lambda JX|`` over unit eigenvectors ``K X = lambda X``."""
    lam, vecs = np.linalg.eigh(K6)
    res = [np.linalg.norm(K6 @ (J6 @ v) + l * (J6 @ v)) for l, v in zip(lam, vecs.T)]
    return float(max(res))


def calabi_defect(S: LevelSurface, p) -> float:
    """``|K J + J K|`` in an orthonormal tangent frame; zero iff ``J`` is integrable-compatible."""
    E = tangent_frame(S, p)
    return anti_linear_defect(to_frame(E, shape_operator(S, p)), to_frame(E, acs_matrix(S, p)))


# --- curvature via the Gauss equation ---------------------------------------


def curvature_gauss(S: LevelSurface, p, X, Y, Z) -> np.ndarray:
    """``R(X,Y)Z = <K Y, Z> K X - <K X, Z> K Y``."""
    K = shape_operator(S, p)
    KX, KY = K @ X, K @ Y
    return (KY @ Z) * KX - (KX @ Z) * KY


def ricci(S: LevelSurface, p) -> np.ndarray:
    """Ricci tensor ``Ric(Y,Z) = sum_i <R(e_i,Y)Z, e_i>`` as a 6x6 frame matrix."""
    E = tangent_frame(S, p)
    ric = np.zeros((6, 6))
    for a in range(6):
        for b in range(6):
            ric[a, b] = sum(curvature_gauss(S, p, e, E[a], E[b]) @ e for e in E)
    return ric


def einstein_defect(S: LevelSurface, p) -> float:
    ric = ricci(S, p)
    return float(np.linalg.norm(ric - np.trace(ric) / 6.0 * np.eye(6)))
