"""Rank-revealing helpers shared by the algebraic modules."""

from __future__ import annotations

import numpy as np

RANK_TOL = 1e-8
MIN_GAP = 1e4


class RankDeficiency(ArithmeticError):
    """A computed dimension differs from the expected one, or the spectral gap is too small."""


def nullspace(a: np.ndarray, tol: float = RANK_TOL, min_gap: float = MIN_GAP) -> np.ndarray:
    """Orthonormal basis (columns) of ``ker a``.

    Singular values below ``tol * max(1, s_max)`` count as zero.  The ratio of
    the smallest kept to the largest dropped singular value must be at least
    ``min_gap``, so that reported dimensions are not threshold artefacts.
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    s_full = np.zeros(vt.shape[0])
    s_full[: s.size] = s
    cutoff = tol * max(1.0, s_full.max(initial=0.0))
    zero = s_full <= cutoff
    kept, dropped = s_full[~zero], s_full[zero]
    if kept.size and dropped.size and dropped.max() > 0:
        if kept.min() / dropped.max() < min_gap:
            raise RankDeficiency(
                f"no clear spectral gap: kept {kept.min():.3e}, dropped {dropped.max():.3e}"
            )
    return vt[zero].T


def rank(a: np.ndarray, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(np.atleast_2d(a), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s.max(initial=0.0))))


def orth(a: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of ``a``."""
    u, s, _ = np.linalg.svd(np.atleast_2d(a), full_matrices=False)
    return u[:, s > tol * max(1.0, s.max(initial=0.0))]


def complement(basis: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(basis)`` inside ``span(within)``."""
    if within is None:
        within = np.eye(basis.shape[0])
    coords = within.T @ basis
    k = nullspace(coords.T)
    return within @ k


def intersection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``span(a) & span(b)`` for orthonormal column bases."""
    # x = a u = b v  <=>  [a, -b] [u; v] = 0
    k = nullspace(np.hstack([a, -b]))
    return orth(a @ k[: a.shape[1]])


def projector(basis: np.ndarray) -> np.ndarray:
    return basis @ basis.T
