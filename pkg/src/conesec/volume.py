"""Exact volumes, centroids and moments of polytopes via triangulation.

Each full-dimensional polytope is fanned from the vertex average into the
simplices over its facets; per-simplex closed forms give volume, centroid,
second moments and arbitrary integer moments of a linear functional.  A
seeded Monte Carlo estimator provides an independent cross-check, and the
isotropic-position transform whitens the centered second-moment matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from . import rng as _rng
from .geometry import (
    Ball,
    ConvexBody,
    GeometryError,
    VPolytope,
    affine_map,
    contains_many,
    robust_hull,
    to_vrep,
    translate,
)


@dataclass(frozen=True)
class MomentSummary:
    """Volume, centroid and second moments (about the origin) of a body."""

    volume: float
    centroid: np.ndarray
    covariance: np.ndarray  # integral of x x^T over the body


@dataclass(frozen=True)
class IsotropicTransform:
    """Affine map x -> matrix @ x + shift putting a body in isotropic position."""

    matrix: np.ndarray
    shift: np.ndarray
    isotropy_constant: float


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def triangulate(K: ConvexBody):
    """Simplices (S, d+1, d) fanning the polytope from its vertex average."""
    V = to_vrep(K)
    d = V.dim
    if not V.is_full_dimensional():
        raise GeometryError("cannot triangulate a degenerate polytope")
    verts = V.vertices
    if d == 1:
        lo, hi = verts.min(), verts.max()
        return np.array([[[lo], [hi]]])
    hull = robust_hull(verts)
    apex = verts.mean(axis=0)
    facets = verts[hull.simplices]  # (S, d, d)
    apexes = np.broadcast_to(apex, (facets.shape[0], 1, d))
    return np.concatenate([apexes, facets], axis=1)


def _simplex_volumes(simplices: np.ndarray) -> np.ndarray:
    d = simplices.shape[2]
    M = simplices[:, 1:, :] - simplices[:, :1, :]
    return np.abs(np.linalg.det(M)) / math.factorial(d)


def moments(K: ConvexBody) -> MomentSummary:
    """Exact volume, centroid and second-moment matrix of a polytope or ball."""
    if isinstance(K, Ball):
        d, r, c = K.dim, K.radius, K.center
        vol = unit_ball_volume(d) * r**d
        cov = vol * (np.outer(c, c) + (r * r / (d + 2)) * np.eye(d))
        return MomentSummary(vol, c.copy(), cov)
    simplices = triangulate(K)
    d = simplices.shape[2]
    vols = _simplex_volumes(simplices)
    vol = float(vols.sum())
    if vol <= 0:
        raise GeometryError("degenerate body has zero volume")
    centroids = simplices.mean(axis=1)
    centroid = (vols[:, None] * centroids).sum(axis=0) / vol
    # int_S x x^T dx = vol_S / ((d+1)(d+2)) * (sum_i v_i v_i^T + s s^T), s = sum_i v_i
    s = simplices.sum(axis=1)
    outer_sum = np.einsum("sia,sib->sab", simplices, simplices)
    outer_s = np.einsum("sa,sb->sab", s, s)
    cov = np.einsum("s,sab->ab", vols, outer_sum + outer_s) / ((d + 1) * (d + 2))
    cov = 0.5 * (cov + cov.T)
    return MomentSummary(vol, centroid, cov)


def volume(K: ConvexBody) -> float:
    return moments(K).volume


def centroid(K: ConvexBody) -> np.ndarray:
    return moments(K).centroid


_SUPPORTED_P = (0, 1, 2, 3, 4)


def moment_p(K: ConvexBody, u, p: int) -> float:
    """Exact integral of <x, u>^p over a polytope, p in {0,...,4}."""
    if p not in _SUPPORTED_P:
        raise GeometryError(f"unsupported moment degree p={p}")
    u = np.asarray(u, dtype=float)
    simplices = triangulate(K)
    d = simplices.shape[2]
    vols = _simplex_volumes(simplices)
    if p == 0:
        return float(vols.sum())
    c = simplices @ u  # (S, d+1) vertex values of the functional
    # complete homogeneous symmetric polynomial h_p of the vertex values
    S = c.shape[0]
    h = np.zeros((S, p + 1))
    h[:, 0] = 1.0
    for i in range(c.shape[1]):
        for j in range(1, p + 1):
            h[:, j] += c[:, i] * h[:, j - 1]
    coef = math.factorial(d) * math.factorial(p) / math.factorial(d + p)
    return float(coef * (vols * h[:, p]).sum())


def bounding_box(K: ConvexBody):
    if isinstance(K, Ball):
        return K.center - K.radius, K.center + K.radius
    V = to_vrep(K).vertices
    return V.min(axis=0), V.max(axis=0)


def monte_carlo_volume(K: ConvexBody, N: int, seed: int):
    """Rejection-sampling volume estimate and its binomial standard error."""
    if N < 1000:
        raise GeometryError("need at least 1000 Monte Carlo samples")
    lo, hi = bounding_box(K)
    box_vol = float(np.prod(hi - lo))
    gen = _rng.generator(seed)
    pts = lo + gen.random((N, len(lo))) * (hi - lo)
    frac = float(contains_many(K, pts).mean())
    est = frac * box_vol
    stderr = box_vol * math.sqrt(max(frac * (1 - frac), 1.0 / N) / N)
    return est, stderr


def centered_second_moment(K: ConvexBody) -> np.ndarray:
    """Second-moment matrix about the centroid."""
    m = moments(K)
    return m.covariance - m.volume * np.outer(m.centroid, m.centroid)


def isotropic_position(K: ConvexBody):
    """Translate the centroid to 0 and whiten the second-moment matrix.

    The whitening matrix is scaled to have determinant 1 so the volume is
    unchanged; the resulting common value of the second moments is recorded
    as the isotropy constant.
    """
    m = moments(K)
    n = len(m.centroid)
    M = m.covariance - m.volume * np.outer(m.centroid, m.centroid)
    w, Q = np.linalg.eigh(M)
    if np.any(w <= 1e-14 * max(1.0, w.max())):
        raise GeometryError("second-moment matrix is not positive definite")
    inv_sqrt = Q @ np.diag(w**-0.5) @ Q.T
    scale = float(np.prod(w) ** (1.0 / (2 * n)))  # det(T) = 1
    T = scale * inv_sqrt
    body = affine_map(translate(K, -m.centroid), T)
    transform = IsotropicTransform(T, -T @ m.centroid, scale * scale)
    return body, transform
