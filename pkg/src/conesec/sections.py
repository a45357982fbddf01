"""Sections of bodies by affine flats and polyhedral cones.

Provides the section operation (in the flat's intrinsic coordinates), the
Brunn section-volume function f(x) = |K cap (F + x)|, and cone-section
volumes |K cap (F + C)| by two independent routes: polyhedral intersection
and radial integration over the cone's spherical cross-section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import HalfspaceIntersection, QhullError

from . import rng as _rng
from .geometry import (
    Ball,
    ConvexBody,
    GEOM_TOL,
    GeometryError,
    HPolytope,
    PolyhedralCone,
    Subspace,
    VPolytope,
    chebyshev_center,
    extreme_points,
    project,
    radial,
    to_hrep,
    to_vrep,
)
from .volume import moments, unit_ball_volume


class EmptySection:
    """Explicit marker for an empty (or measure-zero) section."""

    def __init__(self, dim: int):
        self.dim = dim

    def __repr__(self):
        return f"EmptySection(dim={self.dim})"


def _body_from_halfspaces(A: np.ndarray, b: np.ndarray):
    """V-polytope of {A y <= b}, or EmptySection when empty/lower-dimensional."""
    d = A.shape[1]
    if d == 1:
        a = A[:, 0]
        pos = a > 1e-14
        neg = a < -1e-14
        zero = ~(pos | neg)
        if np.any(b[zero] < -GEOM_TOL):
            return EmptySection(1)
        if not pos.any() or not neg.any():
            raise GeometryError("unbounded 1-d section")
        hi = float(np.min(b[pos] / a[pos]))
        lo = float(np.max(b[neg] / a[neg]))
        if hi <= lo + GEOM_TOL:
            return EmptySection(1)
        return VPolytope([[lo], [hi]], canonicalize=False)
    norms = np.linalg.norm(A, axis=1)
    ok = norms > 1e-14
    if np.any(b[~ok] < -GEOM_TOL):
        return EmptySection(d)
    A, b, norms = A[ok], b[ok], norms[ok]
    A = A / norms[:, None]
    b = b / norms
    center, r = chebyshev_center(A, b)
    if center is None or r <= GEOM_TOL:
        return EmptySection(d)
    stacked = np.hstack([A, -b[:, None]])
    # same fallback ladder as geometry.robust_hull: qhull's merge heuristics
    # can fail on near-degenerate inputs
    hs = None
    last_exc = None
    for options in (None, "Q12", "QJ"):
        try:
            hs = (HalfspaceIntersection(stacked, center) if options is None
                  else HalfspaceIntersection(stacked, center, qhull_options=options))
            break
        except QhullError as exc:
            last_exc = exc
    if hs is None:
        raise GeometryError(f"halfspace intersection failed: {last_exc}") from last_exc
    verts, adim = extreme_points(hs.intersections)
    if adim < d:
        return EmptySection(d)
    return VPolytope(verts, canonicalize=False)


def section(K: ConvexBody, S: Subspace, x0=None):
    """K intersected with the flat x0 + S, in S's orthonormal coordinates.

    Returns a body of intrinsic dimension dim(S), or an EmptySection marker.
    """
    if S.dim < 1:
        raise GeometryError("flat dimension must be >= 1")
    n = S.ambient_dim
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float)
    if isinstance(K, Ball):
        # |x0 + B^T y - c|^2 = |y - q|^2 + |w|^2 with q the in-flat part
        delta = K.center - x0
        q = S.coords(delta)
        w2 = float(delta @ delta - q @ q)
        r2 = K.radius**2 - w2
        if r2 <= GEOM_TOL**2:
            return EmptySection(S.dim)
        return Ball(q, math.sqrt(r2))
    H = to_hrep(K)
    A = H.A @ S.basis.T
    b = H.b - H.A @ x0
    return _body_from_halfspaces(A, b)


def section_volume(K: ConvexBody, S: Subspace, x0=None) -> float:
    sec = section(K, S, x0)
    if isinstance(sec, EmptySection):
        return 0.0
    return moments(sec).volume


class SectionVolumeFunction:
    """Brunn's function f(x) = |K cap (F + x)| for x in F^perp coordinates.

    f is 1/m-concave on its support with m = n - k (k = codim of F).  For
    F = {0} (k = n) the 0-dimensional convention f = indicator of K is used.
    Evaluations are memoized on a 1e-10 coordinate grid.
    """

    def __init__(self, body: ConvexBody, F: Subspace):
        self.body = body
        self.F = F
        self.Fperp = F.complement()
        self.k = self.Fperp.dim
        self.m = F.dim  # section dimension n - k
        self._memo: dict[tuple, float] = {}
        self._proj = None  # support body: projection of K onto F^perp
        # fast path data for polytopes with sections of dimension <= 2
        self._fast = None
        self._fast2 = None
        if not isinstance(body, Ball) and self.m in (1, 2):
            H = to_hrep(body)
            AF = H.A @ F.basis.T
            if self.m == 1:
                self._fast = (AF[:, 0], H.A, H.b)
            else:
                R = float(np.max(np.linalg.norm(to_vrep(body).vertices, axis=1))) + 1.0
                self._fast2 = (AF, H.A, H.b, R)

    @property
    def concavity_index(self) -> int:
        return self.m

    def support_body(self) -> ConvexBody:
        """Projection of K onto F^perp: the support of f, in F^perp coords."""
        if self._proj is None:
            self._proj = project(self.body, self.Fperp)
        return self._proj

    def ray_extent(self, theta) -> float:
        """Largest t with f(t theta) > 0 (0 must be interior to the support)."""
        return radial(self.support_body(), np.asarray(theta, dtype=float))

    def __call__(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        key = tuple(np.round(x / 1e-10).astype(np.int64).tolist())
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        val = self._evaluate(x)
        self._memo[key] = val
        return val

    def _evaluate(self, x: np.ndarray) -> float:
        point = self.Fperp.embed(x)
        if self.m == 0:
            from .geometry import contains

            return 1.0 if contains(self.body, point) else 0.0
        sec = section(self.body, self.F, point)
        if isinstance(sec, EmptySection):
            return 0.0
        return moments(sec).volume

    def ray_values(self, theta, ts: np.ndarray) -> np.ndarray:
        """Vectorized f(t * theta) for an array of parameters t >= 0."""
        theta = np.asarray(theta, dtype=float)
        ts = np.asarray(ts, dtype=float)
        if self._fast is not None:
            a, A, b = self._fast
            w = A @ self.Fperp.embed(theta)
            offs = b[:, None] - np.outer(w, ts)  # (m_h, T)
            pos = a > 1e-12
            neg = a < -1e-12
            zero = ~(pos | neg)
            hi = np.min(offs[pos] / a[pos, None], axis=0)
            lo = np.max(offs[neg] / a[neg, None], axis=0)
            length = np.clip(hi - lo, 0.0, None)
            if zero.any():
                infeasible = np.any(offs[zero] < 0, axis=0)
                length[infeasible] = 0.0
            return length
        if isinstance(self.body, Ball) and np.linalg.norm(self.body.center) < 1e-14:
            # rotation-invariant closed form: (n-k)-ball of radius sqrt(r^2-t^2)
            r = self.body.radius
            h2 = np.clip(r * r - ts * ts * (theta @ theta), 0.0, None)
            return unit_ball_volume(self.m) * h2 ** (self.m / 2)
        if self._fast2 is not None:
            AF, A, b, R = self._fast2
            w = A @ self.Fperp.embed(theta)
            return np.array(
                [_clipped_polygon_area(AF, b - t * w, R) for t in ts]
            )
        if self.m == 0:
            from .geometry import contains_many

            pts = np.outer(ts, self.Fperp.embed(theta))
            return contains_many(self.body, pts).astype(float)
        return np.array([self(t * theta) for t in ts])


def _clipped_polygon_area(A2: np.ndarray, offs: np.ndarray, R: float) -> float:
    """Area of {y in R^2 : A2 y <= offs} inside a bounding square of size R.

    Sutherland-Hodgman clipping of the square against each halfspace; scalar
    Python loops beat array ops at these polygon sizes.
    """
    xs = [-R, R, R, -R]
    ys = [-R, -R, R, R]
    for (ax, ay), b in zip(A2.tolist(), offs.tolist()):
        vals = [ax * x + ay * y - b for x, y in zip(xs, ys)]
        if max(vals) <= 0.0:
            continue
        if min(vals) >= 0.0:
            return 0.0
        nx: list[float] = []
        ny: list[float] = []
        m = len(xs)
        for i in range(m):
            j = i + 1 if i + 1 < m else 0
            vi, vj = vals[i], vals[j]
            if vi <= 0.0:
                nx.append(xs[i])
                ny.append(ys[i])
            if (vi < 0.0 < vj) or (vj < 0.0 < vi):
                t = vi / (vi - vj)
                nx.append(xs[i] + t * (xs[j] - xs[i]))
                ny.append(ys[i] + t * (ys[j] - ys[i]))
        if len(nx) < 3:
            return 0.0
        xs, ys = nx, ny
    area = 0.0
    m = len(xs)
    for i in range(m):
        j = i + 1 if i + 1 < m else 0
        area += xs[i] * ys[j] - xs[j] * ys[i]
    return 0.5 * abs(area)


def section_volume_fn(K: ConvexBody, F: Subspace) -> SectionVolumeFunction:
    return SectionVolumeFunction(K, F)


# ---------------------------------------------------------------------------
# cone sections, polyhedral route


def _check_cone_flat(F: Subspace, C: PolyhedralCone):
    for g in C.generators:
        if np.linalg.norm(F.coords(g)) > 1e-9:
            raise GeometryError("cone does not lie in the orthogonal complement of F")


def cone_section_volume_polyhedral(K: ConvexBody, F: Subspace, C: PolyhedralCone) -> float:
    """|K cap (F + C)| in dimension dim(F) + dim(span C), exact for polytopes."""
    _check_cone_flat(F, C)
    p = C.span_dim
    G = C.span
    d = F.dim + p
    if isinstance(K, Ball):
        if np.linalg.norm(K.center) > GEOM_TOL:
            raise GeometryError("cone sections of balls require the center at 0")
        return solid_angle_fraction(C) * unit_ball_volume(d) * K.radius**d
    basis = np.vstack([F.basis, G.basis]) if F.dim else G.basis
    H = to_hrep(K)
    A = H.A @ basis.T
    b = H.b.copy()
    R = C.constraints_in_span()  # (p, p) in G coords
    cone_rows = np.hstack([np.zeros((p, F.dim)), -R])
    body = _body_from_halfspaces(np.vstack([A, cone_rows]), np.concatenate([b, np.zeros(p)]))
    if isinstance(body, EmptySection):
        return 0.0
    return moments(body).volume


def solid_angle_fraction(C: PolyhedralCone, mc_samples: int = 4_000_000, seed: int = 20240801) -> float:
    """Fraction of the sphere S^(p-1) of span(C) inside C.

    Closed forms for p <= 2 and orthogonal generators; spherical-triangle
    excess for simplicial p = 3; seeded Monte Carlo beyond that.
    """
    p = C.span_dim
    U = C.span.coords(C.generators)  # unit rows in span coords
    if p == 1:
        return 0.5
    gram = U @ U.T
    if C.is_simplicial() and np.allclose(gram, np.eye(p), atol=1e-9):
        return 2.0**-p
    if p == 2:
        ang = math.acos(np.clip(gram[0, 1], -1, 1))
        return ang / (2 * math.pi)
    if p == 3 and C.is_simplicial():
        # spherical excess via the dihedral angles of the triangle (a, b, c)
        a, b, c = U
        angles = []
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            ty = y - (y @ x) * x
            tz = z - (z @ x) * x
            angles.append(math.acos(np.clip(ty @ tz / (np.linalg.norm(ty) * np.linalg.norm(tz)), -1, 1)))
        return (sum(angles) - math.pi) / (4 * math.pi)
    if not C.is_simplicial():
        raise GeometryError("solid angle supported for ray/simplicial/orthant cones only")
    R = C.constraints_in_span()
    dirs = _rng.sample_sphere(p, mc_samples, seed)
    inside = np.all(dirs @ R.T >= 0, axis=1)
    return float(inside.mean())


# ---------------------------------------------------------------------------
# cone sections, radial route


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls ray and spherical quadrature of the radial route."""

    ray_panel_nodes: int = 32
    ray_max_panels: int = 16
    ray_rel_tol: float = 1e-8
    sphere_nodes: tuple = (16, 32, 64, 128)
    sphere_rel_tol: float = 1e-6
    sphere_fail_tol: float = 1e-3  # hard nonconvergence threshold


class QuadratureNonConvergence(RuntimeError):
    def __init__(self, value: float, error_estimate: float):
        super().__init__(
            f"quadrature did not reach tolerance (value {value}, est. error {error_estimate})"
        )
        self.value = value
        self.error_estimate = error_estimate


def _gl_cache(n: int, _cache={}):
    if n not in _cache:
        _cache[n] = np.polynomial.legendre.leggauss(n)
    return _cache[n]


def _composite_gl(fn, a: float, b: float, spec: QuadratureSpec) -> float:
    """Composite Gauss-Legendre with panel doubling; fn maps node array -> values."""
    x0, w0 = _gl_cache(spec.ray_panel_nodes)
    prev = None
    panels = 1
    while panels <= spec.ray_max_panels:
        edges = np.linspace(a, b, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * (edges[1] - edges[0])
        ts = (mid[:, None] + half * x0[None, :]).ravel()
        ws = np.tile(half * w0, panels)
        val = float(ws @ fn(ts))
        if prev is not None and abs(val - prev) <= spec.ray_rel_tol * max(abs(val), 1e-300):
            return val
        prev = val
        panels *= 2
    return prev


def ray_moment(f: SectionVolumeFunction, theta_fperp, p: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of t^(p-1) f(t theta) over the ray, i.e. I_p(f, theta)^p."""
    spec = spec or QuadratureSpec()
    theta = np.asarray(theta_fperp, dtype=float)
    T = f.ray_extent(theta)
    if T <= 0:
        return 0.0
    return _composite_gl(lambda ts: ts ** (p - 1) * f.ray_values(theta, ts), 0.0, T, spec)


def _std_simplex_quadrature(d: int, n1d: int):
    """Nodes/weights on the standard simplex {l >= 0, sum <= 1} via Duffy maps."""
    x, w = _gl_cache(n1d)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    pts = np.zeros((1, 0))
    wts = np.array([1.0])
    for i in range(d):
        rem = 1.0 - pts.sum(axis=1)  # remaining budget per point
        new_pts = []
        new_wts = []
        for j in range(len(x)):
            lam = rem * x[j]
            new_pts.append(np.hstack([pts, lam[:, None]]))
            new_wts.append(wts * w[j] * rem)
        pts = np.vstack(new_pts)
        wts = np.concatenate(new_wts)
    return pts, wts  # weights sum to 1/d!


def cone_section_volume_radial(
    K: ConvexBody, F: Subspace, C: PolyhedralCone, spec: QuadratureSpec | None = None
) -> float:
    """|K cap (F + C)| as the integral of I_p(f, theta)^p over C cap S^(p-1).

    f is the section-volume function of (K, F); requires 0 interior to the
    support of f restricted to span(C).
    """
    spec = spec or QuadratureSpec()
    _check_cone_flat(F, C)
    f = section_volume_fn(K, F)
    p = C.span_dim
    Gc = f.Fperp.coords(C.span.basis)  # (p, k) orthonormal rows: G inside F^perp
    gens = f.Fperp.coords(C.generators)

    def fp(theta_g: np.ndarray) -> float:
        # theta_g: unit direction in G-basis coordinates
        return ray_moment(f, theta_g @ Gc, p, spec)

    g = gens @ Gc.T  # generator coordinates in the G basis
    g = g / np.linalg.norm(g, axis=1, keepdims=True)
    if p == 1:
        return fp(np.array([math.copysign(1.0, g[0, 0])]))
    if p == 2:
        a1 = math.atan2(g[0, 1], g[0, 0])
        a2 = math.atan2(g[1, 1], g[1, 0])
        delta = (a2 - a1) % (2 * math.pi)
        if delta > math.pi:
            a1, delta = a2, 2 * math.pi - delta

        def arc(phis):
            return np.array([fp(np.array([math.cos(a), math.sin(a)])) for a in phis])

        return _integrate_refining(lambda n: _fixed_gl(arc, a1, a1 + delta, n), spec)
    # p >= 3: integrate over the transversal simplex T = conv(unit generators):
    # int_{C cap S^{p-1}} phi(theta) dtheta = h * int_T phi(x/|x|) |x|^-p dA(x)
    if g.shape[0] != p:
        raise GeometryError("radial route needs a simplicial cone for p >= 3")
    U = g  # (p, p) unit generators, rows
    nvec = np.linalg.solve(U, np.ones(p))
    h = 1.0 / np.linalg.norm(nvec)  # distance from 0 to aff(T)
    M = U[:-1] - U[-1]
    volT = math.sqrt(max(np.linalg.det(M @ M.T), 0.0)) / math.factorial(p - 1)

    def simplex_value(n1d: int) -> float:
        lam, wts = _std_simplex_quadrature(p - 1, n1d)
        lam_full = np.hstack([lam, 1.0 - lam.sum(axis=1, keepdims=True)])
        xs = lam_full @ U
        norms = np.linalg.norm(xs, axis=1)
        vals = np.array([fp(x / r) for x, r in zip(xs, norms)])
        mean_on_std = float((wts * vals / norms**p).sum())  # weights carry 1/(p-1)!
        return h * volT * math.factorial(p - 1) * mean_on_std

    return _integrate_refining(simplex_value, spec)


def _fixed_gl(fn, a: float, b: float, n: int) -> float:
    x, w = _gl_cache(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return float((half * w) @ fn(mid + half * x))


def _integrate_refining(value_at, spec: QuadratureSpec) -> float:
    values = [value_at(n) for n in spec.sphere_nodes[:1]]
    for n in spec.sphere_nodes[1:]:
        values.append(value_at(n))
        if abs(values[-1] - values[-2]) <= spec.sphere_rel_tol * max(abs(values[-1]), 1e-300):
            return values[-1]
    est = abs(values[-1] - values[-2]) if len(values) > 1 else math.inf
    if est > spec.sphere_fail_tol * max(abs(values[-1]), 1e-300):
        raise QuadratureNonConvergence(values[-1], est)
    return values[-1]
