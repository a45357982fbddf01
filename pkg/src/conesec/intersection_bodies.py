"""Star bodies built from central hyperplane sections.

For a body K with centroid at the origin the map u -> |K cap u^perp| is the
radial function of a star body; a convexified variant replaces the section
volume by the minimum over admissible centers z of the section integral of
the kernel (1 - <z, y>)^(-n).  The minimization is a smooth convex problem
over (a shrunken copy of) the projection of the polar body, solved by
damped Newton descent from the always-feasible start z = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as _rng
from .geometry import (
    Ball,
    ConvexBody,
    GeometryError,
    Subspace,
    VPolytope,
    minkowski_norm,
    polar,
    project,
)
from .sections import EmptySection, _std_simplex_quadrature, section
from .volume import moments

_SHRINK = 1.0 - 1e-6  # admissible centers live in this multiple of the projected polar
_MAX_ITER = 10_000


@dataclass(frozen=True)
class CIEvaluation:
    """One direction's worth of plain and convexified section radii."""

    direction: np.ndarray
    i_radius: float
    ci_radius: float
    minimizer_z: np.ndarray  # ambient point in u^perp
    iterations: int
    certified_gap: float  # gradient norm at the minimizer, relative certificate
    certified: bool


def intersection_radial(K: ConvexBody, u) -> float:
    """Volume of the central hyperplane section K cap u^perp."""
    sec = section(K, Subspace.hyperplane(u))
    if isinstance(sec, EmptySection):
        return 0.0
    return moments(sec).volume


class _SectionIntegrator:
    """Kernel integrals over K cap u^perp, in hyperplane coordinates.

    Evaluates int (1 - <z, y>)^(-n) dy and its z-gradient by per-simplex
    Duffy-mapped Gauss quadrature, bisecting the longest edge of any simplex
    on which the (affine) kernel argument varies too much.
    """

    def __init__(self, K: ConvexBody, u):
        u = np.asarray(u, dtype=float)
        self.n = len(u)
        self.S = Subspace.hyperplane(u)
        self.u = u / np.linalg.norm(u)
        sec = section(K, self.S)
        if isinstance(sec, EmptySection):
            raise GeometryError("central section is empty; 0 must be interior to K")
        d = self.n - 1
        self.ball_section = None
        if isinstance(sec, Ball):
            if d == 1:
                sec = VPolytope(np.array([[sec.center[0] - sec.radius],
                                          [sec.center[0] + sec.radius]]))
            else:
                self.ball_section = sec
        if self.ball_section is None:
            from .volume import triangulate

            self.simplices = triangulate(sec)
            self.volume = moments(sec).volume
        else:
            self.volume = moments(self.ball_section).volume
        q = {1: 24, 2: 12, 3: 6}.get(d, 4)
        self._ratio = 1.2 if d <= 2 else 1.5
        self._nodes, self._wts = _std_simplex_quadrature(d, q)
        self._dfact = math.factorial(d)

    def _simplex_integrals(self, verts: np.ndarray, zc: np.ndarray, n: int,
                           want_gradient: bool, want_hessian: bool):
        """Value and (optional) gradient/Hessian contribution of one simplex."""
        d = verts.shape[1]
        v0 = verts[0]
        M = verts[1:] - v0
        jac = abs(float(np.linalg.det(M)))  # = d! * vol
        pts = self._nodes @ M + v0  # (Q, d)
        g = 1.0 - pts @ zc
        val = jac * float(self._wts @ g ** (-n))
        grad = hess = None
        if want_gradient:
            grad = jac * n * ((self._wts * g ** (-n - 1)) @ pts)
        if want_hessian:
            w2 = self._wts * g ** (-n - 2)
            hess = jac * n * (n + 1) * np.einsum("q,qa,qb->ab", w2, pts, pts)
        return val, grad, hess

    def _ball_integrals(self, zc: np.ndarray, n: int, want_gradient: bool,
                        want_hessian: bool):
        """Polar-coordinate quadrature for disc/ball sections (d <= 3)."""
        from .ball_bodies import sphere_quadrature

        B = self.ball_section
        d = B.dim
        dirs, wts = sphere_quadrature(d, 256 if d == 2 else 48)
        t, wt = np.polynomial.legendre.leggauss(48)
        t = 0.5 * B.radius * (t + 1.0)
        wt = 0.5 * B.radius * wt
        a = 1.0 - B.center @ zc - np.outer(dirs @ zc, t)  # (D, T)
        if np.min(a) <= 0:
            raise GeometryError("kernel argument nonpositive: z outside admissible region")
        rad = t ** (d - 1) * a ** (-n)
        val = float(wts @ rad @ wt)
        grad = hess = None
        if want_gradient:
            # y = c + t theta; gradient integrand n y a^(-n-1)
            core = t ** (d - 1) * a ** (-n - 1)  # (D, T)
            gc = n * float(wts @ core @ wt) * B.center
            gt = n * ((wts[:, None] * dirs).T @ (core @ (wt * t)))
            grad = gc + gt
        if want_hessian:
            core2 = t ** (d - 1) * a ** (-n - 2)
            c = B.center
            s0 = float(wts @ core2 @ wt)
            s1 = (wts[:, None] * dirs).T @ (core2 @ (wt * t))
            s2 = np.einsum("q,qa,qb->ab", wts * (core2 @ (wt * t * t)), dirs, dirs)
            hess = n * (n + 1) * (s0 * np.outer(c, c) + np.outer(c, s1)
                                  + np.outer(s1, c) + s2)
        return val, grad, hess

    def integrals(self, zc: np.ndarray, n: int | None = None,
                  want_gradient: bool = False, want_hessian: bool = False):
        """(value, gradient, Hessian) of the kernel integral, in flat coords.

        Gradient/Hessian slots are None unless requested.
        """
        n = self.n if n is None else n
        zc = np.asarray(zc, dtype=float)
        if self.ball_section is not None:
            return self._ball_integrals(zc, n, want_gradient, want_hessian)
        d = len(zc)
        total = 0.0
        grad = np.zeros(d) if want_gradient else None
        hess = np.zeros((d, d)) if want_hessian else None
        for simplex in self.simplices:
            stack = [(simplex, 0)]
            while stack:
                verts, depth = stack.pop()
                gv = 1.0 - verts @ zc
                gmin, gmax = float(gv.min()), float(gv.max())
                if gmin <= 0:
                    raise GeometryError(
                        "kernel argument nonpositive: z outside admissible region")
                if gmax / gmin > self._ratio and depth < 60:
                    # bisect the longest edge; the kernel argument is affine, so
                    # the vertex range controls the variation exactly
                    diffs = verts[:, None, :] - verts[None, :, :]
                    e = np.einsum("ijk,ijk->ij", diffs, diffs)
                    i, j = np.unravel_index(np.argmax(e), e.shape)
                    mid = 0.5 * (verts[i] + verts[j])
                    for a, b in ((i, j), (j, i)):
                        child = verts.copy()
                        child[a] = mid
                        stack.append((child, depth + 1))
                    continue
                val, g, h = self._simplex_integrals(verts, zc, n, want_gradient,
                                                    want_hessian)
                total += val
                if want_gradient:
                    grad += g
                if want_hessian:
                    hess += h
        return total, grad, hess


def _flat_coords(integ: _SectionIntegrator, z) -> np.ndarray:
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if abs(z @ integ.u) > 1e-8 * max(1.0, np.linalg.norm(z)):
        raise GeometryError("z must lie in u^perp")
    return integ.S.coords(z)


def ci_objective(K: ConvexBody, u, z) -> float:
    """int_{K cap u^perp} (1 - <z, y>)^(-n) dy for z in u^perp."""
    integ = _SectionIntegrator(K, u)
    val, _, _ = integ.integrals(_flat_coords(integ, z))
    return val


def ci_objective_gradient(K: ConvexBody, u, z) -> np.ndarray:
    """Gradient of ci_objective in z, returned as an ambient vector in u^perp."""
    integ = _SectionIntegrator(K, u)
    _, grad, _ = integ.integrals(_flat_coords(integ, z), want_gradient=True)
    return integ.S.embed(grad)


def ci_radial(K: ConvexBody, u, tol: float = 1e-8,
              max_iter: int = _MAX_ITER) -> CIEvaluation:
    """Minimize the section kernel integral over admissible centers z.

    Damped Newton descent with Armijo backtracking from z = 0, keeping
    iterates in the shrunken projected polar body; the objective is convex
    there (its Hessian is a positive multiple of a second-moment matrix), so
    a small relative gradient norm certifies global optimality.
    """
    integ = _SectionIntegrator(K, u)
    admissible = project(polar(K), integ.S)
    d = integ.n - 1
    z = np.zeros(d)
    f, g, H = integ.integrals(z, want_gradient=True, want_hessian=True)
    i_radius = integ.volume
    iterations = 0
    while iterations < max_iter:
        gap = float(np.linalg.norm(g))
        if gap <= tol * f:
            break
        try:
            direction = -np.linalg.solve(H, g)
        except np.linalg.LinAlgError:
            direction = -g / gap
        slope = float(g @ direction)
        if slope >= 0:  # numerical Hessian lost definiteness; fall back
            direction = -g / gap
            slope = -gap
        t = 1.0
        accepted = False
        while t * abs(slope) > 1e-16 * f:
            z_new = z + t * direction
            if minkowski_norm(admissible, z_new) <= _SHRINK:
                try:
                    f_new, g_new, H_new = integ.integrals(
                        z_new, want_gradient=True, want_hessian=True)
                except GeometryError:
                    f_new = math.inf
                if f_new <= f + 1e-4 * t * slope:
                    z, f, g, H = z_new, f_new, g_new, H_new
                    accepted = True
                    break
            t *= 0.5
        iterations += 1
        if not accepted:
            break  # no feasible descent step at machine precision
    gap = float(np.linalg.norm(g))
    return CIEvaluation(
        direction=integ.u,
        i_radius=float(i_radius),
        ci_radius=float(f),
        minimizer_z=integ.S.embed(z),
        iterations=iterations,
        certified_gap=gap,
        certified=bool(gap <= tol * f),
    )


def ci_inclusion_report(K: ConvexBody, num_dirs: int, seed: int,
                        tol: float = 1e-8) -> dict:
    """Per-direction radii of both section bodies plus the inclusion summary.

    Asserts nothing itself; records ci_radius <= i_radius status and the
    extreme radius ratios over a seeded direction grid.
    """
    n = K.dim
    dirs = _rng.sphere_grid(n, num_dirs, seed)
    records = []
    ratios = []
    num_uncertified = 0
    for u in dirs:
        ev = ci_radial(K, u, tol=tol)
        ratio = ev.ci_radius / ev.i_radius
        ratios.append(ratio)
        if not ev.certified:
            num_uncertified += 1
        records.append({
            "u": [float(x) for x in ev.direction],
            "i_radius": ev.i_radius,
            "ci_radius": ev.ci_radius,
            "ratio": ratio,
            "minimizer_z": [float(x) for x in ev.minimizer_z],
            "iterations": ev.iterations,
            "certified": ev.certified,
        })
    return {
        "body_dim": n,
        "num_dirs": len(dirs),
        "seed": seed,
        "records": records,
        "summary": {
            "min_ratio": float(min(ratios)),
            "max_ratio": float(max(ratios)),
            "num_uncertified": num_uncertified,
            "upper_inclusion_holds": bool(max(ratios) <= 1.0 + 1e-9),
        },
    }
