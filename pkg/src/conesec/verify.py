"""Checkable predicates for cone-section volume inequalities.

Every check returns a CheckResult pairing the two sides of an inequality
with an explicit slack; experiments with no fully explicit constant return
tables instead of hard pass/fail verdicts.  Constants appearing in the
bounds are built in log space from Gamma/Beta/binomial evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import hadamard

from . import rng as _rng
from .ball_bodies import (
    ConcaveFunctionOracle,
    StarBodyOracle,
    ball_body,
    estimate_max,
    fradelizi_constant,
    geometric_distance_lb,
    negative_ray_factor,
)
from .geometry import (
    Ball,
    ConvexBody,
    GeometryError,
    HPolytope,
    PolyhedralCone,
    Subspace,
    VPolytope,
    make_centered_cone,
    make_cross_polytope,
    make_cube,
    make_ball,
    make_regular_simplex,
    minkowski_norm,
    orthant_cone,
    radial,
    random_centered_polytope,
    support,
    to_hrep,
    to_vrep,
)
from .sections import (
    EmptySection,
    _body_from_halfspaces,
    cone_section_volume_polyhedral,
    section,
    solid_angle_fraction,
)
from .special import beta, binom, gamma
from .volume import isotropic_position, moments, unit_ball_volume, volume

__all__ = [
    "CheckResult", "ExplicitConstant", "gamma", "beta", "binom",
    "gruenbaum_constant", "part1_constant",
    "check_gruenbaum", "check_main_theorem_part1", "check_main_theorem_part2",
    "check_corollary1", "check_corollary2", "check_corollary3",
    "experiment_remark1", "experiment_remark3_cube",
    "experiment_remark2_sharpness", "experiment_alpha_n",
    "check_fradelizi", "check_lemma5", "check_lemma6", "check_lemma7",
    "check_prop8", "report_prop9",
    "trivial_flat", "halfspace_volume", "cone_volume",
]


@dataclass(frozen=True)
class CheckResult:
    """One verified inequality: passed iff lhs <= rhs * (1 + slack).

    Checks that are two-sided or equalities say so in ``notes`` and encode
    the worst side in (lhs, rhs).
    """

    name: str
    body_spec: str
    parameters: dict
    lhs: float
    rhs: float
    slack: float
    passed: bool
    notes: str = ""

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "body": self.body_spec,
            "parameters": {k: (v if isinstance(v, (int, float, str)) else str(v))
                           for k, v in self.parameters.items()},
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "passed": self.passed,
            "notes": self.notes,
        }


@dataclass(frozen=True)
class ExplicitConstant:
    """A named closed-form constant appearing in one of the bounds."""

    name: str
    parameters: dict
    value: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise GeometryError(f"constant {self.name} is not finite-positive")


def gruenbaum_constant(n: int) -> ExplicitConstant:
    return ExplicitConstant("centroid-halfspace", {"n": n}, (1.0 + 1.0 / n) ** (-n))


def part1_constant(n: int, k: int, p: int) -> ExplicitConstant:
    """k^p (1 + k/(n+1-k))^(n-k) C(n+p-k, p) C(n+1, k+1)^(-p/(k+1))."""
    if not (1 <= p <= k <= n):
        raise GeometryError("need 1 <= p <= k <= n")
    value = (k ** p * (1.0 + k / (n + 1.0 - k)) ** (n - k) * binom(n + p - k, p)
             * binom(n + 1, k + 1) ** (-p / (k + 1.0)))
    return ExplicitConstant("cone-ratio-bound", {"n": n, "k": k, "p": p}, value)


# ---------------------------------------------------------------------------
# small geometric helpers


def trivial_flat(n: int) -> Subspace:
    """The subspace {0} in R^n (flat of a full-dimensional cone section)."""
    return Subspace(n, np.zeros((0, n)))


def _clip(K: ConvexBody, normals: np.ndarray):
    """K intersected with the halfspaces <normal_i, x> >= 0."""
    H = to_hrep(K)
    normals = np.atleast_2d(np.asarray(normals, dtype=float))
    A = np.vstack([H.A, -normals])
    b = np.concatenate([H.b, np.zeros(len(normals))])
    return _body_from_halfspaces(A, b)


def halfspace_volume(K: ConvexBody, u) -> float:
    """|K cap {x : <x, u> >= 0}|."""
    if isinstance(K, Ball):
        if np.linalg.norm(K.center) > 1e-12:
            raise GeometryError("ball halfspace volumes require the center at 0")
        return 0.5 * unit_ball_volume(K.dim) * K.radius ** K.dim
    body = _clip(K, np.atleast_2d(np.asarray(u, dtype=float)))
    return 0.0 if isinstance(body, EmptySection) else moments(body).volume


def cone_volume(K: ConvexBody, F: Subspace, C: PolyhedralCone) -> float:
    """|K cap (F + C)|, allowing the trivial flat F = {0}."""
    return cone_section_volume_polyhedral(K, F, C)


def _centroid_guard(K: ConvexBody, tol: float = 1e-9):
    m = moments(K)
    scale = m.volume ** (1.0 / K.dim)
    if np.linalg.norm(m.centroid) > tol * max(1.0, scale):
        raise GeometryError("check requires the centroid at the origin")
    return m


# ---------------------------------------------------------------------------
# halfspaces through the centroid


def check_gruenbaum(K: ConvexBody, u, body_spec: str = "body") -> CheckResult:
    """Every halfspace through the centroid keeps at least (1+1/n)^-n of |K|."""
    m = _centroid_guard(K)
    n = K.dim
    lhs = gruenbaum_constant(n).value * m.volume
    rhs = halfspace_volume(K, u)
    slack = 1e-9
    return CheckResult(
        name="centroid-halfspace-lower-bound",
        body_spec=body_spec,
        parameters={"n": n, "u": np.asarray(u, dtype=float).round(12).tolist()},
        lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(lhs <= rhs * (1.0 + slack)),
        notes="lower bound: halfspace volume on the right",
    )


# ---------------------------------------------------------------------------
# the two-sided cone-section theorem


def check_main_theorem_part1(K: ConvexBody, F: Subspace, C: PolyhedralCone,
                             body_spec: str = "body") -> CheckResult:
    """|K cap (F - C)| / |K cap (F + C)| against the explicit constant."""
    _centroid_guard(K)
    n = K.dim
    k = n - F.dim
    p = C.span_dim
    const = part1_constant(n, k, p)
    plus = cone_volume(K, F, C)
    minus = cone_volume(K, F, C.negated())
    if plus <= 0:
        raise GeometryError("degenerate cone section: |K cap (F+C)| = 0")
    lhs = minus / plus
    slack = 1e-6
    return CheckResult(
        name="cone-ratio-upper-bound",
        body_spec=body_spec,
        parameters={"n": n, "k": k, "p": p},
        lhs=lhs, rhs=const.value, slack=slack,
        passed=bool(lhs <= const.value * (1.0 + slack)),
        notes=f"|K cap (F-C)| = {minus:.6e}, |K cap (F+C)| = {plus:.6e}",
    )


def check_main_theorem_part2(K: ConvexBody, F: Subspace, C: PolyhedralCone,
                             body_spec: str = "body") -> CheckResult:
    """Isotropic K: cone-section fraction within n^p of the ball's fraction.

    Only the n^p branch of the constant is explicit, so only it is asserted;
    the alternative branch is reported with its unspecified factor symbolic.
    """
    n = K.dim
    k = n - F.dim
    p = C.span_dim
    K_iso, _ = isotropic_position(K)
    plus = cone_volume(K_iso, F, C)
    full = section_volume_in_flat(K_iso, F, C)
    if full <= 0 or plus <= 0:
        raise GeometryError("degenerate cone section")
    k_ratio = plus / full
    ball_ratio = solid_angle_fraction(C)
    lhs = max(k_ratio / ball_ratio, ball_ratio / k_ratio)
    rhs = float(n) ** p
    slack = 1e-6
    alt = ((1.0 + k / (n + 1.0 - k)) ** (n - k) * binom(n + p - k, p)
           * binom(n + 1, k + 1) ** (-p / (k + 1.0)))
    return CheckResult(
        name="isotropic-cone-fraction-sandwich",
        body_spec=body_spec,
        parameters={"n": n, "k": k, "p": p},
        lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(lhs <= rhs * (1.0 + slack)),
        notes=(f"two-sided; K-fraction {k_ratio:.6e}, ball fraction {ball_ratio:.6e}; "
               f"alternative branch a^{{{k * p}}} * {alt:.6e} with a unspecified"),
    )


def section_volume_in_flat(K: ConvexBody, F: Subspace, C: PolyhedralCone) -> float:
    """|K cap (F + G)| where G = span(C): the un-coned section volume."""
    G = C.span
    if F.dim == 0 and G.dim == K.dim:
        return moments(K).volume
    span = Subspace.from_span(np.vstack([F.basis, G.basis]) if F.dim else G.basis,
                              ambient_dim=K.dim)
    sec = section(K, span)
    return 0.0 if isinstance(sec, EmptySection) else moments(sec).volume


# ---------------------------------------------------------------------------
# corollaries (explicit parent bound asserted, implied constant reported)


def check_corollary1(K: ConvexBody, F: Subspace, theta,
                     body_spec: str = "body") -> CheckResult:
    """Opposite-ray section ratio: parent p = 1 bound asserted, c reported."""
    _centroid_guard(K)
    n = K.dim
    k = n - F.dim
    theta = np.asarray(theta, dtype=float)
    C = PolyhedralCone(-theta[None, :])  # so that F - C = F + R_+ theta
    const = part1_constant(n, k, 1)
    plus_ray = cone_volume(K, F, C.negated())
    minus_ray = cone_volume(K, F, C)
    if minus_ray <= 0:
        raise GeometryError("degenerate ray section")
    lhs = plus_ray / minus_ray
    envelope = k * k * (1.0 + k / (n - k + 1.0)) ** max(n - k - 1, 0)
    slack = 1e-6
    return CheckResult(
        name="opposite-ray-ratio-bound",
        body_spec=body_spec,
        parameters={"n": n, "k": k},
        lhs=lhs, rhs=const.value, slack=slack,
        passed=bool(lhs <= const.value * (1.0 + slack)),
        notes=f"implied constant c >= {lhs / envelope:.6e} against k^2 envelope",
    )


def check_corollary2(K: ConvexBody, u, v, body_spec: str = "body") -> CheckResult:
    """Hyperplane section split by a second direction: ratio bounded both ways."""
    _centroid_guard(K)
    n = K.dim
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    theta = v - (v @ u) * u
    nt = np.linalg.norm(theta)
    if nt < 1e-9:
        raise GeometryError("directions must satisfy v != +-u")
    theta /= nt
    F = Subspace.from_span(
        _orth_complement(np.vstack([u, theta])), ambient_dim=n)
    const = part1_constant(n, 2, 1)
    plus = cone_volume(K, F, PolyhedralCone(theta[None, :]))
    minus = cone_volume(K, F, PolyhedralCone(-theta[None, :]))
    if min(plus, minus) <= 0:
        raise GeometryError("degenerate hyperplane section split")
    ratio = plus / minus
    lhs = max(ratio, 1.0 / ratio)
    slack = 1e-6
    return CheckResult(
        name="hyperplane-split-two-sided-bound",
        body_spec=body_spec,
        parameters={"n": n, "ratio": float(ratio)},
        lhs=lhs, rhs=const.value, slack=slack,
        passed=bool(lhs <= const.value * (1.0 + slack)),
        notes=f"two-sided; implied constant c >= {lhs:.6e}",
    )


def _orth_complement(rows: np.ndarray) -> np.ndarray:
    from .geometry import _complement_basis

    return _complement_basis(rows)


def check_corollary3(K: ConvexBody, E: Subspace, us,
                     body_spec: str = "body") -> CheckResult:
    """Isotropic K: orthant-restricted section keeps a (2n)^-p fraction.

    Only the (2n)^-p branch is explicit; the e^{-ckp} branch's implied c is
    reported.  K must already be in isotropic position.
    """
    n = K.dim
    us = np.atleast_2d(np.asarray(us, dtype=float))
    p = len(us)
    k = n - E.dim + p
    for u in us:
        if not E.contains_vector(u, tol=1e-9):
            raise GeometryError("orthant directions must lie in the section subspace")
    C = orthant_cone(us)
    F = Subspace.from_span(
        _orth_complement(np.vstack([E.complement().basis, us])), ambient_dim=n)
    plus = cone_volume(K, F, C)
    if E.dim == n:
        full = moments(K).volume
    else:
        sec = section(K, E)
        full = 0.0 if isinstance(sec, EmptySection) else moments(sec).volume
    if full <= 0:
        raise GeometryError("empty section subspace")
    lhs = (2.0 * n) ** (-p) * full
    rhs = plus
    slack = 1e-6
    frac = plus / full
    implied_c = -math.log(frac) / (k * p) if frac < 1 else 0.0
    return CheckResult(
        name="isotropic-orthant-fraction-lower-bound",
        body_spec=body_spec,
        parameters={"n": n, "k": k, "p": p},
        lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(lhs <= rhs * (1.0 + slack)),
        notes=(f"lower bound: orthant volume on the right; fraction {frac:.6e}; "
               f"exponential branch needs c >= {implied_c:.6e}"),
    )


# ---------------------------------------------------------------------------
# closed-form experiments on the regular simplex and the cube


def check_experiment_remark1(n: int, l: int) -> CheckResult:
    """Simplex sliced by the span of l vertices: exact halfspace fraction.

    The fraction of the l-dimensional section on the positive side of the
    opposite-face vertex equals (l/(n+1))^l exactly.
    """
    if not 1 <= l <= n - 1:
        raise GeometryError("need 1 <= l <= n-1")
    simplex = make_regular_simplex(n)
    verts = to_vrep(simplex).vertices
    E = Subspace.from_span(verts[:l], ambient_dim=n)
    sec = section(simplex, E)
    f_next = -verts[:l].sum(axis=0) / (n + 1.0 - l)
    total = moments(sec).volume
    positive = halfspace_volume(sec, E.coords(f_next))
    lhs = positive / total
    rhs = (l / (n + 1.0)) ** l
    slack = 1e-6
    return CheckResult(
        name="simplex-span-section-fraction",
        body_spec=f"regular-simplex-{n}",
        parameters={"n": n, "l": l},
        lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(abs(lhs - rhs) <= slack * rhs),
        notes="equality check (two-sided relative)",
    )


# keep the experiment_* naming used by the CLI
experiment_remark1 = check_experiment_remark1


def experiment_remark3_cube(n: int) -> CheckResult:
    """Cube meets the cone over n pairwise-orthogonal vertices: n^(n/2)/n!.

    The orthogonal vertex set comes from a Sylvester-Hadamard matrix, so n
    must be a power of two.
    """
    if n & (n - 1) or n < 2:
        raise GeometryError("orthogonal vertex sets exist for n a power of two")
    Hmat = hadamard(n).astype(float)  # rows are pairwise-orthogonal cube vertices
    C = PolyhedralCone(Hmat)
    cube = make_cube(n)
    lhs = cone_volume(cube, trivial_flat(n), C)
    rhs = n ** (n / 2.0) / math.factorial(n)
    slack = 1e-6
    return CheckResult(
        name="cube-orthogonal-vertex-cone-volume",
        body_spec=f"cube-{n}",
        parameters={"n": n},
        lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(abs(lhs - rhs) <= slack * rhs),
        notes="equality check (two-sided relative)",
    )


def experiment_remark2_sharpness(n: int, eps_sequence=None) -> dict:
    """Vertex-cone ratio |K cap C| / |K cap (-C)| as the cone shrinks.

    On the centered regular simplex the ratio approaches n^n as the cone
    around a vertex direction narrows; the table reports the trend, with no
    hard assertion beyond monotonicity checked by the caller.
    """
    if eps_sequence is None:
        eps_sequence = [0.8, 0.4, 0.2, 0.1, 0.05]
    simplex = make_regular_simplex(n)
    verts = to_vrep(simplex).vertices
    apex = verts[0] / np.linalg.norm(verts[0])
    # spread directions: vertices of a centered regular (n-1)-simplex in apex^perp
    perp = Subspace.hyperplane(apex)
    spread = to_vrep(make_regular_simplex(n - 1)).vertices if n > 1 else np.zeros((1, 0))
    spread = spread / np.linalg.norm(spread, axis=1, keepdims=True)
    rows = []
    F0 = trivial_flat(n)
    for eps in eps_sequence:
        gens = apex[None, :] + eps * (spread @ perp.basis)
        C = PolyhedralCone(gens)
        plus = cone_volume(simplex, F0, C)
        minus = cone_volume(simplex, F0, C.negated())
        if plus < 1e-12 or minus < 1e-300:
            raise GeometryError("cone too small to resolve")
        rows.append({"eps": float(eps), "ratio": plus / minus})
    return {
        "n": n,
        "target": float(n) ** n,
        "rows": rows,
        "nondecreasing_within_1pct": all(
            rows[i + 1]["ratio"] >= rows[i]["ratio"] * 0.99
            for i in range(len(rows) - 1)),
    }


def experiment_alpha_n(n: int, trials: int, seed: int) -> dict:
    """Smallest scaled orthant fraction over random isotropic polytopes.

    For each trial body (put in isotropic position) and a random orthonormal
    basis, records 2 * (|K cap orthant| / |K|)^(1/n); the minimum observed is
    a numerical stand-in for the best constant in the orthant lower bound.
    """
    gen = _rng.generator(seed)
    values = []
    F0 = trivial_flat(n)
    for t in range(trials):
        K = random_centered_polytope(n, 2 * n + 6, seed=seed + 7919 * t)
        K_iso, _ = isotropic_position(K)
        Q = np.linalg.qr(gen.normal(size=(n, n)))[0]
        C = orthant_cone(Q)
        frac = cone_volume(K_iso, F0, C) / moments(K_iso).volume
        values.append(2.0 * frac ** (1.0 / n))
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "values": values,
        "min_value": float(min(values)),
        "reference_sqrt": 1.0 / math.sqrt(n),
        "reference_linear": 1.0 / n,
    }


# ---------------------------------------------------------------------------
# one-dimensional profile and star-body lemmas, bound to CheckResult


def check_fradelizi(f: ConcaveFunctionOracle, seed: int = 23,
                    body_spec: str = "oracle") -> CheckResult:
    """max f <= (1 + k/(m+1))^m f(0) for barycenter-zero concave profiles."""
    if f.concavity_index is None:
        raise GeometryError("check requires a finite concavity index")
    if not f.barycenter_zero:
        raise GeometryError("check requires a barycenter-zero oracle")
    lhs = estimate_max(f, seed=seed)
    rhs = fradelizi_constant(f.dim, f.concavity_index) * f(np.zeros(f.dim))
    slack = 1e-6
    return CheckResult(
        name="profile-max-vs-center",
        body_spec=body_spec,
        parameters={"k": f.dim, "m": f.concavity_index},
        lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(lhs <= rhs * (1.0 + slack)),
    )


def check_lemma5(L: ConvexBody, body_spec: str = "body") -> CheckResult:
    """-L inside k L for centered convex bodies, checked exactly at vertices."""
    _centroid_guard(L)
    k = L.dim
    if isinstance(L, Ball):
        lhs = 1.0
    else:
        V = to_vrep(L).vertices
        lhs = max(minkowski_norm(L, -v) for v in V)
    slack = 1e-9
    return CheckResult(
        name="reflection-inclusion-factor",
        body_spec=body_spec,
        parameters={"k": k},
        lhs=lhs, rhs=float(k), slack=slack,
        passed=bool(lhs <= k * (1.0 + slack)),
    )


def check_lemma6(f: ConcaveFunctionOracle, p: float, num_dirs: int = 64,
                 seed: int = 5, body_spec: str = "oracle") -> CheckResult:
    """Backward radius of the moment body against the explicit factor."""
    if f.concavity_index is None:
        raise GeometryError("check requires a finite concavity index")
    L = ball_body(f, p)
    factor = negative_ray_factor(f.dim, f.concavity_index, p)
    dirs = _rng.sphere_grid(f.dim, num_dirs, seed)
    worst = 0.0
    for th in dirs:
        r_plus = L.radial(th)
        r_minus = L.radial(-th)
        if r_plus > 0:
            worst = max(worst, r_minus / r_plus)
    slack = 1e-6
    return CheckResult(
        name="moment-body-backward-radius-bound",
        body_spec=body_spec,
        parameters={"k": f.dim, "m": f.concavity_index, "p": p},
        lhs=worst, rhs=factor, slack=slack,
        passed=bool(worst <= factor * (1.0 + slack)),
    )


def check_lemma7(L: ConvexBody, u, body_spec: str = "body") -> CheckResult:
    """Support-height sandwich for the directional second moment (exact)."""
    k = L.dim
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    m = moments(L)
    second = float(u @ m.covariance @ u) / m.volume
    h = support(L, u)
    lower = h * h / (k * (k + 2.0))
    upper = (k / (k + 2.0)) * h * h
    slack = 1e-9
    lhs = max(lower / second, second / upper) if second > 0 else math.inf
    return CheckResult(
        name="second-moment-support-sandwich",
        body_spec=body_spec,
        parameters={"k": k, "second_moment": second, "support": h},
        lhs=lhs, rhs=1.0, slack=slack,
        passed=bool(lhs <= 1.0 + slack),
        notes="two-sided; lhs is the worst violation factor of either side",
    )


def check_prop8(L: ConvexBody, body_spec: str = "body") -> CheckResult:
    """Ball sandwich from second moments: beta B <= L <= r k beta B (exact)."""
    k = L.dim
    m = moments(L)
    w = np.linalg.eigvalsh(m.covariance / m.volume)
    gamma_min, gamma_max = float(w[0]), float(w[-1])
    r = math.sqrt(gamma_max / gamma_min)
    beta_L = math.sqrt(gamma_min * (k + 2.0) / k)
    if isinstance(L, Ball):
        inner = outer = L.radius
    else:
        V = to_vrep(L)
        outer = float(np.max(np.linalg.norm(V.vertices, axis=1)))
        H = to_hrep(L)
        inner = float(np.min(H.b / np.linalg.norm(H.A, axis=1)))
    slack = 1e-7
    lhs = max(beta_L / inner, outer / (r * k * beta_L))
    return CheckResult(
        name="second-moment-ball-sandwich",
        body_spec=body_spec,
        parameters={"k": k, "beta": beta_L, "r": r},
        lhs=lhs, rhs=1.0, slack=slack,
        passed=bool(lhs <= 1.0 + slack),
        notes="two-sided; lhs is the worst violation factor of either side",
    )


def report_prop9(f: ConcaveFunctionOracle, num_dirs: int = 256,
                 seed: int = 11, body_spec: str = "oracle") -> CheckResult:
    """Distance of the (k+1)-moment body from the ball: report-only.

    The bound r a^k contains an unspecified absolute constant a, so no
    pass/fail; the implied a from a sampled distance lower bound is recorded.
    """
    k = f.dim
    L = ball_body(f, k + 1.0)
    ball = StarBodyOracle(k, lambda th: 1.0, label="unit-ball")
    dist_lb = geometric_distance_lb(L, ball, num_dirs=num_dirs, seed=seed)
    m = moments(L.polytope_approx(seed=seed))
    w = np.linalg.eigvalsh(m.covariance / m.volume)
    r = math.sqrt(float(w[-1]) / float(w[0]))
    implied_a = (dist_lb / r) ** (1.0 / k) if dist_lb > r else 0.0
    return CheckResult(
        name="moment-body-ball-distance-report",
        body_spec=body_spec,
        parameters={"k": k, "distance_lb": dist_lb, "r": r},
        lhs=dist_lb, rhs=dist_lb, slack=0.0,
        passed=True,
        notes=f"report-only: implied a >= {implied_a:.6e}",
    )


# ---------------------------------------------------------------------------
# corpus runner


CORPUS_ENV_VAR = "CONESEC_CORPUS"


def load_corpus(path: str | None = None) -> list[dict]:
    """Body specs from a JSON manifest (argument, env var, or packaged default)."""
    import json
    import os
    from importlib import resources

    if path is None:
        path = os.environ.get(CORPUS_ENV_VAR)
    if path is None:
        text = resources.files("conesec").joinpath("data/corpus.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)["bodies"]


def checks_for_body(spec: dict) -> list[CheckResult]:
    """The standard check battery for one corpus body."""
    from .geometry import body_from_spec

    K = body_from_spec(spec)
    label = spec.get("label", spec["type"])
    n = K.dim
    results = []
    for u in _rng.sphere_grid(n, 3, seed=17):
        results.append(check_gruenbaum(K, u, label))
    results.append(check_lemma5(K, label))
    results.append(check_prop8(K, label))
    for u in _rng.sphere_grid(n, 2, seed=31):
        results.append(check_lemma7(K, u, label))
    basis = np.eye(n)
    configs = [(Subspace.from_span(basis[: n - 1], ambient_dim=n),
                PolyhedralCone(basis[-1:]))]
    if n >= 3:
        F2 = Subspace.from_span(basis[: n - 2], ambient_dim=n)
        configs.append((F2, PolyhedralCone(basis[-1:])))
        configs.append((F2, orthant_cone(basis[n - 2:])))
    for F, C in configs:
        results.append(check_main_theorem_part1(K, F, C, label))
    if n <= 4:
        results.append(check_main_theorem_part2(
            K, Subspace.from_span(basis[: n - 1], ambient_dim=n),
            PolyhedralCone(basis[-1:]), label))
    return results


def run_corpus(specs: list[dict] | None = None, jobs: int = 1) -> list[CheckResult]:
    """Run the standard battery over the corpus, sorted deterministically."""
    if specs is None:
        specs = load_corpus()
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(checks_for_body, specs))
    else:
        batches = [checks_for_body(s) for s in specs]
    results = [r for batch in batches for r in batch]
    results.sort(key=lambda r: (r.name, r.body_spec, sorted(r.parameters.items(),
                                                            key=lambda kv: kv[0])))
    return results
