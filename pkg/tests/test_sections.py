"""Flat sections, section-volume functions and cone-section volumes."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conesec.geometry import (
    PolyhedralCone,
    Subspace,
    make_ball,
    make_cube,
    make_regular_simplex,
    orthant_cone,
    random_centered_polytope,
)
from conesec.sections import (
    EmptySection,
    QuadratureSpec,
    cone_section_volume_polyhedral,
    cone_section_volume_radial,
    ray_moment,
    section,
    section_volume,
    section_volume_fn,
    solid_angle_fraction,
)
from conesec.volume import volume

dims = st.integers(min_value=2, max_value=5)
seeds = st.integers(min_value=0, max_value=10_000)


def random_body(n, seed):
    return random_centered_polytope(n, 2 * n + 6, seed)


def trivial_flat(n):
    return Subspace(n, np.zeros((0, n)))


# ---------------------------------------------------------------------------
# flat sections


def test_cube_axis_section():
    S = Subspace.hyperplane(np.array([0.0, 0.0, 1.0]))
    assert section_volume(make_cube(3), S) == pytest.approx(4.0)


def test_cube_diagonal_section():
    # {x1 + x2 = 0} cuts [-1,1]^n in a slab of volume sqrt(2) * 2^(n-1)
    for n in (3, 4, 5):
        u = np.zeros(n)
        u[:2] = 1.0 / math.sqrt(2)
        S = Subspace.hyperplane(u)
        assert section_volume(make_cube(n), S) == pytest.approx(
            math.sqrt(2) * 2 ** (n - 1), rel=1e-9)


def test_ball_section_radius_shrinks():
    B = make_ball(3, r=2.0)
    S = Subspace.hyperplane(np.array([0.0, 0.0, 1.0]))
    assert section_volume(B, S) == pytest.approx(math.pi * 4.0)
    off = section_volume(B, S, x0=np.array([0.0, 0.0, 1.0]))
    assert off == pytest.approx(math.pi * 3.0)


def test_section_outside_body_is_empty():
    S = Subspace.hyperplane(np.array([0.0, 1.0]))
    sec = section(make_cube(2), S, x0=np.array([0.0, 5.0]))
    assert isinstance(sec, EmptySection)
    assert section_volume(make_cube(2), S, x0=np.array([0.0, 5.0])) == 0.0


def test_line_section_of_simplex():
    S = Subspace.from_span([[1.0, 0.0, 0.0]])
    val = section_volume(make_cube(3), S)
    assert val == pytest.approx(2.0)
    assert section_volume(make_regular_simplex(3), S) > 0.0


# ---------------------------------------------------------------------------
# section-volume (Brunn) functions


def test_brunn_function_basic_values():
    F = Subspace.from_span([[1.0, 0, 0], [0, 1.0, 0]])
    f = section_volume_fn(make_cube(3), F)
    assert f.concavity_index == 2
    assert f([0.0]) == pytest.approx(4.0)
    assert f([0.5]) == pytest.approx(4.0)
    assert f([1.5]) == 0.0
    assert f.ray_extent([1.0]) == pytest.approx(1.0)


def test_brunn_function_codim_n_is_indicator():
    f = section_volume_fn(make_cube(2), trivial_flat(2))
    assert f.concavity_index == 0
    assert f([0.2, 0.3]) == 1.0
    assert f([1.2, 0.0]) == 0.0


def test_ray_values_match_pointwise():
    K = random_body(4, 2)
    for span in ([[1.0, 0, 0, 0]], [[1.0, 0, 0, 0], [0, 1.0, 0, 0]],
                 [[1.0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, 1.0, 0]]):
        F = Subspace.from_span(span)
        f = section_volume_fn(K, F)
        theta = np.ones(f.k) / math.sqrt(f.k)
        ts = np.linspace(0.0, 0.9 * f.ray_extent(theta), 7)
        vals = f.ray_values(theta, ts)
        for t, v in zip(ts, vals):
            assert v == pytest.approx(f(t * theta), rel=1e-8, abs=1e-12)


@given(dims, seeds)
def test_brunn_power_concavity(n, seed):
    # f^(1/m) is concave along any segment inside the support
    K = random_body(n, seed)
    F = Subspace.from_span(np.eye(n)[: n - 1])
    f = section_volume_fn(K, F)
    m = f.concavity_index
    a = 0.6 * f.ray_extent(np.array([1.0]))
    b = -0.6 * f.ray_extent(np.array([-1.0]))
    mid = 0.5 * (a + b)
    lhs = f([mid]) ** (1.0 / m)
    rhs = 0.5 * (f([a]) ** (1.0 / m) + f([b]) ** (1.0 / m))
    assert lhs >= rhs - 1e-9 * max(1.0, abs(rhs))


def test_ball_ray_moment_closed_form():
    # chord length of the disc: f(t) = 2 sqrt(1-t^2); int_0^1 f = pi/2
    F = Subspace.from_span([[1.0, 0.0]])
    f = section_volume_fn(make_ball(2), F)
    assert ray_moment(f, np.array([1.0]), 1.0) == pytest.approx(math.pi / 2, rel=1e-6)
    # int_0^1 t f(t) dt = 2/3
    assert ray_moment(f, np.array([1.0]), 2.0) == pytest.approx(2.0 / 3.0, rel=1e-6)


# ---------------------------------------------------------------------------
# solid angles


def test_solid_angle_closed_forms():
    assert solid_angle_fraction(PolyhedralCone([[1.0, 0.0]])) == pytest.approx(0.5)
    ang = math.radians(70.0)
    C = PolyhedralCone([[1.0, 0.0], [math.cos(ang), math.sin(ang)]])
    assert solid_angle_fraction(C) == pytest.approx(ang / (2 * math.pi), rel=1e-12)
    assert solid_angle_fraction(orthant_cone(np.eye(3))) == pytest.approx(1.0 / 8.0)
    assert solid_angle_fraction(orthant_cone(np.eye(4))) == pytest.approx(1.0 / 16.0)


def test_solid_angle_simplicial_3d():
    # spherical triangle with vertices e1, e2, (e1+e2+e3)/sqrt(3):
    # solid angle from Van Oosterom-Strang
    v3 = np.ones(3) / math.sqrt(3)
    C = PolyhedralCone([[1.0, 0, 0], [0, 1.0, 0], v3])
    v1, v2 = np.eye(3)[0], np.eye(3)[1]
    num = abs(np.dot(v1, np.cross(v2, v3)))
    den = 1.0 + v1 @ v2 + v2 @ v3 + v1 @ v3
    omega = 2.0 * math.atan2(num, den)
    assert solid_angle_fraction(C) == pytest.approx(omega / (4 * math.pi), rel=1e-10)


def test_ball_cone_section_is_solid_angle_share():
    B = make_ball(4)
    F = Subspace.from_span([[1.0, 0, 0, 0]])
    C = orthant_cone([[0, 1.0, 0, 0], [0, 0, 1.0, 0], [0, 0, 0, 1.0]])
    full = section_volume(B, Subspace.from_span(np.eye(4)))  # whole ball
    got = cone_section_volume_polyhedral(B, F, C)
    assert got == pytest.approx(volume(B) / 8.0, rel=1e-9)


# ---------------------------------------------------------------------------
# cone sections, both routes


def test_full_cone_section_is_volume():
    K = random_body(3, 6)
    C = orthant_cone(np.eye(3))
    total = 0.0
    for signs in np.ndindex(2, 2, 2):
        gens = np.diag([1.0 if s == 0 else -1.0 for s in signs])
        total += cone_section_volume_polyhedral(K, trivial_flat(3), orthant_cone(gens))
    assert total == pytest.approx(volume(K), rel=1e-9)


@given(seeds)
def test_cone_partition_additivity(seed):
    # halfspace split along e_n through a flat
    K = random_body(4, seed)
    F = Subspace.from_span(np.eye(4)[:3])
    up = PolyhedralCone([[0, 0, 0, 1.0]])
    down = PolyhedralCone([[0, 0, 0, -1.0]])
    a = cone_section_volume_polyhedral(K, F, up)
    b = cone_section_volume_polyhedral(K, F, down)
    assert a + b == pytest.approx(volume(K), rel=1e-9)


def test_radial_route_matches_polyhedral():
    for seed in (1, 2, 3):
        K = random_body(3, seed)
        F = Subspace.from_span([[1.0, 0, 0]])
        C = orthant_cone([[0, 1.0, 0], [0, 0, 1.0]])
        a = cone_section_volume_polyhedral(K, F, C)
        b = cone_section_volume_radial(K, F, C)
        assert b == pytest.approx(a, rel=1e-6)


def test_radial_route_on_ball():
    B = make_ball(3)
    F = Subspace.from_span([[0, 0, 1.0]])
    C = orthant_cone([[1.0, 0, 0], [0, 1.0, 0]])
    got = cone_section_volume_radial(B, F, C)
    assert got == pytest.approx(volume(B) / 4.0, rel=1e-6)


def test_cone_must_be_orthogonal_to_flat():
    from conesec.geometry import GeometryError

    K = make_cube(3)
    F = Subspace.from_span([[1.0, 0, 0]])
    C = PolyhedralCone([[1.0, 1.0, 0.0]])
    with pytest.raises(GeometryError):
        cone_section_volume_polyhedral(K, F, C)
