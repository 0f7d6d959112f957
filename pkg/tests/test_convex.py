import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from oracles import kkt_affine_project
from regsel.convex import (AffineSet, Ball, Box, Halfspaces, Intersection,
                           direction_grid, dykstra, interior_contains,
                           set_from_json, truncate)
from regsel.errors import (ContractError, InfeasibilitySuspectedError,
                           ShapeError)


def fixtures():
    """Catalogue of sets the property loops run over."""
    return [
        ("box", Box([-1.0, -1.0], [1.0, 1.0])),
        ("ball", Ball([0.5, -0.5], 2.0)),
        ("affine", AffineSet([[1.0, 1.0]], [2.0])),
        ("halfspaces", Halfspaces([[1.0, 1.0], [-1.0, 2.0], [0.0, -1.0]],
                                  [2.0, 3.0, 1.0])),
        ("intersection", Intersection([AffineSet([[1.0, 1.0]], [2.0]),
                                       Box([0.0, 0.0], [0.5, 5.0])])),
    ]


def slsqp_project(s, x):
    """Independent nearest-point oracle via constrained minimization."""
    cons = []

    def add(member):
        if isinstance(member, AffineSet):
            cons.append({"type": "eq",
                         "fun": lambda z, m=member: m.op @ z - m.rhs})
        elif isinstance(member, Box):
            cons.append({"type": "ineq", "fun": lambda z, m=member: z - m.lower})
            cons.append({"type": "ineq", "fun": lambda z, m=member: m.upper - z})
        elif isinstance(member, Ball):
            cons.append({"type": "ineq",
                         "fun": lambda z, m=member:
                         m.radius ** 2 - np.sum((z - m.center) ** 2)})
        elif isinstance(member, Halfspaces):
            cons.append({"type": "ineq",
                         "fun": lambda z, m=member: m.offsets - m.normals @ z})
        elif isinstance(member, Intersection):
            for sub in member.members:
                add(sub)
        else:
            raise AssertionError(f"no oracle for {type(member)}")

    add(s)
    res = minimize(lambda z: np.sum((z - x) ** 2), x0=np.asarray(x, float),
                   constraints=cons, method="SLSQP",
                   options={"ftol": 1e-14, "maxiter": 500})
    # SLSQP sometimes reports "iteration limit" while the returned point is
    # already accurate, so the result is used as a bound rather than trusted
    # blindly: callers check feasibility plus one-sided optimality.
    return res.x


# ---------------------------------------------------------------------------
# membership


def test_contains_box_interior():
    assert Box([-1.0, -1.0], [1.0, 1.0]).contains([0.0, 0.0], tol=1e-9)


def test_contains_affine_exact_solution():
    assert AffineSet([[1.0, 1.0]], [2.0]).contains([1.0, 1.0])


def test_contains_ball_outside_by_a_milli():
    assert not Ball([0.0, 0.0], 1.0).contains([1.001, 0.0], tol=1e-9)


# ---------------------------------------------------------------------------
# projection examples


def test_project_box_clamps():
    np.testing.assert_allclose(
        Box([-1.0, -1.0], [1.0, 1.0]).project([2.0, 0.0]), [1.0, 0.0])


def test_project_affine_symmetry():
    np.testing.assert_allclose(
        AffineSet([[1.0, 1.0]], [0.0]).project([1.0, 1.0]), [0.0, 0.0],
        atol=1e-12)


def test_project_intersection_clipped_segment():
    # nearest point of {x1+x2=2} cap [0,0.5]x[0,5] to the origin; on the
    # segment x = (t, 2-t), t in [0, 0.5], t = 0.5 minimizes t^2 + (2-t)^2
    s = Intersection([AffineSet([[1.0, 1.0]], [2.0]),
                      Box([0.0, 0.0], [0.5, 5.0])])
    got = s.project([0.0, 0.0])
    ts = np.linspace(0.0, 0.5, 20001)
    dist2 = ts ** 2 + (2.0 - ts) ** 2
    t_star = ts[np.argmin(dist2)]
    np.testing.assert_allclose(got, [t_star, 2.0 - t_star], atol=1e-4)
    np.testing.assert_allclose(got, [0.5, 1.5], atol=1e-8)


def test_project_ball_radius_zero_is_singleton():
    s = Ball([0.3, -0.2], 0.0)
    np.testing.assert_allclose(s.project([5.0, 5.0]), [0.3, -0.2])


def test_affine_rejects_inconsistent_system():
    with pytest.raises(ContractError):
        AffineSet([[1.0, 0.0], [1.0, 0.0]], [0.0, 1.0])


def test_box_rejects_crossed_bounds():
    with pytest.raises(ContractError):
        Box([1.0], [0.0])


# ---------------------------------------------------------------------------
# support functions


def test_support_box_axis():
    assert Box([-1.0, -1.0], [1.0, 1.0]).support([1.0, 0.0]) == pytest.approx(1.0)


def test_support_ball_any_unit_direction():
    rng = np.random.default_rng(1)
    s = Ball([0.0, 0.0, 0.0], 0.7)
    for _ in range(10):
        d = rng.standard_normal(3)
        d /= np.linalg.norm(d)
        assert s.support(d) == pytest.approx(0.7, abs=1e-12)


def test_support_box_diagonal_vertex_oracle():
    s = Box([-1.0, -1.0], [1.0, 1.0])
    d = np.array([1.0, 1.0])
    corners = np.array([[sx, sy] for sx in (-1.0, 1.0) for sy in (-1.0, 1.0)])
    assert s.support(d) == pytest.approx(float(np.max(corners @ d)))
    assert s.support(d) == pytest.approx(2.0)


def test_support_halfspaces_lp_matches_box():
    box = Box([-1.0, -2.0], [3.0, 0.5])
    poly = Halfspaces([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
                      [3.0, 1.0, 0.5, 2.0])
    rng = np.random.default_rng(4)
    for _ in range(8):
        d = rng.standard_normal(2)
        assert poly.support(d) == pytest.approx(box.support(d), abs=1e-9)


def test_support_affine_unbounded_off_rowspace():
    s = AffineSet([[1.0, 1.0]], [2.0])
    assert s.support([1.0, -1.0]) == np.inf
    assert s.support([1.0, 1.0]) == pytest.approx(2.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 4), st.integers(0, 10 ** 6))
def test_support_is_sublinear(idx, seed):
    _, s = fixtures()[idx]
    rng = np.random.default_rng(seed)
    d1 = rng.standard_normal(2)
    d2 = rng.standard_normal(2)
    v1, v2, v12 = s.support(d1), s.support(d2), s.support(d1 + d2)
    if np.isinf(v1) or np.isinf(v2):
        return
    assert v12 <= v1 + v2 + 1e-9


# ---------------------------------------------------------------------------
# projection properties (idempotent, nonexpansive, feasible, KKT agreement)


@pytest.mark.parametrize("name,s", fixtures())
def test_projection_properties_bulk(name, s):
    rng = np.random.default_rng(hash(name) % 2 ** 32)
    pairs = 1000 if name in ("box", "ball", "affine") else 250
    for _ in range(pairs):
        x = 3.0 * rng.standard_normal(2)
        xp = 3.0 * rng.standard_normal(2)
        px, pxp = s.project(x), s.project(xp)
        assert np.linalg.norm(px - pxp) <= np.linalg.norm(x - xp) + 1e-9
        assert np.linalg.norm(s.project(px) - px) <= 1e-9
        assert s.contains(px, tol=1e-7)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_affine_projection_matches_kkt_closed_form(seed):
    rng = np.random.default_rng(seed)
    op = rng.standard_normal((2, 4))
    rhs = rng.standard_normal(2)
    s = AffineSet(op, rhs)
    x = 2.0 * rng.standard_normal(4)
    np.testing.assert_allclose(s.project(x), kkt_affine_project(op, rhs, x),
                               atol=1e-9)


@pytest.mark.parametrize("name,s", fixtures())
def test_projection_matches_slsqp_oracle(name, s):
    rng = np.random.default_rng(99)
    for _ in range(5):
        x = 2.5 * rng.standard_normal(2)
        p = s.project(x)
        q = slsqp_project(s, x)
        assert s.contains(p, tol=1e-7)
        # one-sided optimality: never beaten by the independent minimizer
        assert np.linalg.norm(p - x) <= np.linalg.norm(q - x) + 1e-6


def test_dykstra_finds_metric_projection_not_just_feasibility():
    # order the members so plain alternating projections would stop at a
    # feasible point; dykstra must still return the nearest one
    members = [AffineSet([[1.0, 1.0]], [2.0]), Box([0.0, 0.0], [0.5, 5.0])]
    x = np.array([0.0, 0.0])
    got = dykstra(members, x)
    np.testing.assert_allclose(got, [0.5, 1.5], atol=1e-8)
    got_rev = dykstra(members[::-1], x)
    np.testing.assert_allclose(got_rev, [0.5, 1.5], atol=1e-8)


# ---------------------------------------------------------------------------
# interiority


def test_interior_box_centered():
    ok, margin = interior_contains(Box([-1.0, -1.0], [1.0, 1.0]), [0.0, 0.0])
    assert ok
    assert margin == pytest.approx(1.0)


def test_interior_box_boundary_point():
    ok, margin = interior_contains(Box([0.0, 0.0], [1.0, 1.0]), [0.0, 0.0])
    assert not ok
    assert margin == pytest.approx(0.0, abs=1e-12)


def test_interior_segment_is_flat():
    # the segment {(t, 0)} has zero support thickness in direction (0, 1)
    seg = Box([-1.0, 0.0], [1.0, 0.0])
    ok, margin = interior_contains(seg, [0.0, 0.0])
    assert not ok
    assert margin == pytest.approx(0.0, abs=1e-12)


def test_direction_grid_requires_two_per_axis():
    with pytest.raises(ContractError):
        direction_grid(3, 5)
    grid = direction_grid(2, 9, seed=5)
    assert grid.shape == (9, 2)
    np.testing.assert_allclose(np.linalg.norm(grid, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(grid, direction_grid(2, 9, seed=5))


# ---------------------------------------------------------------------------
# truncation


def test_truncate_keeps_feasible_center():
    s = truncate(AffineSet([[1.0, 1.0]], [0.0]), [0.0, 0.0], 1.0)
    assert s.contains([0.0, 0.0])
    np.testing.assert_allclose(s.project([0.2, -0.2]), [0.2, -0.2], atol=1e-9)


def test_truncate_empty_intersection_raises_on_project():
    # distance from the origin to {x1+x2=2} is sqrt(2) > 1
    s = truncate(AffineSet([[1.0, 1.0]], [2.0]), [0.0, 0.0], 1.0)
    with pytest.raises(InfeasibilitySuspectedError):
        s.project([0.0, 0.0])


def test_truncate_radius_zero_feasible_center_is_singleton():
    s = truncate(AffineSet([[1.0, 1.0]], [0.0]), [0.5, -0.5], 0.0)
    np.testing.assert_allclose(s.project([3.0, 7.0]), [0.5, -0.5], atol=1e-10)


# ---------------------------------------------------------------------------
# halfspace details


def test_halfspaces_axis_aligned_matches_general_path():
    axis = Halfspaces([[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0]], [1.0, 1.0, 3.0])
    tilted = Halfspaces([[1.0, 1e-12], [-1.0, 0.0], [0.0, 2.0]],
                        [1.0, 1.0, 3.0])
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = 4.0 * rng.standard_normal(2)
        np.testing.assert_allclose(axis.project(x), tilted.project(x),
                                   atol=1e-7)


def test_halfspaces_rejects_zero_row():
    with pytest.raises(ContractError):
        Halfspaces([[0.0, 0.0]], [1.0])


def test_intersection_rejects_dimension_mismatch():
    with pytest.raises(ShapeError):
        Intersection([Box([0.0], [1.0]), Box([0.0, 0.0], [1.0, 1.0])])


def test_intersection_gap_is_worst_member_distance():
    s = Intersection([Box([0.0, 0.0], [1.0, 1.0]),
                      AffineSet([[1.0, 0.0]], [3.0])])
    assert s.gap([0.5, 0.5]) == pytest.approx(2.5)


# ---------------------------------------------------------------------------
# JSON encoding


@pytest.mark.parametrize("name,s", fixtures())
def test_json_round_trip(name, s):
    clone = set_from_json(s.to_json())
    rng = np.random.default_rng(8)
    for _ in range(10):
        x = 2.0 * rng.standard_normal(2)
        np.testing.assert_allclose(clone.project(x), s.project(x), atol=1e-9)


def test_set_from_json_rejects_unknown_type():
    with pytest.raises(ContractError):
        set_from_json({"type": "simplex"})
    with pytest.raises(ContractError):
        set_from_json({"lower": [0.0]})
    with pytest.raises(ContractError):
        set_from_json({"type": "box", "lower": [0.0]})
