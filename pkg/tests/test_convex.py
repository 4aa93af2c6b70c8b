import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog as scipy_linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from scenespec import convex
from scenespec.convex import HSI, LPStatus, linprog
from scenespec.errors import (
    DimensionMismatch,
    EmptyRegion,
    UnboundedDirection,
    UnboundedObject,
)
from scenespec.geom import AABB

CUBE = HSI.box([-0.5] * 3, [0.5] * 3)
WS5 = AABB.cube(5.0)


def random_polygon(rng, n_pts=8, scale=1.0) -> HSI:
    pts = rng.normal(size=(n_pts, 2)) * scale
    eq = ConvexHull(pts).equations
    return HSI(eq[:, :2], -eq[:, 2])


def random_polytope(rng, d=3) -> HSI:
    pts = rng.normal(size=(12, d))
    eq = ConvexHull(pts).equations
    return HSI(eq[:, :d], -eq[:, d])


def vertices(h: HSI) -> np.ndarray:
    c, _ = convex.chebyshev_center(h)
    return HalfspaceIntersection(np.hstack([h.A, -h.b[:, None]]), c).intersections


# -- HSI basics -----------------------------------------------------------------

def test_rows_normalized():
    h = HSI([[3.0, 4.0], [0, -2]], [10.0, 4.0])
    np.testing.assert_allclose(np.linalg.norm(h.A, axis=1), 1)
    np.testing.assert_allclose(h.b, [2.0, 2.0])


def test_zero_row_rejected():
    with pytest.raises(ValueError):
        HSI([[0.0, 0.0]], [1.0])


def test_arrays_read_only():
    with pytest.raises(ValueError):
        CUBE.A[0, 0] = 2


def test_contains_boundary_tolerance():
    assert convex.contains(CUBE, [0, 0, 0])
    assert convex.contains(CUBE, [0.5, 0.5, 0.5])
    assert not convex.contains(CUBE, [0.5 + 1e-6, 0, 0])
    assert convex.contains(CUBE, [0.5 + 1e-10, 0, 0])


def test_region_to_hsi_cuboid():
    cub = convex.Cuboid([0.5, 0.5, 0.5], np.eye(3), [3, 2, 1])
    h = convex.region_to_hsi(cub, WS5)
    assert h.rows == 6
    rng = np.random.default_rng(0)
    lo, hi = np.array([-1, -0.5, 0]), np.array([2, 1.5, 1])
    for p in rng.uniform(-3, 3, size=(20, 3)):
        assert h.contains(p) == bool(np.all((p >= lo) & (p <= hi)))


def test_region_to_hsi_all_and_halfspace():
    h = convex.region_to_hsi(convex.All(), WS5)
    assert h.rows == 6
    hs = convex.region_to_hsi(convex.Halfspace([0, 0, 0], [0, 0, 1]), WS5)
    assert hs.rows == 7
    assert hs.contains([0, 0, 1]) and not hs.contains([0, 0, -1])


def test_region_to_hsi_empty():
    with pytest.raises(EmptyRegion):
        convex.region_to_hsi(convex.Empty(), WS5)


def test_rect3d_embeds_in_its_plane():
    emb = convex.region_to_hsi(convex.Rect3D([1, 2, 3], np.eye(3), [2, 1]), WS5)
    assert isinstance(emb, convex.EmbeddedHSI)
    assert emb.contains([1.9, 2.4, 3])
    assert not emb.contains([1.9, 2.4, 3.01])
    assert not emb.contains([2.1, 2.0, 3])


def test_plane_frame_validation():
    with pytest.raises(ValueError):
        convex.PlaneFrame(np.zeros(3), np.array([0, 0, 1.0]), np.array([0, 1.0, 0]), np.array([1.0, 0, 0]))
    f = convex.PlaneFrame.from_normal([0, 0, 1], [1, 1, 1])
    np.testing.assert_allclose(np.cross(f.tangent_u, f.tangent_v), f.normal, atol=1e-12)


# -- intersection ---------------------------------------------------------------

def test_intersect_shifted_cubes():
    shifted = HSI.box([0, -0.5, -0.5], [1, 0.5, 0.5])
    h = convex.intersect(CUBE, shifted)
    assert h.rows == 12
    assert h.contains([0.4, 0, 0]) and not h.contains([-0.4, 0, 0])


def test_intersect_with_workspace_is_redundant():
    h = convex.intersect(CUBE, convex.workspace_hsi(WS5))
    rng = np.random.default_rng(1)
    for p in rng.uniform(-1, 1, size=(500, 3)):
        assert h.contains(p) == CUBE.contains(p)


def test_intersect_disjoint_is_empty():
    far = HSI.box([2, 2, 2], [3, 3, 3])
    assert convex.intersect(CUBE, far).is_empty()
    assert not CUBE.is_empty()


def test_intersect_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        convex.intersect(CUBE, HSI.box([0, 0], [1, 1]))


def test_intersect_membership_is_conjunction():
    rng = np.random.default_rng(2)
    for _ in range(20):
        p, q = random_polytope(rng), random_polytope(rng)
        h = convex.intersect(p, q)
        for x in rng.uniform(-2, 2, size=(1000, 3)):
            assert h.contains(x) == (p.contains(x) and q.contains(x))


# -- LP -------------------------------------------------------------------------

def test_lp_examples():
    r = convex.lp_solve([1, 0, 0], CUBE, maximize=True)
    assert r.status is LPStatus.OPTIMAL and r.value == pytest.approx(0.5, abs=1e-12)
    bad = HSI([[1.0], [-1.0]], [0.0, -1.0])
    assert convex.lp_solve([1.0], bad, maximize=True).status is LPStatus.INFEASIBLE
    box = HSI.box([0, 0, 0], [1, 1, 1])
    r = convex.lp_solve([1, 1, 0], box, maximize=True)
    corners = np.array(list(itertools.product([0, 1], repeat=3)), float)
    assert r.value == pytest.approx((corners @ [1, 1, 0]).max(), abs=1e-12)
    assert r.x[0] == pytest.approx(1) and r.x[1] == pytest.approx(1)


def test_lp_unbounded():
    h = HSI([[-1.0, 0.0], [0.0, -1.0]], [0.0, 0.0])
    assert convex.lp_solve([1, 1], h, maximize=True).status is LPStatus.UNBOUNDED
    assert convex.lp_solve([1, 1], h, maximize=False).value == pytest.approx(0)


def test_lp_matches_vertex_enumeration():
    rng = np.random.default_rng(4)
    for _ in range(100):
        lo = rng.uniform(-2, 0, 3)
        box = HSI.box(lo, lo + rng.uniform(0.1, 2, 3))
        c = rng.normal(size=3)
        verts = np.array(list(itertools.product(*zip(lo, box.b[:3]))))
        r = convex.lp_solve(c, box, maximize=True)
        assert r.value == pytest.approx((vertices(box) @ c).max(), abs=1e-7)
        assert r.value == pytest.approx((verts @ c).max(), abs=1e-7)
        poly = random_polygon(rng, n_pts=rng.integers(3, 9))
        c2 = rng.normal(size=2)
        r2 = convex.lp_solve(c2, poly, maximize=False)
        assert r2.value == pytest.approx((vertices(poly) @ c2).min(), abs=1e-7)


def test_lp_matches_scipy_on_random_problems():
    rng = np.random.default_rng(8)
    for _ in range(200):
        m, n = rng.integers(2, 12), rng.integers(1, 5)
        A = rng.normal(size=(m, n))
        b = rng.normal(size=m)
        c = rng.normal(size=n)
        ours = linprog(c, A, b)
        ref = scipy_linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
        if ours.status is LPStatus.OPTIMAL:
            assert np.all(A @ ours.x <= b + 1e-8)
            assert ref.status == 0
            assert ours.value == pytest.approx(ref.fun, abs=1e-7)
        elif ours.status is LPStatus.INFEASIBLE:
            feas = scipy_linprog(np.zeros(n), A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
            assert feas.status == 2
        else:
            # HiGHS can label an unbounded problem infeasible after presolve,
            # so confirm feasibility independently
            feas = scipy_linprog(np.zeros(n), A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
            assert feas.status == 0
            assert ref.status in (2, 3)


def test_lp_degenerate_vertex():
    # many constraints through the same vertex; Bland's rule must not cycle
    angles = np.linspace(0, np.pi / 2, 30)
    A = np.column_stack([np.cos(angles), np.sin(angles)])
    r = linprog([1, 1], A, np.zeros(30), maximize=True)
    assert r.status is LPStatus.OPTIMAL and r.value == pytest.approx(0, abs=1e-9)


# -- Chebyshev centre -----------------------------------------------------------

def test_chebyshev_examples():
    c, r = convex.chebyshev_center(CUBE)
    np.testing.assert_allclose(c, 0, atol=1e-12)
    assert r == pytest.approx(0.5)
    c, r = convex.chebyshev_center(HSI.box([0, 0, 0], [2, 1, 1]))
    assert r == pytest.approx(0.5, abs=1e-12)
    assert 0.5 - 1e-9 <= c[0] <= 1.5 + 1e-9
    assert c[1] == pytest.approx(0.5, abs=1e-12) and c[2] == pytest.approx(0.5, abs=1e-12)


def test_chebyshev_empty_and_flat():
    with pytest.raises(EmptyRegion):
        convex.chebyshev_center(convex.intersect(CUBE, HSI.box([2, 2, 2], [3, 3, 3])))
    with pytest.raises(EmptyRegion):
        convex.chebyshev_center(HSI.box([0, 0], [1, 0]))


def test_chebyshev_radius_is_min_slack():
    rng = np.random.default_rng(12)
    for _ in range(50):
        h = random_polytope(rng)
        x, r = convex.chebyshev_center(h)
        assert r == pytest.approx(float(np.min(h.b - h.A @ x)), abs=1e-8)
        ref = scipy_linprog(
            np.r_[np.zeros(3), -1.0], A_ub=np.hstack([h.A, np.ones((h.rows, 1))]), b_ub=h.b,
            bounds=[(None, None)] * 4, method="highs",
        )
        assert r == pytest.approx(-ref.fun, abs=1e-8)


# -- erosion --------------------------------------------------------------------

def test_erode_square_by_square():
    e = convex.erode(HSI.box([-0.5, -0.5], [0.5, 0.5]), HSI.box([-0.2, -0.2], [0.2, 0.2]))
    np.testing.assert_allclose(vertices(e).min(axis=0), [-0.3, -0.3], atol=1e-12)
    np.testing.assert_allclose(vertices(e).max(axis=0), [0.3, 0.3], atol=1e-12)


def test_erode_by_point_is_identity():
    rng = np.random.default_rng(13)
    poly = random_polygon(rng)
    e = convex.erode(poly, HSI.box([0, 0], [0, 0]))
    np.testing.assert_allclose(e.A, poly.A)
    np.testing.assert_allclose(e.b, poly.b, atol=1e-12)


def test_erode_unbounded_object():
    with pytest.raises(UnboundedObject):
        convex.erode(CUBE, HSI([[1.0, 0, 0]], [1.0]))


def _rect_corners(hx, hy, theta):
    c, s = np.cos(theta), np.sin(theta)
    rot = np.array([[c, -s], [s, c]])
    return np.array([[sx * hx, sy * hy] for sx in (-1, 1) for sy in (-1, 1)]) @ rot.T


def test_erosion_vertex_oracle_and_monotonicity():
    rng = np.random.default_rng(14)
    for _ in range(30):
        region = random_polygon(rng, scale=1.5)
        corners = _rect_corners(*rng.uniform(0.05, 0.4, 2), rng.uniform(0, np.pi))
        obj = HSI(ConvexHull(corners).equations[:, :2], -ConvexHull(corners).equations[:, 2])
        e = convex.erode(region, obj)
        if e.is_empty():
            continue
        pts = convex.sample_uniform(e, 200, rng, iterations=20)
        for z in pts:
            assert region.contains(z)
            for y in corners:
                assert region.contains(z + y, tol=1e-8)


# -- clip_line ------------------------------------------------------------------

def test_clip_line_examples():
    assert convex.clip_line(CUBE, [0, 0, 0], [1, 0, 0]) == pytest.approx((0.5, 0.5))
    assert convex.clip_line(CUBE, [0.25, 0, 0], [1, 0, 0]) == pytest.approx((0.75, 0.25))


def test_clip_line_unbounded():
    with pytest.raises(UnboundedDirection):
        convex.clip_line(HSI([[1.0, 0.0]], [1.0]), [0, 0], [0, 1])


def test_clip_line_brackets_boundary():
    rng = np.random.default_rng(15)
    for _ in range(200):
        h = random_polytope(rng)
        c, _ = convex.chebyshev_center(h)
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        ma, mb = convex.clip_line(h, c, d)
        assert ma >= 0 and mb >= 0
        lo, hi = c - ma * d, c + mb * d
        assert h.contains(lo) and h.contains(hi)
        assert np.min(h.b - h.A @ lo) == pytest.approx(0, abs=1e-8)
        assert np.min(h.b - h.A @ hi) == pytest.approx(0, abs=1e-8)
        assert not h.contains(lo - 1e-6 * d) and not h.contains(hi + 1e-6 * d)
        assert h.contains(lo + 1e-6 * d) and h.contains(hi - 1e-6 * d)


# -- hit-and-run ----------------------------------------------------------------

def test_default_mixing():
    assert convex.default_mix_iterations(2) == 80
    assert convex.default_mix_iterations(3) == 270


def test_hit_and_run_requires_positive_iterations():
    with pytest.raises(ValueError):
        convex.hit_and_run(CUBE, np.zeros(3), 0, np.random.default_rng(0))


def test_hit_and_run_requires_feasible_start():
    with pytest.raises(ValueError):
        convex.hit_and_run(CUBE, np.ones(3), 5, np.random.default_rng(0))


def test_single_step_stays_feasible():
    rng = np.random.default_rng(16)
    for _ in range(200):
        assert CUBE.contains(convex.hit_and_run(CUBE, np.zeros(3), 1, rng))


def test_slab_mean():
    # the [0,1] interval, embedded as a unit square so the chain is 2-D
    sq = HSI.box([0, 0], [1, 1])
    pts = convex.sample_uniform(sq, 10_000, np.random.default_rng(17))
    assert abs(pts[:, 0].mean() - 0.5) <= 0.015


def test_closure_on_random_polytopes():
    rng = np.random.default_rng(18)
    for _ in range(20):
        h = random_polytope(rng)
        pts = convex.sample_uniform(h, 500, rng, iterations=30)
        assert convex.contains_many(h, pts).all()


def test_hit_and_run_deterministic_for_seed():
    a = convex.sample_uniform(CUBE, 50, np.random.default_rng(99))
    b = convex.sample_uniform(CUBE, 50, np.random.default_rng(99))
    np.testing.assert_array_equal(a, b)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, 3), st.floats(0.05, 3))
def test_closure_on_boxes(seed, w, h):
    box = HSI.box([0, 0], [w, h])
    pts = convex.sample_uniform(box, 100, np.random.default_rng(seed), iterations=10)
    assert convex.contains_many(box, pts).all()
