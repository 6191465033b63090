"""Local-linear-oracle behavior against brute-force grid minimization."""

import numpy as np
import pytest

from llocg import (
    ConvexDecomposition,
    GeneralLLO,
    LLOResult,
    OracleCounter,
    SimplexFastLLO,
    Vertex,
    approx_reduction_budget,
    blend,
    centered_simplex,
    hypercube,
    llo_query,
    llo_query_simplex,
    reduce_decomposition,
    simplex,
)


def coord_decomp(x):
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    idx = np.flatnonzero(x > 0)
    return ConvexDecomposition(
        [Vertex(np.eye(n)[i], int(i)) for i in idx], [float(x[i]) for i in idx]
    )


# --- brute-force grids (the independent route) ------------------------------


def simplex3_grid(step=0.01):
    """All points of the regular grid on the 3-simplex."""
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    pts = []
    for a in ticks:
        for b in ticks:
            c = 1.0 - a - b
            if c >= -1e-12:
                pts.append((a, b, max(c, 0.0)))
    return np.array(pts)


def square_grid(step=0.01):
    ticks = np.arange(0.0, 1.0 + step / 2, step)
    return np.array([(a, b) for a in ticks for b in ticks])


def grid_min_euclidean(grid, x, r, c):
    """min c.y over grid points inside the Euclidean ball B_r(x)."""
    mask = np.linalg.norm(grid - x, axis=1) <= r
    vals = grid[mask] @ c
    return float(vals.min())


def grid_min_l1(grid, x, budget, c):
    mask = np.abs(grid - x).sum(axis=1) <= budget
    vals = grid[mask] @ c
    return float(vals.min())


# --- the worked simplex example ---------------------------------------------


def test_llo_query_simplex_worked_example():
    """Budget sqrt(n) r / 2 = 1/3 from the barycenter: the l1-exact optimum is
    (2/3, 1/3, 0), matching the grid minimizer."""
    x = np.full(3, 1.0 / 3.0)
    c = np.array([1.0, 2.0, 3.0])
    r = 2.0 / (3.0 * np.sqrt(3.0))
    res = llo_query_simplex(x, r, c)
    np.testing.assert_allclose(res.p.point, [2 / 3, 1 / 3, 0], atol=1e-12)
    grid = simplex3_grid(0.005)
    gm = grid_min_l1(grid, x, np.sqrt(3) * r, c)
    assert float(c @ res.p.point) <= gm + 1e-6
    assert res.mass_moved == pytest.approx(1.0 / 3.0)
    assert res.new_vertex.id == 0


def test_llo_query_worked_example_bounds():
    """The general-budget query on the same instance: at least as good as every
    grid point of the l1 ball, and within sqrt(n) mu r of the query point."""
    s = simplex(3)
    x = coord_decomp(np.full(3, 1.0 / 3.0))
    c = np.array([1.0, 2.0, 3.0])
    r = 2.0 / (3.0 * np.sqrt(3.0))
    res = llo_query(x, r, c, s)
    grid = simplex3_grid(0.005)
    gm = grid_min_l1(grid, x.point, np.sqrt(3) * r, c)
    assert float(c @ res.p.point) <= gm + 1e-6
    assert np.linalg.norm(x.point - res.p.point) <= np.sqrt(3) * s.mu * r + 1e-9


def test_llo_query_full_mass_degenerates_to_plain_oracle():
    s = simplex(4)
    x = coord_decomp(np.full(4, 0.25))
    c = np.array([0.3, -1.0, 0.5, 0.0])
    r = s.xi / (np.sqrt(4) * s.psi)  # budget exactly 1
    res = llo_query(x, r, c, s)
    v = s.minimize_linear(c)
    assert res.p.support_size == 1
    np.testing.assert_allclose(res.p.point, v.coords, atol=1e-12)
    assert res.mass_moved == pytest.approx(1.0)


def test_llo_query_zero_objective():
    s = simplex(3)
    x = coord_decomp([0.2, 0.5, 0.3])
    res = llo_query(x, 0.1, np.zeros(3), s)
    assert float(np.zeros(3) @ res.p.point) == 0.0
    assert res.new_vertex.id == 0  # tie-break vertex
    assert res.mass_moved > 0


def test_llo_query_errors():
    s = simplex(3)
    x = coord_decomp([0.2, 0.5, 0.3])
    with pytest.raises(ValueError):
        llo_query(x, 0.0, np.ones(3), s)
    with pytest.raises(ValueError):
        llo_query(x, -1.0, np.ones(3), s)
    with pytest.raises(ValueError):
        llo_query(x, 0.5, np.ones(4), s)
    bad = ConvexDecomposition([Vertex(np.array([2.0, 0, 0]), "out")], [1.0])
    with pytest.raises(RuntimeError):
        llo_query(bad, 0.5, np.ones(3), s)


def test_llo_query_simplex_trivial_cases():
    # budget covers all mass: lands on the argmin vertex regardless of x
    res = llo_query_simplex([0.2, 0.5, 0.3], 2.0 / np.sqrt(3), [0.5, -1.0, 2.0])
    np.testing.assert_allclose(res.p.point, [0, 1, 0], atol=1e-12)
    # already optimal: no improving direction, point unchanged
    res = llo_query_simplex([1.0, 0.0, 0.0], 0.3, [0.0, 1.0, 1.0])
    np.testing.assert_allclose(res.p.point, [1, 0, 0], atol=1e-12)


def test_llo_single_oracle_call_per_query():
    rng = np.random.default_rng(2)
    for make, make_llo in ((simplex, SimplexFastLLO), (simplex, GeneralLLO),
                           (hypercube, GeneralLLO)):
        poly = make(4)
        counted = OracleCounter(poly)
        oracle = make_llo(counted)
        x = ConvexDecomposition.from_vertex(poly.minimize_linear(np.zeros(4)))
        for k in range(1, 31):
            c = rng.standard_normal(4)
            res = oracle.query(x, 0.2, c)
            assert counted.calls == k
            x = blend(x, res, 0.25)


# --- LLO conditions on random instances --------------------------------------


def random_simplex_decomposition(rng, n):
    k = int(rng.integers(1, n + 1))
    idx = rng.choice(n, size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    return ConvexDecomposition([Vertex(np.eye(n)[i], int(i)) for i in idx], list(w))


def random_square_decomposition(rng):
    corners = [(0, 0), (0, 1), (1, 0), (1, 1)]
    k = int(rng.integers(1, 5))
    pick = rng.choice(4, size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    verts = [Vertex(np.array(corners[i], dtype=float), tuple(corners[i])) for i in pick]
    return ConvexDecomposition(verts, list(w))


def test_llo_conditions_simplex_random():
    s = simplex(3)
    grid = simplex3_grid(0.01)
    rng = np.random.default_rng(7)
    for _ in range(40):
        x = random_simplex_decomposition(rng, 3)
        r = float(rng.uniform(0.05, 1.2))
        c = rng.standard_normal(3)
        res = llo_query(x, r, c, s)
        gm = grid_min_euclidean(grid, x.point, r, c)
        assert float(c @ res.p.point) <= gm + 1e-6
        assert np.linalg.norm(x.point - res.p.point) <= np.sqrt(3) * s.mu * r + 1e-9
        assert s.contains(res.p.point, tol=1e-8)


def test_llo_conditions_square_random():
    h = hypercube(2)
    grid = square_grid(0.01)
    rng = np.random.default_rng(17)
    for _ in range(40):
        x = random_square_decomposition(rng)
        r = float(rng.uniform(0.05, 1.5))
        c = rng.standard_normal(2)
        res = llo_query(x, r, c, h)
        gm = grid_min_euclidean(grid, x.point, r, c)
        assert float(c @ res.p.point) <= gm + 1e-6
        assert np.linalg.norm(x.point - res.p.point) <= np.sqrt(2) * h.mu * r + 1e-9
        assert h.contains(res.p.point, tol=1e-8)


def test_fast_path_and_general_agree_in_full_budget_regime():
    """Once both budgets clamp at one (r >= 2/sqrt(n)) the two oracles return
    the same objective value; below that the general route moves twice the
    mass and can only be better."""
    s = simplex(4)
    rng = np.random.default_rng(23)
    for _ in range(50):
        x = coord_decomp(rng.dirichlet(np.ones(4)))
        c = rng.standard_normal(4)
        r_full = 2.0 / np.sqrt(4) + 0.05
        a = llo_query(x, r_full, c, s)
        b = llo_query_simplex(x.point, r_full, c)
        assert float(c @ a.p.point) == pytest.approx(float(c @ b.p.point), abs=1e-9)
        r_small = float(rng.uniform(0.01, 0.4))
        a = llo_query(x, r_small, c, s)
        b = llo_query_simplex(x.point, r_small, c)
        assert float(c @ a.p.point) <= float(c @ b.p.point) + 1e-9


def test_general_llo_on_centered_simplex():
    cs = centered_simplex(3, scale=2.0)
    oracle = GeneralLLO(cs)
    x = ConvexDecomposition.from_vertex(cs.minimize_linear(np.zeros(3)))
    rng = np.random.default_rng(4)
    for _ in range(30):
        c = rng.standard_normal(3)
        r = float(rng.uniform(0.05, 0.5))
        res = oracle.query(x, r, c)
        assert cs.contains(res.p.point, tol=1e-8)
        assert np.linalg.norm(x.point - res.p.point) <= oracle.rho * r + 1e-9
        x = blend(x, res, 0.3)
    with pytest.raises(ValueError):
        SimplexFastLLO(cs)  # fast path is simplex-only


# --- blend -------------------------------------------------------------------


def test_blend_continuity_at_zero():
    s = simplex(3)
    x = coord_decomp([0.5, 0.25, 0.25])
    res = llo_query(x, 0.2, np.array([1.0, 0.5, 2.0]), s)
    out = blend(x, res, 1e-12)
    assert np.max(np.abs(out.point - x.point)) <= 1e-10


def test_blend_two_vertex_average():
    e1 = Vertex(np.eye(2)[0], 0)
    e2 = Vertex(np.eye(2)[1], 1)
    x = ConvexDecomposition([e1], [1.0])
    res = LLOResult(p=ConvexDecomposition([e2], [1.0]), new_vertex=e2, mass_moved=1.0)
    out = blend(x, res, 0.5)
    np.testing.assert_allclose(out.point, [0.5, 0.5])
    assert sorted(out.ids()) == [0, 1]


def test_blend_alpha_validation():
    x = coord_decomp([1.0, 0.0])
    res = LLOResult(p=x, new_vertex=x.vertices[0], mass_moved=0.0)
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValueError):
            blend(x, res, bad)


def test_blend_support_bookkeeping_random_steps():
    s = simplex(6)
    rng = np.random.default_rng(99)
    x = ConvexDecomposition.from_vertex(s.minimize_linear(np.zeros(6)))
    for _ in range(1000):
        c = rng.standard_normal(6)
        r = float(rng.uniform(0.01, 0.8))
        res = llo_query(x, r, c, s)
        out = blend(x, res, float(rng.uniform(0.05, 0.95)))
        assert out.support_size <= x.support_size + 1
        assert out.ids() <= (x.ids() | {res.new_vertex.id})
        assert abs(float(np.sum(out.weights)) - 1.0) <= 1e-9
        np.testing.assert_allclose(
            out.point, sum(w * v.coords for v, w in zip(out.vertices, out.weights)),
            atol=1e-9)
        x = out


# --- decomposition invariants -------------------------------------------------


def test_decomposition_merges_duplicates_and_prunes():
    e0 = Vertex(np.eye(2)[0], 0)
    e1 = Vertex(np.eye(2)[1], 1)
    d = ConvexDecomposition([e0, e1, e0], [0.25, 0.5, 0.25])
    assert d.support_size == 2
    np.testing.assert_allclose(sorted(d.weights), [0.5, 0.5])
    d2 = ConvexDecomposition([e0, e1], [1.0, 1e-15])
    assert d2.support_size == 1
    np.testing.assert_allclose(d2.point, [1.0, 0.0])
    with pytest.raises(ValueError):
        ConvexDecomposition([], [])
    with pytest.raises(ValueError):
        ConvexDecomposition([e0], [-0.5])


# --- reduce_decomposition ------------------------------------------------------


def test_reduce_simplex_exact():
    s = simplex(5)
    rng = np.random.default_rng(31)
    # build a bloated decomposition by random blending
    x = ConvexDecomposition.from_vertex(s.minimize_linear(np.zeros(5)))
    for _ in range(40):
        res = llo_query(x, float(rng.uniform(0.05, 0.5)), rng.standard_normal(5), s)
        x = blend(x, res, 0.3)
    red = reduce_decomposition(x, s, r_floor=1e-6)
    np.testing.assert_allclose(red.point, x.point, atol=1e-12)
    assert red.support_size <= 5
    assert red.ids() <= set(range(5))


def test_reduce_general_r_floor_diameter():
    h = hypercube(3)
    x = ConvexDecomposition(
        [Vertex(np.array(b, dtype=float), tuple(b)) for b in
         [(0, 0, 0), (1, 1, 1), (1, 0, 0)]],
        [0.3, 0.4, 0.3],
    )
    red = reduce_decomposition(x, h, r_floor=h.D)
    assert red.support_size == 1  # any single vertex is admissible at this floor


def test_reduce_hypercube_random_decomposition():
    h = hypercube(3)
    rng = np.random.default_rng(77)
    corners = [Vertex(np.array(b, dtype=float), tuple(b))
               for b in np.ndindex(2, 2, 2)]
    pick = rng.choice(8, size=8, replace=False)
    verts, weights = [], []
    for _ in range(20):
        i = int(rng.integers(8))
        verts.append(corners[i])
        weights.append(float(rng.uniform(0.1, 1.0)))
    x = ConvexDecomposition(verts, weights)
    counted = OracleCounter(h)
    red = reduce_decomposition(x, counted, r_floor=1e-3)
    assert np.linalg.norm(red.point - x.point) <= 1e-3
    assert red.support_size <= approx_reduction_budget(h, 1e-3)
    assert counted.calls <= approx_reduction_budget(h, 1e-3) + 1
    assert h.contains(red.point, tol=1e-8)


def test_reduce_validation():
    s = simplex(3)
    x = coord_decomp([0.5, 0.5, 0.0])
    with pytest.raises(ValueError):
        reduce_decomposition(x, s, r_floor=0.0)


# --- feasibility closure --------------------------------------------------------


def test_all_outputs_pass_membership():
    rng = np.random.default_rng(55)
    s = simplex(4)
    h = hypercube(3)
    for poly, sampler in ((s, lambda: random_simplex_decomposition(rng, 4)),
                          (h, None)):
        for _ in range(50):
            if sampler:
                x = sampler()
            else:
                verts = [Vertex(np.array(b, dtype=float), tuple(b))
                         for b in np.ndindex(2, 2, 2)]
                w = rng.dirichlet(np.ones(8))
                x = ConvexDecomposition(verts, list(w))
            res = llo_query(x, float(rng.uniform(0.05, 1.0)), rng.standard_normal(poly.n), poly)
            assert poly.contains(res.p.point, tol=1e-8)
            assert 0.0 <= res.mass_moved <= 1.0
            out = blend(x, res, 0.5)
            assert poly.contains(out.point, tol=1e-8)
