"""Local linear oracle over a polytope, and the vertex decompositions it runs on.

A local linear oracle (LLO) answers queries ``(x, r, c)`` with a point ``p``
that is at least as good as every feasible point within Euclidean distance
``r`` of ``x`` for the linear objective ``c``, while itself staying within
``rho * r`` of ``x``. Each query spends exactly one call on the polytope's
linear-minimization oracle.

The general construction works on any polytope whose query point is kept as
an explicit convex combination of vertices: a mass budget
``min(sqrt(n) * psi / xi * r, 1)`` is stripped from the worst-scoring
vertices of the combination and handed to the vertex returned by the linear
oracle. On the probability simplex a direct fast path solves the
l1-restricted problem exactly with the better parameter ``rho = sqrt(n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polytopes import PolytopeSpec, Vertex

__all__ = [
    "PRUNE_EPS",
    "ConvexDecomposition",
    "LLOResult",
    "llo_query",
    "llo_query_simplex",
    "blend",
    "reduce_decomposition",
    "approx_reduction_budget",
    "GeneralLLO",
    "SimplexFastLLO",
    "default_llo",
    "default_redecompose_threshold",
]

# weights below this are numerical dust and get dropped (then renormalized)
PRUNE_EPS = 1e-12


class ConvexDecomposition:
    """A feasible point stored as a convex combination of polytope vertices.

    Duplicate vertex ids merge their weights, weights at or below
    :data:`PRUNE_EPS` are dropped, the rest are renormalized to sum to one,
    and the represented point is cached. Instances are value-like: operations
    never mutate them, they build new ones.
    """

    __slots__ = ("vertices", "weights", "point", "coords_matrix")

    def __init__(self, vertices: Sequence[Vertex], weights: Sequence[float]):
        if len(vertices) != len(weights):
            raise ValueError("vertices and weights must have equal length")
        if len(vertices) == 0:
            raise ValueError("a decomposition needs at least one vertex")
        merged: dict = {}
        for v, w in zip(vertices, weights):
            w = float(w)
            if w < -1e-12:
                raise ValueError(f"negative weight {w} for vertex {v.id}")
            if v.id in merged:
                merged[v.id] = (merged[v.id][0], merged[v.id][1] + w)
            else:
                merged[v.id] = (v, w)
        kept = [(v, w) for v, w in merged.values() if w > PRUNE_EPS]
        if not kept:
            # fully pruned: keep the heaviest term rather than return nothing
            v, w = max(merged.values(), key=lambda t: t[1])
            kept = [(v, 1.0)]
        total = sum(w for _, w in kept)
        if total <= 0:
            raise ValueError("total weight must be positive")
        self.vertices = tuple(v for v, _ in kept)
        self.weights = np.array([w / total for _, w in kept])
        self.weights.setflags(write=False)
        self.coords_matrix = np.array([v.coords for v in self.vertices])
        self.coords_matrix.setflags(write=False)
        pt = self.weights @ self.coords_matrix
        pt.setflags(write=False)
        self.point = pt

    @classmethod
    def from_vertex(cls, v: Vertex) -> "ConvexDecomposition":
        return cls([v], [1.0])

    @property
    def support_size(self) -> int:
        return len(self.vertices)

    def ids(self) -> set:
        return {v.id for v in self.vertices}

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"ConvexDecomposition(support={self.support_size}, point={np.array2string(self.point, precision=4)})"


@dataclass(frozen=True)
class LLOResult:
    """Answer of an LLO query: the new point with its decomposition, the single
    vertex obtained from the linear oracle, and how much weight moved onto it."""

    p: ConvexDecomposition
    new_vertex: Vertex
    mass_moved: float


def _validate_query(r: float, c, n: int) -> np.ndarray:
    if r <= 0:
        raise ValueError("radius r must be positive")
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if c.shape != (n,):
        raise ValueError(f"objective has shape {c.shape}, expected ({n},)")
    if not np.all(np.isfinite(c)):
        raise ValueError("objective vector must be finite")
    return c


def llo_query(x: ConvexDecomposition, r: float, c, polytope: PolytopeSpec) -> LLOResult:
    """General LLO query with parameter rho = sqrt(n) * mu.

    Scores every vertex of the decomposition by ``c . v``, strips weight in
    decreasing score order until the budget ``min(sqrt(n)*psi/xi*r, 1)`` is
    exhausted, and gives the stripped mass to the vertex the linear oracle
    returns for ``c``. Makes exactly one linear-oracle call.
    """
    c = _validate_query(r, c, polytope.n)
    if not polytope.contains(x.point, tol=1e-8):
        raise RuntimeError("query point is not (numerically) inside the polytope")
    budget = min(math.sqrt(polytope.n) * polytope.psi / polytope.xi * r, 1.0)
    scores = x.coords_matrix @ c
    # stable order: decreasing score, canonical id as the deterministic tie-break
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], x.vertices[i].id))
    new_weights = list(x.weights)
    remaining = budget
    for i in order:
        if remaining <= 0:
            break
        take = min(new_weights[i], remaining)
        new_weights[i] -= take
        remaining -= take
    v = polytope.minimize_linear(c)
    moved = min(max(1.0 - sum(new_weights), 0.0), 1.0)
    p = ConvexDecomposition(list(x.vertices) + [v], new_weights + [moved])
    return LLOResult(p=p, new_vertex=v, mass_moved=moved)


def llo_query_simplex(x, r: float, c) -> LLOResult:
    """Simplex fast path: exact optimum of ``min c.y`` over the l1 ball
    ``||x - y||_1 <= sqrt(n) r`` intersected with the simplex.

    Moves ``min(sqrt(n) r / 2, 1)`` of probability mass from the largest-c
    coordinates onto the argmin coordinate; an LLO with parameter sqrt(n).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = x.shape[0]
    c = _validate_query(r, c, n)
    if abs(x.sum() - 1.0) > 1e-9 or x.min() < -1e-9:
        raise RuntimeError("query point is not (numerically) inside the simplex")
    budget = min(math.sqrt(n) * r / 2.0, 1.0)
    i_star = int(np.argmin(c))
    p = np.maximum(x, 0.0)
    order = sorted(range(n), key=lambda i: (-c[i], i))
    remaining = budget
    for i in order:
        if remaining <= 0:
            break
        take = min(p[i], remaining)
        p[i] -= take
        remaining -= take
    moved = budget - max(remaining, 0.0)
    p[i_star] += moved
    e = np.zeros(n)
    e[i_star] = 1.0
    star = Vertex(e, i_star)
    idx = np.flatnonzero(p > PRUNE_EPS)
    verts = []
    for i in idx:
        ei = np.zeros(n)
        ei[i] = 1.0
        verts.append(Vertex(ei, int(i)))
    decomp = ConvexDecomposition(verts, [float(p[i]) for i in idx])
    return LLOResult(p=decomp, new_vertex=star, mass_moved=moved)


def blend(x: ConvexDecomposition, result: LLOResult, alpha: float) -> ConvexDecomposition:
    """Decomposition of ``(1 - alpha) x + alpha p`` for an LLO answer ``p``.

    The support grows by at most the single new vertex of the query; the
    cached point is recomputed from scratch so rounding never accumulates
    across iterations.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly inside (0, 1)")
    verts = list(x.vertices) + list(result.p.vertices)
    weights = [(1.0 - alpha) * w for w in x.weights] + [alpha * w for w in result.p.weights]
    return ConvexDecomposition(verts, weights)


def approx_reduction_budget(polytope: PolytopeSpec, r_floor: float) -> int:
    """Iteration (= support) budget of the approximate re-decomposition route.

    The route runs the linearly convergent solver on ``min ||x - y||^2`` down
    to accuracy ``r_floor**2``; the certified iteration count for that is
    ``ceil(4 rho^2 log(D^2 / r_floor^2))`` plus the starting vertex.
    """
    if r_floor >= polytope.D:
        return 1
    rho_sq = polytope.n * polytope.mu**2
    return int(math.ceil(4.0 * rho_sq * math.log(polytope.D**2 / r_floor**2))) + 1


def reduce_decomposition(
    x: ConvexDecomposition, polytope: PolytopeSpec, r_floor: float
) -> ConvexDecomposition:
    """Re-express ``x`` over few vertices, moving the point by at most ``r_floor``.

    Simplex-like families re-expand the coordinates exactly (the point does
    not move and no oracle call is spent). Other families run the
    linearly convergent conditional-gradient loop on ``min_y ||x - y||^2``
    until the value drops below ``r_floor**2``, which yields a decomposition
    of at most :func:`approx_reduction_budget` vertices.
    """
    if r_floor <= 0:
        raise ValueError("r_floor must be positive")
    exact = polytope.exact_decomposition(x.point)
    if exact is not None:
        return exact

    target = np.asarray(x.point, dtype=float)
    # warm start: the vertex with the largest overlap with the target
    y = ConvexDecomposition.from_vertex(polytope.minimize_linear(-target))

    def value(pt):
        d = pt - target
        return float(d @ d)

    if value(y.point) <= r_floor**2:
        return y

    rho_sq = polytope.n * polytope.mu**2
    alpha = 1.0 / (2.0 * rho_sq)  # sigma / (2 beta rho^2) with sigma = beta = 1
    rate = 1.0 / (4.0 * rho_sq)
    C = polytope.D**2  # valid initial-gap bound: both points are in the polytope
    max_iters = approx_reduction_budget(polytope, r_floor)
    for t in range(1, max_iters + 1):
        r_t = min(math.sqrt(C * math.exp(-rate * (t - 1))), polytope.D)
        grad = 2.0 * (y.point - target)
        res = llo_query(y, r_t, grad, polytope)
        y = blend(y, res, alpha)
        if value(y.point) <= r_floor**2:
            break
    return y


# ---------------------------------------------------------------------------
# Oracle objects handed to the solvers
# ---------------------------------------------------------------------------


class GeneralLLO:
    """Algorithmic LLO for an arbitrary polytope; parameter rho = sqrt(n) * mu."""

    def __init__(self, polytope: PolytopeSpec):
        self.polytope = polytope
        self.rho = math.sqrt(polytope.n) * polytope.mu

    def query(self, x: ConvexDecomposition, r: float, c) -> LLOResult:
        return llo_query(x, r, c, self.polytope)


class SimplexFastLLO:
    """Fast-path LLO for the probability simplex; rho = sqrt(n).

    The argmin coordinate is obtained through the polytope's linear oracle, so
    instrumented call counting sees exactly one call per query here too.
    """

    def __init__(self, polytope: PolytopeSpec):
        if polytope.family != "simplex":
            raise ValueError("SimplexFastLLO requires the probability simplex")
        self.polytope = polytope
        self.rho = math.sqrt(polytope.n)

    def query(self, x: ConvexDecomposition, r: float, c) -> LLOResult:
        c = _validate_query(r, c, self.polytope.n)
        if not self.polytope.contains(x.point, tol=1e-8):
            raise RuntimeError("query point is not (numerically) inside the polytope")
        star = self.polytope.minimize_linear(c)
        n = self.polytope.n
        p = np.maximum(np.asarray(x.point, dtype=float).copy(), 0.0)
        budget = min(math.sqrt(n) * r / 2.0, 1.0)
        order = sorted(range(n), key=lambda i: (-c[i], i))
        remaining = budget
        for i in order:
            if remaining <= 0:
                break
            take = min(p[i], remaining)
            p[i] -= take
            remaining -= take
        moved = budget - max(remaining, 0.0)
        p[star.id] += moved
        idx = np.flatnonzero(p > PRUNE_EPS)
        verts = []
        for i in idx:
            e = np.zeros(n)
            e[i] = 1.0
            verts.append(Vertex(e, int(i)))
        decomp = ConvexDecomposition(verts, [float(p[i]) for i in idx])
        return LLOResult(p=decomp, new_vertex=star, mass_moved=moved)


def default_llo(polytope: PolytopeSpec):
    """LLO constructor for a polytope: fast path on the probability simplex,
    the general decomposition oracle otherwise."""
    if polytope.family == "simplex":
        return SimplexFastLLO(polytope)
    return GeneralLLO(polytope)


def default_redecompose_threshold(n: int) -> int:
    """Support size above which solvers re-decompose the iterate."""
    return max(2 * (n + 1), 64)
