"""Polytopes in H-representation with geometric constants and linear-minimization oracles.

A polytope is described by equalities ``A1 x = b1`` and inequalities
``A2 x <= b2`` together with four geometric quantities used by the local
linear oracle and the solvers:

* ``D``   -- Euclidean diameter,
* ``xi``  -- minimal positive slack of an inequality over the vertex set,
* ``psi`` -- maximal spectral norm over row-submatrices of ``A2`` made of
  ``rank(A2)`` linearly independent rows,
* ``mu``  -- the ratio ``psi * D / xi`` (and ``rho = sqrt(n) * mu``).

Three combinatorial families ship with exact oracles: the probability
simplex, the unit hypercube and the s-t path (flow) polytope of a DAG.
A fourth, the origin-centered scaled simplex, exists for algorithms that
need a ball around the origin inside the feasible set. Custom polytopes
plug in their own oracle callback and constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Optional, Sequence

import numpy as np

__all__ = [
    "Vertex",
    "PolytopeSpec",
    "DagGraph",
    "OracleCounter",
    "simplex",
    "hypercube",
    "flow_polytope",
    "centered_simplex",
    "custom_polytope",
    "membership_check",
]


@dataclass(frozen=True)
class Vertex:
    """A polytope vertex: coordinates plus a canonical, family-specific id.

    Ids are the tie-break and bookkeeping currency: the simplex uses the
    coordinate index, the hypercube a 0/1 tuple, the flow polytope the
    tuple of edge indices along the path. Two vertices with equal id have
    identical coordinates.
    """

    coords: np.ndarray
    id: Hashable

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)


def _as_matrix(a, n: int, name: str) -> np.ndarray:
    if a is None:
        return np.zeros((0, n))
    m = np.atleast_2d(np.asarray(a, dtype=float))
    if m.size == 0:
        return np.zeros((0, n))
    if m.shape[1] != n:
        raise ValueError(f"{name} has {m.shape[1]} columns, expected {n}")
    return m


def _as_vector(b, rows: int, name: str) -> np.ndarray:
    if b is None:
        return np.zeros(0)
    v = np.atleast_1d(np.asarray(b, dtype=float))
    if v.shape[0] != rows:
        raise ValueError(f"{name} has length {v.shape[0]}, expected {rows}")
    return v


class PolytopeSpec:
    """Immutable bundle of an H-representation, geometric constants and an oracle.

    The oracle is a pure function of the (immutable) data, so a spec can be
    shared freely between threads.
    """

    def __init__(
        self,
        n: int,
        A1,
        b1,
        A2,
        b2,
        D: float,
        xi: float,
        psi: float,
        oracle: Callable[[np.ndarray], Vertex],
        family: str = "custom",
        exact_decomposition: Optional[Callable[[np.ndarray], "object"]] = None,
        inner_radius: Optional[float] = None,
        outer_radius: Optional[float] = None,
    ):
        if n <= 0:
            raise ValueError("dimension must be a positive integer")
        self.n = int(n)
        self.A1 = _as_matrix(A1, n, "A1")
        self.b1 = _as_vector(b1, self.A1.shape[0], "b1")
        self.A2 = _as_matrix(A2, n, "A2")
        self.b2 = _as_vector(b2, self.A2.shape[0], "b2")
        if D < 0:
            raise ValueError("diameter D must be nonnegative")
        if xi <= 0:
            raise ValueError("vertex slack xi must be positive")
        if psi <= 0:
            raise ValueError("constraint norm psi must be positive")
        self.D = float(D)
        self.xi = float(xi)
        self.psi = float(psi)
        self.mu = self.psi * self.D / self.xi
        self.rho = np.sqrt(self.n) * self.mu
        self.family = family
        self._oracle = oracle
        self._exact_decomposition = exact_decomposition
        self.inner_radius = inner_radius
        self.outer_radius = outer_radius
        self.A1.setflags(write=False)
        self.b1.setflags(write=False)
        self.A2.setflags(write=False)
        self.b2.setflags(write=False)

    def minimize_linear(self, c) -> Vertex:
        """Return a vertex minimizing ``c . v`` over the polytope.

        Exact for the built-in combinatorial families; ties are broken
        toward the lowest canonical id so repeated calls are reproducible.
        """
        c = np.atleast_1d(np.asarray(c, dtype=float))
        if c.shape != (self.n,):
            raise ValueError(f"objective has shape {c.shape}, expected ({self.n},)")
        if not np.all(np.isfinite(c)):
            raise ValueError("objective vector must be finite")
        return self._oracle(c)

    def contains(self, x, tol: float = 1e-9) -> bool:
        """Membership test: A1 x = b1 and A2 x <= b2, both within ``tol``."""
        if tol < 0:
            raise ValueError("tolerance must be nonnegative")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.n,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.n},)")
        if self.A1.shape[0] and np.max(np.abs(self.A1 @ x - self.b1)) > tol:
            return False
        if self.A2.shape[0] and np.max(self.A2 @ x - self.b2) > tol:
            return False
        return True

    @property
    def has_exact_decomposition(self) -> bool:
        return self._exact_decomposition is not None

    def exact_decomposition(self, x):
        """Family-exact vertex decomposition of ``x``, or None if the family
        has no closed-form re-expression (then callers fall back to the
        approximate route)."""
        if self._exact_decomposition is None:
            return None
        return self._exact_decomposition(x)

    def __repr__(self):
        return (
            f"PolytopeSpec(family={self.family!r}, n={self.n}, D={self.D:.6g}, "
            f"xi={self.xi:.6g}, psi={self.psi:.6g}, mu={self.mu:.6g})"
        )


def membership_check(polytope: PolytopeSpec, x, tol: float) -> bool:
    """Functional alias for :meth:`PolytopeSpec.contains`."""
    return polytope.contains(x, tol)


class OracleCounter:
    """Transparent wrapper counting ``minimize_linear`` calls.

    Everything else is delegated to the wrapped spec, so a counter can be
    handed to any code expecting a :class:`PolytopeSpec`.
    """

    def __init__(self, polytope: PolytopeSpec):
        self.inner = polytope
        self.calls = 0

    def minimize_linear(self, c) -> Vertex:
        self.calls += 1
        return self.inner.minimize_linear(c)

    def __getattr__(self, name):
        return getattr(self.inner, name)


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------


def simplex(n: int) -> PolytopeSpec:
    """Probability simplex: x >= 0, sum(x) = 1.

    Constants are closed form: D = sqrt(2), xi = 1, psi = 1, mu = sqrt(2).
    """
    if n < 1:
        raise ValueError("simplex dimension must be >= 1")

    def oracle(c: np.ndarray) -> Vertex:
        i = int(np.argmin(c))  # first occurrence = lowest index on ties
        e = np.zeros(n)
        e[i] = 1.0
        return Vertex(e, i)

    def exact(x):
        from .llo import ConvexDecomposition

        x = np.asarray(x, dtype=float)
        idx = np.flatnonzero(x > 0)
        verts = []
        weights = []
        for i in idx:
            e = np.zeros(n)
            e[i] = 1.0
            verts.append(Vertex(e, int(i)))
            weights.append(float(x[i]))
        return ConvexDecomposition(verts, weights)

    return PolytopeSpec(
        n=n,
        A1=np.ones((1, n)),
        b1=np.ones(1),
        A2=-np.eye(n),
        b2=np.zeros(n),
        D=np.sqrt(2.0),
        xi=1.0,
        psi=1.0,
        oracle=oracle,
        family="simplex",
        exact_decomposition=exact,
    )


def hypercube(n: int) -> PolytopeSpec:
    """Unit hypercube [0, 1]^n.

    D = sqrt(n); xi = 1 (every inactive bound has slack one at a vertex);
    psi = 1 (independent row subsets of (I; -I) are signed coordinate
    selections, spectral norm one).
    """
    if n < 1:
        raise ValueError("hypercube dimension must be >= 1")

    def oracle(c: np.ndarray) -> Vertex:
        bits = tuple(1 if ci < 0 else 0 for ci in c)  # ties -> 0, lexicographically smallest
        return Vertex(np.array(bits, dtype=float), bits)

    return PolytopeSpec(
        n=n,
        A1=None,
        b1=None,
        A2=np.vstack([np.eye(n), -np.eye(n)]),
        b2=np.concatenate([np.ones(n), np.zeros(n)]),
        D=np.sqrt(float(n)),
        xi=1.0,
        psi=1.0,
        oracle=oracle,
        family="hypercube",
    )


def centered_simplex(n: int, scale: float = 1.0) -> PolytopeSpec:
    """Solid simplex conv{0, e_1, ..., e_n} scaled and recentered at its centroid.

    Unlike the probability simplex this body is full-dimensional, so it
    contains a genuine Euclidean ball around the origin (radius
    ``scale / ((n+1) sqrt(n))``) and sits inside the ball of radius
    ``scale * sqrt(n^2 + n - 1) / (n + 1)``. That makes it the domain of
    choice for the bandit solver, whose sphere perturbations need interior
    room in every ambient direction. ``psi`` is computed by exhausting the
    n+1 independent row subsets of the constraint matrix.
    """
    if n < 2:
        raise ValueError("centered simplex needs n >= 2")
    if scale <= 0:
        raise ValueError("scale must be positive")
    center = np.full(n, 1.0 / (n + 1))
    corners = [np.zeros(n)] + [np.eye(n)[i] for i in range(n)]
    coords = [scale * (v - center) for v in corners]

    def vertex(i: int) -> Vertex:
        return Vertex(coords[i], i)

    def oracle(c: np.ndarray) -> Vertex:
        vals = [float(c @ coords[i]) for i in range(n + 1)]
        return vertex(int(np.argmin(vals)))  # first occurrence = lowest id

    def exact(y):
        from .llo import ConvexDecomposition

        x = np.asarray(y, dtype=float) / scale + center
        lam = np.concatenate([[1.0 - float(np.sum(x))], x])
        idx = np.flatnonzero(lam > 0)
        return ConvexDecomposition([vertex(int(i)) for i in idx],
                                   [float(lam[i]) for i in idx])

    A2 = np.vstack([-np.eye(n), np.ones((1, n))])
    b2 = np.full(n + 1, scale / (n + 1))
    # every n-subset of A2's rows is independent; take the worst spectral norm
    psi = 0.0
    for skip in range(n + 1):
        M = np.delete(A2, skip, axis=0)
        psi = max(psi, float(np.linalg.norm(M, 2)))
    return PolytopeSpec(
        n=n,
        A1=None,
        b1=None,
        A2=A2,
        b2=b2,
        D=scale * np.sqrt(2.0),
        xi=scale,
        psi=psi,
        oracle=oracle,
        family="centered_simplex",
        exact_decomposition=exact,
        inner_radius=scale / ((n + 1) * np.sqrt(n)),
        outer_radius=scale * np.sqrt(n * n + n - 1.0) / (n + 1),
    )


class DagGraph:
    """Directed acyclic graph with designated source (0) and sink (k-1).

    Construction validates that a topological order exists and that every
    node lies on at least one source-to-sink path; anything else is
    rejected up front so the flow polytope below is well defined.
    """

    def __init__(self, node_count: int, edges: Sequence[tuple[int, int]]):
        if node_count < 2:
            raise ValueError("a DAG needs at least a source and a sink")
        edges = [(int(u), int(v)) for u, v in edges]
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u},{v}) references a node outside 0..{node_count - 1}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
        self.node_count = node_count
        self.edges = edges
        self.source = 0
        self.sink = node_count - 1
        self.topo_order = self._topological_order()
        self._check_all_nodes_on_paths()

    def _topological_order(self) -> list[int]:
        indeg = [0] * self.node_count
        succ = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            succ[u].append(v)
            indeg[v] += 1
        ready = sorted(i for i in range(self.node_count) if indeg[i] == 0)
        order = []
        while ready:
            u = ready.pop(0)
            order.append(u)
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
            ready.sort()
        if len(order) != self.node_count:
            raise ValueError("graph contains a cycle")
        return order

    def _check_all_nodes_on_paths(self):
        fwd = self._reachable_from(self.source, forward=True)
        bwd = self._reachable_from(self.sink, forward=False)
        stranded = [i for i in range(self.node_count) if i not in fwd or i not in bwd]
        if stranded:
            raise ValueError(f"nodes {stranded} lie on no source-to-sink path")

    def _reachable_from(self, start: int, forward: bool) -> set[int]:
        adj = [[] for _ in range(self.node_count)]
        for u, v in self.edges:
            if forward:
                adj[u].append(v)
            else:
                adj[v].append(u)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    @classmethod
    def from_edge_list_file(cls, path) -> "DagGraph":
        """Parse a whitespace `src dst` pair per line; nodes are 0..k-1 with
        node 0 the source and node k-1 the sink."""
        edges = []
        max_node = -1
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'src dst', got {line!r}")
                u, v = int(parts[0]), int(parts[1])
                edges.append((u, v))
                max_node = max(max_node, u, v)
        return cls(max_node + 1, edges)

    def enumerate_paths(self, limit: int = 100_000) -> list[tuple[int, ...]]:
        """All source-to-sink paths as tuples of edge indices (DFS order)."""
        out_edges = [[] for _ in range(self.node_count)]
        for idx, (u, v) in enumerate(self.edges):
            out_edges[u].append((idx, v))
        paths = []

        def walk(node, acc):
            if node == self.sink:
                paths.append(tuple(acc))
                if len(paths) > limit:
                    raise ValueError(f"more than {limit} s-t paths; polytope too large to enumerate")
                return
            for idx, v in out_edges[node]:
                walk(v, acc + [idx])

        walk(self.source, [])
        return paths


def flow_polytope(dag: DagGraph, max_paths: int = 100_000) -> PolytopeSpec:
    """Convex hull of s-t path indicator vectors of ``dag`` (one coordinate per edge).

    H-representation: flow conservation equalities plus x >= 0. The oracle is a
    single-pass shortest-path dynamic program over the fixed topological order
    (tie-break toward the smaller incoming edge index, so the "first" path in
    that order wins). Constants come from exhaustive enumeration of the path
    vertices and of independent row subsets of A2, which is why this
    constructor is for desk-scale graphs.
    """
    m = len(dag.edges)
    if m == 0:
        raise ValueError("DAG has no edges")
    k = dag.node_count
    # node balance rows: out - in = +1 at source, -1 at sink, 0 elsewhere
    A1 = np.zeros((k, m))
    for idx, (u, v) in enumerate(dag.edges):
        A1[u, idx] += 1.0
        A1[v, idx] -= 1.0
    b1 = np.zeros(k)
    b1[dag.source] = 1.0
    b1[dag.sink] = -1.0

    paths = dag.enumerate_paths(limit=max_paths)
    vertices = []
    for p in paths:
        x = np.zeros(m)
        for e in p:
            x[e] = 1.0
        vertices.append(x)
    V = np.array(vertices)

    # diameter over path pairs
    D = 0.0
    for i in range(len(V) - 1):
        D = max(D, float(np.linalg.norm(V[i] - V[i + 1 :], axis=1).max()))
    # xi: per vertex, the smallest positive slack of -x <= 0 (a vertex with no
    # slack at all would leave xi undefined and is rejected)
    xi = float("inf")
    for x in V:
        pos = x[x > 0]
        if pos.size == 0:
            raise ValueError("degenerate flow polytope: a vertex has every inequality tight")
        xi = min(xi, float(pos.min()))
    # psi over independent row subsets of A2 = -I: rank m, only subset is -I itself
    psi = 1.0

    out_edges = [[] for _ in range(k)]
    for idx, (u, v) in enumerate(dag.edges):
        out_edges[u].append((idx, v))

    def oracle(c: np.ndarray) -> Vertex:
        INF = float("inf")
        dist = [INF] * k
        back = [None] * k  # incoming edge index on the best path
        dist[dag.source] = 0.0
        for u in dag.topo_order:
            if dist[u] == INF:
                continue
            for idx, v in out_edges[u]:
                cand = dist[u] + c[idx]
                # strict improvement only: among ties the first edge scanned in
                # (topo order, ascending edge index) is kept
                if cand < dist[v]:
                    dist[v] = cand
                    back[v] = idx
        node = dag.sink
        rev = []
        while node != dag.source:
            idx = back[node]
            rev.append(idx)
            node = dag.edges[idx][0]
        path = tuple(reversed(rev))
        x = np.zeros(m)
        for e in path:
            x[e] = 1.0
        return Vertex(x, path)

    return PolytopeSpec(
        n=m,
        A1=A1,
        b1=b1,
        A2=-np.eye(m),
        b2=np.zeros(m),
        D=D,
        xi=xi,
        psi=psi,
        oracle=oracle,
        family="flow_dag",
    )


def custom_polytope(
    n: int,
    A1,
    b1,
    A2,
    b2,
    D: float,
    xi: float,
    psi: float,
    oracle: Callable[[np.ndarray], Vertex],
    inner_radius: Optional[float] = None,
    outer_radius: Optional[float] = None,
) -> PolytopeSpec:
    """User-supplied polytope: oracle callback plus caller-provided constants.

    Constants are only sanity-checked for positivity; computing xi or psi for
    an arbitrary H-representation is not attempted here.
    """
    return PolytopeSpec(
        n=n,
        A1=A1,
        b1=b1,
        A2=A2,
        b2=b2,
        D=D,
        xi=xi,
        psi=psi,
        oracle=oracle,
        family="custom",
        inner_radius=inner_radius,
        outer_radius=outer_radius,
    )
