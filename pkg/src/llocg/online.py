"""Online conditional gradient over a polytope: one linear-oracle call per round.

Every mode follows the same skeleton: an aggregate surrogate F_t collects the
(estimated) gradient information seen so far plus a strongly convex anchor
term, and the next play moves a step ``alpha`` toward a local-linear-oracle
answer for ``grad F_t(x_t)`` at a radius chosen so the iterate shadows the
surrogate minimizer.

* general convex losses:  F_t(x) = eta * sum_tau g_tau . x + ||x - x1||^2
  with eta = sqrt(eps)/(18 G rho^2), alpha = 1/(3 rho^2),
  r_t = sqrt(eps) + eta G and eps = (D rho)^2 / sqrt(T); regret O(sqrt(T)).
* H-strongly convex losses: F_t sums the quadratic surrogates
  g_tau . x + H ||x - x_tau||^2 plus H T0 ||x - x1||^2, with
  alpha = 1/(5 rho^2), T0 = (25 rho^2)^2; regret O(log T).
* bandit: plays y_t = (1 - alpha_mix) x_t + delta u_t for a uniform sphere
  direction u_t, estimates g_t = (n / delta) f_t(y_t) u_t, and feeds the
  general-mode update; expected regret O(T^{3/4}).

The theory-faithful parameters make alpha microscopic on polytopes with a
large oracle constant, so everything downstream of ``aggressiveness`` (a
plain multiplier dividing rho^2, default 1 = faithful) exists for empirical
runs at desk scale.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .llo import ConvexDecomposition, blend, default_llo, reduce_decomposition
from .objectives import LossStream, Objective
from .offline import OfflineConfig, RunTrace, IterationRecord, solve_smooth_strongly_convex
from .polytopes import OracleCounter, PolytopeSpec

__all__ = [
    "OnlineConfig",
    "RoundRecord",
    "RegretReport",
    "oco_general",
    "oco_strongly_convex",
    "stochastic_minimize",
    "bandit_oco",
    "compute_comparator",
    "sample_unit_sphere",
]


@dataclass
class OnlineConfig:
    """Parameters for the online solvers; anything left None is derived.

    General mode derivations (rho from the oracle in use, rs = rho^2 /
    aggressiveness): eps = (D rho)^2 / sqrt(T), eta = sqrt(eps) / (18 G rs),
    alpha = 1 / (3 rs), r_t = sqrt(eps) + eta G. Strongly convex mode:
    alpha = 1 / (5 rs), T0 = (25 rs)^2, and the radius follows the shrinking
    schedule 100 rs L / (H (t - 1 + T0)) + L / (H (t + T0)) with L = G + 2HD.
    Bandit mode: delta = sqrt(r n C_b rho) / (sqrt(L) T^{1/4}) and
    mix_alpha = delta / r; the play stays feasible because delta <= mix_alpha * r.
    """

    horizon: int
    grad_bound: Optional[float] = None
    epsilon: Optional[float] = None
    eta: Optional[float] = None
    alpha: Optional[float] = None
    radius: Optional[float] = None
    strong_convexity: float = 0.0
    T0: Optional[float] = None
    aggressiveness: float = 1.0
    redecompose_threshold: Optional[int] = None
    # bandit-only knobs
    delta: Optional[float] = None
    mix_alpha: Optional[float] = None
    inner_radius: Optional[float] = None
    outer_radius: Optional[float] = None
    value_bound: Optional[float] = None
    lipschitz: Optional[float] = None
    record_points: bool = True
    # every 100 rounds, re-derive the surrogate gradient from the full history
    # and fail loudly if the incremental state drifted
    debug_check_grad: bool = False

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.aggressiveness <= 0:
            raise ValueError("aggressiveness must be positive")


@dataclass
class RoundRecord:
    t: int
    loss: float
    support: int
    radius: float
    oracle_calls: int
    redecomp_calls: int


@dataclass
class RegretReport:
    """Cumulative loss of the algorithm, the best fixed comparator and their gap."""

    algorithm_loss: float
    comparator_loss: float
    comparator_point: np.ndarray
    regret: float
    rounds: list[RoundRecord] = field(default_factory=list)
    played_points: Optional[list[np.ndarray]] = None
    realized_losses: Optional[list[Objective]] = None
    params: dict = field(default_factory=dict)
    duration: float = 0.0


def sample_unit_sphere(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform direction on the unit sphere: normalized standard normal."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    while True:
        u = rng.standard_normal(n)
        norm = np.linalg.norm(u)
        if norm > 0:
            return u / norm


def _require_grad_bound(stream: LossStream, cfg: OnlineConfig) -> float:
    G = cfg.grad_bound if cfg.grad_bound is not None else stream.grad_bound
    if G is None or G <= 0:
        raise ValueError("a positive gradient bound G is required")
    return float(G)


def _maybe_reduce(x: ConvexDecomposition, polytope, threshold: Optional[int],
                  r_floor: float) -> ConvexDecomposition:
    if threshold is not None and x.support_size > threshold:
        return reduce_decomposition(x, polytope, r_floor=r_floor)
    return x


def _start_vertex(polytope) -> ConvexDecomposition:
    return ConvexDecomposition.from_vertex(polytope.minimize_linear(np.zeros(polytope.n)))


def oco_general(stream: LossStream, polytope: PolytopeSpec, cfg: OnlineConfig,
                llo=None) -> RegretReport:
    """Online conditional gradient for arbitrary convex losses.

    Each round plays x_t, receives the loss, accumulates its gradient into
    the surrogate F_t(x) = eta * sum g_tau . x + ||x - x1||^2 and blends
    toward one LLO answer. One linear-oracle call per round.
    """
    G = _require_grad_bound(stream, cfg)
    T = cfg.horizon
    if stream.horizon < T:
        raise ValueError("stream horizon is shorter than the configured horizon")
    counter = OracleCounter(polytope)
    oracle = (llo or default_llo)(counter)
    rs = oracle.rho**2 / cfg.aggressiveness
    D = polytope.D
    eps = cfg.epsilon if cfg.epsilon is not None else (D * oracle.rho) ** 2 / math.sqrt(T)
    eta = cfg.eta if cfg.eta is not None else math.sqrt(eps) / (18.0 * G * rs)
    alpha = cfg.alpha if cfg.alpha is not None else min(1.0 / (3.0 * rs), 0.9)
    radius = cfg.radius if cfg.radius is not None else math.sqrt(eps) + eta * G
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"blend step alpha={alpha} outside (0,1)")

    redecomp_counter = OracleCounter(polytope)
    x = _start_vertex(polytope)
    x1 = np.array(x.point)
    S = np.zeros(polytope.n)
    grad_history: list[np.ndarray] = []
    total = 0.0
    losses: list[Objective] = []
    played: list[np.ndarray] = []
    rounds: list[RoundRecord] = []
    started = time.perf_counter()
    for t in range(1, T + 1):
        f_t = stream.next(t, x.point)
        round_loss = f_t.value(x.point)
        total += round_loss
        losses.append(f_t)
        if cfg.record_points:
            played.append(np.array(x.point))
        g_t = f_t.gradient(x.point)
        S += g_t
        if cfg.debug_check_grad:
            grad_history.append(np.array(g_t))
            if t % 100 == 0:
                fresh = np.sum(grad_history, axis=0)
                err = np.linalg.norm(S - fresh) / max(1.0, np.linalg.norm(fresh))
                if err > 1e-9:
                    raise RuntimeError(f"incremental gradient drifted: rel err {err:.3e}")
        grad_F = eta * S + 2.0 * (x.point - x1)
        x = _maybe_reduce(x, redecomp_counter, cfg.redecompose_threshold, radius)
        res = oracle.query(x, radius, grad_F)
        x = blend(x, res, alpha)
        rounds.append(RoundRecord(t, round_loss, x.support_size, radius, counter.calls,
                                  redecomp_counter.calls))
    duration = time.perf_counter() - started
    comp_point, comp_loss = compute_comparator(losses, polytope)
    report = RegretReport(
        algorithm_loss=total,
        comparator_loss=comp_loss,
        comparator_point=comp_point,
        regret=total - comp_loss,
        rounds=rounds,
        played_points=played if cfg.record_points else None,
        realized_losses=losses,
        params={"mode": "general", "eps": eps, "eta": eta, "alpha": alpha,
                "radius": radius, "G": G, "rho": oracle.rho,
                "aggressiveness": cfg.aggressiveness},
        duration=duration,
    )
    return report


def oco_strongly_convex(stream: LossStream, polytope: PolytopeSpec, cfg: OnlineConfig,
                        llo=None) -> RegretReport:
    """Online conditional gradient for H-strongly convex losses.

    The surrogate F_t(x) = sum_tau [g_tau . x + H ||x - x_tau||^2]
    + H T0 ||x - x1||^2 has the incrementally maintainable gradient
    S_t + 2H (t x - sum x_tau) + 2 H T0 (x - x1).
    """
    H = cfg.strong_convexity or stream.strong_convexity
    if H <= 0:
        raise ValueError("strongly convex mode needs H > 0")
    G = _require_grad_bound(stream, cfg)
    T = cfg.horizon
    if stream.horizon < T:
        raise ValueError("stream horizon is shorter than the configured horizon")
    counter = OracleCounter(polytope)
    oracle = (llo or default_llo)(counter)
    rs = oracle.rho**2 / cfg.aggressiveness
    D = polytope.D
    L = G + 2.0 * H * D
    alpha = cfg.alpha if cfg.alpha is not None else min(1.0 / (5.0 * rs), 0.9)
    T0 = cfg.T0 if cfg.T0 is not None else (25.0 * rs) ** 2
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"blend step alpha={alpha} outside (0,1)")

    redecomp_counter = OracleCounter(polytope)
    x = _start_vertex(polytope)
    x1 = np.array(x.point)
    S = np.zeros(polytope.n)
    P = np.zeros(polytope.n)  # sum of played points
    history: list[tuple[np.ndarray, np.ndarray]] = []
    total = 0.0
    losses: list[Objective] = []
    played: list[np.ndarray] = []
    rounds: list[RoundRecord] = []
    started = time.perf_counter()
    for t in range(1, T + 1):
        f_t = stream.next(t, x.point)
        round_loss = f_t.value(x.point)
        total += round_loss
        losses.append(f_t)
        if cfg.record_points:
            played.append(np.array(x.point))
        g_t = f_t.gradient(x.point)
        S += g_t
        P += x.point
        # the proven shadowing radius: the surrogate gap ceiling (100 rs L)^2 /
        # (H (t-1+T0)) turned into a distance, plus the per-round minimizer drift
        r_t = 100.0 * rs * L / (H * (t - 1.0 + T0)) + L / (H * (t + T0))
        grad_F = S + 2.0 * H * (t * x.point - P) + 2.0 * H * T0 * (x.point - x1)
        if cfg.debug_check_grad:
            history.append((np.array(g_t), np.array(x.point)))
            if t % 100 == 0:
                fresh = (np.sum([g for g, _ in history], axis=0)
                         + 2.0 * H * np.sum([x.point - xp for _, xp in history], axis=0)
                         + 2.0 * H * T0 * (x.point - x1))
                err = np.linalg.norm(grad_F - fresh) / max(1.0, np.linalg.norm(fresh))
                if err > 1e-9:
                    raise RuntimeError(f"incremental gradient drifted: rel err {err:.3e}")
        x = _maybe_reduce(x, redecomp_counter, cfg.redecompose_threshold, r_t)
        res = oracle.query(x, r_t, grad_F)
        x = blend(x, res, alpha)
        rounds.append(RoundRecord(t, round_loss, x.support_size, r_t, counter.calls,
                                  redecomp_counter.calls))
    duration = time.perf_counter() - started
    comp_point, comp_loss = compute_comparator(losses, polytope)
    return RegretReport(
        algorithm_loss=total,
        comparator_loss=comp_loss,
        comparator_point=comp_point,
        regret=total - comp_loss,
        rounds=rounds,
        played_points=played if cfg.record_points else None,
        realized_losses=losses,
        params={"mode": "strongly_convex", "alpha": alpha, "T0": T0, "H": H,
                "G": G, "L": L, "rho": oracle.rho,
                "aggressiveness": cfg.aggressiveness},
        duration=duration,
    )


def stochastic_minimize(stream: LossStream, polytope: PolytopeSpec, cfg: OnlineConfig,
                        llo=None, F_true: Optional[Callable[[np.ndarray], float]] = None,
                        f_star: Optional[float] = None):
    """Reduce stochastic minimization of F = E[f] to an online run over i.i.d. draws.

    Runs the mode matching the losses' convexity class over T samples and
    returns the averaged iterate together with a trace of F evaluated at the
    running average (when F is evaluable in closed form).
    """
    run = oco_strongly_convex if stream.strong_convexity > 0 else oco_general
    cfg = replace(cfg, record_points=True)
    report = run(stream, polytope, cfg, llo=llo)
    pts = report.played_points
    trace = RunTrace(f_star=f_star, solver="stochastic")
    running = np.zeros(polytope.n)
    for t, pt in enumerate(pts, start=1):
        running += pt
        avg = running / t
        if F_true is not None:
            val = float(F_true(avg))
            gap = None if f_star is None else val - f_star
        else:
            val, gap = None, None
        rec = report.rounds[t - 1]
        trace.records.append(IterationRecord(t, val, gap, rec.support, rec.radius,
                                             rec.oracle_calls, rec.redecomp_calls))
    x_bar = running / len(pts)
    trace.final_point = x_bar
    trace.final_support = report.rounds[-1].support
    trace.duration = report.duration
    return x_bar, trace


def bandit_oco(stream: LossStream, polytope: PolytopeSpec, cfg: OnlineConfig,
               rng: np.random.Generator, llo=None) -> RegretReport:
    """Bandit online conditional gradient: one loss value observed per round.

    Requires a polytope containing the origin with known inner/outer ball
    radii. Plays y_t = (1 - mix_alpha) x_t + delta u_t for a uniform sphere
    direction, builds the one-point gradient estimate
    g_t = (n / delta) f_t(y_t) u_t and feeds the general-mode surrogate.
    """
    T = cfg.horizon
    if stream.horizon < T:
        raise ValueError("stream horizon is shorter than the configured horizon")
    r_in = cfg.inner_radius if cfg.inner_radius is not None else polytope.inner_radius
    R_out = cfg.outer_radius if cfg.outer_radius is not None else polytope.outer_radius
    if r_in is None or R_out is None or r_in <= 0 or R_out <= 0:
        raise ValueError("bandit mode needs inner/outer ball radii r, R")
    if not polytope.contains(np.zeros(polytope.n), tol=1e-9):
        raise ValueError("bandit mode requires the origin inside the polytope")
    C_b = cfg.value_bound
    L = cfg.lipschitz
    if C_b is None or C_b <= 0 or L is None or L <= 0:
        raise ValueError("bandit mode needs a value bound C_b and Lipschitz constant L")

    counter = OracleCounter(polytope)
    oracle = (llo or default_llo)(counter)
    n = polytope.n
    rho = oracle.rho
    rs = rho**2 / cfg.aggressiveness
    delta = cfg.delta if cfg.delta is not None else \
        math.sqrt(r_in * n * C_b * rho) / (math.sqrt(L) * T**0.25)
    mix_alpha = cfg.mix_alpha if cfg.mix_alpha is not None else delta / r_in
    if delta > mix_alpha * r_in + 1e-12:
        raise ValueError(f"delta={delta:.4g} exceeds mix_alpha*r={mix_alpha * r_in:.4g}: "
                         "perturbed plays would leave the polytope")
    if mix_alpha > 1.0:
        raise ValueError(f"mix_alpha={mix_alpha:.4g} > 1; horizon too short for "
                         "this polytope/loss scale")
    G_est = n * C_b / delta  # bound on the estimator norm
    D = polytope.D
    eps = cfg.epsilon if cfg.epsilon is not None else (D * rho) ** 2 / math.sqrt(T)
    eta = cfg.eta if cfg.eta is not None else math.sqrt(eps) / (18.0 * G_est * rs)
    alpha = cfg.alpha if cfg.alpha is not None else 1.0 / (3.0 * rs)
    radius = cfg.radius if cfg.radius is not None else math.sqrt(eps) + eta * G_est

    redecomp_counter = OracleCounter(polytope)
    x = _start_vertex(polytope)
    x1 = np.array(x.point)
    S = np.zeros(n)
    total = 0.0
    losses: list[Objective] = []
    played: list[np.ndarray] = []
    rounds: list[RoundRecord] = []
    started = time.perf_counter()
    for t in range(1, T + 1):
        u = sample_unit_sphere(rng, n)
        y = (1.0 - mix_alpha) * x.point + delta * u
        f_t = stream.next(t, y)
        val = f_t.value(y)  # the only evaluation: bandit feedback
        total += val
        losses.append(f_t)
        if cfg.record_points:
            played.append(y)
        S += (n / delta) * val * u
        grad_F = eta * S + 2.0 * (x.point - x1)
        x = _maybe_reduce(x, redecomp_counter, cfg.redecompose_threshold, radius)
        res = oracle.query(x, radius, grad_F)
        x = blend(x, res, alpha)
        rounds.append(RoundRecord(t, val, x.support_size, radius, counter.calls,
                                  redecomp_counter.calls))
    duration = time.perf_counter() - started
    comp_point, comp_loss = compute_comparator(losses, polytope)
    return RegretReport(
        algorithm_loss=total,
        comparator_loss=comp_loss,
        comparator_point=comp_point,
        regret=total - comp_loss,
        rounds=rounds,
        played_points=played if cfg.record_points else None,
        realized_losses=losses,
        params={"mode": "bandit", "delta": delta, "mix_alpha": mix_alpha,
                "G_est": G_est, "eta": eta, "alpha": alpha, "radius": radius,
                "rho": rho, "aggressiveness": cfg.aggressiveness},
        duration=duration,
    )


def compute_comparator(losses: list[Objective], polytope: PolytopeSpec):
    """Best fixed point in hindsight for the realized loss sequence.

    Linear losses: exact, one oracle call on the summed coefficients.
    Smooth strongly convex losses: the aggregate is solved to a certified gap
    of 1e-8 by the offline solver. Returns (point, loss value).
    """
    if not losses:
        raise ValueError("empty loss list")
    if all(f.linear is not None for f in losses):
        csum = np.sum([f.linear for f in losses], axis=0)
        v = polytope.minimize_linear(csum)
        return np.array(v.coords), float(csum @ v.coords)
    if all(f.sigma > 0 for f in losses):
        sigma = float(sum(f.sigma for f in losses))
        beta = float(sum(f.beta for f in losses))

        if all(f.quad_center is not None for f in losses):
            # sum of ||x - a_t||^2 collapses to T||x||^2 - 2 (sum a_t).x + const
            T_num = float(len(losses))
            A = np.sum([f.quad_center for f in losses], axis=0)
            const = float(sum(f.quad_center @ f.quad_center for f in losses))

            def value(x):
                x = np.asarray(x, dtype=float)
                return float(T_num * (x @ x) - 2.0 * (A @ x) + const)

            def gradient(x):
                return 2.0 * (T_num * np.asarray(x, dtype=float) - A)

        else:
            def value(x):
                return float(sum(f.value(x) for f in losses))

            def gradient(x):
                g = np.zeros(polytope.n)
                for f in losses:
                    g += f.gradient(x)
                return g

        agg = Objective(dim=polytope.n, value=value, gradient=gradient,
                        beta=beta, sigma=sigma, name="aggregate")
        x1 = _start_vertex(polytope)
        C = float(np.linalg.norm(gradient(x1.point)) * polytope.D)
        C = max(C, 1e-12)
        rho_sq = polytope.n * polytope.mu**2
        iters = int(math.ceil(4.0 * beta * rho_sq / sigma * math.log(max(C / 1e-8, 2.0)))) + 1
        cfg = OfflineConfig(max_iters=iters, C=C, target_gap=1e-8)
        trace = solve_smooth_strongly_convex(agg, polytope, cfg)
        return trace.final_point, float(value(trace.final_point))
    raise ValueError("comparator supports linear or strongly convex loss lists")
