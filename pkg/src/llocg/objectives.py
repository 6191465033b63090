"""Objective functions and online loss streams used by the solvers and benchmarks.

Curvature convention: a function is ``beta``-smooth and ``sigma``-strongly
convex when

    f(y) <= f(x) + grad_f(x).(y - x) + beta  * ||x - y||^2
    f(y) >= f(x) + grad_f(x).(y - x) + sigma * ||x - y||^2

i.e. the quadratic terms carry no 1/2 factor. Under this convention
``||x - a||^2`` has ``beta = sigma = 1``, and for a twice-differentiable f
it suffices that ``2 beta I >= hess_f >= 2 sigma I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

__all__ = [
    "Objective",
    "LossStream",
    "make_lower_bound_objective",
    "make_quadratic",
    "make_linear_loss_stream",
    "make_strongly_convex_stream",
    "make_fixed_target_stream",
    "make_target_mixture_stream",
    "finite_diff_check",
]


@dataclass(frozen=True)
class Objective:
    """Value/gradient pair with curvature metadata.

    ``sigma`` is zero for merely convex functions; ``lipschitz`` optionally
    bounds the gradient norm over the intended domain. ``linear`` carries the
    coefficient vector when the function is exactly linear, which lets regret
    comparators take the exact single-oracle-call route.
    """

    dim: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    beta: float
    sigma: float = 0.0
    lipschitz: Optional[float] = None
    name: str = ""
    linear: Optional[np.ndarray] = None
    # set when the function is exactly ||x - a||^2: lets aggregates of many
    # rounds collapse to a single quadratic instead of a sum of closures
    quad_center: Optional[np.ndarray] = None


def make_lower_bound_objective(n: int) -> Objective:
    """The hard sparse instance over the simplex: f(x) = ||x - 1||^2 - n + 2.

    1-smooth and 1-strongly convex (no-1/2 convention). Over the probability
    simplex the minimizer is the barycenter with value 1/n, every vertex has
    value 1, and the best t-sparse point has value exactly 1/t -- so any
    method whose iterates are combinations of t vertices is stuck above 1/t.
    """
    if n < 2:
        raise ValueError("lower-bound objective needs n >= 2")
    ones = np.ones(n)

    def value(x):
        d = np.asarray(x, dtype=float) - ones
        return float(d @ d) - n + 2.0

    def gradient(x):
        return 2.0 * (np.asarray(x, dtype=float) - ones)

    return Objective(
        dim=n,
        value=value,
        gradient=gradient,
        beta=1.0,
        sigma=1.0,
        lipschitz=2.0 * np.sqrt(float(n)),
        name=f"lower_bound(n={n})",
    )


def make_quadratic(Q, b) -> Objective:
    """f(x) = x'Qx - b'x for symmetric PSD Q; beta/sigma from Q's spectrum."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    n = Q.shape[0]
    if Q.shape != (n, n):
        raise ValueError("Q must be square")
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if b.shape != (n,):
        raise ValueError(f"b has shape {b.shape}, expected ({n},)")
    if not np.allclose(Q, Q.T, atol=1e-10):
        raise ValueError("Q must be symmetric")
    if n <= 200:
        eigs = np.linalg.eigvalsh(Q)
        if eigs[0] < -1e-10:
            raise ValueError(f"Q is not positive semidefinite (lambda_min = {eigs[0]:.3e})")
        beta, sigma = float(eigs[-1]), float(max(eigs[0], 0.0))
    else:
        beta, sigma = float(np.linalg.norm(Q, 2)), 0.0

    def value(x):
        x = np.asarray(x, dtype=float)
        return float(x @ Q @ x - b @ x)

    def gradient(x):
        return 2.0 * (Q @ np.asarray(x, dtype=float)) - b

    return Objective(dim=n, value=value, gradient=gradient, beta=beta, sigma=sigma,
                     name="quadratic")


def finite_diff_check(obj: Objective, x, h: float = 1e-6) -> float:
    """Max relative deviation of the gradient from central differences.

    Per coordinate: |(f(x+h e_i) - f(x-h e_i)) / 2h - g_i| / max(1, |g_i|).
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    x = np.asarray(x, dtype=float)
    g = obj.gradient(x)
    worst = 0.0
    for i in range(obj.dim):
        e = np.zeros(obj.dim)
        e[i] = h
        num = (obj.value(x + e) - obj.value(x - e)) / (2.0 * h)
        worst = max(worst, abs(num - g[i]) / max(1.0, abs(g[i])))
    return worst


class LossStream:
    """Sequential source of per-round loss functions for the online solvers.

    ``next(t, x_t)`` returns the round-t :class:`Objective`; the full-info
    solvers use value and gradient, the bandit solver only ever evaluates the
    value at its single perturbed play. Streams are stateful iterators: one
    consumer, rounds queried in order, reproducible from their seed.

    Attributes: ``horizon`` (T), ``strong_convexity`` (H, 0 if none) and
    ``grad_bound`` (a valid G for the stream over its intended domain, when
    the family knows one).
    """

    def __init__(self, horizon: int, strong_convexity: float = 0.0,
                 grad_bound: Optional[float] = None):
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        self.horizon = int(horizon)
        self.strong_convexity = float(strong_convexity)
        self.grad_bound = grad_bound

    def next(self, t: int, x_t: np.ndarray) -> Objective:
        raise NotImplementedError


class _LinearLossStream(LossStream):
    def __init__(self, seed: int, n: int, horizon: int, scale: float, shift=None):
        super().__init__(horizon, 0.0, grad_bound=scale * np.sqrt(n) + (
            float(np.linalg.norm(shift)) if shift is not None else 0.0))
        self.n = n
        self.scale = float(scale)
        self.shift = None if shift is None else np.asarray(shift, dtype=float)
        self._rng = np.random.default_rng(seed)

    def next(self, t: int, x_t: np.ndarray) -> Objective:
        c = self._rng.uniform(-self.scale, self.scale, size=self.n)
        if self.shift is not None:
            c = c + self.shift
        c.setflags(write=False)
        return Objective(
            dim=self.n,
            value=lambda x, c=c: float(c @ x),
            gradient=lambda x, c=c: c,
            beta=0.0,
            sigma=0.0,
            lipschitz=float(np.linalg.norm(c)),
            name=f"linear(t={t})",
            linear=c,
        )


def make_linear_loss_stream(seed: int, n: int, horizon: int, scale: float = 1.0,
                            shift=None) -> LossStream:
    """Adversary of i.i.d. linear losses c_t.x, c_t uniform in [-scale, scale]^n.

    Reproducible from the seed; ``||grad|| <= scale * sqrt(n)`` (plus the norm
    of the optional mean ``shift``, used by the stochastic benchmarks to give
    the expected loss a nontrivial minimizer).
    """
    return _LinearLossStream(seed, n, horizon, scale, shift)


class _QuadraticTargetStream(LossStream):
    """f_t(x) = ||x - a_t||^2 with a_t drawn by ``sampler(rng, t)``; H = 1."""

    def __init__(self, seed: int, n: int, horizon: int, sampler, domain_radius: float):
        super().__init__(horizon, 1.0, grad_bound=2.0 * (domain_radius + 1.0))
        self.n = n
        self._sampler = sampler
        self._rng = np.random.default_rng(seed)

    def next(self, t: int, x_t: np.ndarray) -> Objective:
        a = np.asarray(self._sampler(self._rng, t), dtype=float)
        a.setflags(write=False)
        return Objective(
            dim=self.n,
            value=lambda x, a=a: float(np.sum((np.asarray(x) - a) ** 2)),
            gradient=lambda x, a=a: 2.0 * (np.asarray(x, dtype=float) - a),
            beta=1.0,
            sigma=1.0,
            name=f"quadratic_target(t={t})",
            quad_center=a,
        )


def _uniform_unit_ball(rng: np.random.Generator, n: int) -> np.ndarray:
    u = rng.standard_normal(n)
    u /= np.linalg.norm(u)
    return u * rng.uniform() ** (1.0 / n)


def make_strongly_convex_stream(seed: int, n: int, horizon: int,
                                domain_radius: float = 1.0) -> LossStream:
    """Stream of f_t(x) = ||x - a_t||^2 with a_t uniform in the unit ball.

    H = 1 under the no-1/2 convention. ``domain_radius`` should bound ||x||
    over the feasible set so the reported grad_bound 2 (domain_radius + 1) is
    valid.
    """
    return _QuadraticTargetStream(
        seed, n, horizon, lambda rng, t: _uniform_unit_ball(rng, n), domain_radius
    )


def make_fixed_target_stream(a, horizon: int, domain_radius: float = 1.0) -> LossStream:
    """Stationary strongly convex stream: every round plays f(x) = ||x - a||^2."""
    a = np.asarray(a, dtype=float)
    return _QuadraticTargetStream(
        0, a.shape[0], horizon, lambda rng, t: a, domain_radius
    )


def make_target_mixture_stream(seed: int, targets, horizon: int,
                               domain_radius: float = 1.0) -> LossStream:
    """i.i.d. stream f_t(x) = ||x - a_t||^2 with a_t uniform over a finite target
    list; the expected loss is ||x - mean(targets)||^2 up to a constant."""
    targets = [np.asarray(a, dtype=float) for a in targets]
    if not targets:
        raise ValueError("need at least one target")
    n = targets[0].shape[0]
    return _QuadraticTargetStream(
        seed, n, horizon,
        lambda rng, t: targets[int(rng.integers(len(targets)))], domain_radius
    )
