"""Benchmark harness: JSON experiment configs in, CSV traces + figures out.

An experiment names a polytope family, an objective (offline solvers) or a
loss stream (online solvers), a solver, a horizon and an explicit seed list.
``run_experiment`` executes every seed (optionally in parallel threads),
writes one ``<name>_trace_seed<k>.csv`` per seed plus ``<name>_summary.csv``,
renders gap/regret figures next to them, and reports whether the enabled
certifications (named after the acceptance checks they implement) held.

Trace CSV columns are fixed: ``t,value,gap,regret,support,radius,oracle_calls``
with empty fields where a column does not apply. Outputs are byte-identical
across runs with the same config and seeds; wall-clock timings therefore go
to stdout, never into the CSVs.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .objectives import (
    LossStream,
    Objective,
    make_linear_loss_stream,
    make_lower_bound_objective,
    make_quadratic,
    make_strongly_convex_stream,
)
from .offline import OfflineConfig, RunTrace, certify_linear_rate, frank_wolfe, \
    solve_smooth_strongly_convex
from .online import OnlineConfig, RegretReport, RoundRecord, bandit_oco, \
    compute_comparator, oco_general, oco_strongly_convex, stochastic_minimize
from .polytopes import DagGraph, PolytopeSpec, centered_simplex, flow_polytope, \
    hypercube, simplex

__all__ = [
    "ExperimentConfig",
    "SummaryReport",
    "SOLVERS",
    "POLYTOPE_FAMILIES",
    "OBJECTIVE_FAMILIES",
    "STREAM_FAMILIES",
    "run_experiment",
    "validate_config",
    "projected_subgradient_baseline",
    "project_to_simplex",
]

SOLVERS = ("frank_wolfe", "llo_cg", "oco_general", "oco_sc", "stochastic", "bandit")
POLYTOPE_FAMILIES = ("simplex", "hypercube", "flow_dag", "centered_simplex")
OBJECTIVE_FAMILIES = ("lower_bound", "quadratic", "distance")
STREAM_FAMILIES = ("linear_stream", "strongly_convex_stream")
CERTIFICATIONS = ("linear_envelope", "regret_bound", "oracle_budget")

_TOP_KEYS = {
    "name", "polytope", "objective", "stream", "solver", "T", "seeds", "C",
    "f_star", "use_line_search", "alpha_override", "redecompose_threshold",
    "radius_schedule", "aggressiveness", "grad_bound", "value_bound",
    "lipschitz", "baseline", "certify", "out_dir",
}


class ConfigError(ValueError):
    """Raised for malformed experiment configs; the message names the offender."""


@dataclass
class ExperimentConfig:
    name: str
    solver: str
    T: int
    seeds: list[int]
    polytope: dict
    objective: Optional[dict] = None
    stream: Optional[dict] = None
    C: Optional[float] = None
    f_star: Optional[float] = None
    use_line_search: bool = False
    alpha_override: Optional[float] = None
    redecompose_threshold: Optional[int] = None
    radius_schedule: str = "lemma"
    aggressiveness: float = 1.0
    grad_bound: Optional[float] = None
    value_bound: Optional[float] = None
    lipschitz: Optional[float] = None
    baseline: Optional[str] = None
    certify: list[str] = field(default_factory=list)
    out_dir: Optional[str] = None
    base_dir: Path = field(default_factory=Path)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be an object")
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        for key in ("name", "solver", "T", "seeds", "polytope"):
            if key not in raw:
                raise ConfigError(f"missing required config key: {key!r}")
        cfg = cls(
            name=str(raw["name"]),
            solver=str(raw["solver"]),
            T=int(raw["T"]),
            seeds=[int(s) for s in raw["seeds"]],
            polytope=dict(raw["polytope"]),
            objective=dict(raw["objective"]) if raw.get("objective") else None,
            stream=dict(raw["stream"]) if raw.get("stream") else None,
            C=None if raw.get("C") is None else float(raw["C"]),
            f_star=None if raw.get("f_star") is None else float(raw["f_star"]),
            use_line_search=bool(raw.get("use_line_search", False)),
            alpha_override=None if raw.get("alpha_override") is None else float(raw["alpha_override"]),
            redecompose_threshold=None if raw.get("redecompose_threshold") is None
            else int(raw["redecompose_threshold"]),
            radius_schedule=str(raw.get("radius_schedule", "lemma")),
            aggressiveness=float(raw.get("aggressiveness", 1.0)),
            grad_bound=None if raw.get("grad_bound") is None else float(raw["grad_bound"]),
            value_bound=None if raw.get("value_bound") is None else float(raw["value_bound"]),
            lipschitz=None if raw.get("lipschitz") is None else float(raw["lipschitz"]),
            baseline=raw.get("baseline"),
            certify=[str(c) for c in raw.get("certify", [])],
            out_dir=raw.get("out_dir"),
            base_dir=path.parent,
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver: {self.solver!r} (known: {', '.join(SOLVERS)})")
        if not self.seeds:
            raise ConfigError("seeds list must not be empty")
        if self.T < 1:
            raise ConfigError("T must be >= 1")
        fam = self.polytope.get("family")
        if fam not in POLYTOPE_FAMILIES:
            raise ConfigError(f"unknown polytope family: {fam!r} "
                              f"(known: {', '.join(POLYTOPE_FAMILIES)})")
        if self.solver in ("frank_wolfe", "llo_cg"):
            if not self.objective:
                raise ConfigError(f"solver {self.solver!r} requires an 'objective'")
            ofam = self.objective.get("family")
            if ofam not in OBJECTIVE_FAMILIES:
                raise ConfigError(f"unknown objective family: {ofam!r} "
                                  f"(known: {', '.join(OBJECTIVE_FAMILIES)})")
        else:
            if not self.stream:
                raise ConfigError(f"solver {self.solver!r} requires a 'stream'")
            sfam = self.stream.get("family")
            if sfam not in STREAM_FAMILIES:
                raise ConfigError(f"unknown stream family: {sfam!r} "
                                  f"(known: {', '.join(STREAM_FAMILIES)})")
        if self.radius_schedule not in ("lemma", "algbox"):
            raise ConfigError(f"unknown radius_schedule: {self.radius_schedule!r}")
        for cert in self.certify:
            if cert not in CERTIFICATIONS:
                raise ConfigError(f"unknown certification: {cert!r} "
                                  f"(known: {', '.join(CERTIFICATIONS)})")
        if self.baseline is not None and self.baseline != "projected_subgradient":
            raise ConfigError(f"unknown baseline: {self.baseline!r}")
        if self.baseline is not None and self.polytope.get("family") != "simplex":
            raise ConfigError("baseline 'projected_subgradient' needs the simplex family")

    # --- builders -----------------------------------------------------------

    def build_polytope(self) -> PolytopeSpec:
        p = dict(self.polytope)
        fam = p.pop("family")
        if fam == "simplex":
            return simplex(int(p.pop("n")))
        if fam == "hypercube":
            return hypercube(int(p.pop("n")))
        if fam == "centered_simplex":
            return centered_simplex(int(p.pop("n")), float(p.pop("scale", 1.0)))
        if fam == "flow_dag":
            edge_file = p.pop("edge_file", None)
            if edge_file is None:
                raise ConfigError("flow_dag polytope requires 'edge_file'")
            dag = DagGraph.from_edge_list_file(self.base_dir / edge_file)
            return flow_polytope(dag)
        raise ConfigError(f"unknown polytope family: {fam!r}")

    def build_objective(self, polytope: PolytopeSpec) -> tuple[Objective, Optional[float]]:
        """Returns the objective and its known optimal value (or None)."""
        o = dict(self.objective)
        fam = o.pop("family")
        if fam == "lower_bound":
            n = int(o.pop("n", polytope.n))
            obj = make_lower_bound_objective(n)
            f_star = 1.0 / n if polytope.family == "simplex" else None
        elif fam == "quadratic":
            if "diag" in o:
                Q = np.diag(np.asarray(o.pop("diag"), dtype=float))
            else:
                Q = np.asarray(o.pop("Q"), dtype=float)
            b = np.asarray(o.pop("b", np.zeros(Q.shape[0])), dtype=float)
            obj = make_quadratic(Q, b)
            f_star = None
        elif fam == "distance":
            target = np.asarray(o.pop("target"), dtype=float)

            def value(x, a=target):
                d = np.asarray(x, dtype=float) - a
                return float(d @ d)

            def gradient(x, a=target):
                return 2.0 * (np.asarray(x, dtype=float) - a)

            obj = Objective(dim=target.shape[0], value=value, gradient=gradient,
                            beta=1.0, sigma=1.0, name="distance")
            f_star = 0.0 if polytope.contains(target, tol=1e-12) else None
        else:
            raise ConfigError(f"unknown objective family: {fam!r}")
        if o:
            raise ConfigError(f"unknown objective key(s): {sorted(o)}")
        if obj.dim != polytope.n:
            raise ConfigError(f"objective dimension {obj.dim} does not match "
                              f"polytope dimension {polytope.n}")
        if self.f_star is not None:
            f_star = self.f_star
        return obj, f_star

    def build_stream(self, seed: int, polytope: PolytopeSpec) -> LossStream:
        s = dict(self.stream)
        fam = s.pop("family")
        n = int(s.pop("n", polytope.n))
        if fam == "linear_stream":
            scale = float(s.pop("scale", 1.0))
            shift = s.pop("shift", None)
            stream = make_linear_loss_stream(seed, n, self.T, scale, shift)
        elif fam == "strongly_convex_stream":
            radius = float(s.pop("domain_radius",
                                 polytope.outer_radius or polytope.D))
            stream = make_strongly_convex_stream(seed, n, self.T, radius)
        else:
            raise ConfigError(f"unknown stream family: {fam!r}")
        if s:
            raise ConfigError(f"unknown stream key(s): {sorted(s)}")
        if n != polytope.n:
            raise ConfigError(f"stream dimension {n} does not match "
                              f"polytope dimension {polytope.n}")
        return stream


@dataclass
class SummaryReport:
    """Per-seed outcome row plus the certification booleans of the experiment."""

    seed: int
    solver: str
    final_value: Optional[float]
    final_gap: Optional[float]
    regret: Optional[float]
    oracle_calls: int
    redecomp_calls: int
    certifications: dict[str, bool] = field(default_factory=dict)
    wall_clock: float = 0.0


# ---------------------------------------------------------------------------
# Simplex projection + online projected-gradient baseline
# ---------------------------------------------------------------------------


def project_to_simplex(y) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based, exact)."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, y.shape[0] + 1)
    cond = u - css / idx > 0
    k = idx[cond][-1]
    tau = css[k - 1] / k
    return np.maximum(y - tau, 0.0)


def projected_subgradient_baseline(stream: LossStream, polytope: PolytopeSpec,
                                   T: int, grad_bound: Optional[float] = None) -> RegretReport:
    """Online projected (sub)gradient descent on the simplex, as a comparison curve.

    Steps eta_t = D / (G sqrt(t)) with the exact sort-based projection after
    every update. Only defined on the simplex family.
    """
    if polytope.family != "simplex":
        raise ValueError("projected_subgradient_baseline requires the simplex family")
    G = grad_bound if grad_bound is not None else stream.grad_bound
    if G is None or G <= 0:
        raise ValueError("a positive gradient bound G is required")
    if stream.horizon < T:
        raise ValueError("stream horizon is shorter than T")
    x = np.zeros(polytope.n)
    x[0] = 1.0
    D = polytope.D
    total = 0.0
    losses = []
    played = []
    rounds = []
    started = time.perf_counter()
    for t in range(1, T + 1):
        f_t = stream.next(t, x)
        loss = f_t.value(x)
        total += loss
        losses.append(f_t)
        played.append(x.copy())
        g = f_t.gradient(x)
        x = project_to_simplex(x - D / (G * math.sqrt(t)) * g)
        rounds.append(RoundRecord(t, loss, int(np.count_nonzero(x > 0)), 0.0, 0, 0))
    duration = time.perf_counter() - started
    comp_point, comp_loss = compute_comparator(losses, polytope)
    return RegretReport(
        algorithm_loss=total,
        comparator_loss=comp_loss,
        comparator_point=comp_point,
        regret=total - comp_loss,
        rounds=rounds,
        played_points=played,
        realized_losses=losses,
        params={"mode": "projected_subgradient", "G": G},
        duration=duration,
    )


# ---------------------------------------------------------------------------
# Experiment execution
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _trace_rows_offline(trace: RunTrace):
    for rec in trace.records:
        yield (rec.t, rec.value, rec.gap, None, rec.support, rec.radius, rec.oracle_calls)


def _prefix_regret(report: RegretReport, polytope: PolytopeSpec) -> Optional[list[float]]:
    losses = report.realized_losses
    if losses is None or not all(f.linear is not None for f in losses):
        return None
    csum = np.zeros(polytope.n)
    cum_loss = 0.0
    out = []
    for f, rec in zip(losses, report.rounds):
        csum += f.linear
        cum_loss += rec.loss
        v = polytope.minimize_linear(csum)
        out.append(cum_loss - float(csum @ v.coords))
    return out

def _trace_rows_online(report: RegretReport, polytope: PolytopeSpec):
    prefix = _prefix_regret(report, polytope)
    for i, rec in enumerate(report.rounds):
        reg = prefix[i] if prefix is not None else None
        yield (rec.t, rec.loss, None, reg, rec.support, rec.radius, rec.oracle_calls)


def _write_csv(path: Path, rows):
    lines = ["t,value,gap,regret,support,radius,oracle_calls"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _general_regret_bound(params: dict, polytope: PolytopeSpec, T: int) -> Optional[float]:
    """Explicit proof bound for the general-convex mode, valid at faithful params."""
    if params.get("mode") not in ("general",) or params.get("aggressiveness", 1.0) != 1.0:
        return None
    G, eps, rho = params["G"], params["eps"], params["rho"]
    D = polytope.D
    return (18.0 * G * D**2 * rho**2 / math.sqrt(eps)
            + T * G * math.sqrt(eps) / (18.0 * rho**2)
            + T * G * math.sqrt(eps))


def _run_seed(cfg: ExperimentConfig, seed: int, polytope: PolytopeSpec,
              radius_schedule: str, log=print):
    """Execute one seed; returns (summary, trace_rows, curve) with curve either
    ("gap", ts, gaps) or ("regret", ts, values)."""
    started = time.perf_counter()
    if cfg.solver in ("frank_wolfe", "llo_cg"):
        obj, f_star = cfg.build_objective(polytope)
        ocfg = OfflineConfig(
            max_iters=cfg.T,
            C=cfg.C,
            alpha_override=cfg.alpha_override,
            use_line_search=cfg.use_line_search,
            redecompose_threshold=cfg.redecompose_threshold,
            radius_schedule=radius_schedule,
            f_star=f_star,
        )
        trace = (frank_wolfe if cfg.solver == "frank_wolfe" else
                 solve_smooth_strongly_convex)(obj, polytope, ocfg)
        certs = {}
        if "linear_envelope" in cfg.certify:
            if cfg.C is None:
                log(f"[{cfg.name}] warning: no C supplied; certifying against the "
                    "beta*D^2 fallback, which is only valid when it bounds the "
                    "initial gap -- supply C for a trustworthy certificate")
            C = cfg.C if cfg.C is not None else obj.beta * polytope.D**2
            certs["linear_envelope"] = certify_linear_rate(
                trace, C, obj.sigma, obj.beta, polytope.n, polytope.mu)
        if "oracle_budget" in cfg.certify:
            total = trace.records[-1].oracle_calls + trace.redecomp_calls
            certs["oracle_budget"] = total <= 2 * trace.records[-1].t
        rows = list(_trace_rows_offline(trace))
        summary = SummaryReport(
            seed=seed, solver=cfg.solver,
            final_value=trace.final_value(),
            final_gap=trace.records[-1].gap,
            regret=None,
            oracle_calls=trace.records[-1].oracle_calls,
            redecomp_calls=trace.redecomp_calls,
            certifications=certs,
            wall_clock=time.perf_counter() - started,
        )
        curve = ("gap", [r.t for r in trace.records],
                 [r.gap for r in trace.records] if f_star is not None
                 else [r.value for r in trace.records])
        return summary, rows, curve

    stream = cfg.build_stream(seed, polytope)
    oncfg = OnlineConfig(
        horizon=cfg.T,
        grad_bound=cfg.grad_bound,
        aggressiveness=cfg.aggressiveness,
        redecompose_threshold=cfg.redecompose_threshold,
        value_bound=cfg.value_bound,
        lipschitz=cfg.lipschitz,
    )
    if cfg.solver == "oco_general":
        report = oco_general(stream, polytope, oncfg)
    elif cfg.solver == "oco_sc":
        report = oco_strongly_convex(stream, polytope, oncfg)
    elif cfg.solver == "stochastic":
        F_true, f_star = None, None
        if cfg.stream.get("family") == "linear_stream" and cfg.stream.get("shift"):
            shift = np.asarray(cfg.stream["shift"], dtype=float)
            F_true = lambda x, c=shift: float(c @ x)
            v = polytope.minimize_linear(shift)
            f_star = float(shift @ v.coords)
        _, trace = stochastic_minimize(stream, polytope, oncfg, F_true=F_true,
                                       f_star=f_star)
        rows = list(_trace_rows_offline(trace))
        summary = SummaryReport(
            seed=seed, solver=cfg.solver,
            final_value=trace.records[-1].value,
            final_gap=trace.records[-1].gap,
            regret=None,
            oracle_calls=trace.records[-1].oracle_calls,
            redecomp_calls=trace.records[-1].redecomp_calls,
            certifications={},
            wall_clock=time.perf_counter() - started,
        )
        vals = [r.value for r in trace.records]
        return summary, rows, ("regret", [r.t for r in trace.records], vals)
    elif cfg.solver == "bandit":
        if cfg.value_bound is None or cfg.lipschitz is None:
            # derive bounds for the linear stream over this polytope
            L = stream.grad_bound
            R = polytope.outer_radius
            if L is None or R is None:
                raise ConfigError("bandit solver needs 'value_bound' and 'lipschitz' "
                                  "(or a linear stream over a family with known radii)")
            oncfg.lipschitz = L
            oncfg.value_bound = L * R
        rng = np.random.default_rng(10_000 + seed)
        report = bandit_oco(stream, polytope, oncfg, rng)
    else:
        raise ConfigError(f"unknown solver: {cfg.solver!r}")

    certs = {}
    if "regret_bound" in cfg.certify:
        bound = _general_regret_bound(report.params, polytope, cfg.T)
        certs["regret_bound"] = bound is not None and report.regret <= bound
    if "oracle_budget" in cfg.certify:
        total = report.rounds[-1].oracle_calls + report.rounds[-1].redecomp_calls
        certs["oracle_budget"] = total <= 2 * cfg.T
    rows = list(_trace_rows_online(report, polytope))
    prefix = [row[3] for row in rows]
    summary = SummaryReport(
        seed=seed, solver=cfg.solver,
        final_value=report.algorithm_loss,
        final_gap=None,
        regret=report.regret,
        oracle_calls=report.rounds[-1].oracle_calls,
        redecomp_calls=report.rounds[-1].redecomp_calls,
        certifications=certs,
        wall_clock=time.perf_counter() - started,
    )
    ts = [r.t for r in report.rounds]
    curve_vals = prefix if prefix[0] is not None else [r.loss for r in report.rounds]
    return summary, rows, ("regret", ts, curve_vals)


def _write_summary(path: Path, summaries: list[SummaryReport], certify: list[str]):
    cert_cols = [f"cert_{c}" for c in certify]
    header = ["seed", "solver", "final_value", "final_gap", "regret",
              "oracle_calls", "redecomp_calls"] + cert_cols
    lines = [",".join(header)]
    for s in sorted(summaries, key=lambda s: (s.solver, s.seed)):
        row = [str(s.seed), s.solver, _fmt(s.final_value), _fmt(s.final_gap),
               _fmt(s.regret), str(s.oracle_calls), str(s.redecomp_calls)]
        for c in certify:
            row.append("" if c not in s.certifications else str(s.certifications[c]).lower())
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_experiment(config_path, jobs: Optional[int] = None,
                   radius_schedule: Optional[str] = None,
                   out_dir=None, figures: bool = True,
                   log=print) -> int:
    """Run every seed of the experiment; returns the process exit status.

    0: ran and all enabled certifications passed; 1: at least one
    certification failed. Config and I/O errors raise (the CLI maps them to
    exit status 2).
    """
    cfg = ExperimentConfig.from_json(config_path)
    schedule = radius_schedule or cfg.radius_schedule
    if schedule not in ("lemma", "algbox"):
        raise ConfigError(f"unknown radius schedule: {schedule!r}")
    out = Path(out_dir or cfg.out_dir or os.environ.get("LLOCG_OUT") or ".")
    out.mkdir(parents=True, exist_ok=True)

    polytope = cfg.build_polytope()
    results = {}
    workers = max(1, jobs if jobs is not None else (os.cpu_count() or 1))

    def work(seed):
        return seed, _run_seed(cfg, seed, polytope, schedule, log=log)

    if workers == 1 or len(cfg.seeds) == 1:
        for seed in cfg.seeds:
            results[seed] = work(seed)[1]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for seed, res in pool.map(work, cfg.seeds):
                results[seed] = res

    summaries = []
    curves = {}
    for seed in cfg.seeds:
        summary, rows, curve = results[seed]
        _write_csv(out / f"{cfg.name}_trace_seed{seed}.csv", rows)
        summaries.append(summary)
        curves[seed] = curve

    if cfg.baseline == "projected_subgradient":
        for seed in cfg.seeds:
            stream = cfg.build_stream(seed, polytope)
            report = projected_subgradient_baseline(stream, polytope, cfg.T,
                                                    cfg.grad_bound)
            rows = list(_trace_rows_online(report, polytope))
            _write_csv(out / f"{cfg.name}_baseline_seed{seed}.csv", rows)
            summaries.append(SummaryReport(
                seed=seed, solver="projected_subgradient",
                final_value=report.algorithm_loss, final_gap=None,
                regret=report.regret,
                oracle_calls=0, redecomp_calls=0,
                wall_clock=report.duration,
            ))

    _write_summary(out / f"{cfg.name}_summary.csv", summaries, cfg.certify)

    if figures:
        from . import plots

        kind = curves[cfg.seeds[0]][0]
        data = {seed: (ts, vals) for seed, (_, ts, vals) in curves.items()}
        if kind == "gap":
            envelope = None
            if cfg.solver == "llo_cg" and cfg.C is not None and cfg.objective:
                obj, f_star = cfg.build_objective(polytope)
                if f_star is not None:
                    ts = np.arange(1, cfg.T + 1)
                    rate = obj.sigma / (4.0 * obj.beta * polytope.n * polytope.mu**2)
                    envelope = (ts, cfg.C * np.exp(-rate * ts))
            plots.render_gap_figure(out / f"{cfg.name}_gap.png", data,
                                    envelope=envelope, title=cfg.name)
        else:
            plots.render_regret_figure(out / f"{cfg.name}_regret.png", data,
                                       title=cfg.name)

    for s in sorted(summaries, key=lambda s: (s.solver, s.seed)):
        certtxt = " ".join(f"{k}={'PASS' if v else 'FAIL'}"
                           for k, v in s.certifications.items())
        log(f"[{cfg.name}] seed={s.seed} solver={s.solver} "
            + (f"final_value={s.final_value:.6g} " if s.final_value is not None else "")
            + (f"gap={s.final_gap:.3e} " if s.final_gap is not None else "")
            + (f"regret={s.regret:.4f} " if s.regret is not None else "")
            + f"oracle_calls={s.oracle_calls} wall={s.wall_clock:.2f}s {certtxt}")

    all_ok = all(v for s in summaries for v in s.certifications.values())
    return 0 if all_ok else 1


def validate_config(config_path, log=print) -> int:
    """Parse and validate a config (including polytope construction); 0 if OK."""
    cfg = ExperimentConfig.from_json(config_path)
    polytope = cfg.build_polytope()
    if cfg.objective:
        cfg.build_objective(polytope)
    if cfg.stream:
        cfg.build_stream(cfg.seeds[0], polytope)
    log(f"{config_path}: OK (solver={cfg.solver}, polytope={polytope.family}, "
        f"n={polytope.n}, T={cfg.T}, seeds={cfg.seeds})")
    return 0
