"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 domain violation,
4 failed numerical check under --verify.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import equilibria as eq
from . import folk
from . import repeated as rep
from .errors import DomainError
from .payoff import PayoffParams, as_mixed_strategy, mixed_payoff_matrix, pure_payoff
from .quantum import CC, PAULI_POINTS, evolve, outcome_distribution

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_CHECK = 0, 2, 3, 4


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


@dataclass
class RunConfig:
    params: tuple = (5.0, 3.0, 1.0, 0.0)
    theta: float | None = None
    theta_grid: int | None = None
    theta_range: tuple = (0.0, math.pi / 2)
    delta: float | None = None
    delta_grid: int | None = None
    seed: int = 0
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        self.params = tuple(float(x) for x in self.params)
        self.theta_range = tuple(float(x) for x in self.theta_range)
        PayoffParams(*self.params)  # ordering check
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format!r}; use csv or json")

    @property
    def payoff_params(self) -> PayoffParams:
        return PayoffParams(*self.params)

    def thetas(self, default: list[float] | int) -> list[float]:
        if self.theta is not None:
            return [self.theta]
        n = self.theta_grid if self.theta_grid is not None else default
        if isinstance(n, list):
            return n
        lo, hi = self.theta_range
        return [float(x) for x in np.linspace(lo, hi, n)]

    def deltas(self, default: float) -> list[float]:
        if self.delta_grid:
            return [float(x) for x in np.linspace(0, 1, self.delta_grid + 2)[1:-1]]
        return [self.delta if self.delta is not None else default]

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


# ------------------------------------------------------------ parsing

def parse_vector(text: str, what: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"parse error: {what} needs 4 comma-separated numbers, got {text!r}")
    values = []
    for tok in parts:
        try:
            values.append(float(tok))
        except ValueError:
            raise UsageError(f"parse error: {what}: offending token {tok.strip()!r}") from None
    return np.array(values)


def parse_params(text: str) -> tuple:
    vals = parse_vector(text, "--params")
    PayoffParams(*vals)
    return tuple(vals)


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def jsonable(x):
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def render(columns: list[str], rows: list[dict], cfg: RunConfig, meta: dict | None = None) -> str:
    if cfg.format == "json":
        doc = {"columns": columns, "rows": rows}
        if meta:
            doc["meta"] = meta
        return json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def vec_str(v) -> str:
    return " ".join(format(float(x), ".17g") for x in v)


# ------------------------------------------------------------ payoff

def cmd_payoff(cfg: RunConfig, args) -> str:
    params = cfg.payoff_params
    theta = cfg.theta if cfg.theta is not None else 0.0
    pure = args.pure_a is not None or args.pure_b is not None
    mixed = args.mixed_a is not None or args.mixed_b is not None
    if pure == mixed:
        raise UsageError("give either --pure-a/--pure-b or --mixed-a/--mixed-b")
    rows = []
    if pure:
        xs = []
        for flag, text in (("--pure-a", args.pure_a), ("--pure-b", args.pure_b)):
            x = parse_vector(text or "1,0,0,0", flag)
            n = float(np.linalg.norm(x))
            if abs(n * n - 1) > 1e-12:
                if not args.normalize or n == 0:
                    raise UsageError(
                        f"parse error: {flag} {text!r} not normalized (|x|^2={n * n:.17g}); "
                        "pass --normalize to rescale"
                    )
                x = x / n
            xs.append(x)
        pa = pure_payoff(xs[0], xs[1], theta, params, "A")
        pb = pure_payoff(xs[0], xs[1], theta, params, "B")
        dist = outcome_distribution(evolve(CC, xs[0], xs[1], theta))
    else:
        ps = []
        for flag, text in (("--mixed-a", args.mixed_a), ("--mixed-b", args.mixed_b)):
            q = parse_vector(text or "1,0,0,0", flag)
            if args.normalize and q.sum() > 0 and q.min() >= 0:
                q = q / q.sum()
            try:
                q = as_mixed_strategy(q)
            except DomainError as exc:
                raise UsageError(f"parse error: {flag}: {exc}") from None
            ps.append(q)
        A = mixed_payoff_matrix(theta, params)
        pa, pb = float(ps[0] @ A @ ps[1]), float(ps[1] @ A @ ps[0])
        dist = np.zeros(4)
        for i in range(4):
            for j in range(4):
                w = ps[0][i] * ps[1][j]
                if w:
                    dist += w * outcome_distribution(
                        evolve(CC, PAULI_POINTS[i], PAULI_POINTS[j], theta))
    rows = [{"quantity": "payoff_a", "value": pa}, {"quantity": "payoff_b", "value": pb}]
    rows += [{"quantity": f"prob_{lab.lower()}", "value": float(v)}
             for lab, v in zip(("CC", "CD", "DC", "DD"), dist)]
    return render(["quantity", "value"], rows, cfg, {"theta": theta})


# ------------------------------------------------------------ equilibrium

def cmd_equilibrium(cfg: RunConfig, args) -> str:
    params = cfg.payoff_params
    tol = args.tol
    rows = []
    all_ok = True
    for theta in cfg.thetas([0.0]):
        cands = eq.closed_form_equilibria(theta, params, pure_only=args.pure_only)
        for c in cands:
            if c.kind == "pure":
                gains = eq.pure_deviation_gains(*c.strategies, theta, params)
            else:
                gains = eq.mixed_deviation_gains(*c.strategies, theta, params)
            ok = max(gains) <= tol
            all_ok &= ok
            rows.append({
                "theta": theta, "label": c.label, "kind": c.kind,
                "strategy_a": vec_str(c.strategies[0]), "strategy_b": vec_str(c.strategies[1]),
                "payoff_a": c.payoffs[0], "payoff_b": c.payoffs[1],
                "max_gain": max(gains), "verified": ok,
            })
        if not any(c.kind == "pure" for c in cands):
            # witness: the family profile at phi = 0 admits a profitable deviation
            xA, xB = np.array([0.0, 1, 0, 0]), np.array([0.0, 0, 1, 0])
            who, reply, gain = eq.improving_deviation_witness(xA, xB, theta, params)
            rows.append({
                "theta": theta, "label": "no-pure-equilibrium", "kind": "pure",
                "strategy_a": vec_str(xA), "strategy_b": vec_str(xB),
                "payoff_a": pure_payoff(xA, xB, theta, params, "A"),
                "payoff_b": pure_payoff(xA, xB, theta, params, "B"),
                "max_gain": gain, "verified": False,
                "witness": f"player {who} improves by {gain:.17g} with {vec_str(reply)}",
            })
    cols = ["theta", "label", "kind", "strategy_a", "strategy_b", "payoff_a", "payoff_b",
            "max_gain", "verified", "witness"]
    text = render(cols, rows, cfg)
    if args.verify and not all_ok:
        raise CheckFailed(text)
    return text


# ------------------------------------------------------------ figures

def _gt(pr: PayoffParams) -> bool:
    return pr.t + pr.s > pr.r + pr.p


def _lt(pr: PayoffParams) -> bool:
    return pr.t + pr.s < pr.r + pr.p


FIGURES = {
    # id: (default params, regime predicate, regime text)
    "eq-payoff-gt": ((5, 3, 1, 0), _gt, "t+s > r+p"),
    "eq-payoff-lt-a": ((7, 5, 3, 0), lambda q: _lt(q) and 2 * (q.t - q.r) > q.p - q.s,
                       "t+s < r+p and 2(t-r) > p-s"),
    "eq-payoff-lt-b": ((5, 4, 3, 0), lambda q: _lt(q) and 2 * (q.t - q.r) < q.p - q.s,
                       "t+s < r+p and 2(t-r) < p-s"),
    "trigger1-deltainf-gt": ((5, 3, 1, 0), _gt, "t+s > r+p"),
    "trigger1-deltainf-lt": ((5, 4, 2, 0), _lt, "t+s < r+p"),
    "trigger2-region": ((5, 4, 2, 0), lambda q: q.r > (q.t + q.p) / 2, "r > (t+p)/2"),
    "minimax-pure": ((5, 3, 1, 0), lambda q: True, ""),
    "minimax-mixed-gt": ((5, 3, 1, 0), _gt, "t+s > r+p"),
    "minimax-mixed-lt": ((5, 4, 2, 0), _lt, "t+s < r+p"),
    "feasible-gt": ((5, 3, 1, 0), lambda q: q.r > (q.t + q.s) / 2, "r > (t+s)/2"),
    "feasible-lt": ((5, 2, 1, 0), lambda q: q.r < (q.t + q.s) / 2, "r < (t+s)/2"),
    "vstar-gt": ((5, 3, 1, 0), lambda q: q.r > (q.t + q.s) / 2, "r > (t+s)/2"),
    "vstar-lt": ((5, 2, 1, 0), lambda q: q.r < (q.t + q.s) / 2, "r < (t+s)/2"),
}


def figure_rows(fig: str, cfg: RunConfig, params: PayoffParams, sphere_grid: int = 10_000):
    """(columns, rows, meta) for one figure id."""
    meta = {"figure": fig, "params": list(params.as_tuple())}
    if fig.startswith("eq-payoff"):
        cols = ["theta", "sin2_theta", "pure_family", "interior",
                "boundary_xy_xy", "boundary_iz_xy", "boundary_iz_iz"]
        rows = []
        for th in cfg.thetas(101):
            row = {"theta": th, "sin2_theta": math.sin(th) ** 2}
            try:
                row["pure_family"] = eq.pure_equilibrium_family(0.0, th, params).payoffs[0]
            except eq.NoEquilibrium:
                pass
            inner = eq.interior_mixed_equilibrium(th, params)
            if inner is not None:
                row["interior"] = inner.payoffs[0]
            for c in eq.boundary_mixed_equilibria(th, params):
                row[c.label.replace("-", "_")] = c.payoffs[0]
            rows.append(row)
        meta["switch_sin2_theta"] = eq.boundary_threshold(params)
        return cols, rows, meta
    if fig.startswith("trigger1-deltainf"):
        rows = [{"theta": th, "delta_inf": rep.trigger1_delta_inf(th, params),
                 "punishment_is_equilibrium": rep.trigger1_punishment_ok(th, params)}
                for th in cfg.thetas(101)]
        return ["theta", "delta_inf", "punishment_is_equilibrium"], rows, meta
    if fig == "trigger2-region":
        curve = rep.trigger_region_boundary("trigger2", params, cfg.thetas(101))
        rows = [{"theta": th, "delta_min": d} for th, d in curve]
        return ["theta", "delta_min"], rows, meta
    if fig == "minimax-pure":
        rows = []
        for th in cfg.thetas(21):
            sol = folk.minimax_pure(th, params, grid=sphere_grid)
            rows.append({"theta": th, "value": sol.value, "grid_value": sol.meta["grid_value"]})
        meta["sphere_grid"] = sphere_grid
        return ["theta", "value", "grid_value"], rows, meta
    if fig.startswith("minimax-mixed"):
        rows = []
        for th in cfg.thetas(101):
            sol = folk.minimax_mixed(th, params)
            rows.append({"theta": th, "value": sol.value,
                         **{f"p_{o}": float(v) for o, v in zip("ixyz", sol.strategy)}})
        return ["theta", "value", "p_i", "p_x", "p_y", "p_z"], rows, meta
    if fig.startswith("feasible"):
        rows = []
        for th in cfg.thetas([0.0, math.pi / 2]):
            for k, (a, b) in enumerate(folk.feasible_set(th, params).vertices):
                rows.append({"theta": th, "vertex": k, "nu_a": a, "nu_b": b})
        return ["theta", "vertex", "nu_a", "nu_b"], rows, meta
    if fig.startswith("vstar"):
        rows = []
        for th in cfg.thetas([math.pi / 2]):
            irs = folk.individually_rational_set(th, params)
            for k, (a, b) in enumerate(irs.hull.vertices):
                rows.append({"theta": th, "region": "hull", "index": k, "nu_a": a, "nu_b": b})
            for k, (a, b) in enumerate(irs.region()):
                rows.append({"theta": th, "region": "vstar", "index": k, "nu_a": a, "nu_b": b})
            rows.append({"theta": th, "region": "cutoff", "index": 0,
                         "nu_a": irs.cutoffs[0], "nu_b": irs.cutoffs[1]})
            rows.append({"theta": th, "region": "rr", "index": 0, "nu_a": params.r,
                         "nu_b": params.r, "member": irs.contains((params.r, params.r))})
        return ["theta", "region", "index", "nu_a", "nu_b", "member"], rows, meta
    raise UsageError(f"unknown figure {fig!r}")


def cmd_figure(cfg: RunConfig, args) -> str:
    fig = args.figure_id
    if fig not in FIGURES:
        raise UsageError(f"unknown figure id {fig!r}; valid ids: {', '.join(FIGURES)}")
    default, regime, text = FIGURES[fig]
    params = PayoffParams(*cfg.params) if args.params_given else PayoffParams(*default)
    if not regime(params):
        raise DomainError(f"figure {fig} needs {text}; got params {params.as_tuple()}")
    if args.grid is not None:
        cfg.theta_grid = args.grid
    cols, rows, meta = figure_rows(fig, cfg, params, args.sphere_grid)
    if args.verify:
        _verify_figure(fig, rows, params)
    return render(cols, rows, cfg, meta)


def _verify_figure(fig: str, rows: list[dict], params: PayoffParams) -> None:
    if fig.startswith("trigger1-deltainf"):
        d = [r["delta_inf"] for r in rows]
        if any(b < a - 1e-12 for a, b in zip(d, d[1:])):
            raise CheckFailed("delta_inf curve is not nondecreasing")
    if fig.startswith("feasible"):
        # with Pauli play every pair lands on a classical outcome at theta = 0, pi/2,
        # and the flattened payoffs stay inside the hull of the four classical profiles
        t, r, p, s = params.as_tuple()
        want = {(round(a, 9), round(b, 9))
                for a, b in folk.convex_hull([(r, r), (t, s), (s, t), (p, p)])}
        by_theta: dict = {}
        for row in rows:
            by_theta.setdefault(row["theta"], set()).add(
                (round(float(row["nu_a"]), 9), round(float(row["nu_b"]), 9)))
        for th, got in by_theta.items():
            if got != want:
                raise CheckFailed(f"feasible hull at theta={th} has vertices {sorted(got)}, "
                                  f"expected {sorted(want)}\n")


# ------------------------------------------------------------ simulate

def cmd_simulate(cfg: RunConfig, args) -> str:
    params = cfg.payoff_params
    theta = cfg.theta if cfg.theta is not None else 0.0
    delta = cfg.delta if cfg.delta is not None else 0.9
    b_probe = rep.make_player(args.b)
    a_probe = rep.make_player(args.a)
    var_a = a_probe.automaton.variant if a_probe.automaton else None
    var_b = b_probe.automaton.variant if b_probe.automaton else None
    player_a = rep.make_player(args.a, var_b)
    player_b = rep.make_player(args.b, var_a)
    horizon = args.horizon
    if horizon is None:
        horizon = rep.truncation_horizon(delta, params.t) + max(
            list(player_a.overrides) + list(player_b.overrides) + [0])
    if args.log:
        first = rep.simulate(rep.make_player(args.a, var_b), rep.make_player(args.b, var_a),
                             theta, delta, params, horizon, cfg.seed, mode=args.mode)
        with open(args.log, "w", newline="\n") as fh:
            fh.write(first.to_jsonl())
    if args.mode == "stage-reset":
        tot_a, tot_b = rep.simulate_players_batch(player_a, player_b, theta, delta, params,
                                                  horizon, args.episodes, cfg.seed)
    else:
        seeds = np.random.SeedSequence(cfg.seed).generate_state(args.episodes)
        res = [rep.simulate(rep.make_player(args.a, var_b), rep.make_player(args.b, var_a),
                            theta, delta, params, horizon, int(sd), mode=args.mode)
               for sd in seeds]
        tot_a = np.array([r.total_a for r in res])
        tot_b = np.array([r.total_b for r in res])
    n = len(tot_a)
    analytic = rep.analytic_total(player_a, player_b, theta, delta, params)
    rows = []
    within = True
    for who, tot, exact in (("A", tot_a, analytic), ("B", tot_b, None)):
        sd = float(tot.std(ddof=1)) if n > 1 else 0.0
        se = sd / math.sqrt(n)
        row = {"player": who, "episodes": n, "horizon": horizon, "mean": float(tot.mean()),
               "stddev": sd, "stderr": se, "analytic": exact}
        if exact is not None:
            tail = delta ** horizon * params.t / (1 - delta)
            dev = abs(row["mean"] - exact)
            row["within_3sigma"] = dev <= 3 * se + tail + 1e-12
            within &= row["within_3sigma"]
        rows.append(row)
    cols = ["player", "episodes", "horizon", "mean", "stddev", "stderr", "analytic",
            "within_3sigma"]
    text = render(cols, rows, cfg, {"theta": theta, "delta": delta, "seed": cfg.seed,
                                     "mode": args.mode, "a": args.a, "b": args.b})
    if args.verify and not within:
        raise CheckFailed(text)
    return text


# ------------------------------------------------------------ folk

def cmd_folk(cfg: RunConfig, args) -> str:
    params = cfg.payoff_params
    anti = folk.anti_folk_check(params)
    rows = []
    coop = (np.array([1.0, 0, 0, 0]), np.array([1.0, 0, 0, 0]))
    for theta in cfg.thetas([0.0]):
        mixed = folk.minimax_mixed(theta, params)
        row = {"theta": theta, "minimax_mixed": mixed.value,
               "cutoff_a": mixed.value, "cutoff_b": mixed.value,
               "pure_spe_exists": folk.pure_spe_exists(theta, params),
               "anti_threshold_holds": anti.threshold_holds,
               "anti_vstar_contains_rr": anti.vstar_contains_rr,
               "anti_pareto_dominated": anti.pareto_dominated}
        if args.pure:
            row["minimax_pure"] = folk.minimax_pure(theta, params, grid=args.sphere_grid).value
        try:
            row["punishment_horizon"] = folk.punishment_horizon(coop, theta, params)
        except folk.NoPunishment:
            row["punishment_horizon"] = None
        if args.verify and folk.duality_gap(theta, params, mixed) > 1e-9:
            raise CheckFailed(f"mini-max duality gap too large at theta={theta}")
        rows.append(row)
    cols = ["theta", "minimax_mixed", "minimax_pure", "cutoff_a", "cutoff_b",
            "pure_spe_exists", "anti_threshold_holds", "anti_vstar_contains_rr",
            "anti_pareto_dominated", "punishment_horizon"]
    return render(cols, rows, cfg)


# ------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="payoffs t,r,p,s (default 5,3,1,0)")
    g = common.add_mutually_exclusive_group()
    g.add_argument("--theta", type=float, help="entanglement angle in radians")
    g.add_argument("--theta-grid", type=int, metavar="N", help="N evenly spaced angles")
    common.add_argument("--theta-range", help="grid endpoints lo,hi (default 0,pi/2)")
    common.add_argument("--delta", type=float, help="discount factor in (0,1)")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--verify", action="store_true", help="exit 4 if a numerical check fails")
    common.add_argument("--config", help="read a JSON RunConfig (flags override it)")
    common.add_argument("--dump-config", metavar="PATH", help="write the effective RunConfig")

    ap = argparse.ArgumentParser(prog="entangled-pd", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("payoff", parents=[common], help="stage payoffs for given strategies")
    p.add_argument("--pure-a")
    p.add_argument("--pure-b")
    p.add_argument("--mixed-a")
    p.add_argument("--mixed-b")
    p.add_argument("--normalize", action="store_true")
    p.set_defaults(func=cmd_payoff)

    p = sub.add_parser("equilibrium", parents=[common], help="closed-form equilibria, verified")
    p.add_argument("--pure-only", action="store_true")
    p.add_argument("--tol", type=float, default=eq.VERIFY_TOL)
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("figure", parents=[common], help="emit figure data")
    p.add_argument("figure_id", metavar="FIGURE", help="one of: " + ", ".join(FIGURES))
    p.add_argument("--grid", type=int, help="number of theta points")
    p.add_argument("--sphere-grid", type=int, default=10_000)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo repeated play")
    p.add_argument("--a", default="trigger1", help="Alice's strategy")
    p.add_argument("--b", default="trigger1", help="Bob's strategy")
    p.add_argument("--horizon", type=int)
    p.add_argument("--episodes", type=int, default=1)
    p.add_argument("--mode", choices=rep.MODES, default="stage-reset")
    p.add_argument("--log", help="per-round JSON lines for the first episode")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("folk", parents=[common], help="mini-max values and folk-theorem checks")
    p.add_argument("--pure", action="store_true", help="also compute the pure mini-max")
    p.add_argument("--sphere-grid", type=int, default=10_000)
    p.set_defaults(func=cmd_folk)
    return ap


def config_from_args(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_json(fh.read())
    else:
        cfg = RunConfig()
    if args.params is not None:
        cfg.params = parse_params(args.params)
    if args.theta is not None:
        cfg.theta, cfg.theta_grid = args.theta, None
    if args.theta_grid is not None:
        cfg.theta, cfg.theta_grid = None, args.theta_grid
    if args.theta_range is not None:
        try:
            lo, hi = (float(x) for x in args.theta_range.split(","))
        except ValueError:
            raise UsageError(f"parse error: --theta-range {args.theta_range!r}") from None
        cfg.theta_range = (lo, hi)
    if args.delta is not None:
        cfg.delta = args.delta
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out = args.out
    if args.format is not None:
        cfg.format = args.format
    cfg.__post_init__()
    return cfg


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = config_from_args(args)
        args.params_given = args.params is not None or bool(args.config)
        if args.dump_config:
            with open(args.dump_config, "w", newline="\n") as fh:
                fh.write(cfg.to_json())
        text = args.func(cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except CheckFailed as exc:
        sys.stdout.write(str(exc))
        print("error: numerical check failed", file=sys.stderr)
        return EXIT_CHECK
    if cfg.out:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
