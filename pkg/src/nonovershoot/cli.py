"""Command-line front end.

Every paper-facing claim is one subcommand; reports are JSON on stdout with
a self-describing claim header, plot data goes to CSV files on request.
Exit codes: 0 ok, 1 statistical FAIL, 2 numerical failure, 3 usage error.
Output bytes depend only on (spec, seed, flags) - never on thread count.
"""

import argparse
import json
import os
import sys

import numpy as np

from nonovershoot import backend
from nonovershoot import model as md
from nonovershoot import suites
from nonovershoot.errors import (AttemptsExhausted, BudgetExceeded, ConfigError,
                                 LatticeMisaligned, NoRootError, OutOfRange,
                                 UnboundedError)
from nonovershoot.quadrature import QuadratureError

_NUMERICAL_ERRORS = (NoRootError, UnboundedError, QuadratureError,
                     BudgetExceeded, AttemptsExhausted, OutOfRange,
                     LatticeMisaligned)

_CLAIMS = {
    "calibrate": "calibration target: E[exp(-gamma xi)] under the tilted step law = 1",
    "ruin": "identity: P(sup_n S_n >= r) = exp(-gamma r) * E_tilted[exp(-gamma chi)]",
    "overshoot": "limit law: chi/level -> CDF (sin(pi a)/pi) int_0^x u^-a (1+u)^-1 du",
    "xtilde": "moments: E[tau^n] = n! / prod_{k<=n} int_0^1 (1-x^(a k)) a x^(a-1) (1-x)^(-a-1) dx",
    "potter": "slow variation: L(x)/L(y) <= (1+eps) max(x/y, y/x)^eps",
    "condition2": "tail ratio bound: (1-F(yx))/(1-F(y)) <= 1 + C (1-x)",
    "karamata": "scaling bounds: y(1-F(ry))/(1-F(r)) <= 1; truncated mean <= y^(1-a)/(1-a)",
    "korshunov": "tail constant: E_tilted[exp(-gamma chi at r)] ~ C0 / (r (1-F(r)))",
    "theorem2": "conditioned passage (overshoot <= eps) -> non-overshooting process as eps -> 0",
    "theorem3": "conditioned scaled walk -> non-overshooting process as r -> infinity",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(3)


def _emit(report: dict, claim: str, csv_text=None, csv_path=None,
          table=None) -> None:
    print(f"# claim: {claim}")
    if table is not None:
        headers, rows = table
        widths = [max(len(h), *(len(c) for c in col))
                  for h, col in zip(headers, zip(*rows))] if rows else \
            [len(h) for h in headers]
        print("# " + "  ".join(h.ljust(w) for h, w in zip(headers, widths)))
        for row in rows:
            print("# " + "  ".join(c.ljust(w) for c, w in zip(row, widths)))
    clean = {k: v for k, v in report.items() if not isinstance(v, np.ndarray)}
    print(json.dumps(clean, sort_keys=True, indent=2, default=_jsonable))
    if csv_path and csv_text is not None:
        with open(csv_path, "w") as fh:
            fh.write(csv_text)


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _load_spec(path: str) -> md.ModelSpec:
    with open(path) as fh:
        return md.spec_from_config(fh.read())


def _seed(args) -> int:
    env = os.environ.get("NONOVERSHOOT_SEED")
    if env is not None:
        return int(env)
    return args.seed


def build_parser() -> _Parser:
    p = _Parser(prog="nonovershoot",
                description="rare-event walk simulation and the non-overshooting limit process")
    p.add_argument("--threads", type=int, default=None,
                   help="cap kernel worker threads (results are thread-count independent)")
    sp = p.add_subparsers(dest="command", required=True)

    c = sp.add_parser("calibrate", help="calibrate a model config")
    c.add_argument("config")
    c.add_argument("--out", help="write the calibrated spec here")
    c.add_argument("--recalibrate", action="store_true",
                   help="solve afresh even if the file carries a shift")

    r = sp.add_parser("ruin", help="ruin probability estimates")
    r.add_argument("--spec", required=True)
    r.add_argument("--r", type=float, nargs="+", required=True)
    r.add_argument("--n", type=int, default=10000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--crude-horizon", type=int, default=None)
    r.add_argument("--crude-n", type=int, default=None)
    r.add_argument("--csv", default=None)

    o = sp.add_parser("overshoot", help="overshoot law vs its limit")
    o.add_argument("--mode", choices=["levy", "walk"], required=True)
    o.add_argument("--alpha", type=float, default=None)
    o.add_argument("--spec", default=None)
    o.add_argument("--r", type=float, default=1000.0)
    o.add_argument("--delta", type=float, default=1e-4)
    o.add_argument("--drift", action="store_true", help="compensate truncated jumps")
    o.add_argument("--n", type=int, default=100000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--ks-bound", type=float, default=None)
    o.add_argument("--csv", default=None)

    x = sp.add_parser("xtilde", help="non-overshooting passage time moments")
    x.add_argument("--alpha", type=float, required=True)
    x.add_argument("--n", type=int, default=10000)
    x.add_argument("--delta-log", type=float, default=1e-4)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--sensitivity", action="store_true",
                   help="rerun with the truncation halved")
    x.add_argument("--table", action="store_true",
                   help="also print an aligned moments table")
    x.add_argument("--csv", default=None)

    v = sp.add_parser("verify", help="statistical verification suites")
    v.add_argument("--suite", required=True,
                   choices=["potter", "condition2", "karamata", "korshunov",
                            "theorem2", "theorem3"])
    v.add_argument("--spec", default=None)
    v.add_argument("--alpha", type=float, default=0.6)
    v.add_argument("--epsilon", type=float, default=1e-3)
    v.add_argument("--r", type=float, default=1000.0)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--table", action="store_true",
                   help="also print an aligned summary table")
    return p


def _cmd_calibrate(args) -> int:
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        sys.stderr.write(f"error: cannot read config: {exc}\n")
        return 3
    spec = md.spec_from_config(text, recalibrate=args.recalibrate)
    res = md.residual(spec)
    out_text = md.spec_to_config(spec)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out_text)
    report = {
        "command": "calibrate", "residual": res, "shift": spec.shift,
        "left_weight": spec.left.weight, "lattice": spec.lattice,
        "alpha": spec.alpha, "gamma": spec.gamma,
        "tail_variant": spec.tail.variant, "out": args.out,
        "pass": bool(abs(res) <= 1e-10),
    }
    _emit(report, _CLAIMS["calibrate"])
    return 0 if report["pass"] else 2


def _cmd_ruin(args) -> int:
    spec = _load_spec(args.spec)
    report = suites.ruin_report(spec, args.r, args.n, _seed(args),
                                crude_horizon=args.crude_horizon,
                                crude_n=args.crude_n)
    csv_text = None
    if args.csv:
        lines = ["r,estimate,stderr,n,budget_exhausted"]
        for row in report["rows"]:
            lines.append(f"{row['r']!r},{row['estimate']!r},{row['stderr']!r},"
                         f"{row['n']},{row['budget_exhausted']}")
        csv_text = "\n".join(lines) + "\n"
    _emit(report, _CLAIMS["ruin"], csv_text, args.csv)
    return 0 if report.get("pass", True) else 1


def _cmd_overshoot(args) -> int:
    from nonovershoot.subordinator import passage_csv

    if args.mode == "levy":
        if args.alpha is None or not 0.0 < args.alpha < 1.0:
            sys.stderr.write("error: levy mode needs --alpha in (0, 1)\n")
            return 3
        bound = args.ks_bound if args.ks_bound is not None else 0.01
        report = suites.overshoot_levy_report(args.alpha, args.delta, args.n,
                                              _seed(args), drift_comp=args.drift,
                                              ks_bound=bound)
    else:
        if args.spec is None:
            sys.stderr.write("error: walk mode needs --spec\n")
            return 3
        spec = _load_spec(args.spec)
        bound = args.ks_bound if args.ks_bound is not None else 0.02
        report = suites.overshoot_walk_report(spec, args.r, args.n, _seed(args),
                                              ks_bound=bound)
    csv_text = passage_csv(report["taus"], report["chis"], report["accepted"]) \
        if args.csv else None
    _emit(report, _CLAIMS["overshoot"], csv_text, args.csv)
    return 0 if report["pass"] else 1


def _cmd_xtilde(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        sys.stderr.write("error: --alpha must lie in (0, 1)\n")
        return 3
    report = suites.xtilde_report(args.alpha, args.n, args.delta_log,
                                  _seed(args), sensitivity=args.sensitivity)
    csv_text = None
    if args.csv:
        lines = ["replica,tau"]
        lines += [f"{i},{float(t)!r}" for i, t in enumerate(report["taus"])]
        csv_text = "\n".join(lines) + "\n"
    table = None
    if args.table:
        headers = ["n", "alpha", "exact", "empirical", "stderr", "z"]
        rows = [[str(m["n"]), f"{m['alpha']:.4f}", f"{m['exact']:.8f}",
                 f"{m['empirical']:.8f}", f"{m['stderr']:.2e}", f"{m['z']:+.2f}"]
                for m in report["moments"]]
        table = (headers, rows)
    _emit(report, _CLAIMS["xtilde"], csv_text, args.csv, table=table)
    return 0 if report["pass"] else 1


def _cmd_verify(args) -> int:
    suite = args.suite
    seed = _seed(args)
    spec = _load_spec(args.spec) if args.spec else None
    if suite in ("potter", "condition2", "karamata", "korshunov", "theorem3") \
            and spec is None:
        sys.stderr.write(f"error: suite {suite} needs --spec\n")
        return 3
    if suite == "potter":
        report = suites.potter_report(spec, seed=seed)
    elif suite == "condition2":
        report = suites.condition2_report(spec)
    elif suite == "karamata":
        report = suites.karamata_report(spec)
    elif suite == "korshunov":
        report = suites.korshunov_report(spec, seed=seed,
                                         n_ratio=args.n or 100000)
    elif suite == "theorem2":
        if not 0.0 < args.alpha < 1.0:
            sys.stderr.write("error: --alpha must lie in (0, 1)\n")
            return 3
        report = suites.theorem2_report(args.alpha, args.epsilon,
                                        args.n or 5000, seed)
    else:
        report = suites.theorem3_report(spec, args.r, args.n or 10000,
                                        seed=seed)
    table = None
    if getattr(args, "table", False) and suite == "korshunov":
        headers = ["r", "ratio", "stderr", "rel_change"]
        rows = [[f"{row['r']:.0f}", f"{row['ratio']:.6f}", f"{row['stderr']:.2e}",
                 "-" if row["rel_change"] is None else f"{row['rel_change']:.4f}"]
                for row in report["rows"]]
        table = (headers, rows)
    _emit(report, _CLAIMS[suite], table=table)
    return 0 if report["pass"] else 1


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 3
    if args.threads is not None:
        if args.threads < 1:
            sys.stderr.write("error: --threads must be >= 1\n")
            return 3
        backend.set_num_threads(args.threads)
    try:
        if args.command == "calibrate":
            return _cmd_calibrate(args)
        if args.command == "ruin":
            return _cmd_ruin(args)
        if args.command == "overshoot":
            return _cmd_overshoot(args)
        if args.command == "xtilde":
            return _cmd_xtilde(args)
        return _cmd_verify(args)
    except (ConfigError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
