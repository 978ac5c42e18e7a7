"""Command-line entry point: gen, solve, peel, threshold, certify, experiment, plot.

Exit codes: 0 success, 1 domain error (reported as one line on stderr),
2 usage error.  `certify` exits 0 only when the certificate verifies.
Every subcommand prints its resolved configuration to stderr before
executing.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from xorsatlab import __version__
from xorsatlab.errors import XorsatLabError
from xorsatlab.experiments import (
    ExperimentConfig,
    default_workers,
    emit_plot,
    run_experiment,
)
from xorsatlab.formulas import threshold_report
from xorsatlab.gf2 import BitMatrix, matvec, solve
from xorsatlab.instances import Instance, gen_constrained, gen_unconstrained
from xorsatlab.peel import core_density, extend_solution, two_core
from xorsatlab.rng import Seed


def _echo_config(args: argparse.Namespace) -> None:
    resolved = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    print(f"config: {json.dumps(resolved, sort_keys=True, default=str)}", file=sys.stderr)


def _load_instance(path: str) -> Instance:
    if path.endswith(".bin"):
        with open(path, "rb") as fh:
            return Instance.from_bytes(fh.read())
    with open(path) as fh:
        return Instance.loads(fh.read())


def _save_instance(inst: Instance, path: str | None) -> None:
    if path is None:
        print(inst.dumps())
    elif path.endswith(".bin"):
        with open(path, "wb") as fh:
            fh.write(inst.to_bytes())
    else:
        with open(path, "w") as fh:
            fh.write(inst.dumps())


def _cmd_gen(args) -> int:
    seed = Seed(args.seed, args.stream)
    if args.m is None:
        if args.c is None:
            raise XorsatLabError("gen needs --m or --c")
        args.m = round(args.c * args.n)
    if args.model == "constrained":
        inst = gen_constrained(args.k, args.m, args.n, seed)
    elif args.model == "unconstrained":
        inst = gen_unconstrained(args.k, args.m, args.n, seed)
    else:
        raise XorsatLabError(f"unknown model {args.model!r}")
    _save_instance(inst, args.out)
    return 0


def _cmd_solve(args) -> int:
    inst = _load_instance(getattr(args, "in"))
    mat = BitMatrix.from_sparse_rows(inst.n, inst.rows)
    res = solve(mat, inst.rhs)
    out = {
        "consistent": res.consistent,
        "rank": res.rank,
        "solution_count_log2": res.solution_count_log2,
    }
    if args.solution and res.one_solution is not None:
        out["one_solution"] = res.one_solution.tolist()
        if not (matvec(mat, res.one_solution) == np.asarray(inst.rhs, dtype=np.uint8)).all():
            raise XorsatLabError("internal check failed: solution does not satisfy the system")
    print(json.dumps(out))
    return 0


def _cmd_peel(args) -> int:
    inst = _load_instance(getattr(args, "in"))
    if args.stats_only:
        stats = core_density(inst)
        core = trace = None
    else:
        core, trace, stats = two_core(inst)
    out = {
        "core_vars": stats.core_vars,
        "core_eqs": stats.core_eqs,
        "ratio": stats.ratio,
    }
    if args.solve and core is not None:
        mat = BitMatrix.from_sparse_rows(core.n, core.rows)
        res = solve(mat, core.rhs)
        out["consistent"] = res.consistent
        if res.consistent:
            full = extend_solution(res.one_solution, trace, inst)
            full_mat = BitMatrix.from_sparse_rows(inst.n, inst.rows)
            if not (matvec(full_mat, full) == np.asarray(inst.rhs, dtype=np.uint8)).all():
                raise XorsatLabError("internal check failed: lifted solution invalid")
            out["solution_checked"] = True
    if args.trace_out and trace is not None:
        with open(args.trace_out, "w") as fh:
            fh.write(trace.dumps())
    print(json.dumps(out))
    return 0


def _cmd_threshold(args) -> int:
    c = args.c if args.c is not None else 1.0
    report = threshold_report(args.k, c)
    print(json.dumps(report.to_dict()))
    return 0


def _cmd_certify(args) -> int:
    from xorsatlab.certify import certify_claim

    c_range = None
    if args.c_lo is not None or args.c_hi is not None:
        if args.c_lo is None or args.c_hi is None:
            raise XorsatLabError("provide both --c-lo and --c-hi")
        c_range = (args.c_lo, args.c_hi)
    cert = certify_claim(args.claim, args.k, args.target, c_range)
    line = {
        "claim": cert.claim_id,
        "k": cert.k,
        "verified": cert.verified,
        "cells": len(cert.cells),
        "global_bound": cert.global_bound,
    }
    print(json.dumps(line))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.dumps())
    return 0 if cert.verified else 1


def _cmd_experiment(args) -> int:
    if args.config:
        with open(args.config) as fh:
            payload = json.load(fh)
        # explicit flags override file values
        overrides = {
            "kind": args.kind,
            "k": args.k,
            "n": args.n,
            "trials": args.trials,
            "master_seed": args.seed,
            "model": args.model,
            "out": args.out,
            "workers": args.workers,
        }
        payload.update({k: v for k, v in overrides.items() if v is not None})
        payload.setdefault("workers", default_workers())
        if args.c_grid:
            payload["c_grid"] = args.c_grid
        if args.m_list:
            payload["m_list"] = args.m_list
        if args.w_list:
            payload["w_list"] = args.w_list
        cfg = ExperimentConfig.from_json_dict(payload)
    else:
        required = {"kind": args.kind, "k": args.k, "n": args.n, "trials": args.trials}
        missing = [name for name, v in required.items() if v is None]
        if missing:
            raise XorsatLabError(f"experiment needs --config or flags; missing {missing}")
        cfg = ExperimentConfig(
            kind=args.kind,
            k=args.k,
            n=args.n,
            trials=args.trials,
            master_seed=args.seed if args.seed is not None else 0,
            model=args.model or "unconstrained",
            c_grid=args.c_grid,
            m_list=args.m_list,
            w_list=args.w_list,
            out=args.out,
            workers=args.workers if args.workers is not None else default_workers(),
        )
        cfg.validate()
    aggregates, _, summary = run_experiment(cfg)
    out = {"aggregates": aggregates if isinstance(aggregates, (list, dict)) else [vars(a) for a in aggregates]}
    if isinstance(aggregates, list) and aggregates and hasattr(aggregates[0], "__dataclass_fields__"):
        from dataclasses import asdict

        out["aggregates"] = [asdict(a) for a in aggregates]
    out["csv_sha256"] = summary["csv_sha256"]
    print(json.dumps(out))
    return 0


def _cmd_plot(args) -> int:
    kw = {}
    if args.mode == "hk":
        if args.k is None or not args.c_list:
            raise XorsatLabError("hk mode needs --k and --c-list")
        kw = {"k": args.k, "c_values": args.c_list}
    else:
        if args.x:
            kw["x"] = args.x
        if args.y:
            kw["y"] = args.y
        if args.series:
            kw["series"] = args.series
    emit_plot(args.csv, args.out, mode=args.mode, **kw)
    print(json.dumps({"svg": args.out}))
    return 0


def _csv_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _csv_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorsatlab",
        description="Random k-XORSAT lab: samplers, GF(2) solving, 2-core peeling, "
        "threshold formulas, interval certificates, Monte Carlo campaigns.",
    )
    parser.add_argument("--version", action="version", version=f"xorsatlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample a random instance and write it (JSON or .bin)")
    p.add_argument("--model", default="unconstrained", choices=["unconstrained", "constrained"])
    p.add_argument("--k", type=int, required=True, help="variables per equation")
    p.add_argument("--n", type=int, required=True, help="number of variables")
    p.add_argument("--m", type=int, help="number of equations")
    p.add_argument("--c", type=float, help="density m/n (used when --m is absent)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--stream", type=int, default=0, help="sub-stream index")
    p.add_argument("--out", help="output path; .bin selects the binary format; default stdout JSON")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="GF(2)-solve an instance file")
    p.add_argument("--in", required=True, help="instance path (JSON or .bin)")
    p.add_argument("--solution", action="store_true", help="include one solution (verified) in the output")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("peel", help="peel an instance to its 2-core")
    p.add_argument("--in", required=True, help="instance path (JSON or .bin)")
    p.add_argument("--stats-only", action="store_true", help="report core order/size only")
    p.add_argument("--solve", action="store_true", help="solve the core and lift the solution back")
    p.add_argument("--trace-out", help="write the peel trace as JSON")
    p.set_defaults(func=_cmd_peel)

    p = sub.add_parser("threshold", help="print threshold constants (lambda, gamma, c_hat, c_star, core sizes)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--c", type=float, help="density m/n (default 1.0)")
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("certify", help="interval-arithmetic negativity certificates; exit 0 iff verified")
    p.add_argument("--claim", required=True, choices=["amed", "k3grid", "alarge", "monotone"])
    p.add_argument("--k", type=int, help="k for the amed claim (default 4)")
    p.add_argument("--target", type=float, help="override the negativity target")
    p.add_argument("--c-lo", type=float, help="k3grid density range lower end")
    p.add_argument("--c-hi", type=float, help="k3grid density range upper end")
    p.add_argument("--out", help="write the certificate JSON here")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("experiment", help="run a Monte Carlo campaign (CSV + JSON summary)")
    p.add_argument("--config", help="JSON config path; explicit flags override file values")
    p.add_argument("--kind", choices=["sat_sweep", "critical_census", "core_check", "collision_check", "window_check"])
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--model", choices=["unconstrained", "constrained"])
    p.add_argument("--c-grid", type=_csv_floats, dest="c_grid", help="comma-separated densities")
    p.add_argument("--m-list", type=_csv_ints, dest="m_list", help="comma-separated equation counts")
    p.add_argument("--w-list", type=_csv_ints, dest="w_list", help="comma-separated window widths")
    p.add_argument("--workers", type=int, help="worker processes (default from XORSAT_LAB_WORKERS, else 1)")
    p.add_argument("--out", help="CSV output path (summary goes to <out>.summary.json)")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("plot", help="render an SVG chart from a campaign CSV (or the H_k curves)")
    p.add_argument("--mode", default="sweep", choices=["sweep", "hk"])
    p.add_argument("--csv", help="input CSV (sweep mode)")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument("--x", help="x column (default c)")
    p.add_argument("--y", help="y column (default sat)")
    p.add_argument("--series", help="series column (default n)")
    p.add_argument("--k", type=int, help="k for hk mode")
    p.add_argument("--c-list", type=_csv_floats, dest="c_list", help="densities for hk mode")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _echo_config(args)
    try:
        return args.func(args)
    except (XorsatLabError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
