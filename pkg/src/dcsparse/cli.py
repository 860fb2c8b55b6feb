"""Command-line entry point: ``dcsparse <subcommand> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .dcs import DcsParams, build_dcs, check_dcs, choose_params
from .decomposition import decompose
from .instance import Instance
from .intersection import dual_certificate, max_common_independent
from .matroids import DomainError, ValidationError
from .protocols import THREE_HALVES, StreamConfig, format_ratio, one_way_run, stream_run
from .harness.experiment import ExperimentPlan, WORKERS_ENV, render_table, run_experiment, summarize
from .harness.generate import FAMILIES, FIXTURES, GenerationError, gen_instance
from .harness.oracles import SCOPES, OracleGateError, oracle_check

OK, CHECK_FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _seed_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"seeds must look like 5 or 0..99, got {text!r}") from None


def _ids(values) -> list[int]:
    return sorted(int(v) for v in values)


def _read_ids(path: str, key: str) -> list[int]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data[key]
    return [int(v) for v in data]


def _params(args) -> DcsParams:
    if args.beta is not None or args.beta_minus is not None:
        if args.beta is None or args.beta_minus is None:
            raise UsageError("--beta and --beta-minus must be given together")
        return DcsParams(args.beta, args.beta_minus, args.epsilon)
    return choose_params(args.epsilon)


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", type=_fraction, required=True,
                   help="approximation slack, e.g. 1/4")
    p.add_argument("--beta", type=int, help="override the upper density bound")
    p.add_argument("--beta-minus", type=int, help="override the lower density bound")


def cmd_decompose(args) -> int:
    inst = Instance.load(args.instance)
    m = inst.views()[args.matroid - 1]
    if args.subset == "all":
        subset = m.ground
    else:
        subset = frozenset(int(x) for x in args.subset.split(",") if x.strip())
    d = decompose(m.restrict(subset), inst.k)
    print("\n".join(d.lines()))
    return OK


def cmd_build_dcs(args) -> int:
    inst = Instance.load(args.instance)
    m1, m2 = inst.views()
    p = _params(args)
    state = build_dcs(m1, m2, p, debug=args.debug)
    verdict = check_dcs(state.v_prime, m1, m2, p)
    out = {"params": p.to_dict(), "v_prime": sorted(state.v_prime),
           "phi": f"{state.phi.numerator}/{state.phi.denominator}", "steps": state.step_count}
    text = json.dumps(out, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    for line in verdict.lines():
        print(line, file=sys.stderr)
    return OK if verdict.ok else CHECK_FAILED


def cmd_intersect(args) -> int:
    inst = Instance.load(args.instance)
    m1, m2 = inst.views()
    S = max_common_independent(m1, m2)
    print(f"mu={len(S)}")
    print(f"set={sorted(S)}")
    if not args.certificate:
        return OK
    cert = dual_certificate(m1, m2)
    r1, r2 = m1.rank(cert.c1), m2.rank(cert.c2)
    print(f"c1={sorted(cert.c1)}")
    print(f"c2={sorted(cert.c2)}")
    holds = r1 + r2 == len(S)
    print(f"rank1(c1)+rank2(c2)={r1}+{r2}={r1 + r2} {'==' if holds else '!='} {len(S)}")
    return OK if holds else CHECK_FAILED


def cmd_communicate(args) -> int:
    inst = Instance.load(args.instance)
    m1, m2 = inst.views()
    p = _params(args)
    if args.split:
        v_a = frozenset(_read_ids(args.split, "v_a"))
    else:
        rng = np.random.default_rng(args.random_split)
        v_a = frozenset(e for e in range(inst.n) if rng.random() < 0.5)
    t = one_way_run(m1, m2, v_a, params=p)
    print(t.summary())
    ok = t.message_size <= p.beta * t.mu
    if p.certified:
        ok = ok and t.ratio <= THREE_HALVES + p.epsilon
    return OK if ok else CHECK_FAILED


def cmd_stream(args) -> int:
    inst = Instance.load(args.instance)
    m1, m2 = inst.views()
    p = _params(args)
    order = _read_ids(args.order, "order") if args.order else None
    mu = len(max_common_independent(m1, m2))
    reports = []
    for seed in args.seeds:
        cfg = StreamConfig(args.epsilon, p, seed, order=order, enforce_cap=args.enforce_cap, mu=mu,
                           verify_density=args.verify)
        r = stream_run(m1, m2, cfg)
        reports.append(r)
        print(r.line())
    ratios = [r.ratio for r in reports]
    finite = [x for x in ratios if isinstance(x, Fraction)]
    mean = sum(finite) / len(finite) if finite else None
    print(f"summary runs={len(reports)} mean_ratio={float(mean) if mean is not None else 'nan'} "
          f"max_ratio={format_ratio(max(ratios)) if ratios else '-'} "
          f"fallback_runs={sum(r.fallback_triggered for r in reports)} "
          f"peak_max={max((r.stored_peak for r in reports), default=0)}")
    bad = sum(r.bounded_density_violations for r in reports)
    return OK if bad == 0 else CHECK_FAILED


def cmd_oracle_check(args) -> int:
    inst = Instance.load(args.instance)
    scopes = SCOPES if args.scope == "all" else [args.scope]
    ok = True
    for scope in scopes:
        try:
            report = oracle_check(inst, scope, trials=args.trials, seed=args.seed)
        except OracleGateError as exc:
            if args.scope != "all":
                raise
            print(f"scope={scope} skipped ({exc})")
            continue
        print(report.line())
        if not report.ok:
            ok = False
            print(json.dumps(report.counterexample, sort_keys=True))
    return OK if ok else CHECK_FAILED


def cmd_gen(args) -> int:
    size = {}
    for item in args.size:
        if "=" not in item:
            raise UsageError(f"--size entries look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        size[key] = float(value) if "." in value else int(value)
    inst = gen_instance(args.family, size, args.seed)
    if args.out:
        inst.save(args.out)
    else:
        sys.stdout.write(inst.dumps())
    return OK


def cmd_experiment(args) -> int:
    plan = ExperimentPlan.load(args.plan)
    if args.out:
        plan.output = args.out
    records = run_experiment(plan, workers=args.workers)
    rows = summarize(records)
    print(render_table(rows))
    failed = any("error" in r or r.get("check") is False for r in records)
    return CHECK_FAILED if failed else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcsparse",
        description="Density-constrained subsets for matroid intersection.",
        epilog=f"Set {WORKERS_ENV} to run experiment plans on several processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="print the density decomposition of a subset")
    p.add_argument("--instance", required=True, help="instance JSON file")
    p.add_argument("--matroid", type=int, choices=(1, 2), default=1)
    p.add_argument("--subset", default="all", help="comma-separated ids, or 'all'")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("build-dcs", help="construct a DCS by local search")
    p.add_argument("--instance", required=True)
    _add_params(p)
    p.add_argument("--out", help="write the result JSON here as well")
    p.add_argument("--debug", action="store_true", help="recheck the potential from scratch")
    p.set_defaults(func=cmd_build_dcs)

    p = sub.add_parser("intersect", help="exact maximum common independent set")
    p.add_argument("--instance", required=True)
    p.add_argument("--certificate", action="store_true", help="also print a dual certificate")
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("communicate", help="simulate the one-way protocol on a split")
    p.add_argument("--instance", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--split", help="JSON file with Alice's ids (list or {\"v_a\": [...]})")
    g.add_argument("--random-split", type=int, metavar="SEED", help="split each element by coin flip")
    _add_params(p)
    p.set_defaults(func=cmd_communicate)

    p = sub.add_parser("stream", help="run the random-order streaming algorithm")
    p.add_argument("--instance", required=True)
    _add_params(p)
    p.add_argument("--seeds", type=_seed_range, default=[0], help="seed or inclusive range S0..S1")
    p.add_argument("--order", help="JSON file with an explicit stream order")
    p.add_argument("--enforce-cap", action="store_true", help="discard elements beyond the memory cap")
    p.add_argument("--verify", action="store_true",
                   help="recheck bounded density from fresh decompositions")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("oracle-check", help="compare fast paths with exhaustive oracles")
    p.add_argument("--instance", required=True)
    p.add_argument("--scope", choices=SCOPES + ("all",), default="all")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES) + sorted(FIXTURES))
    p.add_argument("--size", nargs="*", default=[], metavar="KEY=VALUE",
                   help="family size parameters, e.g. left=8 edges=40")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", help="run an experiment plan")
    p.add_argument("--plan", required=True, help="plan JSON file")
    p.add_argument("--out", help="override the plan's results path")
    p.add_argument("--workers", type=int, help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValidationError, DomainError, GenerationError, OracleGateError,
            FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"dcsparse {args.command}: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
