"""Command-line surface.

Exit codes: 0 ok/stable, 1 unstable (witness printed), 2 inconclusive,
3 input error, 4 proven-bound violation or failed verification.
"""

import argparse
import json
import sys

from . import dynamics as dyn
from . import fixtures as fx
from . import harness, properties, serialize
from .engine import CostEngine
from .errors import BoundViolation, LabInputError
from .optimum import brute_force_opt, heuristic_opt
from .scalars import format_rational, parse_rational
from .stability import Budget, CONCEPTS, check

EXIT_OK = 0
EXIT_UNSTABLE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3
EXIT_VIOLATION = 4


def _read(path, what):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise LabInputError(f"cannot read {what} {path}: {exc}") from exc


def _write_out(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _budget_from_args(args):
    if args.max_coalition or args.max_changes or args.max_moves:
        return Budget(
            max_coalition=args.max_coalition,
            max_changes=args.max_changes,
            max_moves=args.max_moves,
        )
    return None


def _add_budget_args(sub):
    sub.add_argument("--max-coalition", type=int, default=None)
    sub.add_argument("--max-changes", type=int, default=None)
    sub.add_argument("--max-moves", type=int, default=None)


def _load_instance(args):
    inst = serialize.instance_from_json(_read(args.instance, "instance"))
    if getattr(args, "inexact", False):
        return inst, CostEngine(inst, eps=args.eps)
    return inst, None


def cmd_check(args):
    inst, engine = _load_instance(args)
    net = serialize.network_from_json(_read(args.network, "network"), inst.n)
    verdict = check(inst, net, args.concept, budget=_budget_from_args(args), engine=engine)
    mode = f" (inexact, eps={args.eps})" if args.inexact else ""
    if verdict.stable:
        print(f"stable: no improving {args.concept} move exists{mode}")
        return EXIT_OK
    if verdict.inconclusive:
        print(f"inconclusive: {verdict.frontier}{mode}")
        return EXIT_INCONCLUSIVE
    text = serialize.witness_to_json(verdict)
    if args.witness_out:
        _write_out(text, args.witness_out)
    print(f"unstable{mode}: witness follows")
    sys.stdout.write(text)
    return EXIT_UNSTABLE


def cmd_opt(args):
    inst, _ = _load_instance(args)
    if args.exact:
        result = brute_force_opt(inst, node_limit=args.node_limit)
    elif inst.n <= args.node_limit:
        result = brute_force_opt(inst, node_limit=args.node_limit)
    else:
        result = heuristic_opt(inst, seed=args.seed)
    _write_out(serialize.opt_to_json(result), args.out)
    return EXIT_OK


def cmd_gen(args):
    fixture = fx.generate(args.family, args.n, parse_rational(args.alpha), args.variant)
    _write_out(serialize.fixture_to_json(fixture), args.out)
    return EXIT_OK


def cmd_verify_fixture(args):
    fixture = serialize.fixture_from_json(_read(args.bundle, "fixture bundle"))
    report = fx.verify_fixture(
        fixture, budget=_budget_from_args(args), opt_node_limit=args.opt_limit
    )
    print(report.render())
    if report.ok:
        return EXIT_OK
    stability_failed = any(
        not c.passed and "stable" in c.name for c in report.checks
    )
    return EXIT_UNSTABLE if stability_failed else EXIT_VIOLATION


def cmd_dynamics(args):
    inst, _ = _load_instance(args)
    if args.start:
        start = serialize.network_from_json(_read(args.start, "network"), inst.n)
    else:
        from .model import Network

        start = Network.empty(inst.n)
    trace = dyn.run_dynamics(
        inst,
        start,
        args.concept,
        policy=args.policy,
        max_steps=args.max_steps,
        budget=_budget_from_args(args),
    )
    _write_out(serialize.trace_to_json(trace), args.out)
    print(f"outcome: {trace.outcome} after {len(trace.steps)} steps")
    return EXIT_OK


def cmd_poa(args):
    inst, _ = _load_instance(args)
    point = harness.poa_point(
        inst, args.concept, budget=_budget_from_args(args), label=args.instance
    )
    print(
        f"concept={point.concept} worst={format_rational(point.worst_cost) if point.worst_cost is not None else 'none-found'} "
        f"opt={format_rational(point.opt_cost)} proven={point.opt_proven} "
        f"ratio={format_rational(point.ratio) if point.ratio is not None else '-'} "
        f"complete={point.complete}"
    )
    return EXIT_OK


def cmd_sweep(args):
    cfg = serialize.sweep_config_from_json(_read(args.config, "sweep config"))
    report = harness.poa_sweep(cfg)
    if args.out:
        _write_out(report.render_jsonl(), args.out)
    print(report.render())
    return EXIT_OK


def cmd_props(args):
    report = properties.property_suite(
        seed=args.seed,
        removal_trials=args.removal_trials,
        tree_trials=args.tree_trials,
        ratio_trials=args.ratio_trials,
        edge_ratio_trials=args.edge_ratio_trials,
        stable_trials=args.stable_trials,
        identity_trials=args.identity_trials,
    )
    print(report.render())
    return EXIT_OK if report.ok else EXIT_VIOLATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncglab",
        description="laboratory for bilateral network creation games "
        "(exact rational arithmetic)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide stability of a network")
    p.add_argument("instance")
    p.add_argument("network")
    p.add_argument("--concept", choices=CONCEPTS, required=True)
    p.add_argument("--witness-out", default=None)
    p.add_argument("--inexact", action="store_true", help="float mode, non-authoritative")
    p.add_argument("--eps", type=float, default=1e-9)
    _add_budget_args(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("opt", help="social optimum (exact when small enough)")
    p.add_argument("instance")
    p.add_argument("--exact", action="store_true", help="require proven optimum")
    p.add_argument("--node-limit", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_opt, inexact=False)

    p = sub.add_parser("gen", help="generate a lower-bound fixture bundle")
    p.add_argument("family", choices=fx.FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--variant", choices=CONCEPTS, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify-fixture", help="re-verify a fixture bundle's claims")
    p.add_argument("bundle")
    p.add_argument("--opt-limit", type=int, default=6)
    _add_budget_args(p)
    p.set_defaults(func=cmd_verify_fixture)

    p = sub.add_parser("dynamics", help="run improving-response dynamics")
    p.add_argument("instance")
    p.add_argument("--from", dest="start", default=None, help="starting network file")
    p.add_argument("--concept", choices=CONCEPTS, required=True)
    p.add_argument(
        "--policy", choices=dyn.POLICIES, default=dyn.FIRST_FOUND
    )
    p.add_argument("--max-steps", type=int, default=100)
    p.add_argument("--out", default=None)
    _add_budget_args(p)
    p.set_defaults(func=cmd_dynamics, inexact=False)

    p = sub.add_parser("poa", help="price-of-anarchy point for one instance")
    p.add_argument("instance")
    p.add_argument("--concept", choices=CONCEPTS, required=True)
    _add_budget_args(p)
    p.set_defaults(func=cmd_poa, inexact=False)

    p = sub.add_parser("sweep", help="run a sweep config and check bounds")
    p.add_argument("config")
    p.add_argument("--out", default=None, help="machine-readable JSONL output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("props", help="seeded randomized property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--removal-trials", type=int, default=10000)
    p.add_argument("--tree-trials", type=int, default=1000)
    p.add_argument("--ratio-trials", type=int, default=300)
    p.add_argument("--edge-ratio-trials", type=int, default=300)
    p.add_argument("--stable-trials", type=int, default=150)
    p.add_argument("--identity-trials", type=int, default=300)
    p.set_defaults(func=cmd_props)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BoundViolation as exc:
        print(f"BOUND VIOLATION: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_VIOLATION
    except LabInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
