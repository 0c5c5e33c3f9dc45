"""Textual file formats: instances, networks, witnesses, optima, fixtures,
traces, and sweep configs.

Rationals serialize as "p/q" strings (plain integers allowed as shorthand);
infinities as "inf"/"-inf". All dumps are key-sorted JSON so identical data
produces identical bytes.
"""

import json

from .errors import LabInputError
from .fixtures import Fixture
from .harness import SweepConfig
from .model import Instance, Network, validate_host
from .scalars import format_rational, parse_rational
from .stability import Budget, Move, Verdict

INSTANCE_VERSION = 1


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _parse(text, what):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise LabInputError(f"malformed {what} file: {exc}") from exc


def _rational(obj, what):
    try:
        return parse_rational(obj)
    except ValueError as exc:
        raise LabInputError(f"bad rational in {what}: {obj!r}") from exc


# -- instances ---------------------------------------------------------------

def instance_to_json(inst: Instance) -> str:
    host = inst.host
    payload = {
        "version": INSTANCE_VERSION,
        "n": host.n,
        "alpha": format_rational(inst.alpha),
        "weights": [
            [format_rational(host.weights[u][v]) for v in range(host.n)]
            for u in range(host.n)
        ],
    }
    from .model import MetricStatus

    if host.metric is not MetricStatus.UNCHECKED:
        payload["metric_hint"] = host.metric is MetricStatus.METRIC
    return _dump(payload)


def instance_from_json(text: str) -> Instance:
    data = _parse(text, "instance")
    if data.get("version") != INSTANCE_VERSION:
        raise LabInputError(f"unsupported instance version {data.get('version')!r}")
    n = data.get("n")
    weights = data.get("weights")
    if not isinstance(weights, list) or len(weights) != n:
        raise LabInputError("instance weights must be an n x n matrix")
    matrix = [[_rational(x, "weights") for x in row] for row in weights]
    host = validate_host(matrix)
    alpha = _rational(data.get("alpha"), "alpha")
    if alpha <= 0:
        raise LabInputError(f"alpha must be positive, got {alpha}")
    return Instance(host=host, alpha=alpha)


# -- networks -----------------------------------------------------------------

def network_to_json(net: Network) -> str:
    return _dump({"edges": [[u, v] for u, v in net.edges]})


def network_from_json(text: str, n: int) -> Network:
    data = _parse(text, "network")
    edges = data.get("edges")
    if not isinstance(edges, list):
        raise LabInputError("network file needs an 'edges' list")
    try:
        return Network.from_pairs(n, ((int(u), int(v)) for u, v in edges))
    except (TypeError, ValueError) as exc:
        raise LabInputError(f"bad edge list: {exc}") from exc


# -- witnesses ------------------------------------------------------------------

def witness_to_json(verdict: Verdict) -> str:
    move = verdict.witness
    return _dump(
        {
            "concept": move.concept.upper(),
            "coalition": list(move.coalition),
            "remove": [[u, v] for u, v in move.removals],
            "add": [[u, v] for u, v in move.additions],
            "deltas": {
                str(node): format_rational(delta) for node, delta in verdict.deltas
            },
        }
    )


def witness_from_json(text: str) -> Move:
    data = _parse(text, "witness")
    concept = str(data.get("concept", "")).lower()
    return Move.make(
        coalition=tuple(int(u) for u in data.get("coalition", ())),
        removals=tuple((int(u), int(v)) for u, v in data.get("remove", ())),
        additions=tuple((int(u), int(v)) for u, v in data.get("add", ())),
        concept=concept,
    )


# -- optimum results ---------------------------------------------------------------

def opt_to_json(opt) -> str:
    return _dump(
        {
            "edges": [[u, v] for u, v in opt.network.edges],
            "cost": format_rational(opt.cost),
            "proven": opt.proven,
        }
    )


# -- fixture bundles -------------------------------------------------------------

def fixture_to_json(fixture: Fixture) -> str:
    return _dump(
        {
            "version": INSTANCE_VERSION,
            "family": fixture.family,
            "variant": fixture.variant,
            "concept": fixture.claimed_concept.upper(),
            "expected_ratio": format_rational(fixture.expected_ratio),
            "asymptotic_only": fixture.ratio_is_asymptotic_only,
            "requires_metric": fixture.requires_metric,
            "instance": json.loads(instance_to_json(fixture.instance)),
            "stable_net": json.loads(network_to_json(fixture.stable_net)),
            "reference_net": json.loads(network_to_json(fixture.reference_net)),
        }
    )


def fixture_from_json(text: str) -> Fixture:
    data = _parse(text, "fixture")
    inst = instance_from_json(json.dumps(data["instance"]))
    n = inst.n
    return Fixture(
        family=data["family"],
        variant=data.get("variant"),
        instance=inst,
        stable_net=network_from_json(json.dumps(data["stable_net"]), n),
        reference_net=network_from_json(json.dumps(data["reference_net"]), n),
        claimed_concept=str(data["concept"]).lower(),
        expected_ratio=_rational(data["expected_ratio"], "expected_ratio"),
        ratio_is_asymptotic_only=bool(data["asymptotic_only"]),
        requires_metric=bool(data.get("requires_metric", False)),
    )


# -- traces ----------------------------------------------------------------------

def trace_to_json(trace) -> str:
    return _dump(
        {
            "initial": json.loads(network_to_json(trace.initial)),
            "final": json.loads(network_to_json(trace.final)),
            "outcome": trace.outcome,
            "cycle_start": trace.cycle_start,
            "cycle_period": trace.cycle_period,
            "note": trace.note,
            "steps": [
                {
                    "coalition": list(move.coalition),
                    "remove": [[u, v] for u, v in move.removals],
                    "add": [[u, v] for u, v in move.additions],
                    "social_cost": format_rational(cost),
                }
                for move, cost in trace.steps
            ],
        }
    )


# -- sweep configs ------------------------------------------------------------------

def sweep_config_from_json(text: str) -> SweepConfig:
    data = _parse(text, "sweep config")
    try:
        budget = None
        if data.get("budget"):
            b = data["budget"]
            budget = Budget(
                max_coalition=b.get("max_coalition"),
                max_changes=b.get("max_changes"),
                max_moves=b.get("max_moves"),
            )
        return SweepConfig(
            family=data["family"],
            concept=str(data["concept"]).lower(),
            n_values=tuple(int(n) for n in data["n_values"]),
            alphas=tuple(_rational(a, "alphas") for a in data["alphas"]),
            model=data.get("model", "uniform"),
            count=int(data.get("count", 1)),
            seed=int(data.get("seed", 0)),
            variant=(data.get("variant") or None)
            and str(data.get("variant")).lower(),
            budget=budget,
            opt_limit=int(data.get("opt_limit", 7)),
        )
    except KeyError as exc:
        raise LabInputError(f"sweep config missing field {exc}") from exc


def sweep_config_to_json(cfg: SweepConfig) -> str:
    payload = {
        "family": cfg.family,
        "concept": cfg.concept,
        "n_values": list(cfg.n_values),
        "alphas": [format_rational(a) for a in cfg.alphas],
        "model": cfg.model,
        "count": cfg.count,
        "seed": cfg.seed,
        "variant": cfg.variant,
        "opt_limit": cfg.opt_limit,
    }
    if cfg.budget:
        payload["budget"] = {
            "max_coalition": cfg.budget.max_coalition,
            "max_changes": cfg.budget.max_changes,
            "max_moves": cfg.budget.max_moves,
        }
    return _dump(payload)
