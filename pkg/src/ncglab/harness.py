"""Exhaustive stable-set enumeration, price-of-anarchy measurement, sweeps,
and the seeded property suite.

Reports are pure functions of their configuration (no timestamps, no set
iteration), so repeated runs with the same seeds are byte-identical.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .dynamics import EQUILIBRIUM, FIRST_FOUND, run_dynamics
from .engine import CostEngine
from .errors import BoundViolation, InstanceTooLarge, LabInputError
from .fixtures import FAMILIES, generate
from .model import (
    Instance,
    Network,
    cost_report,
    ensure_metric_checked,
    spanner_stretch,
)
from .optimum import _all_pairs, _connected_mask, brute_force_opt, heuristic_opt, opt_spanner_check
from .randomgen import random_instance
from .scalars import format_rational, is_inf
from .stability import BNE, BSE, PS, Budget, check

ENUM_LIMITS = {PS: 10, BNE: 8, BSE: 6}


@dataclass(frozen=True)
class EnumerationResult:
    concept: str
    networks: tuple  # all stable networks, or None in worst-only mode
    worst: Network
    worst_cost: Fraction
    complete: bool
    checked: int
    inconclusive: int

    @property
    def found_any(self):
        return self.worst is not None


def _connected_candidates(inst, engine):
    """(social cost, canonical edges) of every connected subgraph."""
    n = inst.n
    pairs = _all_pairs(n)
    out = []
    for mask in range(1, 1 << len(pairs)):
        if not _connected_mask(n, pairs, mask):
            continue
        key = tuple(pairs[i] for i in range(len(pairs)) if mask >> i & 1)
        out.append((engine.social_cost(key), key))
    return out


def _concept_chain(concept):
    return {PS: (PS,), BNE: (PS, BNE), BSE: (PS, BNE, BSE)}[concept]


def enumerate_stable(
    inst: Instance,
    concept: str,
    budget: Budget = None,
    limits=None,
    worst_only: bool = False,
    use_containment: bool = True,
    engine: CostEngine = None,
) -> EnumerationResult:
    """Check every connected subgraph with the concept's checker.

    Stable sets and worst costs range over connected networks by contract:
    a disconnected profile has infinite social cost, so admitting it would
    make every anarchy ratio degenerate. (Under strict-improvement
    semantics a disconnected network can pass the pairwise check when no
    single addition makes anyone finite; such states are excluded here but
    the point checkers still judge them literally when asked directly.)
    Containment filtering (ps, then bne, then bse) is an optimization;
    disable it to cross-validate the checkers independently.

    In worst-only mode candidates are visited in descending cost order and
    the scan stops at the first stable network, which is then the worst.
    """
    limit = (limits or ENUM_LIMITS)[concept]
    if inst.n > limit:
        raise InstanceTooLarge(inst.n, limit, f"{concept} enumeration")
    engine = engine or CostEngine(inst)
    chain = _concept_chain(concept) if use_containment else (concept,)
    candidates = _connected_candidates(inst, engine)
    if worst_only:
        candidates.sort(key=lambda t: (-t[0], t[1]))
    else:
        candidates.sort(key=lambda t: t[1])
    stable = []
    inconclusive = 0
    checked = 0
    worst = None
    worst_cost = None
    for cost, key in candidates:
        net = Network(n=inst.n, edges=key)
        checked += 1
        verdict = None
        for step in chain:
            verdict = check(inst, net, step, budget=budget, engine=engine)
            if not verdict.stable:
                break
        if verdict.inconclusive:
            inconclusive += 1
            continue
        if not verdict.stable:
            continue
        if worst_only:
            return EnumerationResult(
                concept=concept,
                networks=None,
                worst=net,
                worst_cost=engine.to_cost(cost),
                complete=inconclusive == 0,
                checked=checked,
                inconclusive=inconclusive,
            )
        stable.append((cost, net))
        if worst_cost is None or cost > worst_cost:
            worst, worst_cost = net, cost
    return EnumerationResult(
        concept=concept,
        networks=None if worst_only else tuple(net for _, net in stable),
        worst=worst,
        worst_cost=None if worst_cost is None else engine.to_cost(worst_cost),
        complete=inconclusive == 0,
        checked=checked,
        inconclusive=inconclusive,
    )


@dataclass(frozen=True)
class PoaPoint:
    label: str
    concept: str
    n: int
    alpha: Fraction
    worst_cost: Fraction  # None when no stable network was found
    opt_cost: Fraction
    opt_proven: bool
    ratio: Fraction  # None when no stable network was found
    complete: bool  # True only when every subgraph was accounted for

    @property
    def stable_found(self):
        return self.worst_cost is not None


def _sampled_worst(inst, concept, budget, engine, seed=0, starts=4, max_steps=300):
    """Fallback beyond enumeration limits: worst certified endpoint of
    seeded improving-response runs. Never complete.

    The walk itself uses single-move (ps) dynamics, which stays cheap even
    on dense intermediate networks; the endpoint is then certified with the
    requested concept's checker. Since stronger concepts only shrink the
    stable set, an endpoint that passes is a genuine stable network.
    """
    from .optimum import _minimum_spanning_tree

    rng = random.Random(seed)
    n = inst.n
    nets = [Network(n=n, edges=_minimum_spanning_tree(inst)), Network.complete(n)]
    for _ in range(starts):
        perm = list(range(n))
        rng.shuffle(perm)
        edges = []
        for i in range(1, n):
            j = rng.randrange(i)
            edges.append((perm[i], perm[j]))
        nets.append(Network.from_pairs(n, edges))
    worst = None
    worst_cost = None
    for start in nets:
        trace = run_dynamics(inst, start, PS, FIRST_FOUND, max_steps, engine=engine)
        if trace.outcome != EQUILIBRIUM:
            continue
        if concept != PS:
            certify = budget or Budget(max_moves=200_000)
            verdict = check(inst, trace.final, concept, budget=certify, engine=engine)
            if not verdict.stable:
                continue  # refuted or uncertifiable within budget: not usable
        cost = engine.social_cost(trace.final.edges)
        if worst_cost is None or cost > worst_cost:
            worst, worst_cost = trace.final, cost
    if worst is None:
        return None, None
    return worst, engine.to_cost(worst_cost)


def poa_point(
    inst: Instance,
    concept: str,
    budget: Budget = None,
    limits=None,
    opt_limit: int = 7,
    label: str = "",
    engine: CostEngine = None,
    seed: int = 0,
) -> PoaPoint:
    """Worst stable cost over proven (or heuristic) optimum cost.

    The ratio is exact whenever both sides are; when the optimum is
    heuristic the reported ratio underestimates the true one.
    """
    engine = engine or CostEngine(inst)
    limit = (limits or ENUM_LIMITS)[concept]
    if inst.n <= limit:
        enum = enumerate_stable(
            inst, concept, budget=budget, limits=limits, worst_only=True, engine=engine
        )
        worst_cost, complete = enum.worst_cost, enum.complete
    else:
        _, worst_cost = _sampled_worst(inst, concept, budget, engine, seed=seed)
        complete = False
    if inst.n <= opt_limit:
        opt = brute_force_opt(inst, node_limit=opt_limit, engine=engine)
    else:
        opt = heuristic_opt(inst, seed=seed, engine=engine)
    ratio = None if worst_cost is None else worst_cost / opt.cost
    return PoaPoint(
        label=label,
        concept=concept,
        n=inst.n,
        alpha=inst.alpha,
        worst_cost=worst_cost,
        opt_cost=opt.cost,
        opt_proven=opt.proven,
        ratio=ratio,
        complete=complete,
    )


@dataclass(frozen=True)
class SweepConfig:
    """One experiment grid: an instance family crossed with n and alpha."""

    family: str  # "random" or a fixture family
    concept: str
    n_values: tuple
    alphas: tuple  # Fractions
    model: str = "uniform"  # random family only
    count: int = 1  # instances per (n, alpha) cell, random family only
    seed: int = 0
    variant: str = None  # two_tier_star only
    budget: Budget = None
    opt_limit: int = 7

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(Fraction(a) for a in self.alphas))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if self.family != "random" and self.family not in FAMILIES:
            raise LabInputError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class SweepRow:
    point: PoaPoint
    metric: bool
    stable_count: int  # -1 when the full set was not materialized
    bound_2a1: str  # "ok" / "n/a"
    bound_metric: str  # ratio <= min(alpha+1, 2(n-1)) on metric instances
    bound_stretch: str  # stretch <= alpha+1 on every stable network seen
    bound_edge_cost: str  # alpha w(E) <= (2 alpha/(n-1) + 1) sum_d
    bound_opt_stretch: str
    expected_ratio: Fraction = None  # fixture families
    bse_distance_advisory: str = None  # recorded only, asymptotic constant


def _check_network_bounds(inst, net, engine, diagnostics):
    """Proven per-network facts for stable networks; raises BoundViolation."""
    alpha = inst.alpha
    n = inst.n
    stretch = spanner_stretch(net, inst.host)
    if is_inf(stretch) or stretch > alpha + 1:
        raise BoundViolation(
            f"stable network stretch {stretch} exceeds {alpha + 1}",
            diagnostics | {"edges": list(net.edges), "stretch": str(stretch)},
        )
    report = cost_report(inst, net)
    edge_total = sum(report.edge_costs) / 2  # both endpoints pay: 2 alpha w(E)
    dist_total = sum(report.distance_costs)
    if edge_total > (2 * alpha / (n - 1) + 1) * dist_total:
        raise BoundViolation(
            "stable network edge cost exceeds the distance-cost bound",
            diagnostics | {"edges": list(net.edges)},
        )


def _sweep_instances(cfg):
    """Deterministic (label, instance, expected_ratio) stream for the grid."""
    idx = 0
    for n in cfg.n_values:
        for alpha in cfg.alphas:
            if cfg.family == "random":
                for i in range(cfg.count):
                    seed = cfg.seed + idx
                    inst = random_instance(n, cfg.model, seed, alpha)
                    yield f"{cfg.model}(seed={seed},n={n},alpha={alpha})", inst, None
                    idx += 1
            else:
                fixture = generate(cfg.family, n, alpha, cfg.variant)
                label = f"{cfg.family}(n={n},alpha={alpha})"
                expected = (
                    None if fixture.ratio_is_asymptotic_only else fixture.expected_ratio
                )
                yield label, fixture.instance, expected
                idx += 1


def poa_sweep(cfg: SweepConfig) -> "SweepReport":
    """Measure every grid cell and check the universal bounds on each row.

    Violations of proven bounds raise BoundViolation with a diagnostic
    payload; the advisory strong-equilibrium distance-ratio constant is
    recorded but never enforced (it is asymptotic).
    """
    rows = []
    for label, inst, expected in _sweep_instances(cfg):
        engine = CostEngine(inst)
        metric = ensure_metric_checked(inst.host)
        limit = ENUM_LIMITS[cfg.concept]
        full_sets = inst.n <= limit
        if full_sets:
            enum = enumerate_stable(inst, cfg.concept, budget=cfg.budget, engine=engine)
            worst_cost = enum.worst_cost
            complete = enum.complete
            stable_nets = enum.networks
        else:
            _, worst_cost = _sampled_worst(inst, cfg.concept, cfg.budget, engine, cfg.seed)
            complete = False
            stable_nets = ()
        if inst.n <= cfg.opt_limit:
            opt = brute_force_opt(inst, node_limit=cfg.opt_limit, engine=engine)
        else:
            opt = heuristic_opt(inst, seed=cfg.seed, engine=engine)
        ratio = None if worst_cost is None else worst_cost / opt.cost
        point = PoaPoint(
            label=label,
            concept=cfg.concept,
            n=inst.n,
            alpha=inst.alpha,
            worst_cost=worst_cost,
            opt_cost=opt.cost,
            opt_proven=opt.proven,
            ratio=ratio,
            complete=complete,
        )
        diagnostics = {"label": label, "alpha": str(inst.alpha), "n": inst.n}
        alpha = inst.alpha
        bound_2a1 = "n/a"
        bound_metric = "n/a"
        if ratio is not None:
            if ratio > 2 * (alpha + 1):
                raise BoundViolation(
                    f"{label}: ratio {ratio} exceeds 2(alpha+1)", diagnostics
                )
            bound_2a1 = "ok"
            if metric:
                cap = min(alpha + 1, Fraction(2 * (inst.n - 1)))
                if ratio > cap:
                    raise BoundViolation(
                        f"{label}: metric ratio {ratio} exceeds {cap}", diagnostics
                    )
                bound_metric = "ok"
        nets_to_check = stable_nets if stable_nets else ()
        for net in nets_to_check:
            _check_network_bounds(inst, net, engine, diagnostics)
        bound_stretch = "ok" if nets_to_check else "n/a"
        bound_edge = "ok" if nets_to_check else "n/a"
        if opt.proven:
            opt_spanner_check(inst, opt)
            bound_opt = "ok"
        else:
            bound_opt = "n/a"
        advisory = None
        if cfg.concept == BSE and metric and worst_cost is not None and stable_nets:
            worst_net = max(
                stable_nets,
                key=lambda g: (engine.social_cost(g.edges), tuple(reversed(g.edges))),
            )
            d_worst = sum(cost_report(inst, worst_net).distance_costs)
            d_opt = sum(cost_report(inst, opt.network).distance_costs)
            if d_opt > 0:
                measured = float(d_worst / d_opt)
                advisory = f"{measured:.3f}<=?{380 * float(alpha) ** 0.5:.3f}"
        rows.append(
            SweepRow(
                point=point,
                metric=metric,
                stable_count=len(stable_nets) if stable_nets is not None and full_sets else -1,
                bound_2a1=bound_2a1,
                bound_metric=bound_metric,
                bound_stretch=bound_stretch,
                bound_edge_cost=bound_edge,
                bound_opt_stretch=bound_opt,
                expected_ratio=expected,
                bse_distance_advisory=advisory,
            )
        )
    return SweepReport(config=cfg, rows=tuple(rows))


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (Fraction, int, float)):
        return format_rational(x) if not isinstance(x, float) else repr(x)
    return str(x)


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    rows: tuple

    def render(self) -> str:
        cfg = self.config
        lines = [
            f"sweep family={cfg.family} concept={cfg.concept} model={cfg.model} "
            f"seed={cfg.seed} count={cfg.count}",
            "label | n | alpha | worst | opt | proven | ratio | complete | metric | "
            "stable# | 2(a+1) | metric-cap | stretch | edge-cost | opt-stretch | "
            "expected | bse-advisory",
        ]
        for r in self.rows:
            p = r.point
            lines.append(
                " | ".join(
                    [
                        p.label,
                        str(p.n),
                        format_rational(p.alpha),
                        _fmt(p.worst_cost),
                        _fmt(p.opt_cost),
                        _fmt(p.opt_proven),
                        _fmt(p.ratio),
                        _fmt(p.complete),
                        _fmt(r.metric),
                        str(r.stable_count),
                        r.bound_2a1,
                        r.bound_metric,
                        r.bound_stretch,
                        r.bound_edge_cost,
                        r.bound_opt_stretch,
                        _fmt(r.expected_ratio),
                        r.bse_distance_advisory or "-",
                    ]
                )
            )
        return "\n".join(lines)

    def render_jsonl(self) -> str:
        import json

        out = []
        for r in self.rows:
            p = r.point
            out.append(
                json.dumps(
                    {
                        "label": p.label,
                        "concept": p.concept,
                        "n": p.n,
                        "alpha": format_rational(p.alpha),
                        "worst": _fmt(p.worst_cost),
                        "opt": _fmt(p.opt_cost),
                        "opt_proven": p.opt_proven,
                        "ratio": _fmt(p.ratio),
                        "complete": p.complete,
                        "metric": r.metric,
                        "stable_count": r.stable_count,
                        "expected_ratio": _fmt(r.expected_ratio),
                        "bse_advisory": r.bse_distance_advisory,
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(out)
