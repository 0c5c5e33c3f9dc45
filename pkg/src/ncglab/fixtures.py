"""Executable lower-bound constructions and their verification.

Each generator returns a Fixture: an instance, a claimed-stable network, a
cheap reference network, and the closed-form cost ratio between them. The
generators encode reconstructions reverse-engineered from the constructions'
cost arithmetic; verify_fixture is the authority and must confirm stability
and the exact ratio, so a failing fixture signals a broken reconstruction
and is never patched silently.

Families:
  * zero_cluster: a free clique of n-1 agents plus one remote agent whose
    direct link to the cluster's designated buyer is priced at alpha + 1
    while everyone else could reach it at weight 1. In the expensive
    stable network the overpriced link is bought; buying any weight-1
    link costs its buyer exactly what it saves, so nobody moves. Ratio
    alpha + 1, not metric.
  * two_tier_star: metric closure of a star with one leaf at weight a and
    n-2 leaves at weight b; the stable network is the star re-centered at
    the weight-a leaf. The (a, b) pair decides which cooperation level
    the network survives: (1, 2/alpha) for ps, (1, 2/sqrt(alpha)) for
    bne, (1/n, 2/alpha) for bse.
  * cluster_path: a free cluster attached to a short path of unit steps
    (skip links cost 2); the stable network keeps the path strung out,
    the reference network stars everything at the path's head. The cost
    ratio here is certified asymptotic-only: only the exact costs and
    stability are claimed at desk scale.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import AlphaNotSquare, LabInputError
from .model import (
    Instance,
    Network,
    cost_report,
    is_metric,
    metric_closure,
    validate_host,
)
from .optimum import brute_force_opt
from .scalars import sqrt_exact
from .stability import BNE, BSE, PS, Budget, check

FAMILIES = ("zero_cluster", "two_tier_star", "cluster_path")


@dataclass(frozen=True)
class Fixture:
    family: str
    variant: str
    instance: Instance
    stable_net: Network
    reference_net: Network
    claimed_concept: str
    expected_ratio: Fraction
    ratio_is_asymptotic_only: bool
    requires_metric: bool


@dataclass(frozen=True)
class FixtureCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class FixtureReport:
    checks: tuple

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def render(self):
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            detail = f"  ({c.detail})" if c.detail else ""
            lines.append(f"{status} {c.name}{detail}")
        return "\n".join(lines)


def gen_general_bse(n: int, alpha: Fraction) -> Fixture:
    """zero_cluster fixture: ratio alpha + 1 survives full cooperation.

    Nodes 0..n-2 form the zero-weight cluster, node n-1 is remote:
    w(0, n-1) = alpha + 1 and w(i, n-1) = 1 for the other cluster nodes.
    """
    if n <= 2:
        raise LabInputError(f"zero_cluster needs n > 2, got {n}")
    alpha = Fraction(alpha)
    remote = n - 1
    w = [[Fraction(0)] * n for _ in range(n)]
    w[0][remote] = w[remote][0] = alpha + 1
    for i in range(1, remote):
        w[i][remote] = w[remote][i] = Fraction(1)
    inst = Instance(host=validate_host(w), alpha=alpha)
    cluster_tree = [(0, i) for i in range(1, remote)]
    stable = Network.from_pairs(n, cluster_tree + [(0, remote)])
    reference = Network.from_pairs(n, cluster_tree + [(1, remote)])
    return Fixture(
        family="zero_cluster",
        variant=BSE,
        instance=inst,
        stable_net=stable,
        reference_net=reference,
        claimed_concept=BSE,
        expected_ratio=alpha + 1,
        ratio_is_asymptotic_only=False,
        requires_metric=False,
    )


def _star_ratio(n, a, b):
    # ((n-2)(a+b) + a) / ((n-2) b + a)
    return ((n - 2) * (a + b) + a) / ((n - 2) * b + a)


def gen_metric_star(n: int, alpha: Fraction, variant: str = PS) -> Fixture:
    """two_tier_star fixture: node 0 is the heavy leaf, 1 the old center."""
    if n < 4:
        raise LabInputError(f"two_tier_star needs n >= 4, got {n}")
    alpha = Fraction(alpha)
    if variant == PS:
        a, b = Fraction(1), 2 / alpha
    elif variant == BNE:
        root = sqrt_exact(alpha)
        if root is None:
            raise AlphaNotSquare(f"bne variant needs a square alpha, got {alpha}")
        a, b = Fraction(1), 2 / root
    elif variant == BSE:
        a, b = Fraction(1, n), 2 / alpha
    else:
        raise LabInputError(f"unknown two_tier_star variant {variant!r}")
    seed_edges = [(1, 0, a)] + [(1, i, b) for i in range(2, n)]
    host = metric_closure(n, seed_edges)
    inst = Instance(host=host, alpha=alpha)
    stable = Network.from_pairs(n, [(0, 1)] + [(0, i) for i in range(2, n)])
    reference = Network.from_pairs(n, [(0, 1)] + [(1, i) for i in range(2, n)])
    return Fixture(
        family="two_tier_star",
        variant=variant,
        instance=inst,
        stable_net=stable,
        reference_net=reference,
        claimed_concept=variant,
        expected_ratio=_star_ratio(n, a, b),
        ratio_is_asymptotic_only=False,
        requires_metric=True,
    )


def gen_metric_path(n: int, alpha: Fraction) -> Fixture:
    """cluster_path fixture: path nodes 0..x-1, zero cluster x..n-1 glued to node 0.

    Path steps weigh 1, path skips weigh 2, and x = floor(sqrt(alpha)/2),
    so alpha must be an integer perfect square >= 16 (making x >= 2 exact)
    and at most n^2 (keeping the path inside the node budget).
    """
    alpha = Fraction(alpha)
    root = sqrt_exact(alpha)
    if root is None or root.denominator != 1:
        raise AlphaNotSquare(f"cluster_path needs an integer square alpha, got {alpha}")
    if alpha < 16:
        raise LabInputError(f"cluster_path needs alpha >= 16, got {alpha}")
    if alpha > n * n:
        raise LabInputError(f"cluster_path needs alpha <= n^2, got alpha={alpha} n={n}")
    x = int(root) // 2
    w = [[Fraction(0)] * n for _ in range(n)]

    def setw(u, v, val):
        w[u][v] = w[v][u] = Fraction(val)

    for i in range(x):
        for j in range(i + 1, x):
            setw(i, j, 1 if j - i == 1 else 2)
    for c in range(x, n):
        for j in range(1, x):
            setw(c, j, 1 if j == 1 else 2)  # cluster sits at distance 0 from node 0
    host = validate_host(w)
    is_metric(host)
    inst = Instance(host=host, alpha=alpha)
    stable = Network.from_pairs(
        n, [(0, c) for c in range(x, n)] + [(i, i + 1) for i in range(x - 1)]
    )
    reference = Network.from_pairs(
        n, [(0, c) for c in range(x, n)] + [(0, i) for i in range(1, x)]
    )
    stable_cost = cost_report(inst, stable).social_total
    reference_cost = cost_report(inst, reference).social_total
    return Fixture(
        family="cluster_path",
        variant=BSE,
        instance=inst,
        stable_net=stable,
        reference_net=reference,
        claimed_concept=BSE,
        expected_ratio=stable_cost / reference_cost,
        ratio_is_asymptotic_only=True,
        requires_metric=True,
    )


def generate(family: str, n: int, alpha: Fraction, variant: str = None) -> Fixture:
    if family == "zero_cluster":
        return gen_general_bse(n, alpha)
    if family == "two_tier_star":
        return gen_metric_star(n, alpha, variant or PS)
    if family == "cluster_path":
        return gen_metric_path(n, alpha)
    raise LabInputError(f"unknown fixture family {family!r}; know {FAMILIES}")


def verify_fixture(
    fixture: Fixture, budget: Budget = None, opt_node_limit: int = 6
) -> FixtureReport:
    """Run every check the fixture claims: stability, costs, ratio, metricity.

    When the instance is small enough, also proves the optimum and checks
    that the ratio against it is at least the ratio against the reference.
    """
    inst = fixture.instance
    checks = []

    for name, net in (("stable_net", fixture.stable_net), ("reference_net", fixture.reference_net)):
        report = cost_report(inst, net)
        checks.append(
            FixtureCheck(
                name=f"{name} connected",
                passed=report.connected,
                detail=f"social={report.social_total}",
            )
        )

    if fixture.requires_metric:
        mr = is_metric(inst.host)
        checks.append(
            FixtureCheck(
                name="host metric",
                passed=mr.is_metric,
                detail="" if mr.is_metric else f"violation {mr.violation}",
            )
        )

    verdict = check(inst, fixture.stable_net, fixture.claimed_concept, budget=budget)
    detail = verdict.status
    if verdict.unstable:
        detail += f" witness={verdict.witness}"
    if verdict.inconclusive:
        detail += f" frontier={verdict.frontier}"
    checks.append(
        FixtureCheck(
            name=f"stable_net is {fixture.claimed_concept}-stable",
            passed=verdict.stable,
            detail=detail,
        )
    )

    stable_cost = cost_report(inst, fixture.stable_net).social_total
    reference_cost = cost_report(inst, fixture.reference_net).social_total
    ratio = stable_cost / reference_cost
    if fixture.ratio_is_asymptotic_only:
        checks.append(
            FixtureCheck(
                name="cost ratio recorded (asymptotic-only claim)",
                passed=True,
                detail=f"ratio={ratio}",
            )
        )
    else:
        checks.append(
            FixtureCheck(
                name="cost ratio exact",
                passed=ratio == fixture.expected_ratio,
                detail=f"ratio={ratio} expected={fixture.expected_ratio}",
            )
        )

    if inst.n <= opt_node_limit:
        opt = brute_force_opt(inst, node_limit=opt_node_limit)
        checks.append(
            FixtureCheck(
                name="optimum no cheaper than reference",
                passed=opt.cost <= reference_cost,
                detail=f"opt={opt.cost} reference={reference_cost}",
            )
        )
        ratio_vs_opt = stable_cost / opt.cost
        checks.append(
            FixtureCheck(
                name="ratio vs proven optimum at least reference ratio",
                passed=ratio_vs_opt >= ratio,
                detail=f"vs_opt={ratio_vs_opt} vs_reference={ratio}",
            )
        )
    return FixtureReport(checks=tuple(checks))
