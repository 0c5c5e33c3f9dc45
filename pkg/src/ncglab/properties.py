"""Seeded randomized property suite over the module invariants.

Each property draws its own deterministic stream of instances and
networks, counts violations, and shrinks the first counterexample by
greedily dropping edges, then nodes, while the failure persists. A clean
run is a (statistical) certificate that the exact checkers, the cost
identities, and the proven structural bounds agree on random data.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from .dynamics import EQUILIBRIUM, FIRST_FOUND, run_dynamics
from .engine import CostEngine, canonical_edges
from .model import (
    Instance,
    Network,
    cost_report,
    shortest_distances,
    shortest_path_tree,
    spanner_stretch,
    star_social_cost,
    validate_host,
)
from .optimum import _minimum_spanning_tree, brute_force_opt
from .randomgen import random_instance
from .scalars import is_inf
from .stability import best_single_removal


@dataclass(frozen=True)
class PropertyResult:
    name: str
    trials: int
    failures: int
    counterexample: str = None
    note: str = None

    @property
    def ok(self):
        return self.failures == 0


@dataclass(frozen=True)
class PropertyReport:
    seed: int
    results: tuple

    @property
    def ok(self):
        return all(r.ok for r in self.results)

    def render(self) -> str:
        lines = [f"property suite seed={self.seed}"]
        for r in self.results:
            status = "PASS" if r.ok else "FAIL"
            line = f"{status} {r.name}: {r.trials} trials, {r.failures} failures"
            if r.note:
                line += f" ({r.note})"
            if r.counterexample:
                line += f"\n  counterexample: {r.counterexample}"
            lines.append(line)
        return "\n".join(lines)


def _random_connected_network(n, rng, extra_p=0.3):
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add((min(order[i], order[j]), max(order[i], order[j])))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < extra_p:
                edges.add((u, v))
    return Network(n=n, edges=canonical_edges(edges))


def _drop_node(inst, net, x):
    keep = [u for u in range(inst.n) if u != x]
    index = {u: i for i, u in enumerate(keep)}
    w = [[inst.host.weights[u][v] for v in keep] for u in keep]
    sub_inst = Instance(host=validate_host(w), alpha=inst.alpha)
    sub_net = Network.from_pairs(
        len(keep),
        ((index[u], index[v]) for u, v in net.edges if u != x and v != x),
    )
    return sub_inst, sub_net


def shrink_counterexample(inst, net, fails):
    """Greedy shrink: drop edges, then nodes, while fails(inst, net) holds."""
    changed = True
    while changed:
        changed = False
        for e in net.edges:
            cand = Network(n=net.n, edges=canonical_edges(set(net.edges) - {e}))
            if fails(inst, cand):
                net = cand
                changed = True
                break
    changed = True
    while changed and inst.n > 2:
        changed = False
        for x in range(inst.n):
            sub_inst, sub_net = _drop_node(inst, net, x)
            if fails(sub_inst, sub_net):
                inst, net = sub_inst, sub_net
                changed = True
                break
    return inst, net


def _describe(inst, net):
    w = [[str(x) for x in row] for row in inst.host.weights]
    return f"alpha={inst.alpha} weights={w} edges={list(net.edges)}"


def _mixed_instance(rng, n, metric_only=False):
    models = ("tree", "euclidean") if metric_only else ("uniform", "tree", "euclidean")
    model = models[rng.randrange(len(models))]
    alpha = Fraction(rng.randint(1, 12), rng.choice([1, 2, 4]))
    return random_instance(n, model, rng.randrange(10**6), alpha)


def check_single_removal_dominance(seed, trials):
    """If deleting any set of an agent's edges pays, one deletion pays."""
    rng = random.Random(f"single-removal-dominance:{seed}")
    failures = 0
    example = None
    done = 0
    for _ in range(trials):
        n = rng.randint(3, 6)
        inst = _mixed_instance(rng, n)
        net = _random_connected_network(n, rng)
        engine = CostEngine(inst)
        u = rng.randrange(n)
        incident = sorted(e for e in net.edges if u in e)
        if not incident:
            continue
        size = rng.randint(1, len(incident))
        subset = sorted(rng.sample(incident, size))
        done += 1
        base = engine.member_cost(net.edges, u)
        after = engine.member_cost(canonical_edges(set(net.edges) - set(subset)), u)
        if not engine.improves(after, base):
            continue
        best = best_single_removal(inst, net, u, engine=engine)
        if best is None or not (best[1] < 0):
            failures += 1
            if example is None:

                def fails(i, g):
                    e2 = CostEngine(i)
                    inc = sorted(e for e in g.edges if u in e)
                    sub = [e for e in subset if e in inc]
                    if not sub:
                        return False
                    b = e2.member_cost(g.edges, u)
                    a = e2.member_cost(canonical_edges(set(g.edges) - set(sub)), u)
                    if not e2.improves(a, b):
                        return False
                    bs = best_single_removal(i, g, u, engine=e2)
                    return bs is None or not (bs[1] < 0)

                si, sg = shrink_counterexample(inst, net, fails)
                example = f"agent={u} subset={subset} {_describe(si, sg)}"
    return PropertyResult(
        name="single-removal dominance",
        trials=done,
        failures=failures,
        counterexample=example,
    )


def check_tree_distance_bound(seed, trials):
    """sum_u d_G(u,V) <= sum_u d_T(u,V) <= 2(n-1) d_G(z,V) for every root z."""
    rng = random.Random(f"tree-distance-bound:{seed}")
    failures = 0
    example = None
    for _ in range(trials):
        n = rng.randint(3, 6)
        inst = _mixed_instance(rng, n)
        net = _random_connected_network(n, rng)
        dm = shortest_distances(net, inst.host)
        total_g = sum(dm.row_sum(u) for u in range(n))
        for z in range(n):
            tree = shortest_path_tree(net, inst.host, z)
            dt = shortest_distances(tree, inst.host)
            total_t = sum(dt.row_sum(u) for u in range(n))
            if not (total_g <= total_t <= 2 * (n - 1) * dm.row_sum(z)):
                failures += 1
                if example is None:
                    example = f"z={z} {_describe(inst, net)}"
                break
    return PropertyResult(
        name="shortest-path-tree distance bound", trials=trials, failures=failures,
        counterexample=example,
    )


def check_metric_distance_ratio(seed, trials):
    """Any connected subgraph of a metric host: distance cost <= 2(n-1) * optimum's."""
    rng = random.Random(f"metric-distance-ratio:{seed}")
    failures = 0
    example = None
    for _ in range(trials):
        n = rng.randint(3, 5)
        inst = _mixed_instance(rng, n, metric_only=True)
        net = _random_connected_network(n, rng)
        opt = brute_force_opt(inst)
        d_net = sum(cost_report(inst, net).distance_costs)
        d_opt = sum(cost_report(inst, opt.network).distance_costs)
        if d_net > 2 * (n - 1) * d_opt:
            failures += 1
            if example is None:
                example = _describe(inst, net)
    return PropertyResult(
        name="metric connected-subgraph distance ratio <= 2(n-1)",
        trials=trials,
        failures=failures,
        counterexample=example,
    )


def check_tree_edge_cost_ratio(seed, trials):
    """Any spanning tree of a metric host: edge weight <= n * optimum's."""
    rng = random.Random(f"tree-edge-cost-ratio:{seed}")
    failures = 0
    example = None
    for _ in range(trials):
        n = rng.randint(3, 5)
        inst = _mixed_instance(rng, n, metric_only=True)
        tree = _random_connected_network(n, rng, extra_p=0.0)
        opt = brute_force_opt(inst)
        w = inst.host.weights
        w_tree = sum(w[u][v] for u, v in tree.edges)
        w_opt = sum(w[u][v] for u, v in opt.network.edges)
        if w_tree > n * w_opt:
            failures += 1
            if example is None:
                example = _describe(inst, tree)
    return PropertyResult(
        name="metric tree edge-cost ratio <= n",
        trials=trials,
        failures=failures,
        counterexample=example,
    )


def check_stable_network_bounds(seed, trials):
    """Improving-response ps endpoints satisfy the stretch and edge-cost bounds."""
    rng = random.Random(f"stable-network-bounds:{seed}")
    failures = 0
    converged = 0
    example = None
    for _ in range(trials):
        n = rng.randint(3, 6)
        inst = _mixed_instance(rng, n)
        start = Network(n=n, edges=_minimum_spanning_tree(inst))
        trace = run_dynamics(inst, start, "ps", FIRST_FOUND, max_steps=400)
        if trace.outcome != EQUILIBRIUM:
            continue
        converged += 1
        net = trace.final
        alpha = inst.alpha
        stretch = spanner_stretch(net, inst.host)
        report = cost_report(inst, net)
        edge_total = sum(report.edge_costs) / 2
        dist_total = sum(report.distance_costs)
        ok = (
            not is_inf(stretch)
            and stretch <= alpha + 1
            and edge_total <= (2 * alpha / (n - 1) + 1) * dist_total
        )
        if not ok:
            failures += 1
            if example is None:
                example = _describe(inst, net)
    return PropertyResult(
        name="pairwise-stable endpoint bounds (stretch, edge cost)",
        trials=trials,
        failures=failures,
        counterexample=example,
        note=f"{converged} converged",
    )


def check_cost_identities(seed, trials):
    """Social total equals the agent sum and the 2aw(E)+dist closed form;
    stars match the star closed form."""
    rng = random.Random(f"cost-identities:{seed}")
    failures = 0
    example = None
    for _ in range(trials):
        n = rng.randint(2, 6)
        inst = _mixed_instance(rng, n)
        net = _random_connected_network(n, rng)
        report = cost_report(inst, net)
        w_total = sum(inst.host.weights[u][v] for u, v in net.edges)
        direct = 2 * inst.alpha * w_total + sum(report.distance_costs)
        if report.social_total != sum(report.totals) or report.social_total != direct:
            failures += 1
            if example is None:
                example = _describe(inst, net)
            continue
        center = rng.randrange(n)
        star = Network.from_pairs(
            n, ((center, v) for v in range(n) if v != center)
        )
        star_report = cost_report(inst, star)
        star_w = sum(inst.host.weights[u][v] for u, v in star.edges)
        if star_report.social_total != star_social_cost(n, inst.alpha, star_w):
            failures += 1
            if example is None:
                example = f"star center={center} {_describe(inst, star)}"
    return PropertyResult(
        name="cost identities (social sum, star closed form)",
        trials=trials,
        failures=failures,
        counterexample=example,
    )


def property_suite(
    seed: int = 0,
    removal_trials: int = 10000,
    tree_trials: int = 1000,
    ratio_trials: int = 300,
    edge_ratio_trials: int = 300,
    stable_trials: int = 150,
    identity_trials: int = 300,
) -> PropertyReport:
    results = (
        check_single_removal_dominance(seed, removal_trials),
        check_tree_distance_bound(seed, tree_trials),
        check_metric_distance_ratio(seed, ratio_trials),
        check_tree_edge_cost_ratio(seed, edge_ratio_trials),
        check_stable_network_bounds(seed, stable_trials),
        check_cost_identities(seed, identity_trials),
    )
    return PropertyReport(seed=seed, results=results)
