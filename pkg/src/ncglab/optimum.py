"""Social optimum: exact enumeration at small n, heuristic upper bound otherwise."""

from dataclasses import dataclass
from fractions import Fraction
import random

from .engine import CostEngine, canonical_edges
from .errors import BoundViolation, InstanceTooLarge, NotProvenOptimal
from .model import Instance, Network, spanner_stretch
from .scalars import is_inf


@dataclass(frozen=True)
class OptResult:
    network: Network
    cost: Fraction
    proven: bool  # True only after exhaustive enumeration


def _all_pairs(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _connected_mask(n, pairs, mask):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n
    for i, (u, v) in enumerate(pairs):
        if mask >> i & 1:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                components -= 1
    return components == 1


def brute_force_opt(inst: Instance, node_limit: int = 7, engine: CostEngine = None):
    """Minimum social cost over all edge subsets, proven by enumeration.

    Disconnected subsets cost infinity and are skipped via union-find.
    Subsets whose edge spend plus the universal distance floor (full-host
    distances) already exceed the best cost seen are skipped without a
    shortest-path run; seeding the bound with the spanning tree's cost
    makes that prune bite from the start. Ties break toward the
    canonically smallest edge set.
    """
    n = inst.n
    if n > node_limit:
        raise InstanceTooLarge(n, node_limit, "exact optimum")
    engine = engine or CostEngine(inst)
    pairs = _all_pairs(n)
    weights = [engine.W[u][v] for u, v in pairs]
    dist_floor = engine.q * sum(engine.host_dist_sum(u) for u in range(n))
    best_key = _minimum_spanning_tree(inst)
    best_cost = engine.social_cost(best_key)
    two_p = 2 * engine.p
    for mask in range(1 << len(pairs)):
        edge_sum = 0
        bits = mask
        i = 0
        while bits:
            if bits & 1:
                edge_sum += weights[i]
            bits >>= 1
            i += 1
        if two_p * edge_sum + dist_floor > best_cost:
            continue
        if not _connected_mask(n, pairs, mask):
            continue
        key = tuple(pairs[i] for i in range(len(pairs)) if mask >> i & 1)
        cost = engine.social_cost(key)
        if cost < best_cost or (cost == best_cost and key < best_key):
            best_cost = cost
            best_key = key
    return OptResult(
        network=Network(n=n, edges=best_key),
        cost=engine.to_cost(best_cost),
        proven=True,
    )


def _minimum_spanning_tree(inst):
    n = inst.n
    w = inst.host.weights
    edges = sorted(_all_pairs(n), key=lambda e: (w[e[0]][e[1]], e))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append((u, v))
    return canonical_edges(chosen)


def _best_star(inst, engine):
    n = inst.n
    best = None
    for center in range(n):
        key = canonical_edges(
            (min(center, v), max(center, v)) for v in range(n) if v != center
        )
        cost = engine.social_cost(key)
        if best is None or cost < best[0]:
            best = (cost, key)
    return best[1]


def _local_search(inst, engine, start_key):
    """Steepest descent over single-edge adds, drops, and swaps."""
    n = inst.n
    pairs = _all_pairs(n)
    key = start_key
    cost = engine.social_cost(key)
    while True:
        best_cost, best_key = cost, key
        eset = set(key)
        non_edges = [e for e in pairs if e not in eset]
        for e in non_edges:
            c = engine.social_after_add(key, e[0], e[1])
            if c < best_cost:
                best_cost, best_key = c, canonical_edges(eset | {e})
        for e in key:
            smaller = canonical_edges(eset - {e})
            c = engine.social_cost(smaller)
            if c < best_cost:
                best_cost, best_key = c, smaller
            for f in non_edges:
                c2 = engine.social_after_add(smaller, f[0], f[1])
                if c2 < best_cost:
                    best_cost, best_key = c2, canonical_edges((eset - {e}) | {f})
        if best_cost >= cost:
            return cost, key
        cost, key = best_cost, best_key


def _random_spanning_tree(n, rng):
    nodes = list(range(n))
    rng.shuffle(nodes)
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        edges.append((min(nodes[i], nodes[j]), max(nodes[i], nodes[j])))
    return canonical_edges(edges)


def heuristic_opt(inst: Instance, seed: int = 0, restarts: int = 3, engine=None):
    """Connected upper bound on the optimum: best of MST, best star, and
    local search from each plus seeded random spanning trees.

    The returned cost is >= the true optimum by construction, so ratios
    computed against it underestimate the instance's true ratio.
    """
    engine = engine or CostEngine(inst)
    rng = random.Random(seed)
    starts = [_minimum_spanning_tree(inst), _best_star(inst, engine)]
    starts += [_random_spanning_tree(inst.n, rng) for _ in range(restarts)]
    best_cost, best_key = None, None
    for start in starts:
        cost, key = _local_search(inst, engine, start)
        if best_cost is None or cost < best_cost or (cost == best_cost and key < best_key):
            best_cost, best_key = cost, key
    return OptResult(
        network=Network(n=inst.n, edges=best_key),
        cost=engine.to_cost(best_cost),
        proven=False,
    )


def opt_spanner_check(inst: Instance, opt: OptResult):
    """Stretch of a proven optimum; raises BoundViolation above alpha + 1."""
    if not opt.proven:
        raise NotProvenOptimal("spanner guarantee only holds for proven optima")
    stretch = spanner_stretch(opt.network, inst.host)
    bound = inst.alpha + 1
    if is_inf(stretch) or stretch > bound:
        raise BoundViolation(
            f"optimum stretch {stretch} exceeds {bound}",
            diagnostics={
                "alpha": str(inst.alpha),
                "edges": list(opt.network.edges),
                "stretch": str(stretch),
            },
        )
    return stretch
