"""Core model: hosts, instances, networks, distances and the cost function.

All values are immutable after construction and every operation is a pure
function of its inputs, so everything here is safe to evaluate concurrently
over disjoint inputs.

Conventions baked in here:
  * weights are non-negative exact rationals; zero weights between distinct
    nodes are allowed, so metric checks accept pseudometrics;
  * disconnection is a value (infinite distance / infinite social cost),
    never an exception, except where a tree is structurally required;
  * shortest-path ties break toward the smallest-index predecessor so
    derived trees and witnesses are deterministic.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from heapq import heappop, heappush

from .errors import (
    AsymmetricWeight,
    DisconnectedNetwork,
    DisconnectedSeed,
    HostTooSmall,
    NegativeWeight,
    NonzeroDiagonal,
)
from .scalars import INF, is_inf


class MetricStatus(Enum):
    UNCHECKED = "unchecked"
    METRIC = "verified-metric"
    NONMETRIC = "verified-nonmetric"


@dataclass(frozen=True)
class HostGraph:
    """Complete weighted graph on nodes 0..n-1.

    ``metric`` is a verification cache: UNCHECKED until is_metric runs,
    then pinned to the (deterministic) verdict. Updating the cache is the
    only mutation this type ever sees.
    """

    n: int
    weights: tuple
    metric: MetricStatus = MetricStatus.UNCHECKED

    def weight(self, u: int, v: int) -> Fraction:
        return self.weights[u][v]


@dataclass(frozen=True)
class Instance:
    host: HostGraph
    alpha: Fraction

    def __post_init__(self):
        if not isinstance(self.alpha, Fraction):
            object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    @property
    def n(self) -> int:
        return self.host.n


@dataclass(frozen=True)
class Network:
    """Subgraph of a complete host: a canonical sorted tuple of (u, v) pairs.

    Canonical form (u < v, lexicographically sorted, no duplicates) makes
    equality, hashing and fingerprinting exact.
    """

    n: int
    edges: tuple
    _adj: dict = field(default=None, compare=False, repr=False)
    _eset: frozenset = field(default=None, compare=False, repr=False)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "Network":
        canon = set()
        for u, v in pairs:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside node range 0..{n - 1}")
            canon.add((u, v) if u < v else (v, u))
        return cls(n=n, edges=tuple(sorted(canon)))

    @classmethod
    def empty(cls, n: int) -> "Network":
        return cls(n=n, edges=())

    @classmethod
    def complete(cls, n: int) -> "Network":
        return cls.from_pairs(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    def adjacency(self) -> dict:
        if self._adj is None:
            adj = {u: [] for u in range(self.n)}
            for u, v in self.edges:
                adj[u].append(v)
                adj[v].append(u)
            for u in adj:
                adj[u].sort()
            object.__setattr__(self, "_adj", adj)
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        pair = (u, v) if u < v else (v, u)
        return pair in self.edge_set()

    def edge_set(self) -> frozenset:
        if self._eset is None:
            object.__setattr__(self, "_eset", frozenset(self.edges))
        return self._eset

    def degree(self, u: int) -> int:
        return len(self.adjacency()[u])


@dataclass(frozen=True)
class DistanceMatrix:
    dist: tuple
    connected: bool

    def __getitem__(self, u: int):
        return self.dist[u]

    def row_sum(self, u: int):
        return sum(self.dist[u])


@dataclass(frozen=True)
class CostBreakdown:
    edge_costs: tuple
    distance_costs: tuple
    totals: tuple
    social_total: object

    @property
    def connected(self) -> bool:
        return not is_inf(self.social_total)


@dataclass(frozen=True)
class MetricReport:
    is_metric: bool
    violation: tuple = None  # (u, z, v) with w(u,v) > w(u,z) + w(z,v)
    slack: Fraction = None


def validate_host(weights) -> HostGraph:
    """Build a HostGraph from a square matrix, verifying all invariants."""
    n = len(weights)
    if n < 2:
        raise HostTooSmall(n)
    rows = []
    for u in range(n):
        if len(weights[u]) != n:
            raise ValueError(f"row {u} has length {len(weights[u])}, expected {n}")
        rows.append(tuple(Fraction(w) for w in weights[u]))
    for u in range(n):
        if rows[u][u] != 0:
            raise NonzeroDiagonal(u)
        for v in range(u + 1, n):
            if rows[u][v] != rows[v][u]:
                raise AsymmetricWeight(u, v)
            if rows[u][v] < 0:
                raise NegativeWeight(u, v)
    return HostGraph(n=n, weights=tuple(rows))


def is_metric(host: HostGraph) -> MetricReport:
    """All-triples triangle inequality check (pseudometric: zeros allowed).

    Reports the lexicographically smallest violating ordered triple
    (u, z, v), i.e. the first w(u,v) > w(u,z) + w(z,v), and caches the
    verdict on the host.
    """
    n, w = host.n, host.weights
    for u in range(n):
        for z in range(n):
            if z == u:
                continue
            wu_z = w[u][z]
            row_z = w[z]
            row_u = w[u]
            for v in range(n):
                if v == u or v == z:
                    continue
                if row_u[v] > wu_z + row_z[v]:
                    object.__setattr__(host, "metric", MetricStatus.NONMETRIC)
                    return MetricReport(
                        is_metric=False,
                        violation=(u, z, v),
                        slack=row_u[v] - wu_z - row_z[v],
                    )
    object.__setattr__(host, "metric", MetricStatus.METRIC)
    return MetricReport(is_metric=True)


def ensure_metric_checked(host: HostGraph) -> bool:
    if host.metric is MetricStatus.UNCHECKED:
        is_metric(host)
    return host.metric is MetricStatus.METRIC


def _dijkstra(n: int, adj, source: int):
    """Single-source shortest paths; adj[u] yields (v, weight). Exact."""
    dist = [INF] * n
    dist[source] = Fraction(0)
    seen = [False] * n
    heap = [(Fraction(0), source)]
    while heap:
        d, u = heappop(heap)
        if seen[u]:
            continue
        seen[u] = True
        for v, w in adj[u]:
            if seen[v]:
                continue
            nd = d + w
            if is_inf(dist[v]) or nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


def _weighted_adjacency(net: Network, host: HostGraph):
    adj = [[] for _ in range(net.n)]
    for u, v in net.edges:
        w = host.weights[u][v]
        adj[u].append((v, w))
        adj[v].append((u, w))
    return adj


def shortest_distances(net: Network, host: HostGraph) -> DistanceMatrix:
    """Exact all-pairs shortest paths of the network; inf marks unreachable."""
    if net.n != host.n:
        raise ValueError("network and host disagree on node count")
    adj = _weighted_adjacency(net, host)
    rows = tuple(tuple(_dijkstra(net.n, adj, s)) for s in range(net.n))
    connected = all(not is_inf(d) for row in rows for d in row)
    return DistanceMatrix(dist=rows, connected=connected)


def metric_closure(n: int, weighted_edges) -> HostGraph:
    """Host whose weights are the shortest-path distances of a seed graph.

    The closure of any connected non-negative seed satisfies the triangle
    inequality (distances between distinct nodes may be zero), so the
    result is tagged verified-metric.
    """
    adj = [[] for _ in range(n)]
    for u, v, w in weighted_edges:
        w = Fraction(w)
        if w < 0:
            raise NegativeWeight(u, v)
        adj[u].append((v, w))
        adj[v].append((u, w))
    rows = []
    for s in range(n):
        dist = _dijkstra(n, adj, s)
        if any(is_inf(d) for d in dist):
            raise DisconnectedSeed(f"seed graph does not reach all nodes from {s}")
        rows.append(tuple(dist))
    return HostGraph(n=n, weights=tuple(rows), metric=MetricStatus.METRIC)


def cost_report(inst: Instance, net: Network) -> CostBreakdown:
    """Per-agent and social cost of a network under the bilateral model.

    Each agent pays alpha times the weight of every incident edge (both
    endpoints pay) plus the sum of its shortest-path distances to all
    nodes; the social total is the sum over agents, equivalently
    2*alpha*w(E) + total distance cost.
    """
    host, alpha = inst.host, inst.alpha
    dm = shortest_distances(net, host)
    edge_costs = []
    for u in range(net.n):
        inc = sum((host.weights[u][v] for v in net.adjacency()[u]), Fraction(0))
        edge_costs.append(alpha * inc)
    distance_costs = [dm.row_sum(u) for u in range(net.n)]
    totals = [e + d for e, d in zip(edge_costs, distance_costs)]
    social = sum(totals)
    return CostBreakdown(
        edge_costs=tuple(edge_costs),
        distance_costs=tuple(distance_costs),
        totals=tuple(totals),
        social_total=social,
    )


def star_social_cost(n: int, alpha: Fraction, total_weight: Fraction) -> Fraction:
    """Closed form for the social cost of any star: (2n - 2 + 2*alpha) * w(E).

    Independent cross-check for cost_report on stars.
    """
    if n < 2:
        raise HostTooSmall(n)
    return (2 * n - 2 + 2 * Fraction(alpha)) * Fraction(total_weight)


def spanner_stretch(net: Network, host: HostGraph):
    """max over pairs of d_net(u,v) / d_host(u,v).

    Host distances are shortest paths over the full host, so non-metric
    hosts are handled correctly. Pairs at host distance zero must also be
    at network distance zero and are skipped; otherwise the stretch is
    infinite, matching the convention that a k-spanner must preserve
    zero distances.
    """
    d_net = shortest_distances(net, host)
    d_host = shortest_distances(Network.complete(host.n), host)
    worst = Fraction(0)
    for u in range(host.n):
        for v in range(u + 1, host.n):
            dh = d_host.dist[u][v]
            dg = d_net.dist[u][v]
            if dh == 0:
                if is_inf(dg) or dg != 0:
                    return INF
                continue
            if is_inf(dg):
                return INF
            ratio = dg / dh
            if ratio > worst:
                worst = ratio
    return worst


def shortest_path_tree(net: Network, host: HostGraph, z: int) -> Network:
    """Tree T within the network preserving all distances from z.

    Parent of u is the smallest-index neighbor v with
    d(z,v) + w(v,u) = d(z,u), so the tree is deterministic.
    """
    adj = _weighted_adjacency(net, host)
    dist = _dijkstra(net.n, adj, z)
    if any(is_inf(d) for d in dist):
        raise DisconnectedNetwork(f"no spanning tree from {z}: network disconnected")
    edges = []
    for u in range(net.n):
        if u == z:
            continue
        parent = None
        for v in net.adjacency()[u]:
            if not is_inf(dist[v]) and dist[v] + host.weights[v][u] == dist[u]:
                parent = v
                break  # neighbors sorted ascending, first hit is smallest
        if parent is None:
            raise DisconnectedNetwork(f"no shortest-path predecessor for {u}")
        edges.append((u, parent))
    return Network.from_pairs(net.n, edges)
