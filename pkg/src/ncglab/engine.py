"""Internal cost evaluator used by the checkers and enumerators.

Exact mode multiplies all host weights by the lcm of their denominators
and alpha by its denominator, turning every cost comparison into integer
arithmetic: with alpha = p/q and weight scale L, the scaled cost of agent
u is  p * L*w(u, inc) + q * L*d(u, V)  and equals (q*L) times the real
cost, so all orderings are preserved and converting back to Fractions is
exact. Infinite distances stay ``math.inf`` and absorb sums/comparisons.

Inexact mode (opt-in) keeps floats and applies a comparison tolerance in
``improves``; results computed this way are non-authoritative.

Distance rows are memoized per canonical edge tuple, lazily per source,
because coalition enumeration revisits the same candidate networks many
times through different coalitions.
"""

from fractions import Fraction
from heapq import heappop, heappush
from math import lcm

from .scalars import INF, is_inf


def canonical_edges(pairs) -> tuple:
    return tuple(sorted(pairs))


class _NetState:
    __slots__ = ("adj", "rows", "sums")

    def __init__(self, n, adj):
        self.adj = adj
        self.rows = [None] * n
        self.sums = [None] * n


class CostEngine:
    def __init__(self, inst, eps=None):
        self.inst = inst
        self.n = inst.n
        self.exact = eps is None
        w = inst.host.weights
        n = self.n
        if self.exact:
            scale = lcm(*(w[u][v].denominator for u in range(n) for v in range(n)))
            self.wscale = scale
            self.p = inst.alpha.numerator
            self.q = inst.alpha.denominator
            self.unit = self.q * scale
            self.W = [[int(w[u][v] * scale) for v in range(n)] for u in range(n)]
            self.eps_scaled = 0
        else:
            self.wscale = 1
            self.p = float(inst.alpha)
            self.q = 1.0
            self.unit = 1.0
            self.W = [[float(w[u][v]) for v in range(n)] for u in range(n)]
            self.eps_scaled = float(eps)
        self._states = {}
        self._host_rows = None

    # -- network state ----------------------------------------------------

    def state(self, key: tuple) -> _NetState:
        st = self._states.get(key)
        if st is None:
            adj = [[] for _ in range(self.n)]
            W = self.W
            for u, v in key:
                adj[u].append((v, W[u][v]))
                adj[v].append((u, W[u][v]))
            st = _NetState(self.n, adj)
            self._states[key] = st
        return st

    def clear_cache(self):
        self._states.clear()

    def _dijkstra(self, adj, source):
        dist = [INF] * self.n
        dist[source] = 0
        heap = [(0, source)]
        pop, push = heappop, heappush
        while heap:
            d, u = pop(heap)
            if d > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    push(heap, (nd, v))
        return dist

    def row(self, key: tuple, u: int):
        st = self.state(key)
        r = st.rows[u]
        if r is None:
            r = self._dijkstra(st.adj, u)
            st.rows[u] = r
        return r

    def dist_sum(self, key: tuple, u: int):
        st = self.state(key)
        s = st.sums[u]
        if s is None:
            s = sum(self.row(key, u))
            st.sums[u] = s
        return s

    # -- host lower bounds --------------------------------------------------

    def host_rows(self):
        """Distance rows of the full host: a lower bound on any subgraph's."""
        if self._host_rows is None:
            n = self.n
            adj = [
                [(v, self.W[u][v]) for v in range(n) if v != u] for u in range(n)
            ]
            self._host_rows = [self._dijkstra(adj, u) for u in range(n)]
        return self._host_rows

    def host_dist_sum(self, u: int):
        return sum(self.host_rows()[u])

    # -- costs (scaled) -----------------------------------------------------

    def incident_weight(self, key: tuple, u: int):
        st = self.state(key)
        return sum(w for _, w in st.adj[u])

    def member_cost(self, key: tuple, u: int):
        return self.p * self.incident_weight(key, u) + self.q * self.dist_sum(key, u)

    def social_cost(self, key: tuple):
        W = self.W
        edge_part = sum(W[u][v] for u, v in key)
        dist_part = sum(self.dist_sum(key, u) for u in range(self.n))
        return 2 * self.p * edge_part + self.q * dist_part

    def to_cost(self, scaled):
        """Scaled value back to an exact Fraction (or inf / float)."""
        if is_inf(scaled):
            return INF
        if self.exact:
            return Fraction(scaled, self.unit)
        return scaled / self.unit

    # -- comparisons ----------------------------------------------------------

    def improves(self, new_scaled, old_scaled) -> bool:
        """Strict improvement, honoring the tolerance in inexact mode."""
        if is_inf(new_scaled):
            return False
        if is_inf(old_scaled):
            return True
        return new_scaled < old_scaled - self.eps_scaled

    # -- incremental helpers ----------------------------------------------------

    def row_after_add(self, key: tuple, u: int, v: int):
        """Distance row of u in the network plus edge {u,v}.

        With a single new edge incident to u, any shortest path from u
        uses it at most once and only as the first step, so relaxing
        against v's old row is exact. Does not materialize the new state.
        """
        ru = self.row(key, u)
        rv = self.row(key, v)
        w = self.W[u][v]
        return [min(a, w + b) for a, b in zip(ru, rv)]

    def social_after_add(self, key: tuple, u: int, v: int):
        """Social cost of the network plus edge {u,v}, via all-pairs relax."""
        n = self.n
        w = self.W[u][v]
        rows = [self.row(key, x) for x in range(n)]
        ru, rv = rows[u], rows[v]
        dist_part = 0
        for x in range(n):
            rx = rows[x]
            xu = rx[u]
            xv = rx[v]
            dist_part += sum(
                min(rx[y], xu + w + rv[y], xv + w + ru[y]) for y in range(n)
            )
        edge_part = sum(self.W[a][b] for a, b in key) + w
        return 2 * self.p * edge_part + self.q * dist_part
