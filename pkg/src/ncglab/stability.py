"""Moves, verdicts and the stability checkers for the three cooperation levels.

Pairwise stability (ps): no agent profits from deleting one of its edges,
and no pair profits from jointly adding the edge between them. Neighborhood
equilibrium (bne): no single agent can profit by simultaneously deleting
any subset of its edges and opening edges to partners who each strictly
profit from their one new edge. Strong equilibrium (bse): no coalition can
jointly delete incident edges and add edges inside the coalition so that
every member strictly profits.

The coalition search is exhaustive modulo prunes that only ever discard
moves proven non-improving, so a Stable verdict certifies exhaustion:

  * dead agents: an agent whose current cost is at most the universal
    lower bound (zero edge spend plus full-host distances) can never
    strictly improve in any reachable network, hence never joins an
    improving coalition;
  * per-addition-set bounds: with the addition set A fixed, every
    candidate result is a subgraph of G+A, so distances are bounded below
    by those of G+A while edge savings are bounded by the weight of all
    currently incident edges; a member whose optimistic gain is still
    non-positive rules out every removal subset under this A;
  * active coalitions: a move leaving some member untouched is the same
    move under the smaller coalition, which was enumerated earlier
    (coalitions are visited by increasing size, then lexicographically),
    so only moves touching every member are evaluated.

Pruned moves never count against the move budget and cannot change which
witness is found first, because only non-improving moves are pruned.
Witnesses are deterministic: the first improving move in the documented
canonical enumeration order (for ps this is the lexicographically smallest
violating move).
"""

from dataclasses import dataclass
from itertools import combinations

from .engine import CostEngine, canonical_edges
from .errors import (
    AdditionAlreadyPresent,
    AdditionOutsideCoalition,
    RemovalNotPresent,
    RemovalOutsideCoalition,
)
from .model import Instance, Network
from .scalars import INF, is_inf

PS = "ps"
BNE = "bne"
BSE = "bse"
CONCEPTS = (PS, BNE, BSE)

STABLE = "stable"
UNSTABLE = "unstable"
INCONCLUSIVE = "inconclusive"


def _pair(e):
    a, b = e
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Move:
    """A joint strategy change: coalition, removed edges, added edges.

    Removed edges need at least one endpoint in the coalition (removal is
    unilateral); added edges need both endpoints in the coalition (adding
    is bilateral and both pay).
    """

    coalition: tuple
    removals: tuple
    additions: tuple
    concept: str

    @classmethod
    def make(cls, coalition, removals=(), additions=(), concept=BSE):
        return cls(
            coalition=tuple(sorted(coalition)),
            removals=tuple(sorted(_pair(e) for e in removals)),
            additions=tuple(sorted(_pair(e) for e in additions)),
            concept=concept,
        )


@dataclass(frozen=True)
class Budget:
    """Caps for the coalition search; exceeding any yields Inconclusive."""

    max_coalition: int = None
    max_changes: int = None  # |removals| + |additions| per move
    max_moves: int = None  # evaluated candidate moves


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: Move = None
    deltas: tuple = None  # ((member, cost delta), ...) for the witness
    moves_evaluated: int = 0
    frontier: str = None  # what was left unexplored when inconclusive

    @property
    def stable(self):
        return self.status == STABLE

    @property
    def unstable(self):
        return self.status == UNSTABLE

    @property
    def inconclusive(self):
        return self.status == INCONCLUSIVE


def apply_move(net: Network, move: Move) -> Network:
    """Return the network after the move; the input is untouched."""
    edges = set(net.edges)
    members = set(move.coalition)
    for e in move.removals:
        if e not in edges:
            raise RemovalNotPresent(f"removal {e} not in network")
        if e[0] not in members and e[1] not in members:
            raise RemovalOutsideCoalition(f"removal {e} has no endpoint in coalition")
        edges.discard(e)
    for e in move.additions:
        if e in set(net.edges):
            raise AdditionAlreadyPresent(f"addition {e} already in network")
        if e[0] not in members or e[1] not in members:
            raise AdditionOutsideCoalition(f"addition {e} not inside coalition")
        edges.add(e)
    return Network(n=net.n, edges=canonical_edges(edges))


def move_deltas(inst: Instance, net: Network, move: Move, engine: CostEngine = None):
    """Exact per-member cost deltas (after minus before) of applying a move."""
    engine = engine or CostEngine(inst)
    before = net.edges
    after = apply_move(net, move).edges
    out = []
    for m in move.coalition:
        old = engine.member_cost(before, m)
        new = engine.member_cost(after, m)
        if is_inf(new):
            delta = INF
        elif is_inf(old):
            delta = -INF
        else:
            delta = engine.to_cost(new - old)
        out.append((m, delta))
    return tuple(out)


def is_improving(inst: Instance, net: Network, move: Move, engine: CostEngine = None):
    """True iff the move strictly improves every coalition member."""
    engine = engine or CostEngine(inst)
    after = apply_move(net, move).edges
    for m in move.coalition:
        if not engine.improves(
            engine.member_cost(after, m), engine.member_cost(net.edges, m)
        ):
            return False
    return True


class _BudgetStop(Exception):
    pass


class _Search:
    """Shared state for one checker invocation over one network."""

    def __init__(self, inst, net, budget=None, engine=None):
        if net.n != inst.n:
            raise ValueError("network and instance disagree on node count")
        self.inst = inst
        self.net = net
        self.engine = engine or CostEngine(inst)
        self.budget = budget or Budget()
        eng = self.engine
        self.gkey = net.edges
        n = inst.n
        self.base = [eng.member_cost(self.gkey, u) for u in range(n)]
        self.base_dist = [eng.dist_sum(self.gkey, u) for u in range(n)]
        self.rem_inc = [eng.incident_weight(self.gkey, u) for u in range(n)]
        # dead agents can never strictly improve anywhere (see module doc)
        self.alive = [
            eng.improves(eng.q * eng.host_dist_sum(u), self.base[u]) for u in range(n)
        ]
        # spend_cap[u]: strict upper bound on what u can pay for additions in
        # any improving move (edge savings plus distance slack down to the
        # full-host floor); an added edge neither endpoint can afford can be
        # filtered out before subset enumeration
        self.spend_cap = []
        for u in range(n):
            d_g = self.base_dist[u]
            if is_inf(d_g):
                self.spend_cap.append(INF)
            else:
                self.spend_cap.append(
                    eng.p * self.rem_inc[u]
                    + eng.q * (d_g - eng.host_dist_sum(u))
                    - eng.eps_scaled
                )
        self.evaluated = 0
        self.budget_skipped = False
        self.frontier = None

    def _affordable(self, u, v):
        price = self.engine.p * self.engine.W[u][v]
        cap_u, cap_v = self.spend_cap[u], self.spend_cap[v]
        ok_u = is_inf(cap_u) or price < cap_u
        ok_v = is_inf(cap_v) or price < cap_v
        return ok_u and ok_v

    def _note_skip(self, what):
        self.budget_skipped = True
        if self.frontier is None:
            self.frontier = what

    def _count_eval(self):
        self.evaluated += 1
        cap = self.budget.max_moves
        if cap is not None and self.evaluated > cap:
            self._note_skip(f"move budget {cap} exhausted")
            raise _BudgetStop()

    def _gain_bound(self, m, plus_key, added_inc):
        """Optimistic gain of member m for any removal set under fixed A.

        None means m provably cannot improve under this A; INF means the
        bound is vacuous (current cost infinite, candidate finite).
        """
        eng = self.engine
        d_plus = eng.dist_sum(plus_key, m)
        if is_inf(d_plus):
            return None  # still disconnected with every addition in place
        d_g = self.base_dist[m]
        if is_inf(d_g):
            return INF
        return eng.p * self.rem_inc[m] - eng.p * added_inc + eng.q * (d_g - d_plus)

    def _bound_allows(self, bound):
        return bound is not None and (is_inf(bound) or bound > self.engine.eps_scaled)

    def _deltas_for(self, move):
        return move_deltas(self.inst, self.net, move, self.engine)

    # -- pairwise stability -------------------------------------------------

    def ps_moves(self):
        eng = self.engine
        eset = self.net.edge_set()
        n = self.inst.n
        for u in range(n):
            if self.alive[u]:
                incident = sorted(e for e in self.net.edges if u in e)
                for e in incident:
                    self._count_eval()
                    new_key = canonical_edges(eset - {e})
                    if eng.improves(eng.member_cost(new_key, u), self.base[u]):
                        yield Move.make((u,), removals=(e,), concept=PS)
            for v in range(u + 1, n):
                if (u, v) in eset:
                    continue
                if not (self.alive[u] and self.alive[v] and self._affordable(u, v)):
                    continue
                self._count_eval()
                w = eng.W[u][v]
                cost_u = eng.p * (self.rem_inc[u] + w) + eng.q * sum(
                    eng.row_after_add(self.gkey, u, v)
                )
                if not eng.improves(cost_u, self.base[u]):
                    continue
                cost_v = eng.p * (self.rem_inc[v] + w) + eng.q * sum(
                    eng.row_after_add(self.gkey, v, u)
                )
                if eng.improves(cost_v, self.base[v]):
                    yield Move.make((u, v), additions=((u, v),), concept=PS)

    # -- neighborhood equilibrium ---------------------------------------------

    def bne_moves(self):
        eng = self.engine
        eset = self.net.edge_set()
        n = self.inst.n
        cap_changes = self.budget.max_changes
        for u in range(n):
            if not self.alive[u]:
                continue
            removable = sorted(e for e in self.net.edges if u in e)
            addable = sorted(
                (min(u, v), max(u, v))
                for v in range(n)
                if v != u
                and (min(u, v), max(u, v)) not in eset
                and self.alive[v]
                and self._affordable(u, v)
            )
            if cap_changes is not None and len(removable) + len(addable) > cap_changes:
                self._note_skip(f"agent {u}: moves beyond {cap_changes} changes")
            for a_mask in range(1 << len(addable)):
                adds = [addable[i] for i in range(len(addable)) if a_mask >> i & 1]
                if cap_changes is not None and len(adds) > cap_changes:
                    continue
                added_inc_u = sum(eng.W[e[0]][e[1]] for e in adds)
                cap_u = self.spend_cap[u]
                if not is_inf(cap_u) and adds and eng.p * added_inc_u >= cap_u:
                    continue  # mover cannot pay for this bundle, no R helps
                plus_key = canonical_edges(eset | set(adds))
                partners = [e[0] if e[1] == u else e[1] for e in adds]
                # a partner pays for its one new edge and removes nothing
                ok = True
                for e, v in zip(adds, partners):
                    gain = self._partner_gain_bound(v, e, plus_key)
                    if not self._bound_allows(gain):
                        ok = False
                        break
                if not ok:
                    continue
                if not self._bound_allows(self._gain_bound(u, plus_key, added_inc_u)):
                    continue
                plus_set = eset | set(adds)
                for r_mask in range(1 << len(removable)):
                    if a_mask == 0 and r_mask == 0:
                        continue
                    rems = [
                        removable[i] for i in range(len(removable)) if r_mask >> i & 1
                    ]
                    if cap_changes is not None and len(rems) + len(adds) > cap_changes:
                        continue
                    self._count_eval()
                    new_key = canonical_edges(plus_set - set(rems))
                    if not eng.improves(eng.member_cost(new_key, u), self.base[u]):
                        continue
                    if all(
                        eng.improves(eng.member_cost(new_key, v), self.base[v])
                        for v in partners
                    ):
                        yield Move.make(
                            (u, *partners), removals=rems, additions=adds, concept=BNE
                        )

    def _partner_gain_bound(self, v, edge, plus_key):
        eng = self.engine
        d_plus = eng.dist_sum(plus_key, v)
        if is_inf(d_plus):
            return None
        d_g = self.base_dist[v]
        if is_inf(d_g):
            return INF
        return eng.q * (d_g - d_plus) - eng.p * eng.W[edge[0]][edge[1]]

    # -- strong equilibrium ------------------------------------------------------

    def bse_moves(self):
        eng = self.engine
        eset = self.net.edge_set()
        n = self.inst.n
        candidates = [u for u in range(n) if self.alive[u]]
        cap_size = self.budget.max_coalition
        cap_changes = self.budget.max_changes
        if cap_size is not None and cap_size < len(candidates):
            self._note_skip(f"coalitions larger than {cap_size} unexplored")
        top = min(len(candidates), cap_size or len(candidates))
        for size in range(1, top + 1):
            for gamma in combinations(candidates, size):
                members = set(gamma)
                removable = sorted(
                    e for e in self.net.edges if e[0] in members or e[1] in members
                )
                addable = sorted(
                    (a, b)
                    for a, b in combinations(gamma, 2)
                    if (a, b) not in eset and self._affordable(a, b)
                )
                if (
                    cap_changes is not None
                    and len(removable) + len(addable) > cap_changes
                ):
                    self._note_skip(
                        f"coalition {gamma}: moves beyond {cap_changes} changes"
                    )
                bit = {m: 1 << i for i, m in enumerate(gamma)}
                full_cov = (1 << size) - 1
                rem_cov = [
                    (bit.get(e[0], 0) | bit.get(e[1], 0)) for e in removable
                ]
                add_cov = [bit[e[0]] | bit[e[1]] for e in addable]
                for a_mask in range(1 << len(addable)):
                    adds = [addable[i] for i in range(len(addable)) if a_mask >> i & 1]
                    if cap_changes is not None and len(adds) > cap_changes:
                        continue
                    # cheap affordability sum per member before any Dijkstra
                    affordable = True
                    if adds:
                        for m in gamma:
                            cap_m = self.spend_cap[m]
                            if is_inf(cap_m):
                                continue
                            added_inc = sum(eng.W[e[0]][e[1]] for e in adds if m in e)
                            if added_inc and eng.p * added_inc >= cap_m:
                                affordable = False
                                break
                    if not affordable:
                        continue
                    plus_key = canonical_edges(eset | set(adds))
                    bounds_ok = True
                    for m in gamma:
                        added_inc = sum(
                            eng.W[e[0]][e[1]] for e in adds if m in e
                        )
                        if not self._bound_allows(
                            self._gain_bound(m, plus_key, added_inc)
                        ):
                            bounds_ok = False
                            break
                    if not bounds_ok:
                        continue
                    a_cov = 0
                    for i in range(len(addable)):
                        if a_mask >> i & 1:
                            a_cov |= add_cov[i]
                    plus_set = eset | set(adds)
                    for r_mask in range(1 << len(removable)):
                        if a_mask == 0 and r_mask == 0:
                            continue
                        cov = a_cov
                        rems = []
                        for i in range(len(removable)):
                            if r_mask >> i & 1:
                                cov |= rem_cov[i]
                                rems.append(removable[i])
                        if cov != full_cov:
                            continue  # untouched member: smaller coalition covers it
                        if (
                            cap_changes is not None
                            and len(rems) + len(adds) > cap_changes
                        ):
                            continue
                        self._count_eval()
                        new_key = canonical_edges(plus_set - set(rems))
                        if all(
                            eng.improves(eng.member_cost(new_key, m), self.base[m])
                            for m in gamma
                        ):
                            yield Move.make(
                                gamma, removals=rems, additions=adds, concept=BSE
                            )

    def moves(self, concept):
        gen = {PS: self.ps_moves, BNE: self.bne_moves, BSE: self.bse_moves}[concept]
        try:
            yield from gen()
        except _BudgetStop:
            return


def _run_checker(inst, net, concept, budget=None, engine=None):
    search = _Search(inst, net, budget=budget, engine=engine)
    for move in search.moves(concept):
        return Verdict(
            status=UNSTABLE,
            witness=move,
            deltas=search._deltas_for(move),
            moves_evaluated=search.evaluated,
        )
    if search.budget_skipped:
        return Verdict(
            status=INCONCLUSIVE,
            moves_evaluated=search.evaluated,
            frontier=search.frontier,
        )
    return Verdict(status=STABLE, moves_evaluated=search.evaluated)


def is_pairwise_stable(inst: Instance, net: Network, engine: CostEngine = None):
    """Exhaustive single-deletion / single-addition check; always conclusive."""
    return _run_checker(inst, net, PS, engine=engine)


def is_bne(inst: Instance, net: Network, budget: Budget = None, engine=None):
    return _run_checker(inst, net, BNE, budget=budget, engine=engine)


def is_bse(inst: Instance, net: Network, budget: Budget = None, engine=None):
    return _run_checker(inst, net, BSE, budget=budget, engine=engine)


def check(inst: Instance, net: Network, concept: str, budget: Budget = None, engine=None):
    if concept not in CONCEPTS:
        raise ValueError(f"unknown concept {concept!r}")
    if concept == PS:
        return is_pairwise_stable(inst, net, engine=engine)
    return _run_checker(inst, net, concept, budget=budget, engine=engine)


def best_single_removal(inst: Instance, net: Network, u: int, engine=None):
    """Cheapest single incident removal for u: (edge, exact cost delta).

    Returns None when u is isolated; the delta is infinite when every
    single removal disconnects u. Ties break toward the smallest edge.
    """
    engine = engine or CostEngine(inst)
    incident = sorted(e for e in net.edges if u in e)
    if not incident:
        return None
    base = engine.member_cost(net.edges, u)
    eset = net.edge_set()
    best = None
    for e in incident:
        new = engine.member_cost(canonical_edges(eset - {e}), u)
        if is_inf(new):
            delta = INF
        elif is_inf(base):
            delta = -INF
        else:
            delta = engine.to_cost(new - base)
        if best is None or delta < best[1]:
            best = (e, delta)
    return best
