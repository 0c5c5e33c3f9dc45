"""Improving-response dynamics with cycle detection.

Whether these dynamics converge is an open question in this model, so a
trace is data, not a guarantee: an Equilibrium outcome is certified by the
concept checker, a revisited network is reported as a cycle, and running
out of steps (or of checker budget) is reported as such, never silently.

Cycle detection compares canonical sorted edge lists exactly; no lossy
hashing, so collisions are impossible.
"""

from dataclasses import dataclass

from .engine import CostEngine
from .errors import InconclusiveSearch, LabInputError
from .guided import GuidedThresholds, guided_bse_candidates
from .model import Instance, Network
from .stability import BSE, _Search, apply_move

FIRST_FOUND = "first-found"
BEST_RESPONSE = "best-response"
GUIDED_FIRST = "guided-first"
POLICIES = (FIRST_FOUND, BEST_RESPONSE, GUIDED_FIRST)

EQUILIBRIUM = "equilibrium"
CYCLE = "cycle"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class Trace:
    initial: Network
    final: Network
    steps: tuple  # ((move, social cost after the move), ...)
    outcome: str
    cycle_start: int = None
    cycle_period: int = None
    note: str = None


def find_improving_move(
    inst: Instance,
    net: Network,
    concept: str,
    policy: str = FIRST_FOUND,
    budget=None,
    engine: CostEngine = None,
    thresholds: GuidedThresholds = GuidedThresholds(),
):
    """One improving move per the policy, or None when the checker proves
    stability. Raises InconclusiveSearch when the budget runs out first.
    """
    if policy not in POLICIES:
        raise LabInputError(f"unknown policy {policy!r}; know {POLICIES}")
    engine = engine or CostEngine(inst)
    if policy == GUIDED_FIRST:
        if concept != BSE:
            raise LabInputError("guided-first policy applies to bse only")
        candidates = guided_bse_candidates(inst, net, thresholds, engine=engine)
        if candidates:
            return candidates[0]
        policy = FIRST_FOUND

    search = _Search(inst, net, budget=budget, engine=engine)
    if policy == FIRST_FOUND:
        for move in search.moves(concept):
            return move
        if search.budget_skipped:
            raise InconclusiveSearch(search.frontier)
        return None

    # best-response: maximize the total strict improvement of the coalition,
    # ties broken by canonical enumeration order (first wins)
    best_move, best_gain = None, None
    for move in search.moves(concept):
        after = apply_move(net, move).edges
        gain = sum(
            search.base[m] - engine.member_cost(after, m) for m in move.coalition
        )
        if best_gain is None or gain > best_gain:
            best_move, best_gain = move, gain
    if best_move is None and search.budget_skipped:
        raise InconclusiveSearch(search.frontier)
    return best_move


def run_dynamics(
    inst: Instance,
    start: Network,
    concept: str,
    policy: str = FIRST_FOUND,
    max_steps: int = 100,
    budget=None,
    thresholds: GuidedThresholds = GuidedThresholds(),
    engine: CostEngine = None,
    _mover=None,
) -> Trace:
    """Iterate improving moves until equilibrium, a revisit, or exhaustion.

    Moves found by the built-in policies strictly improve their coalitions
    by construction, so every recorded step replays as a valid improving
    move. ``_mover`` is an instrumentation hook (tests drive the loop with
    a scripted move source); suppliers of a custom mover take over that
    guarantee themselves.
    """
    if max_steps < 0:
        raise LabInputError("max_steps must be >= 0")
    engine = engine or CostEngine(inst)

    def _next(current):
        if _mover is not None:
            return _mover(inst, current, engine)
        return find_improving_move(
            inst, current, concept, policy, budget=budget, engine=engine,
            thresholds=thresholds,
        )

    seen = {start.edges: 0}
    net = start
    steps = []
    for _ in range(max_steps):
        try:
            move = _next(net)
        except InconclusiveSearch as stop:
            return Trace(
                initial=start,
                final=net,
                steps=tuple(steps),
                outcome=BUDGET_EXHAUSTED,
                note=f"checker budget: {stop.frontier}",
            )
        if move is None:
            return Trace(
                initial=start, final=net, steps=tuple(steps), outcome=EQUILIBRIUM
            )
        net = apply_move(net, move)
        steps.append((move, engine.to_cost(engine.social_cost(net.edges))))
        index = len(steps)
        if net.edges in seen:
            return Trace(
                initial=start,
                final=net,
                steps=tuple(steps),
                outcome=CYCLE,
                cycle_start=seen[net.edges],
                cycle_period=index - seen[net.edges],
            )
        seen[net.edges] = index
    try:
        move = _next(net)
    except InconclusiveSearch as stop:
        return Trace(
            initial=start,
            final=net,
            steps=tuple(steps),
            outcome=BUDGET_EXHAUSTED,
            note=f"checker budget: {stop.frontier}",
        )
    if move is None:
        return Trace(initial=start, final=net, steps=tuple(steps), outcome=EQUILIBRIUM)
    return Trace(
        initial=start,
        final=net,
        steps=tuple(steps),
        outcome=BUDGET_EXHAUSTED,
        note=f"{max_steps} steps exhausted with moves remaining",
    )
