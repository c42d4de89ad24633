"""Beta reduction, SKI reduction, and strong-normalization verdicts.

All traversals here are iterative: reducts of small terms can grow into deep
left combs, and the engines must not depend on the interpreter stack.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .terms import Abs, App, Atom, CApp, CLTerm, LambdaTerm, Var

__all__ = [
    "Budget", "SNStatus", "SNVerdict", "ReductionStep", "Witness",
    "shift", "substitute", "beta_reducts", "normal_order_step",
    "decide_sn", "eta_longest", "cl_reducts", "cl_reduct_steps",
    "cl_normal_order_step", "decide_sn_cl",
]


@dataclass(frozen=True)
class Budget:
    """Resource limits that make SN verdicts total."""

    max_steps: int = 100_000
    max_size: int = 10_000


class SNStatus(enum.Enum):
    PROVED_SN = "ProvedSN"
    PROVED_NOT_SN = "ProvedNotSN"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Witness:
    """Evidence attached to a verdict.

    For ``ProvedNotSN``, ``chain`` starts at a goal ``t`` and ends at a goal
    that either equals ``t`` (``kind="cycle"``) or contains it as a subterm
    (``kind="embedding"``). Consecutive goals are linked by one reduction step
    or by passing to a subterm, with at least one reduction on the way, so
    ``t`` reduces in one or more steps to a term containing itself.
    For ``kind="collapse"`` the chain starts at ``t`` and its affine collapse
    (see ``_collapse``), followed by a chain found while searching the
    collapse; there a goal may also be replaced by its own collapse before
    the containment test. Collapsing only performs reduction steps, so the
    conclusion is the same.
    For ``Unknown`` the chain is empty and ``kind`` names the exhausted limit.
    """

    kind: str
    chain: tuple = ()


@dataclass(frozen=True)
class SNVerdict:
    status: SNStatus
    eta: Optional[int] = None
    witness: Optional[Witness] = None
    steps: int = 0

    @property
    def proved_sn(self) -> bool:
        return self.status is SNStatus.PROVED_SN


@dataclass(frozen=True)
class ReductionStep:
    path: str
    before: object
    after: object = field(compare=False)


# ------------------------------------------------------- index arithmetic

def shift(t: LambdaTerm, by: int, cutoff: int = 0) -> LambdaTerm:
    """Add ``by`` to every free index of ``t`` that is ``>= cutoff``."""
    if by == 0 or t.free >> cutoff == 0:
        return t
    memo: dict = {}
    out: list = []
    todo: list = [(t, cutoff, False)]
    while todo:
        node, c, expanded = todo.pop()
        if node.free >> c == 0:
            out.append(node)
        elif isinstance(node, Var):
            out.append(Var(node.index + by))
        elif expanded:
            if isinstance(node, Abs):
                res = Abs(out.pop())
            else:
                r = out.pop()
                res = App(out.pop(), r)
            memo[(node, c)] = res
            out.append(res)
        elif (node, c) in memo:
            out.append(memo[(node, c)])
        else:
            todo.append((node, c, True))
            if isinstance(node, Abs):
                todo.append((node.body, c + 1, False))
            else:
                todo.append((node.right, c, False))
                todo.append((node.left, c, False))
    return out[0]


def substitute(body: LambdaTerm, arg: LambdaTerm) -> LambdaTerm:
    """Contract ``(\\. body) arg``: replace index 0 by ``arg``, lower the rest."""
    if body.free == 0:
        return body
    lifted: dict = {}
    memo: dict = {}
    out: list = []
    todo: list = [(body, 0, False)]
    while todo:
        node, d, expanded = todo.pop()
        if node.free >> d == 0:
            out.append(node)
        elif isinstance(node, Var):
            i = node.index
            if i == d:
                res = lifted.get(d)
                if res is None:
                    res = lifted[d] = shift(arg, d)
                out.append(res)
            else:
                out.append(Var(i - 1))
        elif expanded:
            if isinstance(node, Abs):
                res = Abs(out.pop())
            else:
                r = out.pop()
                res = App(out.pop(), r)
            memo[(node, d)] = res
            out.append(res)
        elif (node, d) in memo:
            out.append(memo[(node, d)])
        else:
            todo.append((node, d, True))
            if isinstance(node, Abs):
                todo.append((node.body, d + 1, False))
            else:
                todo.append((node.right, d, False))
                todo.append((node.left, d, False))
    return out[0]


def _rebuild(chain, replacement):
    for node, direction in reversed(chain):
        if direction == "D":
            replacement = Abs(replacement)
        elif direction == "L":
            replacement = (App if isinstance(node, App) else CApp)(replacement, node.right)
        else:
            replacement = (App if isinstance(node, App) else CApp)(node.left, replacement)
    return replacement


# ---------------------------------------------------------- beta reduction

def beta_reducts(t: LambdaTerm) -> list[ReductionStep]:
    """All one-step reducts, leftmost-outermost redex first."""
    steps = []
    if t.normal:
        return steps
    stack = [(t, [])]
    while stack:
        node, chain = stack.pop()
        if node.normal:
            continue
        if isinstance(node, Abs):
            stack.append((node.body, chain + [(node, "D")]))
            continue
        if isinstance(node.left, Abs):
            after = _rebuild(chain, substitute(node.left.body, node.right))
            steps.append(ReductionStep("".join(d for _, d in chain), t, after))
        stack.append((node.right, chain + [(node, "R")]))
        stack.append((node.left, chain + [(node, "L")]))
    return steps


def normal_order_step(t: LambdaTerm) -> Optional[ReductionStep]:
    """Contract the leftmost-outermost redex, or return None on a normal form."""
    if t.normal:
        return None
    chain = []
    node = t
    while True:
        if isinstance(node, Abs):
            chain.append((node, "D"))
            node = node.body
        elif isinstance(node.left, Abs):
            after = _rebuild(chain, substitute(node.left.body, node.right))
            return ReductionStep("".join(d for _, d in chain), t, after)
        elif not node.left.normal:
            chain.append((node, "L"))
            node = node.left
        else:
            chain.append((node, "R"))
            node = node.right


def _spine(t):
    args = []
    while isinstance(t, App):
        args.append(t.right)
        t = t.left
    args.reverse()
    return t, args


def _apply(head, args):
    for a in args:
        head = App(head, a)
    return head


def _decompose(t: LambdaTerm):
    """Split ``t`` by its head form into (cost, subgoals).

    With the convention that ``eta`` of a goal is ``cost`` plus the sum of
    ``eta`` over its subgoals:

    - ``\\x. u``                 -> (0, [u])
    - ``x t1 ... tn``           -> (0, [t1, ..., tn])
    - ``(\\x. u) v t1 ... tn``   -> (1, [u[x:=v] t1 ... tn])       if x occurs in u
                                  (1, [v, u t1 ... tn])           otherwise

    The SN equivalences are the textbook head-form ones; the additive cost
    for the redex case is cross-checked against exhaustive longest-path
    search in the test suite.
    """
    if isinstance(t, Abs):
        return 0, (t.body,)
    head, args = _spine(t)
    if isinstance(head, Var):
        return 0, tuple(args)
    u, v, rest = head.body, args[0], args[1:]
    if u.free & 1:
        return 1, (_apply(substitute(u, v), rest),)
    return 1, (v, _apply(substitute(u, v), rest))


def _embeds(goal, on_stack: dict, min_size: int):
    """Return an on-stack term occurring as a subterm of ``goal``, if any."""
    seen = set()
    stack = [goal]
    while stack:
        node = stack.pop()
        if node in on_stack:
            return node
        if isinstance(node, (App, CApp)):
            children = (node.left, node.right)
        elif isinstance(node, Abs):
            children = (node.body,)
        else:
            continue
        for c in children:
            if c.size >= min_size and id(c) not in seen:
                seen.add(id(c))
                stack.append(c)
    return None


def decide_sn(t: LambdaTerm, budget: Budget = Budget(), memo: Optional[dict] = None) -> SNVerdict:
    """Decide strong normalization by recursion over head forms.

    ``t`` is SN iff every subgoal produced by the head-form decomposition is
    SN; ``eta`` is assembled from the subgoal values. A goal that reappears
    on the current expansion path, or that contains a goal of the current
    path as a subterm, proves non-termination. Exceeding either budget limit
    yields ``Unknown``.

    A search still open after a few thousand steps also tries to refute the
    term through its affine collapse (see ``_collapse``), which is a reduct,
    so any infinite reduction found there starts from ``t`` as well.

    ``memo`` maps already-proved terms to their eta and may be shared
    between calls; only SN results are ever stored in it.
    """
    if memo is None:
        memo = {}
    return _search(t, budget, memo, refute=True)


_REFUTE_AFTER = 2_000


def _search(t: LambdaTerm, budget: Budget, memo: dict, refute: bool,
            collapse_goals: bool = False) -> SNVerdict:
    if t in memo:
        return SNVerdict(SNStatus.PROVED_SN, memo[t])
    if t.size > budget.max_size:
        return SNVerdict(SNStatus.UNKNOWN, witness=Witness("max_size"))
    steps = 0
    # frame: [term, subgoals, next index, accumulated eta]
    cost, subgoals = _decompose(t)
    frames = [[t, subgoals, 0, cost]]
    on_stack = {t: 0}
    min_size = t.size
    while frames:
        frame = frames[-1]
        term, subgoals, i, acc = frame
        if i == len(subgoals):
            frames.pop()
            del on_stack[term]
            memo[term] = acc
            if frames:
                frames[-1][3] += acc
                continue
            return SNVerdict(SNStatus.PROVED_SN, acc, steps=steps)
        frame[2] = i + 1
        goal = subgoals[i]
        if goal in memo:
            frame[3] += memo[goal]
            continue
        hit = goal if goal in on_stack else None
        if hit is None and goal.size > min_size:
            hit = _embeds(goal, on_stack, min_size)
        if hit is not None:
            start = on_stack[hit]
            chain = tuple(f[0] for f in frames[start:]) + (goal,)
            kind = "cycle" if hit is goal else "embedding"
            return SNVerdict(SNStatus.PROVED_NOT_SN, witness=Witness(kind, chain), steps=steps)
        if collapse_goals:
            c = _collapse(goal)
            if c is not goal and c.size >= min_size:
                hit = _embeds(c, on_stack, min_size)
                if hit is not None:
                    chain = tuple(f[0] for f in frames[on_stack[hit]:]) + (goal, c)
                    return SNVerdict(SNStatus.PROVED_NOT_SN, witness=Witness("collapse", chain),
                                     steps=steps)
        steps += 1
        if refute and steps == _REFUTE_AFTER:
            found = _refute_by_collapse(t, budget, memo)
            if found is not None:
                return SNVerdict(found.status, witness=found.witness, steps=steps + found.steps)
        if steps > budget.max_steps:
            return SNVerdict(SNStatus.UNKNOWN, witness=Witness("max_steps"), steps=steps)
        if goal.size > budget.max_size:
            return SNVerdict(SNStatus.UNKNOWN, witness=Witness("max_size"), steps=steps)
        cost, sub = _decompose(goal)
        on_stack[goal] = len(frames)
        min_size = min(min_size, goal.size)
        frames.append([goal, sub, 0, cost])
    raise AssertionError("unreachable")


def _refute_by_collapse(t: LambdaTerm, budget: Budget, memo: dict) -> Optional[SNVerdict]:
    # search the collapse of t, comparing collapsed goals against the path
    c = _collapse(t)
    limits = Budget(min(budget.max_steps, 5 * _REFUTE_AFTER), min(budget.max_size, 2_000))
    v = _search(c, limits, memo, False, collapse_goals=True)
    if v.status is not SNStatus.PROVED_NOT_SN:
        return None
    prefix = (t,) if c is not t else ()
    return SNVerdict(SNStatus.PROVED_NOT_SN,
                     witness=Witness("collapse", prefix + (c,) + v.witness.chain), steps=v.steps)


def _occurrences(t: LambdaTerm, index: int) -> int:
    count = 0
    todo = [(t, index)]
    while todo:
        node, i = todo.pop()
        if not node.free >> i & 1:
            continue
        if isinstance(node, Var):
            count += 1
        elif isinstance(node, Abs):
            todo.append((node.body, i + 1))
        else:
            todo.append((node.left, i))
            todo.append((node.right, i))
    return count


def _collapse(t: LambdaTerm) -> LambdaTerm:
    """Contract affine redexes, whose bound variable occurs at most once,
    until none is left. Each such contraction shrinks the term, so this
    terminates, and the result is a reduct of ``t``."""
    while True:
        c = _collapse_pass(t)
        if c is t:
            return t
        t = c


def _collapse_pass(t: LambdaTerm) -> LambdaTerm:
    done: dict = {}
    todo = [(t, False)]
    while todo:
        node, expanded = todo.pop()
        if node in done:
            continue
        if isinstance(node, Var):
            done[node] = node
        elif not expanded:
            todo.append((node, True))
            if isinstance(node, Abs):
                todo.append((node.body, False))
            else:
                todo.append((node.right, False))
                todo.append((node.left, False))
        elif isinstance(node, Abs):
            done[node] = Abs(done[node.body])
        else:
            left, right = done[node.left], done[node.right]
            if isinstance(left, Abs) and _occurrences(left.body, 0) <= 1:
                done[node] = substitute(left.body, right)
            else:
                done[node] = App(left, right)
    return done[t]


def _longest_path(t, successors, budget: Budget):
    """Longest path from ``t`` in a successor graph.

    Returns ``(eta, None)`` on success, ``(None, Witness)`` otherwise; a
    node revisited on the current DFS path is reported as a cycle.
    """
    memo: dict = {}
    if t.size > budget.max_size:
        return None, Witness("max_size")
    frames = [[t, successors(t), 0, 0]]
    on_stack = {t: 0}
    expanded = 1
    while frames:
        frame = frames[-1]
        node, succ, i, best = frame
        if i == len(succ):
            frames.pop()
            del on_stack[node]
            memo[node] = best
            if not frames:
                return best, None
            parent = frames[-1]
            parent[3] = max(parent[3], best + 1)
            continue
        frame[2] = i + 1
        nxt = succ[i]
        if nxt in memo:
            frame[3] = max(best, memo[nxt] + 1)
            continue
        if nxt in on_stack:
            chain = tuple(f[0] for f in frames[on_stack[nxt]:]) + (nxt,)
            return None, Witness("cycle", chain)
        expanded += 1
        if expanded > budget.max_steps:
            return None, Witness("max_steps")
        if nxt.size > budget.max_size:
            return None, Witness("max_size")
        on_stack[nxt] = len(frames)
        frames.append([nxt, successors(nxt), 0, 0])
    raise AssertionError("unreachable")


def _beta_successors(t):
    return [s.after for s in beta_reducts(t)]


def eta_longest(t: LambdaTerm, budget: Budget = Budget()) -> Optional[int]:
    """Length of the longest beta-reduction from ``t`` by exhaustive search.

    Returns None when the reduction graph has a cycle or cannot be explored
    within ``budget``.
    """
    eta, _ = _longest_path(t, _beta_successors, budget)
    return eta


# ------------------------------------------------------ combinatory logic

def _cl_contract(node: CApp) -> Optional[CLTerm]:
    left = node.left
    if left is _I:
        return node.right
    if isinstance(left, CApp):
        if left.left is _K:
            return left.right
        if isinstance(left.left, CApp) and left.left.left is _S:
            u, v, w = left.left.right, left.right, node.right
            return CApp(CApp(u, w), CApp(v, w))
    return None


_S, _K, _I = Atom("S"), Atom("K"), Atom("I")


def cl_reduct_steps(t: CLTerm) -> list[ReductionStep]:
    """All one-step SKI reducts with redex paths, leftmost-outermost first."""
    steps = []
    stack = [(t, [])]
    while stack:
        node, chain = stack.pop()
        if not isinstance(node, CApp):
            continue
        contracted = _cl_contract(node)
        if contracted is not None:
            steps.append(ReductionStep("".join(d for _, d in chain), t,
                                       _rebuild(chain, contracted)))
        stack.append((node.right, chain + [(node, "R")]))
        stack.append((node.left, chain + [(node, "L")]))
    return steps


def cl_reducts(t: CLTerm) -> list[CLTerm]:
    return [s.after for s in cl_reduct_steps(t)]


def cl_normal_order_step(t: CLTerm) -> Optional[ReductionStep]:
    steps = cl_reduct_steps(t)
    return steps[0] if steps else None


def decide_sn_cl(t: CLTerm, budget: Budget = Budget()) -> SNVerdict:
    """Explore the SKI reduction graph of ``t``.

    A term revisited on the current path, or a reduct containing a term of
    the current path, proves non-termination; a fully explored acyclic graph
    proves SN with its longest path as eta.
    """
    memo: dict = {}
    if t.size > budget.max_size:
        return SNVerdict(SNStatus.UNKNOWN, witness=Witness("max_size"))
    frames = [[t, cl_reducts(t), 0, 0]]
    on_stack = {t: 0}
    min_size = t.size
    expanded = 1
    witness = _successor_hit(frames, on_stack, min_size)
    if witness is not None:
        return SNVerdict(SNStatus.PROVED_NOT_SN, witness=witness, steps=expanded)
    while frames:
        frame = frames[-1]
        node, succ, i, best = frame
        if i == len(succ):
            frames.pop()
            del on_stack[node]
            memo[node] = best
            if not frames:
                return SNVerdict(SNStatus.PROVED_SN, best, steps=expanded)
            parent = frames[-1]
            parent[3] = max(parent[3], best + 1)
            continue
        frame[2] = i + 1
        nxt = succ[i]
        if nxt in memo:
            frame[3] = max(best, memo[nxt] + 1)
            continue
        expanded += 1
        if expanded > budget.max_steps:
            return SNVerdict(SNStatus.UNKNOWN, witness=Witness("max_steps"), steps=expanded)
        if nxt.size > budget.max_size:
            return SNVerdict(SNStatus.UNKNOWN, witness=Witness("max_size"), steps=expanded)
        on_stack[nxt] = len(frames)
        min_size = min(min_size, nxt.size)
        frames.append([nxt, cl_reducts(nxt), 0, 0])
        witness = _successor_hit(frames, on_stack, min_size)
        if witness is not None:
            return SNVerdict(SNStatus.PROVED_NOT_SN, witness=witness, steps=expanded)
    raise AssertionError("unreachable")


def _successor_hit(frames: list, on_stack: dict, min_size: int) -> Optional[Witness]:
    # look at every reduct of the newest node before descending into any,
    # so a short cycle is not hidden behind an endlessly growing first branch
    for nxt in frames[-1][1]:
        hit = nxt if nxt in on_stack else None
        if hit is None and nxt.size > min_size:
            hit = _embeds(nxt, on_stack, min_size)
        if hit is not None:
            chain = tuple(f[0] for f in frames[on_stack[hit]:]) + (nxt,)
            return Witness("cycle" if hit is nxt else "embedding", chain)
    return None
