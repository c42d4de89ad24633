"""Structural statistics of closed lambda terms and the nested density classes.

The classes are identified by letters ``A, B, D, E, G, H, I, J, K``. Each one
is the previous class intersected with one extra condition, so membership in
a later class implies membership in every earlier one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .terms import Abs, App, LambdaTerm, Var, nodes

__all__ = [
    "ClassReport", "ClassParams", "CLASS_IDS",
    "report", "lambda_width", "head_lambdas", "head_body", "bound_occurrences",
    "is_fair", "is_safe", "smallest_width2_subterm",
    "in_class_A", "in_class", "default_g", "default_h",
]

CLASS_IDS = ("A", "B", "D", "E", "G", "H", "I", "J", "K")


@dataclass(frozen=True)
class ClassReport:
    size: int
    lambda_count: int
    binding_lambda_count: int
    head_lambdas: int
    unary_height: int
    lambda_width: int
    bound_occurrences_per_head_lambda: tuple
    consecutive_nonbinding_pair: bool
    is_fair: Optional[bool]
    is_safe: Optional[bool]

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["bound_occurrences_per_head_lambda"] = list(self.bound_occurrences_per_head_lambda)
        return d


def default_g(n: int) -> int:
    if n < 2:
        return 3
    return max(3, math.floor((n / math.log(n)) ** (1 / 3)))


def default_h(n: int) -> int:
    if n < 2:
        return 0
    x = n / math.log(n)
    if x <= 1:
        return 0
    return math.floor(math.sqrt(math.log(x, 3)))


@dataclass(frozen=True)
class ClassParams:
    """Parameters of the class chain.

    ``k`` and ``l`` default to the number of closed terms of size at most
    ``j``.
    """

    g: Callable[[int], int] = default_g
    h: Callable[[int], int] = default_h
    j: int = 1
    k: Optional[int] = None
    l: Optional[int] = None  # noqa: E741
    _patterns: dict = field(default_factory=dict, compare=False, repr=False)

    def resolved_k(self) -> int:
        if self.k is not None:
            return self.k
        from .counting import count_closed_lambda
        return sum(count_closed_lambda(i) for i in range(self.j + 1))

    def resolved_l(self) -> int:
        return self.l if self.l is not None else self.resolved_k()

    def patterns(self) -> frozenset:
        if "set" not in self._patterns:
            from .counting import closed_terms_up_to
            self._patterns["set"] = closed_terms_up_to(self.j)
        return self._patterns["set"]


# ---------------------------------------------------------- statistics

def lambda_width(t: LambdaTerm) -> int:
    """Maximum number of binding abstractions no two of which lie on one branch."""
    return t.width


def head_lambdas(t: LambdaTerm) -> int:
    n = 0
    while isinstance(t, Abs):
        n += 1
        t = t.body
    return n


def head_body(t: LambdaTerm) -> LambdaTerm:
    while isinstance(t, Abs):
        t = t.body
    return t


def bound_occurrences(t: LambdaTerm) -> list[int]:
    """Occurrence counts of the variables of the head abstractions, outermost first."""
    h = head_lambdas(t)
    counts = [0] * h
    stack = [(head_body(t), 0)]
    while stack:
        u, depth = stack.pop()
        if not (u.free >> depth):
            continue
        if isinstance(u, Var):
            counts[h - 1 - (u.index - depth)] += 1
        elif isinstance(u, Abs):
            stack.append((u.body, depth + 1))
        else:
            stack.append((u.left, depth))
            stack.append((u.right, depth))
    return counts


def _consecutive_nonbinding(t: LambdaTerm) -> bool:
    for u in nodes(t):
        if isinstance(u, Abs) and not u.binds and isinstance(u.body, Abs) and not u.body.binds:
            return True
    return False


def _left_branch_binds(t: LambdaTerm) -> bool:
    while not isinstance(t, Var):
        if isinstance(t, Abs):
            if t.binds:
                return True
            t = t.body
        else:
            t = t.left
    return False


def is_fair(t: LambdaTerm) -> bool:
    """Width-1 term without a binding abstraction on its left branch."""
    if t.width != 1:
        raise ValueError("fairness is defined for width-1 terms only")
    return not _left_branch_binds(t)


def smallest_width2_subterm(t: LambdaTerm) -> App:
    """The application ``(u v)`` of width 2 whose operands both have width 1."""
    if t.width != 2:
        raise ValueError("term does not have width 2")
    while True:
        if isinstance(t, Abs):
            t = t.body
        elif t.left.width == 2:
            t = t.left
        elif t.right.width == 2:
            t = t.right
        else:
            return t


def is_safe(t: LambdaTerm) -> bool:
    if t.width != 2:
        raise ValueError("safety is defined for width-2 terms only")
    app = smallest_width2_subterm(t)
    return not _left_branch_binds(app.left) or not _left_branch_binds(app.right)


def report(t: LambdaTerm) -> ClassReport:
    if t.free:
        raise ValueError("report expects a closed term")
    return ClassReport(
        size=t.size,
        lambda_count=t.lambdas,
        binding_lambda_count=t.binders,
        head_lambdas=head_lambdas(t),
        unary_height=t.height,
        lambda_width=t.width,
        bound_occurrences_per_head_lambda=tuple(bound_occurrences(t)),
        consecutive_nonbinding_pair=_consecutive_nonbinding(t),
        is_fair=is_fair(t) if t.width == 1 else None,
        is_safe=is_safe(t) if t.width == 2 else None,
    )


# ------------------------------------------------------------- classes

def in_class_A(t: LambdaTerm) -> bool:
    n = t.size
    if n < 2:
        raise ValueError("class A is undefined below size 2")
    ln = math.log(n)
    lo = n / (3 * ln)
    return lo <= t.lambdas <= 3 * n / ln and t.height >= lo


def _first_bind(t: LambdaTerm, count: int) -> bool:
    for _ in range(count):
        if not isinstance(t, Abs) or not t.binds:
            return False
        t = t.body
    return True


def _contains_any(t: LambdaTerm, patterns: frozenset) -> bool:
    return any(u in patterns for u in nodes(t) if not u.free)


def _condition(t: LambdaTerm, cls: str, params: ClassParams) -> bool:
    n = t.size
    g = params.g(n)
    if cls == "A":
        return in_class_A(t)
    if cls == "B":
        return head_lambdas(t) >= g
    if cls == "D":
        return head_lambdas(t) >= g + 1 and _first_bind(t, g)
    if cls == "E":
        return sum(bound_occurrences(t)[:3]) > params.h(n)
    if cls == "G":
        k, ell = params.resolved_k(), params.resolved_l()
        occ = bound_occurrences(t)
        return len(occ) >= k and all(c > ell for c in occ[:k])
    if cls == "H":
        return not _consecutive_nonbinding(t)
    if cls == "I":
        return not _contains_any(t, params.patterns())
    if cls == "J":
        return t.width <= 2
    if cls == "K":
        return t.width <= 1 or (t.width == 2 and is_safe(t))
    raise ValueError(f"unknown class {cls!r}")


def in_class(t: LambdaTerm, cls: str, params: Optional[ClassParams] = None) -> bool:
    """Membership in ``cls``, which includes every condition earlier in the chain."""
    if cls not in CLASS_IDS:
        raise ValueError(f"unknown class {cls!r}")
    if t.free:
        raise ValueError("classes are defined for closed terms")
    if t.size < 2:
        raise ValueError("classes are undefined below size 2")
    params = params or ClassParams()
    for c in CLASS_IDS[: CLASS_IDS.index(cls) + 1]:
        if not _condition(t, c, params):
            return False
    return True
