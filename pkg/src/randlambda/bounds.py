"""Exact bounds on the number of closed lambda terms and structural SN certificates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from .classify import _left_branch_binds, is_safe, smallest_width2_subterm
from .counting import catalan, count_closed_lambda, schroder_Mnk
from .terms import LambdaTerm

__all__ = [
    "BoundsReport", "Certificate", "lower_bound", "upper_bound", "bounds_for",
    "check_incr_decr", "certify_sn_structural",
]

# Exact counts are cheap; this only limits the size of the printed integer.
EXACT_COUNT_LIMIT = 5000


@dataclass(frozen=True)
class BoundsReport:
    n: int
    lower: int
    argmax_k: int
    upper: int
    L_n: Optional[int]
    ln_L_n: Optional[float]
    corollary_window: Optional[tuple]
    epsilon: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["corollary_window"] = list(self.corollary_window) if self.corollary_window else None
        return d


def lower_bound(n: int) -> tuple[int, int]:
    """``max_k C(n-k) k^(n-k+1)`` and the first maximizing ``k``.

    Counts terms made of ``k`` head abstractions over a binary tree whose
    leaves may use any of the ``k`` variables.
    """
    if n < 1:
        raise ValueError("n must be positive")
    best, arg = -1, 0
    for k in range(1, n + 1):
        v = catalan(n - k) * k ** (n - k + 1)
        if v > best:
            best, arg = v, k
    return best, arg


def upper_bound(n: int) -> int:
    """``sum_{p=1..n} M(n, n-p+1) p^(n-p+1)``: trees with ``n-p+1`` leaves, each bound by one of at most ``p`` abstractions."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(schroder_Mnk(n, n - p + 1) * p ** (n - p + 1) for p in range(1, n + 1))


def corollary_window(n: int, epsilon: float) -> Optional[tuple]:
    if n < 2 or not 0 < epsilon < 4:
        return None
    base = n * math.log(n) - n * math.log(math.log(n))
    return (base + n * math.log(4 - epsilon) - n, base + n * math.log(12 + epsilon) - n / 3)


def bounds_for(n: int, with_exact: bool = True, epsilon: float = 0.5) -> BoundsReport:
    lo, arg = lower_bound(n)
    L = count_closed_lambda(n) if with_exact and n <= EXACT_COUNT_LIMIT else None
    return BoundsReport(
        n=n, lower=lo, argmax_k=arg, upper=upper_bound(n),
        L_n=L, ln_L_n=math.log(L) if L else None,
        corollary_window=corollary_window(n, epsilon), epsilon=epsilon,
    )


def _log_f(n: int, p: float) -> float:
    # log of p^(n-p+1)
    return -math.inf if p <= 0 else (n - p + 1) * math.log(p)


def _grid(a: float, b: float, resolution: int) -> list[float]:
    if a > b:
        return []
    if resolution < 1 or a == b:
        return [a]
    return [a + (b - a) * i / resolution for i in range(resolution + 1)]


def check_incr_decr(n: int, resolution: int = 50) -> bool:
    """Sampled check that ``p -> p^(n-p+1)`` rises up to ``n/(3 ln n)`` and falls from ``3n/ln n`` to ``n``.

    An empty interval (``3n/ln n > n`` for small ``n``) holds vacuously.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    ln = math.log(n)
    rising = [_log_f(n, p) for p in _grid(0.0, n / (3 * ln), resolution)]
    falling = [_log_f(n, p) for p in _grid(3 * n / ln, float(n), resolution)]
    return (all(a < b for a, b in zip(rising, rising[1:]))
            and all(a > b for a, b in zip(falling, falling[1:])))


@dataclass(frozen=True)
class Certificate:
    """Reason a term is strongly normalizing by its shape alone."""

    kind: str  # "width<=1" or "safe-width-2"
    width: int
    fair_side: Optional[str] = None

    def describe(self, t: LambdaTerm) -> dict:
        d = {"kind": self.kind, "width": self.width}
        if self.fair_side is not None:
            app = smallest_width2_subterm(t)
            d["fair_side"] = self.fair_side
            d["split_at_size"] = app.size
        return d


def certify_sn_structural(t: LambdaTerm) -> Optional[Certificate]:
    """A certificate when ``t`` has width at most 1 or is safe of width 2, else None."""
    if t.free:
        raise ValueError("certificates are issued for closed terms only")
    if t.width <= 1:
        return Certificate("width<=1", t.width)
    if t.width == 2 and is_safe(t):
        app = smallest_width2_subterm(t)
        side = "left" if not _left_branch_binds(app.left) else "right"
        return Certificate("safe-width-2", 2, side)
    return None
