"""Exact coefficient sequences for SKI term counts and subterm containment."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Context, Decimal
from fractions import Fraction
from typing import Optional

from .terms import CLTerm, print_cl

__all__ = ["CoeffSeries", "coeffs_f", "coeffs_f_t0", "coeffs_m", "ratio", "render_decimal"]


@dataclass(frozen=True)
class CoeffSeries:
    coefficients: tuple
    tag: str
    pattern: Optional[CLTerm] = None

    def __getitem__(self, n: int) -> int:
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)


def _all_terms(max_n: int) -> list[int]:
    # F_0 = 3, F_n = sum_{i+j=n-1} F_i F_j
    f = [3]
    for n in range(1, max_n + 1):
        f.append(sum(f[i] * f[n - 1 - i] for i in range(n)))
    return f


def coeffs_f(max_n: int) -> CoeffSeries:
    """Number of SKI terms of each size up to ``max_n``."""
    if max_n < 0:
        raise ValueError("max_n must be non-negative")
    return CoeffSeries(tuple(_all_terms(max_n)), "f")


def coeffs_f_t0(t0: CLTerm, max_n: int, f: Optional[CoeffSeries] = None) -> CoeffSeries:
    """Number of SKI terms of each size that contain ``t0`` as a subterm.

    A term containing ``t0`` is either ``t0`` itself or an application with
    at least one side containing it, which gives
    ``G_n = [n = n0] + sum_{i+j=n-1} G_i (2 F_j - G_j)``.
    """
    n0 = t0.size
    if n0 < 1:
        raise ValueError("the pattern must have at least one application")
    if max_n < 0:
        raise ValueError("max_n must be non-negative")
    F = f.coefficients if f is not None and len(f) > max_n else _all_terms(max_n)
    g: list[int] = []
    h: list[int] = []  # h_j = 2 F_j - G_j
    for n in range(max_n + 1):
        total = 1 if n == n0 else 0
        for i in range(n0, n):
            total += g[i] * h[n - 1 - i]
        g.append(total)
        h.append(2 * F[n] - total)
    return CoeffSeries(tuple(g), f"f_t0({print_cl(t0)})", t0)


def coeffs_m(max_n: int) -> CoeffSeries:
    """Large Schroder numbers from ``M = 1 + zM + zM^2``."""
    if max_n < 0:
        raise ValueError("max_n must be non-negative")
    m = [1]
    for n in range(1, max_n + 1):
        m.append(m[n - 1] + sum(m[i] * m[n - 1 - i] for i in range(n)))
    return CoeffSeries(tuple(m), "m")


def ratio(t0: CLTerm, n: int, g: Optional[CoeffSeries] = None) -> Fraction:
    """Exact fraction of size-``n`` SKI terms containing ``t0``."""
    if n < 1:
        raise ValueError("n must be positive")
    if g is None or len(g) <= n:
        g = coeffs_f_t0(t0, n)
    return Fraction(g[n], _all_terms(n)[n])


def render_decimal(x: Fraction, digits: int = 12) -> str:
    """``x`` rounded to ``digits`` significant digits."""
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))
