"""Exact counting and exhaustive enumeration of lambda terms and combinators."""

from __future__ import annotations

import logging
import math
import os
from functools import lru_cache
from typing import Iterator

from .terms import Abs, App, Atom, CApp, CLTerm, LambdaTerm, Var

log = logging.getLogger(__name__)

CACHE_HEADER = "LAMBDA-COUNT-CACHE v1"
LAMBDA_ENUM_CAP = 12
CL_ENUM_CAP = 9

__all__ = [
    "CountTable", "CapExceeded", "default_table",
    "count_closed_lambda", "count_lambda", "enumerate_closed_lambda", "enumerate_lambda",
    "catalan", "schroder_M", "schroder_Mnk", "count_cl", "enumerate_cl",
    "closed_terms_up_to",
]


class CapExceeded(ValueError):
    pass


class CountTable:
    """Memoized counts ``T(n, k)`` of terms of size n with free indices < k.

    Recurrence: ``T(0, k) = k`` and
    ``T(n, k) = T(n-1, k+1) + sum_{i<n} T(i, k) * T(n-1-i, k)``,
    so ``L_n = T(n, 0)``. Entries are filled for every ``n + k <= limit``,
    which is exactly the region a sampler for size ``limit`` visits.
    """

    def __init__(self):
        self._rows: list[list[int]] = []
        self.limit = -1

    def fill(self, limit: int) -> "CountTable":
        if limit <= self.limit:
            return self
        rows = self._rows
        for n in range(limit + 1):
            if n == len(rows):
                rows.append([])
            row = rows[n]
            for k in range(len(row), limit - n + 1):
                if n == 0:
                    row.append(k)
                    continue
                total = rows[n - 1][k + 1]
                for i in range(n):
                    total += rows[i][k] * rows[n - 1 - i][k]
                row.append(total)
        self.limit = limit
        return self

    def T(self, n: int, k: int) -> int:
        if n < 0 or k < 0:
            raise ValueError("n and k must be non-negative")
        if n + k > self.limit:
            self.fill(n + k)
        return self._rows[n][k]

    def closed(self, n: int) -> int:
        return self.T(n, 0)

    def items(self):
        for n, row in enumerate(self._rows):
            for k, value in enumerate(row):
                yield n, k, value

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w") as fh:
            fh.write(CACHE_HEADER + "\n")
            for n, k, value in self.items():
                fh.write(f"{n}\t{k}\t{value}\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "CountTable":
        """Load a cache file; unreadable or inconsistent files are ignored."""
        table = cls()
        try:
            with open(path) as fh:
                if fh.readline().rstrip("\n") != CACHE_HEADER:
                    raise ValueError("bad header")
                entries = {}
                for line in fh:
                    n, k, value = line.rstrip("\n").split("\t")
                    entries[int(n), int(k)] = int(value)
        except (OSError, ValueError) as exc:
            log.warning("ignoring count cache %s: %s", path, exc)
            return table
        limit = max((n + k for n, k in entries), default=-1)
        table.fill(limit)
        stale = [key for key, value in entries.items() if table.T(*key) != value]
        if stale:
            log.warning("count cache %s disagrees at %d entries; recomputed", path, len(stale))
        return table


_default = CountTable()


def default_table() -> CountTable:
    return _default


def count_lambda(n: int, k: int) -> int:
    """Number of terms of size ``n`` all of whose free indices are < ``k``."""
    return _default.T(n, k)


def count_closed_lambda(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return _default.T(n, 0)


# Enumerations of small classes are materialised once and reused; above this
# many terms they are streamed to keep memory bounded.
_LIST_LIMIT = 20_000


@lru_cache(maxsize=None)
def _lambda_list(n: int, k: int) -> tuple:
    return tuple(_lambda_stream(n, k))


def _lambda_iter(n: int, k: int):
    if count_lambda(n, k) <= _LIST_LIMIT:
        return iter(_lambda_list(n, k))
    return _lambda_stream(n, k)


def _lambda_stream(n: int, k: int) -> Iterator[LambdaTerm]:
    # A term is a chain of m head abstractions over a variable or an
    # application, so each application class is produced only once.
    for m in range(n + 1):
        for core in _core_iter(n - m, k + m):
            for _ in range(m):
                core = Abs(core)
            yield core


def _core_iter(n: int, k: int) -> Iterator[LambdaTerm]:
    if n == 0:
        for i in range(k):
            yield Var(i)
        return
    for i in range(n):
        j = n - 1 - i
        ci, cj = count_lambda(i, k), count_lambda(j, k)
        if ci == 0 or cj == 0:
            continue
        if ci <= cj:
            lefts = _lambda_list(i, k) if ci <= _LIST_LIMIT else tuple(_lambda_stream(i, k))
            for right in _lambda_iter(j, k):
                for left in lefts:
                    yield App(left, right)
        else:
            rights = _lambda_list(j, k) if cj <= _LIST_LIMIT else tuple(_lambda_stream(j, k))
            for left in _lambda_iter(i, k):
                for right in rights:
                    yield App(left, right)


def enumerate_lambda(n: int, k: int = 0, cap: int = LAMBDA_ENUM_CAP) -> Iterator[LambdaTerm]:
    """Every term of size ``n`` with free indices below ``k``, each once."""
    if n > cap:
        raise CapExceeded(f"enumeration of size {n} exceeds cap {cap}")
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    return _lambda_iter(n, k)


def enumerate_closed_lambda(n: int, cap: int = LAMBDA_ENUM_CAP) -> Iterator[LambdaTerm]:
    return enumerate_lambda(n, 0, cap)


def closed_terms_up_to(j: int) -> frozenset:
    """All closed terms of size at most ``j``."""
    return frozenset(t for i in range(j + 1) for t in enumerate_closed_lambda(i))


# ------------------------------------------------ Catalan and Schroder

_catalan = [1]


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_catalan) <= n:
        m = len(_catalan) - 1
        _catalan.append(_catalan[m] * 2 * (2 * m + 1) // (m + 2))
    return _catalan[n]


_schroder = [1]


def schroder_M(n: int) -> int:
    """Unary-binary trees with ``n`` inner nodes (large Schroder numbers).

    Uses ``M(n) = M(n-1) + sum_{i<n} M(i) M(n-1-i)`` from ``M = 1 + zM + zM^2``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_schroder) <= n:
        m = len(_schroder)
        _schroder.append(_schroder[m - 1]
                         + sum(_schroder[i] * _schroder[m - 1 - i] for i in range(m)))
    return _schroder[n]


def schroder_Mnk(n: int, k: int) -> int:
    """Unary-binary trees with ``n`` inner nodes and ``k`` leaves."""
    if k < 1:
        raise ValueError("a tree has at least one leaf")
    if n < 0 or n - k + 1 < 0:
        return 0
    return catalan(k - 1) * math.comb(n + k - 1, n - k + 1)


def count_cl(n: int) -> int:
    """``F_n = C(n) 3^(n+1)``, the number of SKI terms of size ``n``."""
    return catalan(n) * 3 ** (n + 1)


# ---------------------------------------------------- SKI enumeration

_ATOMS = (Atom("S"), Atom("K"), Atom("I"))


@lru_cache(maxsize=None)
def _cl_list(n: int) -> tuple:
    return tuple(_cl_stream(n))


def _cl_iter(n: int):
    return iter(_cl_list(n)) if count_cl(n) <= _LIST_LIMIT else _cl_stream(n)


def _cl_stream(n: int) -> Iterator[CLTerm]:
    if n == 0:
        yield from _ATOMS
        return
    for i in range(n):
        j = n - 1 - i
        for left in _cl_iter(i):
            for right in _cl_iter(j):
                yield CApp(left, right)


def enumerate_cl(n: int, cap: int = CL_ENUM_CAP) -> Iterator[CLTerm]:
    if n > cap:
        raise CapExceeded(f"enumeration of size {n} exceeds cap {cap}")
    if n < 0:
        raise ValueError("n must be non-negative")
    return _cl_iter(n)
