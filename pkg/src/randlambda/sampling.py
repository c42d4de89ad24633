"""Exactly uniform samplers for closed lambda terms and SKI terms of a given size.

Both samplers use the recursive method: every choice is made by drawing a
uniform integer below the exact number of completions, so no floating point
enters the distribution. Randomness comes from ``random.Random`` instances
derived from ``(seed, stream, index)``, which makes every draw reproducible
independently of how work is split between processes.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .counting import CountTable, catalan, default_table
from .terms import Abs, App, Atom, CApp, CLTerm, LambdaTerm, Var

__all__ = ["SampleConfig", "derive_rng", "rng_stream", "sample_lambda", "sample_cl", "sample_many"]

MODELS = ("lambda", "cl")
_ATOMS = (Atom("S"), Atom("K"), Atom("I"))


@dataclass(frozen=True)
class SampleConfig:
    seed: int
    n: int
    count: int
    model: str = "lambda"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.n < 0 or self.count < 0:
            raise ValueError("size and count must be non-negative")


def derive_rng(seed: int, stream, index: int) -> random.Random:
    """Generator for draw ``index`` of ``stream``; a pure function of its arguments."""
    digest = hashlib.blake2b(repr((int(seed), stream, int(index))).encode(), digest_size=32).digest()
    return random.Random(int.from_bytes(digest, "big"))


def rng_stream(seed: int, stream) -> Iterator[random.Random]:
    """Independent generators for draws 0, 1, 2, ... of ``stream``."""
    i = 0
    while True:
        yield derive_rng(seed, stream, i)
        i += 1


def sample_lambda(n: int, rng: random.Random, table: Optional[CountTable] = None) -> LambdaTerm:
    """A closed term drawn uniformly among all closed terms of size ``n``."""
    table = table or default_table()
    if n < 0 or table.closed(n) == 0:
        raise ValueError(f"there are no closed terms of size {n}")
    T = table.T
    ops = []
    todo = [(n, 0)]
    while todo:
        m, k = todo.pop()
        if m == 0:
            ops.append(rng.randrange(k))
            continue
        r = rng.randrange(T(m, k))
        w = T(m - 1, k + 1)
        if r < w:
            ops.append(-1)
            todo.append((m - 1, k + 1))
            continue
        r -= w
        for i in range(m):
            w = T(i, k) * T(m - 1 - i, k)
            if r < w:
                break
            r -= w
        ops.append(-2)
        todo.append((m - 1 - i, k))
        todo.append((i, k))
    return _build_lambda(ops)


def _build_lambda(ops: list) -> LambdaTerm:
    # ops is a preorder listing: index >= 0 for variables, -1 abstraction, -2 application
    stack: list = []
    for op in reversed(ops):
        if op >= 0:
            stack.append(Var(op))
        elif op == -1:
            stack.append(Abs(stack.pop()))
        else:
            left = stack.pop()
            stack.append(App(left, stack.pop()))
    return stack[0]


def sample_cl(n: int, rng: random.Random) -> CLTerm:
    """A combinator drawn uniformly among all ``C(n) 3^(n+1)`` of size ``n``."""
    if n < 0:
        raise ValueError("size must be non-negative")
    ops = []
    todo = [n]
    while todo:
        m = todo.pop()
        if m == 0:
            ops.append(-1)
            continue
        r = rng.randrange(catalan(m))
        for i in range(m):
            w = catalan(i) * catalan(m - 1 - i)
            if r < w:
                break
            r -= w
        ops.append(-2)
        todo.append(m - 1 - i)
        todo.append(i)
    stack: list = []
    leaves = [_ATOMS[rng.randrange(3)] for _ in range(n + 1)]
    for op in reversed(ops):
        if op == -1:
            stack.append(leaves.pop())
        else:
            left = stack.pop()
            stack.append(CApp(left, stack.pop()))
    return stack[0]


def sample_many(config: SampleConfig, table: Optional[CountTable] = None) -> list:
    """``config.count`` draws; draw ``i`` depends only on the seed, model, size and ``i``."""
    out = []
    for i in range(config.count):
        rng = derive_rng(config.seed, (config.model, config.n), i)
        if config.model == "lambda":
            out.append(sample_lambda(config.n, rng, table))
        else:
            out.append(sample_cl(config.n, rng))
    return out
