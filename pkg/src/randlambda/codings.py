"""A size-preserving injection that removes an idle head abstraction.

Terms in the domain start with at least ``G + 1`` abstractions, where
``G = g(size)``, and one of the first ``G`` of them binds nothing. Writing
the term as ``\\x1 ... x_(G+1). u`` and taking ``i`` as the first idle
position, the coded term is

    \\x1 ... x_(i-1) x_(i+1). x_(i+1) (\\x_(i+2) ... x_(G+1). u)

The idle abstraction is traded for one application node, so size is kept,
and the result has exactly ``i`` head abstractions followed by an
application of the last head variable. That shape, together with ``G``,
is enough to undo the coding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .classify import default_g, head_lambdas
from .rewrite import shift
from .terms import Abs, App, LambdaTerm, Var

__all__ = ["CodingResult", "phi_D", "decode_phi_D", "in_phi_D_domain", "in_phi_D_image", "idle_head_index"]


@dataclass(frozen=True)
class CodingResult:
    input: LambdaTerm
    output: LambdaTerm
    witness_index: int


def idle_head_index(t: LambdaTerm, g: int) -> Optional[int]:
    """1-based position of the first non-binding head abstraction among the first ``g``."""
    for i in range(1, g + 1):
        if not isinstance(t, Abs):
            return None
        if not t.binds:
            return i
        t = t.body
    return None


def in_phi_D_domain(t: LambdaTerm, g: Callable[[int], int] = default_g) -> bool:
    G = g(t.size)
    return not t.free and head_lambdas(t) >= G + 1 and idle_head_index(t, G) is not None


def phi_D(t: LambdaTerm, g: Callable[[int], int] = default_g) -> CodingResult:
    if t.free:
        raise ValueError("phi_D is defined on closed terms")
    G = g(t.size)
    if head_lambdas(t) < G + 1:
        raise ValueError(f"term has fewer than {G + 1} head abstractions")
    i = idle_head_index(t, G)
    if i is None:
        raise ValueError(f"the first {G} head abstractions all bind")
    u = t
    for _ in range(G + 1):
        u = u.body
    # drop the idle variable x_i, which sits at index G+1-i above u
    c = G + 1 - i
    u = shift(u, -1, c + 1)
    core = u
    for _ in range(G - i):
        core = Abs(core)
    out = Abs(App(Var(0), core))
    for _ in range(i - 1):
        out = Abs(out)
    return CodingResult(t, out, i)


def in_phi_D_image(t: LambdaTerm, g: Callable[[int], int] = default_g) -> bool:
    u = _decode(t, g(t.size))
    return u is not None and idle_head_index(u, g(u.size)) == head_lambdas(t)


def _decode(t: LambdaTerm, G: int) -> Optional[LambdaTerm]:
    i = head_lambdas(t)
    if not 1 <= i <= G:
        return None
    body = t
    for _ in range(i):
        body = body.body
    if not (isinstance(body, App) and body.left is Var(0)):
        return None
    core = body.right
    for _ in range(G - i):
        if not isinstance(core, Abs):
            return None
        core = core.body
    u = shift(core, 1, G + 1 - i)
    for _ in range(G + 1):
        u = Abs(u)
    return u


def decode_phi_D(t: LambdaTerm, g: Callable[[int], int] = default_g) -> LambdaTerm:
    """Inverse of :func:`phi_D` on its image."""
    u = _decode(t, g(t.size))
    if u is None:
        raise ValueError("term is not in the image of phi_D")
    return u
