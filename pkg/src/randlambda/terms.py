"""Untyped lambda terms in de Bruijn form and SKI combinators.

Both families are hash-consed: building a term structurally equal to a live
one returns the very same object. Equality is therefore identity, alpha
equivalence is free, and memo tables can key on terms directly.

Every lambda node caches a handful of structural statistics at construction
(size, free-index bitmask, lambda counts, width, unary height), so queries on
them are O(1) regardless of depth.
"""

from __future__ import annotations

import re
import threading
import weakref
from typing import Iterator, Sequence

__all__ = [
    "LambdaTerm", "Var", "Abs", "App",
    "CLTerm", "Atom", "CApp", "S", "K", "I",
    "ParseError", "UnboundVariableError",
    "parse_lambda", "print_lambda", "parse_cl", "print_cl",
    "size_of", "subtrees", "contains_subterm", "contains_subterm_cl",
    "is_closed", "nodes", "OMEGA_LAMBDA", "OMEGA_CL",
]

_lock = threading.Lock()
# key -> weak reference to the unique live term with that structure
_table: dict = {}
_set = object.__setattr__


def _forget(ref, key):
    if _table.get(key) is ref:
        del _table[key]


def _store(key, term):
    with _lock:
        ref = _table.get(key)
        live = ref() if ref is not None else None
        if live is not None:
            return live
        _table[key] = weakref.ref(term, lambda r, key=key: _forget(r, key))
        return term


class LambdaTerm:
    """Base class of Var, Abs and App.

    Cached attributes:

    size      number of Abs and App nodes
    free      bitmask of free de Bruijn indices (bit i set iff index i is free)
    lambdas   number of Abs nodes
    binders   number of binding Abs nodes
    width     lambda-width (largest antichain of binding lambdas)
    height    unary height (most lambdas on a root-to-leaf path)
    normal    True iff the term contains no beta redex
    """

    __slots__ = ("size", "free", "lambdas", "binders", "width", "height",
                 "normal", "__weakref__")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __delattr__(self, name):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __str__(self):
        return print_lambda(self) if self.free == 0 else repr(self)

    @property
    def closed(self) -> bool:
        return self.free == 0


class Var(LambdaTerm):
    __slots__ = ("index",)

    def __new__(cls, index: int):
        key = ("V", index)
        ref = _table.get(key)
        if ref is not None:
            t = ref()
            if t is not None:
                return t
        if index < 0:
            raise ValueError("de Bruijn index must be non-negative")
        t = object.__new__(cls)
        _set(t, "index", index)
        _set(t, "size", 0)
        _set(t, "free", 1 << index)
        _set(t, "lambdas", 0)
        _set(t, "binders", 0)
        _set(t, "width", 0)
        _set(t, "height", 0)
        _set(t, "normal", True)
        return _store(key, t)

    def __reduce__(self):
        return (Var, (self.index,))

    def __repr__(self):
        return f"Var({self.index})"


class Abs(LambdaTerm):
    __slots__ = ("body", "binds")

    def __new__(cls, body: LambdaTerm):
        key = ("A", body)
        ref = _table.get(key)
        if ref is not None:
            t = ref()
            if t is not None:
                return t
        t = object.__new__(cls)
        binds = body.free & 1
        _set(t, "body", body)
        _set(t, "binds", bool(binds))
        _set(t, "size", body.size + 1)
        _set(t, "free", body.free >> 1)
        _set(t, "lambdas", body.lambdas + 1)
        _set(t, "binders", body.binders + binds)
        _set(t, "width", max(binds, body.width))
        _set(t, "height", body.height + 1)
        _set(t, "normal", body.normal)
        return _store(key, t)

    def __reduce__(self):
        return (Abs, (self.body,))

    def __repr__(self):
        return f"Abs({self.body!r})"


class App(LambdaTerm):
    __slots__ = ("left", "right")

    def __new__(cls, left: LambdaTerm, right: LambdaTerm):
        key = ("P", left, right)
        ref = _table.get(key)
        if ref is not None:
            t = ref()
            if t is not None:
                return t
        t = object.__new__(cls)
        _set(t, "left", left)
        _set(t, "right", right)
        _set(t, "size", left.size + right.size + 1)
        _set(t, "free", left.free | right.free)
        _set(t, "lambdas", left.lambdas + right.lambdas)
        _set(t, "binders", left.binders + right.binders)
        _set(t, "width", left.width + right.width)
        _set(t, "height", left.height if left.height > right.height else right.height)
        _set(t, "normal", left.normal and right.normal and not isinstance(left, Abs))
        return _store(key, t)

    def __reduce__(self):
        return (App, (self.left, self.right))

    def __repr__(self):
        return f"App({self.left!r}, {self.right!r})"


class CLTerm:
    """Base class of SKI combinators; ``size`` counts application nodes."""

    __slots__ = ("size", "__weakref__")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __str__(self):
        return print_cl(self)


class Atom(CLTerm):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        key = ("C", name)
        ref = _table.get(key)
        if ref is not None:
            t = ref()
            if t is not None:
                return t
        if name not in ("S", "K", "I"):
            raise ValueError(f"unknown combinator {name!r}")
        t = object.__new__(cls)
        _set(t, "name", name)
        _set(t, "size", 0)
        return _store(key, t)

    def __reduce__(self):
        return (Atom, (self.name,))

    def __repr__(self):
        return self.name


class CApp(CLTerm):
    __slots__ = ("left", "right")

    def __new__(cls, left: CLTerm, right: CLTerm):
        key = ("Q", left, right)
        ref = _table.get(key)
        if ref is not None:
            t = ref()
            if t is not None:
                return t
        t = object.__new__(cls)
        _set(t, "left", left)
        _set(t, "right", right)
        _set(t, "size", left.size + right.size + 1)
        return _store(key, t)

    def __reduce__(self):
        return (CApp, (self.left, self.right))

    def __repr__(self):
        return f"CApp({self.left!r}, {self.right!r})"


S = Atom("S")
K = Atom("K")
I = Atom("I")  # noqa: E741


def size_of(t: LambdaTerm | CLTerm) -> int:
    return t.size


def is_closed(t: LambdaTerm) -> bool:
    return t.free == 0


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    """Syntax error; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnboundVariableError(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unbound variable {name!r}", offset)
        self.name = name


_LAMBDA_TOKEN = re.compile(r"\s*(?:(?P<lam>\\|λ)|(?P<dot>\.)|(?P<open>\()|(?P<close>\))"
                           r"|(?P<var>[a-z][a-zA-Z0-9_]*))")
_CL_TOKEN = re.compile(r"\s*(?:(?P<atom>[SKI])|(?P<open>\()|(?P<close>\)))")


def _tokenize(text: str, pattern: re.Pattern) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = pattern.match(text, pos)
        if m is None or m.lastgroup is None:
            bad = len(text) - len(text[pos:].lstrip())
            raise ParseError("unexpected character", len(text[:bad].encode()))
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), len(text[:start].encode())))
        pos = m.end()
    tokens.append(("eof", "", len(text.encode())))
    return tokens


class _LambdaParser:
    def __init__(self, text: str, env: Sequence[str]):
        self.tokens = _tokenize(text, _LAMBDA_TOKEN)
        self.pos = 0
        # innermost binder last
        self.scope = list(env)

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind):
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind}, found {what}", tok[2])
        self.pos += 1
        return tok

    def term(self) -> LambdaTerm:
        head = None
        while True:
            kind, value, offset = self.peek()
            if kind == "lam":
                arg = self.abstraction()
            elif kind == "var":
                self.pos += 1
                arg = self.variable(value, offset)
            elif kind == "open":
                self.pos += 1
                arg = self.term()
                self.take("close")
            else:
                break
            head = arg if head is None else App(head, arg)
            if kind == "lam":
                break
        if head is None:
            kind, value, offset = self.peek()
            what = "end of input" if kind == "eof" else repr(value)
            raise ParseError(f"expected a term, found {what}", offset)
        return head

    def abstraction(self) -> LambdaTerm:
        self.take("lam")
        name = self.take("var")[1]
        self.take("dot")
        self.scope.append(name)
        try:
            body = self.term()
        finally:
            self.scope.pop()
        return Abs(body)

    def variable(self, name, offset) -> LambdaTerm:
        for depth, bound in enumerate(reversed(self.scope)):
            if bound == name:
                return Var(depth)
        raise UnboundVariableError(name, offset)


def parse_lambda(text: str, env: Sequence[str] = ()) -> LambdaTerm:
    """Parse named lambda syntax into nameless form.

    ``\\x. body`` (or ``λx. body``) extends as far right as possible and
    application is left-associative juxtaposition. Free names are an error
    unless listed in ``env`` (outermost first).
    """
    p = _LambdaParser(text, env)
    t = p.term()
    kind, value, offset = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {value!r}", offset)
    return t


def parse_cl(text: str) -> CLTerm:
    tokens = _tokenize(text, _CL_TOKEN)
    pos = 0

    def term():
        nonlocal pos
        head = None
        while True:
            kind, value, offset = tokens[pos]
            if kind == "atom":
                pos += 1
                arg = Atom(value)
            elif kind == "open":
                pos += 1
                arg = term()
                if tokens[pos][0] != "close":
                    raise ParseError("expected ')'", tokens[pos][2])
                pos += 1
            else:
                break
            head = arg if head is None else CApp(head, arg)
        if head is None:
            raise ParseError("expected a combinator", tokens[pos][2])
        return head

    t = term()
    if tokens[pos][0] != "eof":
        raise ParseError(f"unexpected {tokens[pos][1]!r}", tokens[pos][2])
    return t


# --------------------------------------------------------------- printing

def print_lambda(t: LambdaTerm, env: Sequence[str] = ()) -> str:
    """Render with binders named ``x<depth>``; applications are parenthesised.

    Free indices are named from ``env`` (outermost first).
    """
    out: list[str] = []
    stack: list = [(t, 0, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        node, depth, wrap = item
        if isinstance(node, Var):
            if node.index < depth:
                out.append(f"x{depth - 1 - node.index}")
            else:
                k = node.index - depth
                if k >= len(env):
                    raise ValueError(f"free index {node.index} at depth {depth} has no name")
                out.append(env[len(env) - 1 - k])
        elif isinstance(node, Abs):
            if wrap:
                stack.append(")")
            stack.append((node.body, depth + 1, False))
            out.append(("(\\x%d. " if wrap else "\\x%d. ") % depth)
        else:
            stack.append(")")
            stack.append((node.right, depth, False))
            stack.append(" ")
            stack.append((node.left, depth, True))
            out.append("(")
    return "".join(out)


def print_cl(t: CLTerm) -> str:
    """Left-associative rendering with the minimum of parentheses."""
    out: list[str] = []
    stack: list = [(t, False)]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        node, wrap = item
        if isinstance(node, Atom):
            out.append(node.name)
            continue
        if wrap:
            out.append("(")
            stack.append(")")
        stack.append((node.right, True))
        stack.append(" ")
        stack.append((node.left, False))
    return "".join(out)


# --------------------------------------------------------------- subterms

def subtrees(t: LambdaTerm | CLTerm) -> Iterator[tuple[LambdaTerm | CLTerm, str]]:
    """Depth-first, left-to-right enumeration of ``(subterm, path)``.

    A path is a string over ``L``/``R`` (application sides) and ``D`` (under
    an abstraction); the root has the empty path.
    """
    stack = [(t, "")]
    while stack:
        node, path = stack.pop()
        yield node, path
        if isinstance(node, (App, CApp)):
            stack.append((node.right, path + "R"))
            stack.append((node.left, path + "L"))
        elif isinstance(node, Abs):
            stack.append((node.body, path + "D"))


def nodes(t):
    """Distinct subterm objects of ``t`` (shared subterms visited once)."""
    seen = {id(t)}
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, (App, CApp)):
            children = (node.left, node.right)
        elif isinstance(node, Abs):
            children = (node.body,)
        else:
            continue
        for c in children:
            if id(c) not in seen:
                seen.add(id(c))
                stack.append(c)


def _contains(t, t0) -> bool:
    if t0.size > t.size:
        return False
    size = t0.size
    seen = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if node is t0:
            return True
        if node.size <= size:
            continue
        if isinstance(node, (App, CApp)):
            children = (node.left, node.right)
        else:
            children = (node.body,)
        for c in children:
            if c.size >= size and id(c) not in seen:
                seen.add(id(c))
                stack.append(c)
    return False


def contains_subterm(t: LambdaTerm, t0: LambdaTerm) -> bool:
    """Whether the closed term ``t0`` occurs as a subtree of ``t``."""
    if t0.free:
        raise ValueError("subterm patterns must be closed")
    return _contains(t, t0)


def contains_subterm_cl(t: CLTerm, t0: CLTerm) -> bool:
    return _contains(t, t0)


OMEGA_LAMBDA = parse_lambda(r"(\x. x x) (\x. x x)")
OMEGA_CL = parse_cl("S I I (S I I)")
