"""First-order terms over a fixed-arity signature.

Variables are natural-number indices.  Application nodes carry their symbol,
and a symbol knows its own arity, so an ill-formed application can never be
built: ``App.__post_init__`` rejects it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union


class TermError(Exception):
    pass


class ArityMismatch(TermError):
    def __init__(self, symbol, expected: int, got: int):
        self.symbol = symbol
        self.expected = expected
        self.got = got
        super().__init__(f"{symbol} expects {expected} argument(s), got {got}")


class UnknownSymbol(TermError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown symbol {name!r}")


@dataclass(frozen=True, order=True)
class Symbol:
    """A function symbol.  Identity is (name, marked); arity rides along."""

    name: str
    arity: int = field(compare=False)
    marked: bool = False

    def sharp(self) -> "Symbol":
        return Symbol(self.name, self.arity, True)

    def unsharp(self) -> "Symbol":
        return Symbol(self.name, self.arity, False)

    def __str__(self):
        return self.name + "#" if self.marked else self.name


class Signature:
    """Ordered set of symbols, each with exactly one arity."""

    def __init__(self, symbols: Iterable[Symbol] = ()):
        self._by_key: dict[tuple[str, bool], Symbol] = {}
        for f in symbols:
            key = (f.name, f.marked)
            old = self._by_key.get(key)
            if old is not None and old.arity != f.arity:
                raise ArityMismatch(f, old.arity, f.arity)
            self._by_key.setdefault(key, f)

    @classmethod
    def from_arities(cls, arities: Mapping[str, int]) -> "Signature":
        return cls(Symbol(name, n) for name, n in arities.items())

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._by_key.values())

    def __len__(self):
        return len(self._by_key)

    def __contains__(self, f) -> bool:
        if isinstance(f, Symbol):
            return (f.name, f.marked) in self._by_key
        return (f, False) in self._by_key

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return [(f, f.arity) for f in self] == [(g, g.arity) for g in other]

    def __repr__(self):
        inner = ", ".join(f"{f}/{f.arity}" for f in self)
        return f"Signature({inner})"

    def symbol(self, name: str, marked: bool = False) -> Symbol:
        try:
            return self._by_key[(name, marked)]
        except KeyError:
            raise UnknownSymbol(name + ("#" if marked else "")) from None

    def arity(self, f: Symbol | str) -> int:
        if isinstance(f, Symbol):
            return self.symbol(f.name, f.marked).arity
        return self.symbol(f).arity

    def sharped(self) -> "Signature":
        """The signature extended with a marked copy of every unmarked symbol."""
        base = [f for f in self if not f.marked]
        return Signature(list(self) + [f.sharp() for f in base])

    def compatible(self, other: "Signature") -> bool:
        return all(
            self._by_key[(f.name, f.marked)].arity == f.arity
            for f in other
            if (f.name, f.marked) in self._by_key
        )

    def union(self, other: "Signature") -> "Signature":
        return Signature(list(self) + list(other))


@dataclass(frozen=True)
class Var:
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise TermError(f"variable index must be a natural number, got {self.index!r}")

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    symbol: Symbol
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.symbol.arity:
            raise ArityMismatch(self.symbol, self.symbol.arity, len(self.args))

    def __str__(self):
        if not self.args:
            return str(self.symbol)
        return f"{self.symbol}({','.join(map(str, self.args))})"


Term = Union[Var, App]
Position = tuple
Substitution = Mapping[int, Term]


def mk_app(sig: Signature, f: Symbol | str, args: Sequence[Term] = ()) -> App:
    """Build ``f(args)``, resolving ``f`` in ``sig`` and checking its arity."""
    if isinstance(f, Symbol):
        sym = sig.symbol(f.name, f.marked)
    else:
        sym = sig.symbol(f)
    if len(args) != sym.arity:
        raise ArityMismatch(sym, sym.arity, len(args))
    return App(sym, tuple(args))


def is_var(t: Term) -> bool:
    return isinstance(t, Var)


def root(t: Term) -> Symbol | None:
    return t.symbol if isinstance(t, App) else None


def vars_of(t: Term) -> set[int]:
    out: set[int] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u.index)
        else:
            stack.extend(u.args)
    return out


def var_list(t: Term) -> list[int]:
    """Variable occurrences in pre-order, duplicates kept."""
    return [u.index for _, u in subterms(t) if isinstance(u, Var)]


def maxvar(t: Term) -> int:
    # ground terms get 0 so fresh-variable arithmetic stays total
    return max(vars_of(t), default=0)


def symbols_of(t: Term) -> set[Symbol]:
    return {u.symbol for _, u in subterms(t) if isinstance(u, App)}


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def well_formed(t: Term, sig: Signature | None = None) -> bool:
    """Recursive audit of the arity invariant (and membership in ``sig``)."""
    if isinstance(t, Var):
        return True
    if len(t.args) != t.symbol.arity:
        return False
    if sig is not None and (t.symbol not in sig or sig.arity(t.symbol) != t.symbol.arity):
        return False
    return all(well_formed(a, sig) for a in t.args)


def apply_subst(s: Substitution, t: Term) -> Term:
    if not s:
        return t
    if isinstance(t, Var):
        return s.get(t.index, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(apply_subst(s, a) for a in t.args))


def compose(s1: Substitution, s2: Substitution) -> dict[int, Term]:
    """``s1;s2``: apply s1 first, then s2."""
    out = {x: apply_subst(s2, t) for x, t in s1.items()}
    for x, t in s2.items():
        out.setdefault(x, t)
    return {x: t for x, t in out.items() if t != Var(x)}


def subterms(t: Term) -> list[tuple[Position, Term]]:
    """All subterms in pre-order, with their positions (0-based child paths)."""
    out = []
    stack: list[tuple[Position, Term]] = [((), t)]
    while stack:
        pos, u = stack.pop()
        out.append((pos, u))
        if isinstance(u, App):
            for i in range(len(u.args) - 1, -1, -1):
                stack.append((pos + (i,), u.args[i]))
    return out


def subterm_at(t: Term, pos: Sequence[int]) -> Term:
    for i in pos:
        if not isinstance(t, App) or not 0 <= i < len(t.args):
            raise TermError(f"invalid position {tuple(pos)}")
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Sequence[int], u: Term) -> Term:
    return fill(context_at(t, pos), u)


def is_subterm(s: Term, t: Term) -> bool:
    return any(u == s for _, u in subterms(t))


def is_strict_subterm(s: Term, t: Term) -> bool:
    return any(u == s for pos, u in subterms(t) if pos)


def match_term(pattern: Term, subject: Term) -> dict[int, Term] | None:
    """The unique ``s`` on vars(pattern) with ``apply_subst(s, pattern) == subject``."""
    s: dict[int, Term] = {}
    stack = [(pattern, subject)]
    while stack:
        p, u = stack.pop()
        if isinstance(p, Var):
            bound = s.get(p.index)
            if bound is None:
                s[p.index] = u
            elif bound != u:
                return None
        elif isinstance(u, App) and u.symbol == p.symbol:
            stack.extend(zip(p.args, u.args))
        else:
            return None
    return s


def rename_canonical(terms: Sequence[Term]) -> tuple[Term, ...]:
    """Rename variables to 0, 1, ... in order of first occurrence across ``terms``."""
    ren: dict[int, Term] = {}
    for t in terms:
        for x in var_list(t):
            if x not in ren:
                ren[x] = Var(len(ren))
    return tuple(apply_subst(ren, t) for t in terms)


# contexts

class _Hole:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Hole"

    def __reduce__(self):
        return (_Hole, ())


Hole = _Hole()


@dataclass(frozen=True)
class Node:
    symbol: Symbol
    before: tuple
    inner: "Context"
    after: tuple

    def __post_init__(self):
        n = len(self.before) + 1 + len(self.after)
        if n != self.symbol.arity:
            raise ArityMismatch(self.symbol, self.symbol.arity, n)


Context = Union[_Hole, Node]


def fill(c: Context, t: Term) -> Term:
    # iterative so deep contexts are fine
    frames = []
    while isinstance(c, Node):
        frames.append(c)
        c = c.inner
    for node in reversed(frames):
        t = App(node.symbol, node.before + (t,) + node.after)
    return t


def context_at(t: Term, pos: Sequence[int]) -> Context:
    """The context obtained by punching a hole into ``t`` at ``pos``."""
    if not pos:
        return Hole
    if not isinstance(t, App) or not 0 <= pos[0] < len(t.args):
        raise TermError(f"invalid position {tuple(pos)}")
    i = pos[0]
    return Node(t.symbol, t.args[:i], context_at(t.args[i], pos[1:]), t.args[i + 1:])


def context_depth(c: Context) -> int:
    n = 0
    while isinstance(c, Node):
        n += 1
        c = c.inner
    return n


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"

    def maxvar(self) -> int:
        return max(maxvar(self.lhs), maxvar(self.rhs))

    def canonical(self) -> "Rule":
        """Variant with variables renumbered by first occurrence (lhs, then rhs)."""
        return Rule(*rename_canonical((self.lhs, self.rhs)))
