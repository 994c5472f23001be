"""Dependency pairs: defined symbols, the pair set, sharp-marking and caps."""
from __future__ import annotations

from dataclasses import dataclass

from .rewrite import TRS
from .terms import (
    App,
    Rule,
    Signature,
    Symbol,
    Term,
    Var,
    is_strict_subterm,
    maxvar,
    subterms,
    vars_of,
)


class DpError(Exception):
    pass


class VarLhs(DpError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"rule {index}: left-hand side is a variable")


class FreshRhsVar(DpError):
    def __init__(self, index: int, var: int):
        self.index = index
        self.var = var
        super().__init__(f"rule {index}: variable {var} occurs in rhs but not in lhs")


class RootIsVariable(DpError):
    def __init__(self, rule: Rule):
        self.rule = rule
        super().__init__(f"cannot mark {rule}: one side is a variable")


def defined_symbols(trs: TRS) -> set[Symbol]:
    return {r.lhs.symbol for r in trs.rules if isinstance(r.lhs, App)}


def check_dp_preconditions(trs: TRS) -> None:
    """Raise if some lhs is a variable or some rule introduces a variable."""
    for i, r in enumerate(trs.rules):
        if isinstance(r.lhs, Var):
            raise VarLhs(i)
        extra = vars_of(r.rhs) - vars_of(r.lhs)
        if extra:
            raise FreshRhsVar(i, min(extra))


def calls(trs: TRS, t: Term, defined: set[Symbol] | None = None) -> list[Term]:
    """Defined-headed subterms of ``t`` in pre-order, nested ones included."""
    if defined is None:
        defined = defined_symbols(trs)
    return [u for _, u in subterms(t) if isinstance(u, App) and u.symbol in defined]


def mkdp(trs: TRS) -> list[Rule]:
    return [p for _, p in mkdp_with_origin(trs)]


def mkdp_with_origin(trs: TRS) -> list[tuple[int, Rule]]:
    """Dependency pairs tagged with the index of the rule they come from."""
    defined = defined_symbols(trs)
    pairs = []
    for i, r in enumerate(trs.rules):
        for s in calls(trs, r.rhs, defined):
            if not is_strict_subterm(s, r.lhs):
                pairs.append((i, Rule(r.lhs, s)))
    return pairs


def mark_root(t: Term) -> Term:
    if isinstance(t, Var):
        raise RootIsVariable(Rule(t, t))
    return App(t.symbol.sharp(), t.args)


def unmark_root(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    return App(t.symbol.unsharp(), t.args)


def mark(trs: TRS, pairs: list[Rule]) -> tuple[Signature, TRS, list[Rule]]:
    """Move to the sharped signature and mark the root symbols of every pair."""
    sig = trs.sig.sharped()
    marked = []
    for p in pairs:
        if isinstance(p.lhs, Var) or isinstance(p.rhs, Var):
            raise RootIsVariable(p)
        marked.append(Rule(mark_root(p.lhs), mark_root(p.rhs)))
    return sig, TRS(sig, trs.rules), marked


def marked_dps(trs: TRS) -> tuple[Signature, TRS, list[Rule]]:
    return mark(trs, mkdp(trs))


@dataclass(frozen=True)
class CapResult:
    cap: Term
    aliens: tuple[Term, ...]
    first_fresh: int

    @property
    def alien_count(self) -> int:
        return len(self.aliens)

    @property
    def alien_subst(self) -> dict[int, Term]:
        return {self.first_fresh + i: a for i, a in enumerate(self.aliens)}


def cap(trs: TRS, t: Term, defined: set[Symbol] | None = None) -> CapResult:
    """Replace maximal defined-headed subterms by fresh variables.

    Fresh variables are maxvar(t)+1, maxvar(t)+2, ... in left-to-right order.
    """
    if defined is None:
        defined = defined_symbols(trs)
    first = maxvar(t) + 1
    aliens: list[Term] = []

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            return u
        if u.symbol in defined:
            aliens.append(u)
            return Var(first + len(aliens) - 1)
        return App(u.symbol, tuple(go(a) for a in u.args))

    c = go(t)
    return CapResult(c, tuple(aliens), first)
