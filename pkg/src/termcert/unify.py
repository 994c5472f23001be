"""Syntactic unification and the unification-based dependency-graph edges."""
from __future__ import annotations

from itertools import count

from .dp import defined_symbols
from .rewrite import TRS
from .terms import App, Rule, Symbol, Term, Var, apply_subst, maxvar, vars_of


def unify(t: Term, u: Term) -> dict[int, Term] | None:
    """Most general unifier of ``t`` and ``u``, fully applied, or None.

    Robinson-style: decompose, bind with occurs-check, and apply each new
    binding eagerly to the pending equations and to the solution so far.
    """
    sigma: dict[int, Term] = {}
    todo = [(t, u)]
    while todo:
        a, b = todo.pop()
        if a == b:
            continue
        if isinstance(b, Var) and not isinstance(a, Var):
            a, b = b, a
        if isinstance(a, Var):
            if a.index in vars_of(b):
                return None
            bind = {a.index: b}
            todo = [(apply_subst(bind, x), apply_subst(bind, y)) for x, y in todo]
            sigma = {x: apply_subst(bind, v) for x, v in sigma.items()}
            sigma[a.index] = b
        elif a.symbol == b.symbol:
            todo.extend(zip(a.args, b.args))
        else:
            return None
    return sigma


def unifiable(t: Term, u: Term) -> bool:
    return unify(t, u) is not None


def ren_cap(trs: TRS, next_fresh: int, t: Term, defined: set[Symbol] | None = None) -> Term:
    """Cap where variables count as aliens too; the result is linear."""
    if defined is None:
        defined = defined_symbols(trs)
    fresh = count(next_fresh)

    def go(u: Term) -> Term:
        if isinstance(u, Var) or u.symbol in defined:
            return Var(next(fresh))
        return App(u.symbol, tuple(go(a) for a in u.args))

    return go(t)


def connectable(trs: TRS, u: Term, v: Term, defined: set[Symbol] | None = None) -> bool:
    return unifiable(ren_cap(trs, maxvar(v) + 1, u, defined), v)


def hde_edge(r1: Rule, r2: Rule) -> bool:
    """Edge iff the rhs root of r1 equals the lhs root of r2 (variables: always)."""
    if isinstance(r1.rhs, Var) or isinstance(r2.lhs, Var):
        return True
    return r1.rhs.symbol == r2.lhs.symbol


def dpg_unif_edge(trs: TRS, r1: Rule, r2: Rule, defined: set[Symbol] | None = None) -> bool:
    return connectable(trs, r1.rhs, r2.lhs, defined)


def unif_approx(trs: TRS):
    """Edge predicate for the unification graph of ``trs``, defined set precomputed."""
    defined = defined_symbols(trs)
    return lambda r1, r2: dpg_unif_edge(trs, r1, r2, defined)
