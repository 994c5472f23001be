"""One-step rewriting as finite successor enumeration."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .terms import (
    App,
    Rule,
    Signature,
    Symbol,
    Term,
    apply_subst,
    context_at,
    fill,
    match_term,
    subterms,
    symbols_of,
    vars_of,
    well_formed,
)


@dataclass(frozen=True)
class TRS:
    sig: Signature = field(compare=False)
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for r in self.rules:
            if not (well_formed(r.lhs, self.sig) and well_formed(r.rhs, self.sig)):
                raise ValueError(f"rule {r} is not well-formed over {self.sig!r}")

    @classmethod
    def of(cls, rules: Iterable[Rule], sig: Signature | None = None) -> "TRS":
        rules = tuple(rules)
        if sig is None:
            syms = []
            for r in rules:
                syms.extend(sorted(symbols_of(r.lhs) | symbols_of(r.rhs)))
            sig = Signature(syms)
        return cls(sig, rules)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __str__(self):
        return "\n".join(map(str, self.rules))


@dataclass(frozen=True)
class RewriteStep:
    rule_index: int
    position: tuple
    subst: dict = field(hash=False)
    result: Term

    def replay(self, trs: TRS, t: Term) -> Term:
        rule = trs.rules[self.rule_index]
        return fill(context_at(t, self.position), apply_subst(self.subst, rule.rhs))


def _steps(trs: TRS, t: Term, where) -> list[RewriteStep]:
    out = []
    positions = [(p, u) for p, u in subterms(t) if where(p) and isinstance(u, App)]
    for i, rule in enumerate(trs.rules):
        for pos, u in positions:
            s = match_term(rule.lhs, u)
            if s is None:
                continue
            result = fill(context_at(t, pos), apply_subst(s, rule.rhs))
            out.append(RewriteStep(i, pos, s, result))
    return out


def reducts(trs: TRS, t: Term) -> list[RewriteStep]:
    """All one-step successors of ``t``: rules in list order, positions in pre-order."""
    return _steps(trs, t, lambda p: True)


def hd_reducts(trs: TRS, t: Term) -> list[RewriteStep]:
    return _steps(trs, t, lambda p: not p)


def int_reducts(trs: TRS, t: Term) -> list[RewriteStep]:
    return _steps(trs, t, lambda p: bool(p))


def reduct_terms(trs: TRS, t: Term) -> list[Term]:
    return [s.result for s in reducts(trs, t)]


def reachable(trs: TRS, t: Term, max_steps: int, internal_only: bool = False) -> set[Term]:
    """Terms reachable from ``t`` in at most ``max_steps`` steps (bounded closure)."""
    step = int_reducts if internal_only else reducts
    seen = {t}
    frontier = [t]
    for _ in range(max_steps):
        nxt = []
        for u in frontier:
            for s in step(trs, u):
                if s.result not in seen:
                    seen.add(s.result)
                    nxt.append(s.result)
        frontier = nxt
    return seen


def _loops_back(trace: Sequence[Term]) -> bool:
    last = trace[-1]
    subs = [u for _, u in subterms(last)]
    for earlier in trace[:-1]:
        if any(match_term(earlier, u) is not None for u in subs):
            return True
    return False


def bounded_search_nonterm(trs: TRS, seeds: Sequence[Term], depth: int) -> list[Term] | None:
    """Breadth-first search for a looping trace of at most ``depth`` steps.

    A trace t0 -> ... -> tk loops when some earlier ti has an instance that is a
    subterm of tk.  Returns the first such trace found, or None.
    """
    queue = deque((s,) for s in seeds)
    while queue:
        trace = queue.popleft()
        if len(trace) > 1 and _loops_back(trace):
            return list(trace)
        if len(trace) - 1 >= depth:
            continue
        for step in reducts(trs, trace[-1]):
            queue.append(trace + (step.result,))
    return None


def ground_seeds(trs: TRS, filler: Term | None = None) -> list[Term]:
    """Left-hand sides with every variable replaced by ``filler``.

    By default the filler is the first constant of the signature; a system
    without constants gets a fresh one named ``zero``.
    """
    if filler is None:
        consts = [f for f in trs.sig if f.arity == 0 and not f.marked]
        filler = App(consts[0] if consts else Symbol("zero", 0))
    seeds = []
    for r in trs.rules:
        s = {x: filler for x in vars_of(r.lhs)}
        t = apply_subst(s, r.lhs)
        if t not in seeds:
            seeds.append(t)
    return seeds

