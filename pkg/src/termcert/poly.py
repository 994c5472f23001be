"""Integer polynomials in n variables and polynomial interpretations.

A polynomial is a list of (coefficient, exponent-vector) pairs.  The list
need not be canonical; ``coef`` is, so every operation is specified through
it.  Results of arithmetic are normalized (duplicates merged, zeros dropped).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .terms import Rule, Symbol, Term, Var, maxvar

Monomial = tuple


class PolyError(Exception):
    pass


class DimensionMismatch(PolyError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} variable(s), got {got}")


class BoundExceeded(PolyError):
    def __init__(self, bound: int, var: int):
        self.bound = bound
        self.var = var
        super().__init__(f"variable {var} exceeds bound {bound}")


class MissingInterpretation(PolyError):
    def __init__(self, symbol: Symbol):
        self.symbol = symbol
        super().__init__(f"no interpretation for {symbol}")


class Polynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Iterable[tuple[int, Sequence[int]]] = ()):
        self.nvars = nvars
        ts = []
        for c, m in terms:
            m = tuple(m)
            if len(m) != nvars:
                raise DimensionMismatch(nvars, len(m))
            if any(e < 0 for e in m):
                raise PolyError(f"negative exponent in {m}")
            ts.append((int(c), m))
        self.terms = tuple(ts)

    # constructors

    @classmethod
    def const(cls, nvars: int, c: int) -> "Polynomial":
        return cls(nvars, [(c, (0,) * nvars)])

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars)

    @classmethod
    def var(cls, nvars: int, i: int, c: int = 1) -> "Polynomial":
        """c * x_i, with i 0-based."""
        if not 0 <= i < nvars:
            raise DimensionMismatch(nvars, i + 1)
        return cls(nvars, [(c, tuple(int(j == i) for j in range(nvars)))])

    @classmethod
    def from_dict(cls, nvars: int, d: Mapping[Monomial, int]) -> "Polynomial":
        return cls(nvars, [(c, m) for m, c in d.items()])

    # canonical view

    def as_dict(self) -> dict[Monomial, int]:
        d: dict[Monomial, int] = {}
        for c, m in self.terms:
            d[m] = d.get(m, 0) + c
        return {m: c for m, c in d.items() if c != 0}

    def normalized(self) -> "Polynomial":
        return Polynomial.from_dict(self.nvars, dict(sorted(self.as_dict().items())))

    def coef(self, m: Sequence[int]) -> int:
        return coef(m, self)

    def is_zero(self) -> bool:
        return not self.as_dict()

    def degree(self) -> int:
        return max((sum(m) for m in self.as_dict()), default=0)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash((self.nvars, frozenset(self.as_dict().items())))

    def __add__(self, other):
        return padd(self, _lift(other, self.nvars))

    __radd__ = __add__

    def __sub__(self, other):
        return psub(self, _lift(other, self.nvars))

    def __rsub__(self, other):
        return psub(_lift(other, self.nvars), self)

    def __mul__(self, other):
        return pmul(self, _lift(other, self.nvars))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial(self.nvars, [(-c, m) for c, m in self.terms])

    def __pow__(self, k: int):
        return ppower(self, k)

    def __call__(self, *values):
        return peval(self, values)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self})"

    def __str__(self):
        d = dict(sorted(self.as_dict().items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0]))))
        if not d:
            return "0"
        parts = []
        for m, c in d.items():
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(f"x_{i + 1}")
                elif e > 1:
                    factors.append(f"x_{i + 1}^{e}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append(".".join(factors))
            elif c == -1:
                parts.append("-" + ".".join(factors))
            else:
                parts.append(f"{c}.{'.'.join(factors)}")
        return " + ".join(parts).replace("+ -", "- ")


def _lift(p, nvars: int) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    if isinstance(p, int):
        return Polynomial.const(nvars, p)
    raise TypeError(f"cannot combine a polynomial with {type(p).__name__}")


def _same_dim(p: Polynomial, q: Polynomial) -> None:
    if p.nvars != q.nvars:
        raise DimensionMismatch(p.nvars, q.nvars)


def coef(m: Sequence[int], p: Polynomial) -> int:
    m = tuple(m)
    if len(m) != p.nvars:
        raise DimensionMismatch(p.nvars, len(m))
    return sum(c for c, mm in p.terms if mm == m)


def padd(p: Polynomial, q: Polynomial) -> Polynomial:
    _same_dim(p, q)
    return Polynomial(p.nvars, p.terms + q.terms).normalized()


def psub(p: Polynomial, q: Polynomial) -> Polynomial:
    _same_dim(p, q)
    return Polynomial(p.nvars, p.terms + tuple((-c, m) for c, m in q.terms)).normalized()


def pmul(p: Polynomial, q: Polynomial) -> Polynomial:
    _same_dim(p, q)
    d: dict[Monomial, int] = {}
    for m1, c1 in p.as_dict().items():
        for m2, c2 in q.as_dict().items():
            m = tuple(a + b for a, b in zip(m1, m2))
            d[m] = d.get(m, 0) + c1 * c2
    return Polynomial.from_dict(p.nvars, d).normalized()


def ppower(p: Polynomial, k: int) -> Polynomial:
    if k < 0:
        raise PolyError("negative power")
    result = Polynomial.const(p.nvars, 1)
    base = p
    while k:
        if k & 1:
            result = pmul(result, base)
        base = pmul(base, base)
        k >>= 1
    return result


def pcomp(p: Polynomial, qs: Sequence[Polynomial], nvars: int | None = None) -> Polynomial:
    """Substitute qs[i] for x_i in p.

    All qs share one variable count; ``nvars`` fixes it when qs is empty.
    """
    if len(qs) != p.nvars:
        raise DimensionMismatch(p.nvars, len(qs))
    if nvars is None:
        if not qs:
            raise PolyError("composing a constant needs an explicit target variable count")
        nvars = qs[0].nvars
    for q in qs:
        if q.nvars != nvars:
            raise DimensionMismatch(nvars, q.nvars)
    powers: dict[tuple[int, int], Polynomial] = {}
    acc = Polynomial.zero(nvars)
    for m, c in p.as_dict().items():
        term = Polynomial.const(nvars, c)
        for i, e in enumerate(m):
            if e:
                if (i, e) not in powers:
                    powers[(i, e)] = ppower(qs[i], e)
                term = pmul(term, powers[(i, e)])
        acc = padd(acc, term)
    return acc


def peval(p: Polynomial, values: Sequence[int]) -> int:
    if len(values) != p.nvars:
        raise DimensionMismatch(p.nvars, len(values))
    total = 0
    for c, m in p.terms:
        v = c
        for x, e in zip(values, m):
            if e:
                v *= x ** e
        total += v
    return total


def coef_pos(p: Polynomial) -> bool:
    """Absolute positiveness: every (summed) coefficient is non-negative."""
    return all(c >= 0 for c in p.as_dict().values())


class PolyInterpretation:
    """A polynomial in arity(f) variables per symbol.

    A marked symbol without its own entry borrows the entry of its unmarked
    original.
    """

    def __init__(self, mapping: Mapping[Symbol, Polynomial]):
        self.mapping: dict[Symbol, Polynomial] = {}
        for f, p in mapping.items():
            if p.nvars != f.arity:
                raise DimensionMismatch(f.arity, p.nvars)
            self.mapping[f] = p

    def __getitem__(self, f: Symbol) -> Polynomial:
        p = self.mapping.get(f)
        if p is None and f.marked:
            p = self.mapping.get(f.unsharp())
        if p is None:
            raise MissingInterpretation(f)
        return p

    def __contains__(self, f: Symbol) -> bool:
        return f in self.mapping or (f.marked and f.unsharp() in self.mapping)

    def items(self):
        return self.mapping.items()

    def replace(self, f: Symbol, p: Polynomial) -> "PolyInterpretation":
        m = dict(self.mapping)
        m[f] = p
        return PolyInterpretation(m)

    def __eq__(self, other):
        if not isinstance(other, PolyInterpretation):
            return NotImplemented
        return self.mapping == other.mapping

    def __repr__(self):
        inner = "; ".join(f"{f} -> {p}" for f, p in self.mapping.items())
        return f"PolyInterpretation({inner})"


@dataclass(frozen=True)
class BoundedTerm:
    term: Term
    bound: int

    def __post_init__(self):
        if maxvar(self.term) > self.bound:
            raise BoundExceeded(self.bound, maxvar(self.term))


def termpoly(pi: PolyInterpretation, k: int, t: Term | BoundedTerm) -> Polynomial:
    """The polynomial in k+1 variables denoted by ``t``; term variable i is x_i."""
    if isinstance(t, BoundedTerm):
        k, t = t.bound, t.term
    else:
        BoundedTerm(t, k)
    n = k + 1
    cache: dict[Term, Polynomial] = {}

    def go(u: Term) -> Polynomial:
        if u in cache:
            return cache[u]
        if isinstance(u, Var):
            res = Polynomial.var(n, u.index)
        else:
            res = pcomp(pi[u.symbol], [go(a) for a in u.args], n)
        cache[u] = res
        return res

    return go(t)


def interpret(pi: PolyInterpretation, t: Term, valuation: Sequence[int]) -> int:
    """Direct recursive evaluation of ``t``; independent of ``termpoly``."""
    if isinstance(t, Var):
        return valuation[t.index]
    return peval(pi[t.symbol], [interpret(pi, a, valuation) for a in t.args])


def rule_poly_ge(pi: PolyInterpretation, rule: Rule) -> Polynomial:
    k = max(maxvar(rule.lhs), maxvar(rule.rhs))
    return psub(termpoly(pi, k, rule.lhs), termpoly(pi, k, rule.rhs))


def rule_poly_gt(pi: PolyInterpretation, rule: Rule) -> Polynomial:
    p = rule_poly_ge(pi, rule)
    return psub(p, Polynomial.const(p.nvars, 1))


def weakly_compatible(pi: PolyInterpretation, rule: Rule) -> bool:
    # renaming keeps the polynomial dimension small for sparse variable indices
    return coef_pos(rule_poly_ge(pi, rule.canonical()))


def strictly_compatible(pi: PolyInterpretation, rule: Rule) -> bool:
    return coef_pos(rule_poly_gt(pi, rule.canonical()))


def not_weakly_monotone(pi: PolyInterpretation) -> Symbol | None:
    for f, p in pi.items():
        if not coef_pos(p):
            return f
    return None


def not_strongly_monotone(pi: PolyInterpretation) -> Symbol | None:
    bad = not_weakly_monotone(pi)
    if bad is not None:
        return bad
    for f, p in pi.items():
        for i in range(f.arity):
            unit = tuple(int(j == i) for j in range(f.arity))
            if coef(unit, p) < 1:
                return f
    return None


def weak_monotone(pi: PolyInterpretation) -> bool:
    return not_weakly_monotone(pi) is None


def strong_monotone(pi: PolyInterpretation) -> bool:
    return not_strongly_monotone(pi) is None
