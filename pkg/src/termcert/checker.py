"""Certificate proof trees and the engine that verifies them.

A problem is either ``Full(R)`` (is rewriting with R terminating?) or
``TopRel(E, D)`` (no infinite sequence of E-steps interleaved with root
D-steps, D-steps occurring infinitely often).  Each proof node transforms
a problem into zero or more smaller ones; ``check`` walks the tree and
reports the first failing step.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Union

from . import dp as dpmod
from . import graph as gr
from .poly import (
    PolyError,
    PolyInterpretation,
    not_strongly_monotone,
    not_weakly_monotone,
    strictly_compatible,
    weakly_compatible,
)
from .rewrite import TRS
from .terms import Rule
from .unify import hde_edge, unif_approx

log = logging.getLogger(__name__)


# problems

@dataclass(frozen=True)
class Full:
    trs: TRS

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self.trs.rules


@dataclass(frozen=True)
class TopRel:
    modulo: TRS
    top: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self.top


Problem = Union[Full, TopRel]


# proofs

@dataclass(frozen=True)
class Trivial:
    pass


@dataclass(frozen=True)
class DpTrans:
    sub: "Proof"


@dataclass(frozen=True)
class Component:
    rules: tuple[Rule, ...]
    proof: "Proof | None" = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))


@dataclass(frozen=True)
class Decomp:
    approx: str
    components: tuple[Component, ...]

    def __post_init__(self):
        if self.approx not in APPROXES:
            raise ValueError(f"unknown graph approximation {self.approx!r}")
        object.__setattr__(self, "components", tuple(self.components))


@dataclass(frozen=True)
class PolyOrd:
    interpretation: PolyInterpretation = field(compare=False)
    sub: "Proof"


Proof = Union[Trivial, DpTrans, Decomp, PolyOrd]

APPROXES = ("hde", "unif")


# verdicts

@dataclass(frozen=True)
class Accepted:
    ok = True

    def __str__(self):
        return "Accepted"


@dataclass(frozen=True)
class Rejected:
    path: tuple[str, ...]
    reason: str
    error: str
    ok = False

    @property
    def where(self) -> str:
        return "/".join(self.path) or "<root>"

    def __str__(self):
        return f"Rejected at {self.where}: {self.reason}"


Verdict = Union[Accepted, Rejected]


# step errors

class CheckError(Exception):
    pass


class NotAFullProblem(CheckError):
    def __init__(self, step: str):
        super().__init__(f"{step} needs a full termination problem")


class NotATopProblem(CheckError):
    def __init__(self, step: str):
        super().__init__(f"{step} needs a dependency-pair problem; apply <dp> first")


class DpPreconditionFailed(CheckError):
    def __init__(self, cause: dpmod.DpError):
        self.cause = cause
        super().__init__(f"dependency pair transformation not applicable: {cause}")


class AcyclicCheckFailed(CheckError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"component {index + 1} has no proof but is cyclic in the graph")


class NotWeaklyMonotone(CheckError):
    def __init__(self, f):
        self.symbol = f
        super().__init__(f"interpretation of {f} has a negative coefficient")


class NotStronglyMonotone(CheckError):
    def __init__(self, f):
        self.symbol = f
        super().__init__(f"interpretation of {f} is not strictly monotone in every argument")


class RuleNotWeaklyCompatible(CheckError):
    def __init__(self, rule: Rule, which: str):
        self.rule = rule
        self.which = which
        super().__init__(f"{which} rule {rule} is not weakly decreasing")


class NonEmptyProblem(CheckError):
    def __init__(self, rules):
        self.rules = tuple(rules)
        super().__init__(f"{len(self.rules)} rule(s) remain, e.g. {self.rules[0]}")


# steps

def step_dp_trans(problem: Problem) -> TopRel:
    if not isinstance(problem, Full):
        raise NotAFullProblem("dp")
    try:
        dpmod.check_dp_preconditions(problem.trs)
        _, marked_trs, pairs = dpmod.marked_dps(problem.trs)
    except dpmod.DpError as e:
        raise DpPreconditionFailed(e) from e
    return TopRel(marked_trs, tuple(pairs))


def approx_for(name: str, modulo: TRS):
    if name == "hde":
        return hde_edge
    if name == "unif":
        return unif_approx(modulo)
    raise ValueError(f"unknown graph approximation {name!r}")


def step_decomp(problem: Problem, approx: str, components) -> list[tuple[TopRel, Proof]]:
    """Validate the decomposition and return the sub-problems that carry proofs."""
    if not isinstance(problem, TopRel):
        raise NotATopProblem("decomp")
    edge = approx_for(approx, problem.modulo)
    gr.check_decomposition(edge, problem.top, [c.rules for c in components])
    subs = []
    for i, c in enumerate(components):
        if c.proof is None:
            if not gr.co_scc(edge, c.rules):
                raise AcyclicCheckFailed(i)
        else:
            subs.append((TopRel(problem.modulo, c.rules), c.proof))
    return subs


def step_poly_ord(problem: Problem, pi: PolyInterpretation) -> Problem:
    """Remove strictly decreasing rules; all rules must be weakly decreasing."""
    if isinstance(problem, Full):
        bad = not_strongly_monotone(pi)
        if bad is not None:
            raise NotStronglyMonotone(bad)
        for r in problem.trs.rules:
            if not weakly_compatible(pi, r):
                raise RuleNotWeaklyCompatible(r, "rewrite")
        keep = [r for r in problem.trs.rules if not strictly_compatible(pi, r)]
        return Full(TRS(problem.trs.sig, keep))
    bad = not_weakly_monotone(pi)
    if bad is not None:
        raise NotWeaklyMonotone(bad)
    for r in problem.modulo.rules:
        if not weakly_compatible(pi, r):
            raise RuleNotWeaklyCompatible(r, "rewrite")
    for r in problem.top:
        if not weakly_compatible(pi, r):
            raise RuleNotWeaklyCompatible(r, "dependency pair")
    keep = tuple(r for r in problem.top if not strictly_compatible(pi, r))
    return TopRel(problem.modulo, keep)


def step_trivial(problem: Problem) -> Verdict:
    if problem.rules:
        e = NonEmptyProblem(problem.rules)
        return Rejected(("trivial",), str(e), type(e).__name__)
    return Accepted()


# driver

_NAMES = {Trivial: "trivial", DpTrans: "dp", Decomp: "decomp", PolyOrd: "manna_ness"}

_STEP_ERRORS = (CheckError, gr.DecompositionError, PolyError, dpmod.DpError)


def check(problem: Problem, proof: Proof) -> Verdict:
    """Verify ``proof`` for ``problem``.  Pure; never raises on a bad certificate."""
    return _check(problem, proof, ())


def _check(problem: Problem, proof: Proof, path: tuple[str, ...]) -> Verdict:
    here = path + (_NAMES[type(proof)],)
    try:
        if isinstance(proof, Trivial):
            v = step_trivial(problem)
            return v if v.ok else Rejected(here, v.reason, v.error)
        if isinstance(proof, DpTrans):
            return _check(step_dp_trans(problem), proof.sub, here)
        if isinstance(proof, PolyOrd):
            return _check(step_poly_ord(problem, proof.interpretation), proof.sub, here)
        if isinstance(proof, Decomp):
            subs = iter(step_decomp(problem, proof.approx, proof.components))
            for i, c in enumerate(proof.components):
                if c.proof is None:
                    continue
                sub, p = next(subs)
                v = _check(sub, p, here + (f"component {i + 1}",))
                if not v.ok:
                    return v
            return Accepted()
    except AcyclicCheckFailed as e:
        log.debug("rejected at %s: %s", here, e)
        return Rejected(here + (f"component {e.index + 1}",), str(e), type(e).__name__)
    except _STEP_ERRORS as e:
        log.debug("rejected at %s: %s", here, e)
        return Rejected(here, str(e), type(e).__name__)
    raise TypeError(f"not a proof node: {proof!r}")
