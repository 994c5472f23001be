"""Acceptance criteria, one test (and one PASS/FAIL line) per criterion.

Run standalone with ``python3 tests/test_acceptance.py`` or under pytest,
where the lines are repeated in an "acceptance criteria" summary section.
"""
import dataclasses
import itertools
import random
import sys
import time
from pathlib import Path

import pytest
import sympy
from hypothesis import given, seed, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, CORPUS, r8_namespace, read  # noqa: E402
from strategies import digraphs, terms  # noqa: E402
from termcert.checker import (  # noqa: E402
    Accepted,
    Decomp,
    DpTrans,
    Full,
    PolyOrd,
    Trivial,
    check,
)
from termcert.dp import cap, marked_dps  # noqa: E402
from termcert.graph import from_edges, sccs, valid_decomp  # noqa: E402
from termcert.parsing import ParseError, parse_certificate, parse_trs  # noqa: E402
from termcert.poly import Polynomial, PolyInterpretation, interpret, peval, termpoly  # noqa: E402
from termcert.rewrite import bounded_search_nonterm, ground_seeds, hd_reducts, int_reducts, reducts  # noqa: E402
from termcert.terms import App, Symbol, Var, apply_subst, maxvar, vars_of  # noqa: E402
from termcert.unify import unify  # noqa: E402

SEED = 20261018
R8 = r8_namespace()


def report(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return line


# criterion 1: end-to-end reproduction

def criterion_1():
    start = time.perf_counter()
    sig, trs, names = parse_trs(read("quot.trs"))
    cert = parse_certificate(read("quot.cert.xml"), sig, names)
    _, _, pairs = marked_dps(trs)
    verdict = check(Full(trs), cert)
    elapsed = time.perf_counter() - start
    comps = [r for c in cert.sub.components for r in c.rules]
    problems = []
    if len(trs.rules) != 4:
        problems.append(f"{len(trs.rules)} rules")
    if len(pairs) != 3 or sorted(map(str, pairs)) != sorted(map(str, comps)):
        problems.append("pairs differ from the certificate's components")
    if cert.sub.approx != "hde" or len(cert.sub.components) != 3:
        problems.append("unexpected certificate shape")
    if verdict != Accepted():
        problems.append(str(verdict))
    if elapsed >= 1.0:
        problems.append(f"took {elapsed:.2f}s")
    return not problems, "; ".join(problems) or f"3 pairs match, Accepted in {elapsed * 1000:.0f} ms"


# criterion 2: mutations, with expectations from an independent sympy oracle

X = sympy.symbols("x0:4")
A1, A2 = sympy.symbols("a1 a2")

# argument-wise maps from sympy arguments to sympy values, keyed by name
PI8_EXPR = {
    "zero": sympy.Integer(0),
    "succ": A1 + 2,
    "minus": A1 + 1,
    "quot": A1 * A2 + A1 + A2,
}


def oracle_value(pi_expr, t):
    """Interpret a term symbolically, writing out every symbol by hand."""
    if isinstance(t, Var):
        return X[t.index]
    args = [oracle_value(pi_expr, a) for a in t.args]
    return pi_expr[t.symbol.name].subs(dict(zip((A1, A2), args)), simultaneous=True)


def absolutely_positive(expr):
    expr = sympy.expand(expr)
    if expr.is_number:
        return expr >= 0
    return all(c >= 0 for c in sympy.Poly(expr, *X).coeffs())


def oracle_poly_step(pi_expr, rules, pairs):
    """(error, remaining pairs): error is None when the step goes through."""
    for body in pi_expr.values():
        if not absolutely_positive(body.subs({A1: X[0], A2: X[1]})):
            return "NotWeaklyMonotone", pairs
    for r in list(rules) + list(pairs):
        if not absolutely_positive(oracle_value(pi_expr, r.lhs) - oracle_value(pi_expr, r.rhs)):
            return "RuleNotWeaklyCompatible", pairs
    rest = [p for p in pairs
            if not absolutely_positive(oracle_value(pi_expr, p.lhs) - oracle_value(pi_expr, p.rhs) - 1)]
    return None, rest


def to_interpretation(pi_expr):
    """Turn the oracle's sympy bodies into the checker's polynomial mapping."""
    out = {}
    for f in (R8.zero, R8.succ, R8.minus, R8.quot):
        args = (A1, A2)[: f.arity]
        body = sympy.Poly(pi_expr[f.name], *args) if f.arity else None
        if body is None:
            out[f] = Polynomial.const(0, int(pi_expr[f.name]))
        else:
            out[f] = Polynomial(f.arity, [(int(c), m) for m, c in body.terms()])
    return PolyInterpretation(out)


def oracle_component(i, pi_expr):
    """Expected (path, error) for component i (0-based) proved by pi_expr then trivial."""
    here = ("dp", "decomp", f"component {i + 1}", "manna_ness")
    pairs = [R8.dps[i]]
    err, rest = oracle_poly_step(pi_expr, R8.trs.rules, pairs)
    if err:
        return here, err
    if rest:
        return here + ("trivial",), "NonEmptyProblem"
    return None


def components():
    return list(R8.cert.sub.components)


def rebuild(comps, approx="hde", wrap=True):
    d = Decomp(approx, tuple(comps))
    return DpTrans(d) if wrap else d


def with_pi(i, pi_expr):
    comps = components()
    comps[i] = dataclasses.replace(comps[i], proof=PolyOrd(to_interpretation(pi_expr), Trivial()))
    return rebuild(comps)


def dropped(i):
    comps = components()
    comps[i] = dataclasses.replace(comps[i], rules=())
    return rebuild(comps)


def duplicated(i):
    comps = components()
    comps[i] = dataclasses.replace(comps[i], rules=comps[i].rules * 2)
    return rebuild(comps)


def without_proof(i):
    comps = components()
    comps[i] = dataclasses.replace(comps[i], proof=None)
    return rebuild(comps)


def unmarked():
    comps = []
    for c in components():
        rules = tuple(type(r)(App(r.lhs.symbol.unsharp(), r.lhs.args), App(r.rhs.symbol.unsharp(), r.rhs.args))
                      for r in c.rules)
        comps.append(dataclasses.replace(c, rules=rules))
    return rebuild(comps)


def swapped(i, j):
    comps = components()
    comps[i], comps[j] = comps[j], comps[i]
    return rebuild(comps)


def pi_with(**changes):
    d = dict(PI8_EXPR)
    d.update({k: sympy.sympify(v, locals={"a1": A1, "a2": A2}) for k, v in changes.items()})
    return d


DECOMP = ("dp", "decomp")


def mutations():
    """(name, certificate, expected) with expected = None for Accepted or (path, error)."""
    out = [
        ("drop the minus# pair", dropped(0), (DECOMP, "MissingPair")),
        ("drop the quot#->minus# pair", dropped(1), (DECOMP, "MissingPair")),
        ("drop the quot# pair", dropped(2), (DECOMP, "MissingPair")),
        ("duplicate the minus# pair", duplicated(0), (DECOMP, "ExtraPair")),
        ("duplicate the quot# pair", duplicated(2), (DECOMP, "ExtraPair")),
        ("reverse component order", rebuild(components()[::-1]), (DECOMP, "ForwardEdge")),
        ("swap components 1 and 3", swapped(0, 2), (DECOMP, "ForwardEdge")),
        ("swap components 1 and 2", swapped(0, 1), (DECOMP, "ForwardEdge")),
        ("unmarked pairs", unmarked(), (DECOMP, "MissingPair")),
        ("no proof on looping component 1", without_proof(0),
         (DECOMP + ("component 1",), "AcyclicCheckFailed")),
        ("no proof on looping component 3", without_proof(2),
         (DECOMP + ("component 3",), "AcyclicCheckFailed")),
        ("trivial on non-empty component 1",
         rebuild([dataclasses.replace(components()[0], proof=Trivial())] + components()[1:]),
         (DECOMP + ("component 1", "trivial"), "NonEmptyProblem")),
        ("trivial for the whole problem", Trivial(), (("trivial",), "NonEmptyProblem")),
        ("decomp without dp", rebuild(components(), wrap=False), (("decomp",), "NotATopProblem")),
        ("unif graph, no proof on component 1",
         rebuild([dataclasses.replace(components()[0], proof=None)] + components()[1:], approx="unif"),
         (DECOMP + ("component 1",), "AcyclicCheckFailed")),
    ]
    for label, i, changes in [
        ("succ -> x1 in component 1", 0, {"succ": "a1"}),
        ("succ -> x1 in component 3", 2, {"succ": "a1"}),
        ("succ -> x1 + 1 in component 3", 2, {"succ": "a1 + 1"}),
        ("zero -> -1 in component 1", 0, {"zero": "-1"}),
        ("quot -> x1 in component 3", 2, {"quot": "a1"}),
        ("minus -> x1 in component 1", 0, {"minus": "a1"}),
        ("minus -> x1 in component 3", 2, {"minus": "a1"}),
    ]:
        pi_expr = pi_with(**changes)
        out.append((label, with_pi(i, pi_expr), oracle_component(i, pi_expr)))
    return out


def criterion_2():
    rejected, failures, accepted_as_expected = 0, [], []
    for name, cert, expected in mutations():
        v = check(Full(R8.trs), cert)
        if expected is None:
            if v != Accepted():
                failures.append(f"{name}: expected Accepted, got {v}")
            else:
                accepted_as_expected.append(name)
            continue
        path, error = expected
        if v.ok or (v.path, v.error) != (path, error):
            failures.append(f"{name}: expected {'/'.join(path)} {error}, got {v}")
        else:
            rejected += 1
    ok = not failures and rejected >= 12
    detail = (f"{rejected} mutations rejected at the oracle's step"
              + (f", {len(accepted_as_expected)} still-valid accepted ({', '.join(accepted_as_expected)})"
                 if accepted_as_expected else ""))
    return ok, "; ".join(failures) or detail


# criterion 3: property suites at a fixed seed

MIN_CASES = 200
A = Symbol("a", 0)
G = Symbol("g", 2)


def _small_terms():
    leaf = st.one_of(st.builds(Var, st.integers(0, 2)), st.just(App(A)))
    return st.recursive(leaf, lambda c: st.tuples(c, c).map(lambda p: App(G, p)), max_leaves=4)


def _ground(depth):
    level = [App(A)]
    for _ in range(depth):
        level = [App(A)] + [App(G, (l, r)) for l in level for r in level]
    return level


GROUND2 = _ground(2)


def _reach(n, edges):
    r = [[i == j or (i, j) in edges for j in range(n)] for i in range(n)]
    for k, i, j in itertools.product(range(n), repeat=3):
        r[i][j] = r[i][j] or (r[i][k] and r[k][j])
    return r


def run_property(prop, *strategies):
    """Run ``prop`` under hypothesis at a fixed seed; return the number of cases."""
    count = [0]

    @seed(SEED)
    @settings(max_examples=MIN_CASES + 50, database=None, deadline=None, derandomize=False)
    @given(st.tuples(*strategies))
    def wrapped(args):
        count[0] += 1
        prop(*args)

    wrapped()
    return count[0]


def p_cap(t):
    c = cap(R8.trs, t)
    assert apply_subst(c.alien_subst, c.cap) == t


def p_termpoly(t, vals):
    k = maxvar(t)
    assert peval(termpoly(R8.pi, k, t), vals[: k + 1]) == interpret(R8.pi, t, vals)


def p_unify_sound(t, u):
    mgu = unify(t, u)
    if mgu is not None:
        assert apply_subst(mgu, t) == apply_subst(mgu, u)


def p_unify_complete(t, u):
    mgu = unify(t, u)
    xs = sorted(vars_of(t) | vars_of(u))
    for values in itertools.product(GROUND2, repeat=len(xs)):
        s = dict(zip(xs, values))
        if apply_subst(s, t) == apply_subst(s, u):
            assert mgu is not None
            for x in xs:
                assert apply_subst(s, apply_subst(mgu, Var(x))) == s[x]
    if mgu is not None and not xs:
        assert t == u


def p_sccs(graph):
    n, edges = graph
    r = _reach(n, edges)
    got = {frozenset(c) for c in sccs(from_edges(n, edges))}
    assert got == {frozenset(j for j in range(n) if r[i][j] and r[j][i]) for i in range(n)}


def p_valid_decomp(graph, data):
    n, edges = graph
    order = data.draw(st.permutations(range(n)))
    cuts = sorted(data.draw(st.sets(st.integers(1, max(n - 1, 1)), max_size=3))) if n > 1 else []
    bounds = [0] + cuts + [n]
    cs = [list(order[a:b]) for a, b in zip(bounds, bounds[1:])]
    approx = lambda a, b: (a, b) in edges
    direct = all(not approx(b, c) for i in range(len(cs)) for j in range(i + 1, len(cs))
                 for b in cs[i] for c in cs[j])
    assert valid_decomp(approx, cs) == direct


def p_partition(t):
    key = lambda s: (s.rule_index, s.position)
    assert sorted(map(key, reducts(R8.trs, t))) == sorted(
        map(key, hd_reducts(R8.trs, t) + int_reducts(R8.trs, t)))
    for s in reducts(R8.trs, t):
        assert s.replay(R8.trs, t) == s.result


PROPERTIES = [
    ("cap reconstruction", p_cap, (terms(),)),
    ("termpoly/evaluation", p_termpoly, (terms(), st.lists(st.integers(0, 5), min_size=4, max_size=4))),
    ("unify soundness", p_unify_sound, (terms(), terms())),
    ("unify completeness (brute force)", p_unify_complete, (_small_terms(), _small_terms())),
    ("SCC vs mutual reachability", p_sccs, (digraphs(),)),
    ("valid_decomp vs double loop", p_valid_decomp, (digraphs(), st.data())),
    ("rewrite partition and replay", p_partition, (terms(),)),
]


def criterion_3():
    counts, failures = {}, []
    for name, prop, strategies in PROPERTIES:
        try:
            counts[name] = run_property(prop, *strategies)
        except Exception as e:  # a falsified property is a FAIL line, not a crash
            failures.append(f"{name}: {type(e).__name__}: {e}")
            continue
        if counts[name] < MIN_CASES:
            failures.append(f"{name}: only {counts[name]} cases")
    detail = ", ".join(f"{k} {v}" for k, v in counts.items())
    return not failures, "; ".join(failures) or f"seed {SEED}: {detail}"


# criterion 4: soundness shadow

TERMINATING = ["quot", "plus", "double", "times", "fg", "ab"]
NONTERMINATING = ["nonterm_a", "nonterm_f"]


def criterion_4():
    start = time.perf_counter()
    problems = []
    for name in TERMINATING:
        sig, trs, names = parse_trs(read(f"{name}.trs"))
        v = check(Full(trs), parse_certificate(read(f"{name}.cert.xml"), sig, names))
        if not v.ok:
            problems.append(f"{name} not accepted: {v}")
        elif bounded_search_nonterm(trs, ground_seeds(trs), 6) is not None:
            problems.append(f"{name} accepted but a loop was found")
    candidates = 0
    for name in NONTERMINATING:
        sig, trs, names = parse_trs(read(f"{name}.trs"))
        if bounded_search_nonterm(trs, ground_seeds(trs), 6) is None:
            problems.append(f"no loop found for {name}")
        for path in sorted(CORPUS.glob(f"{name}.*.xml")):
            candidates += 1
            v = check(Full(trs), parse_certificate(path.read_text(), sig, names))
            if v.ok:
                problems.append(f"{path.name} accepted")
    elapsed = time.perf_counter() - start
    if candidates < 2 * 2:
        problems.append(f"only {candidates} candidate certificates")
    if elapsed >= 10:
        problems.append(f"took {elapsed:.1f}s")
    return not problems, "; ".join(problems) or (
        f"{len(TERMINATING)} terminating accepted with no loop; {candidates} candidates for "
        f"{len(NONTERMINATING)} looping systems rejected; {elapsed:.2f}s")


# criterion 5: parser robustness

TOKENS = ["(", ")", ",", "->", "VAR", "RULES", "x", "f", "#", "\n", " ", "0", "-1", "99999999999",
          "<", ">", "/", "=", '"', "<app>", "</app>", "<var>", "</var>", "<fun>", "</fun>",
          'sharp="true"', "<trivial/>", "<dp>", "</dp>", "&", "\x00", "é", "<!--", "-->"]


def fuzz(text, rng):
    s = text
    for _ in range(rng.randint(1, 4)):
        op = rng.randrange(7)
        digits = [k for k, ch in enumerate(s) if ch.isdigit()]
        if op >= 5 and digits:
            # keeps the syntax intact, so the checker itself gets exercised
            k = rng.choice(digits)
            s = s[:k] + rng.choice("0123456789") + s[k + 1:]
            continue
        i = rng.randrange(len(s) + 1)
        j = min(len(s), i + rng.randint(1, 20))
        if op == 0:
            s = s[:i] + s[j:]
        elif op == 1:
            s = s[:i] + rng.choice(TOKENS) + s[i:]
        elif op == 2:
            s = s[:i] + s[i:j] * rng.randint(2, 4) + s[i:]
        elif op == 3:
            s = s[:i] + "".join(rng.choice(TOKENS) for _ in range(rng.randint(1, 6))) + s[j:]
        else:
            k = rng.randrange(len(s) + 1)
            s = s[:i] + s[k:k + (j - i)] + s[j:]
    return s


def pipeline(trs_text, cert_text):
    """Everything the ``check`` command does after reading files."""
    try:
        sig, trs, names = parse_trs(trs_text)
        proof = parse_certificate(cert_text, sig, names)
    except ParseError:
        return "parse error"
    v = check(Full(trs), proof)
    return "accepted" if v.ok else "rejected"


FUZZ_CASES = 1200


def criterion_5():
    rng = random.Random(SEED)
    pairs = [(p.stem.split(".")[0], p) for p in sorted(CORPUS.glob("*.xml"))]
    outcomes = {"accepted": 0, "rejected": 0, "parse error": 0}
    crashes = []
    for n in range(FUZZ_CASES):
        stem, cert_path = pairs[n % len(pairs)]
        trs_text, cert_text = read(f"{stem}.trs"), cert_path.read_text()
        if n % 2:
            trs_text = fuzz(trs_text, rng)
        else:
            cert_text = fuzz(cert_text, rng)
        try:
            outcomes[pipeline(trs_text, cert_text)] += 1
        except Exception as e:
            crashes.append(f"case {n}: {type(e).__name__}: {e}")
    detail = ", ".join(f"{v} {k}" for k, v in outcomes.items())
    return not crashes, (f"{len(crashes)} crashes, first {crashes[0]}" if crashes
                         else f"{FUZZ_CASES} fuzzed inputs: {detail}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5]


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    report(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    results = [CRITERIA[i]() for i in range(len(CRITERIA))]
    for i, (ok, detail) in enumerate(results, 1):
        report(i, ok, detail)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
