from pathlib import Path
from types import SimpleNamespace

import pytest
from hypothesis import settings

from termcert.parsing import parse_certificate, parse_trs
from termcert.poly import Polynomial, PolyInterpretation
from termcert.terms import App, Rule, Var

CORPUS = Path(__file__).parent / "corpus"

# property runs are reproducible: same examples on every run, no example database
settings.register_profile("fixed", derandomize=True, database=None, deadline=None)
settings.load_profile("fixed")


# filled by test_acceptance.py, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def read(name):
    return (CORPUS / name).read_text()


def load_trs(name):
    return parse_trs(read(name))


def lin(n, *coefs, const=0):
    """sum(coefs[i] * x_i) + const in n variables."""
    terms = [(c, tuple(int(j == i) for j in range(n))) for i, c in enumerate(coefs) if c]
    if const:
        terms.append((const, (0,) * n))
    return Polynomial(n, terms)


def r8_namespace():
    sig, trs, names = load_trs("quot.trs")
    zero, succ, minus, quot = (sig.symbol(n) for n in ("zero", "succ", "minus", "quot"))
    x, y = Var(0), Var(1)
    Z = App(zero)

    def s(t):
        return App(succ, (t,))

    def m(t):
        return App(minus, (t,))

    def q(a, b):
        return App(quot, (a, b))

    def ms(t):
        return App(minus.sharp(), (t,))

    def qs(a, b):
        return App(quot.sharp(), (a, b))

    pi = PolyInterpretation({
        zero: Polynomial(0),
        succ: lin(1, 1, const=2),
        minus: lin(1, 1, const=1),
        quot: Polynomial(2, [(1, (1, 1)), (1, (1, 0)), (1, (0, 1))]),
    })
    minus_pair = Rule(ms(s(x)), ms(x))
    quot_minus_pair = Rule(qs(s(x), s(y)), ms(x))
    quot_pair = Rule(qs(s(x), s(y)), qs(m(x), s(y)))
    return SimpleNamespace(
        sig=sig, trs=trs, names=names,
        zero=zero, succ=succ, minus=minus, quot=quot,
        x=x, y=y, Z=Z, s=s, m=m, q=q, ms=ms, qs=qs,
        pi=pi,
        minus_pair=minus_pair, quot_minus_pair=quot_minus_pair, quot_pair=quot_pair,
        # in the order of the certificate's components
        dps=[minus_pair, quot_minus_pair, quot_pair],
        cert=parse_certificate(read("quot.cert.xml"), sig, names),
    )


@pytest.fixture(scope="session")
def r8():
    return r8_namespace()
