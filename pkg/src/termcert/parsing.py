"""Readers and writers for ``.trs`` files and XML termination certificates.

TRS syntax::

    file ::= "(VAR" name* ")" "(RULES" rule* ")"
    rule ::= term "->" term
    term ::= name | name "(" term ("," term)* ")"

Names are non-empty runs of letters, digits, ``_`` and ``'``; a name is a
variable iff declared under VAR.  ``#`` starts a comment running to the end
of the line.  Arities are fixed by first use.

The certificate schema is documented in ``docs/certificate.md``.
"""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .checker import APPROXES, Component, Decomp, DpTrans, PolyOrd, Proof, Trivial
from .poly import Polynomial, PolyInterpretation
from .rewrite import TRS
from .terms import App, Rule, Signature, Symbol, Term, Var, var_list
from .terms import UnknownSymbol as _UnknownSymbol


class ParseError(Exception):
    """Ill-formed input; carries a location when one is known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        loc = f"{line}:{col}: " if line is not None else ""
        super().__init__(loc + message)


class TrsSyntaxError(ParseError):
    pass


class ArityConflict(ParseError):
    def __init__(self, symbol: str, first: int, now: int, line=None, col=None):
        self.symbol = symbol
        super().__init__(f"symbol {symbol} used with arity {first} and {now}", line, col)


class CertificateSyntaxError(ParseError):
    pass


class UnknownSymbol(ParseError, _UnknownSymbol):
    def __init__(self, name: str):
        # bypass the cooperative __init__ chain, which would wrap the message twice
        self.name = name
        self.line = self.col = None
        Exception.__init__(self, f"unknown symbol {name!r}")


class PolyArityMismatch(ParseError):
    def __init__(self, symbol: str, detail: str):
        self.symbol = symbol
        super().__init__(f"polynomial for {symbol}: {detail}")


@dataclass
class NameTable:
    """Source names for symbols and, per rule, for variables."""

    symbols: dict[str, Symbol] = field(default_factory=dict)
    rule_vars: list[dict[str, int]] = field(default_factory=list)

    def var_names(self, rule_index: int) -> dict[int, str]:
        return {i: n for n, i in self.rule_vars[rule_index].items()}

    def symbol_name(self, f: Symbol) -> str:
        return f.name


# .trs reader

_TOKEN = re.compile(r"\s+|#[^\n]*|(?P<arrow>->)|(?P<punct>[(),])|(?P<name>[A-Za-z0-9_']+)")


def _tokenize(text: str):
    pos, line, line_start = 0, 1, 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TrsSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind is not None:
            out.append((kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    out.append(("eof", "", line, pos - line_start + 1))
    return out


class _TrsParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.arity: dict[str, int] = {}
        self.order: list[str] = []
        self.variables: set[str] = set()

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise TrsSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        return tok

    def parse(self):
        self.expect("punct", "(")
        self.expect("name", "VAR")
        while self.peek()[0] == "name":
            self.variables.add(self.next()[1])
        self.expect("punct", ")")
        self.expect("punct", "(")
        self.expect("name", "RULES")
        raw = []
        while self.peek()[0] == "name":
            lhs = self.term()
            self.expect("arrow")
            rhs = self.term()
            raw.append((lhs, rhs))
        self.expect("punct", ")")
        self.expect("eof")
        return raw

    def term(self):
        kind, name, line, col = self.expect("name")
        if self.peek()[1] != "(":
            if name in self.variables:
                return ("var", name)
            self._use(name, 0, line, col)
            return ("app", name, [])
        if name in self.variables:
            raise TrsSyntaxError(f"variable {name} applied to arguments", line, col)
        self.next()
        args = [self.term()]
        while self.peek()[1] == ",":
            self.next()
            args.append(self.term())
        self.expect("punct", ")")
        self._use(name, len(args), line, col)
        return ("app", name, args)

    def _use(self, name, n, line, col):
        old = self.arity.get(name)
        if old is None:
            self.arity[name] = n
            self.order.append(name)
        elif old != n:
            raise ArityConflict(name, old, n, line, col)


def parse_trs(text: str) -> tuple[Signature, TRS, NameTable]:
    try:
        return _parse_trs(text)
    except RecursionError:
        raise TrsSyntaxError("terms nested too deeply") from None


def _parse_trs(text: str) -> tuple[Signature, TRS, NameTable]:
    p = _TrsParser(text)
    raw = p.parse()
    sig = Signature(Symbol(n, p.arity[n]) for n in p.order)
    names = NameTable(symbols={f.name: f for f in sig})
    rules = []
    for lhs, rhs in raw:
        scope: dict[str, int] = {}

        def build(node) -> Term:
            if node[0] == "var":
                if node[1] not in scope:
                    scope[node[1]] = len(scope)
                return Var(scope[node[1]])
            return App(names.symbols[node[1]], tuple(build(a) for a in node[2]))

        l = build(lhs)
        r = build(rhs)
        rules.append(Rule(l, r))
        names.rule_vars.append(scope)
    return sig, TRS(sig, rules), names


# .trs writer

def format_term(t: Term, var_names: dict[int, str] | None = None) -> str:
    if isinstance(t, Var):
        return (var_names or {}).get(t.index, f"x{t.index}")
    if not t.args:
        return str(t.symbol)
    return f"{t.symbol}({','.join(format_term(a, var_names) for a in t.args)})"


def format_rule(r: Rule, var_names: dict[int, str] | None = None) -> str:
    return f"{format_term(r.lhs, var_names)} -> {format_term(r.rhs, var_names)}"


def print_trs(trs: TRS, names: NameTable | None = None) -> str:
    lines = []
    declared: list[str] = []
    for i, r in enumerate(trs.rules):
        vn = names.var_names(i) if names is not None else None
        for x in var_list(r.lhs) + var_list(r.rhs):
            n = (vn or {}).get(x, f"x{x}")
            if n not in declared:
                declared.append(n)
        lines.append("  " + format_rule(r, vn))
    head = "(VAR" + "".join(" " + n for n in declared) + ")"
    return head + "\n(RULES\n" + "".join(l + "\n" for l in lines) + ")\n"


# certificate reader

_NAT = re.compile(r"[0-9]+\Z")
_INT = re.compile(r"[+-]?[0-9]+\Z")

# keeps adversarial certificates from blowing up polynomial composition
MAX_POW = 64


def _fail(msg):
    raise CertificateSyntaxError(msg)


def _children(e: ET.Element) -> list[ET.Element]:
    if (e.text or "").strip():
        _fail(f"unexpected text inside <{e.tag}>")
    for c in e:
        if (c.tail or "").strip():
            _fail(f"unexpected text after <{c.tag}>")
    return list(e)


def _only_text(e: ET.Element) -> str:
    if len(e):
        _fail(f"<{e.tag}> must contain only text")
    return (e.text or "").strip()


def _no_attrs(e: ET.Element, allowed=()):
    extra = set(e.attrib) - set(allowed)
    if extra:
        _fail(f"unexpected attribute(s) {sorted(extra)} on <{e.tag}>")


class _CertReader:
    def __init__(self, sig: Signature):
        self.sig = sig

    def symbol(self, e: ET.Element) -> Symbol:
        if e.tag != "fun":
            _fail(f"expected <fun>, found <{e.tag}>")
        _no_attrs(e, ("sharp",))
        sharp = e.get("sharp", "false")
        if sharp not in ("true", "false"):
            _fail(f"sharp must be 'true' or 'false', got {sharp!r}")
        name = _only_text(e)
        if not name:
            _fail("empty symbol name")
        base = self.sig.symbol(name) if name in self.sig else None
        if base is None:
            raise UnknownSymbol(name)
        return base.sharp() if sharp == "true" else base

    def term(self, e: ET.Element) -> Term:
        _no_attrs(e)
        if e.tag == "var":
            text = _only_text(e)
            if not _NAT.match(text):
                _fail(f"variable index must be a natural number, got {text!r}")
            return Var(int(text))
        if e.tag == "app":
            kids = _children(e)
            if not kids:
                _fail("<app> needs a <fun>")
            f = self.symbol(kids[0])
            args = tuple(self.term(k) for k in kids[1:])
            if len(args) != f.arity:
                _fail(f"{f} expects {f.arity} argument(s), got {len(args)}")
            return App(f, args)
        _fail(f"expected <var> or <app>, found <{e.tag}>")

    def rule(self, e: ET.Element) -> Rule:
        if e.tag != "rule":
            _fail(f"expected <rule>, found <{e.tag}>")
        _no_attrs(e)
        kids = _children(e)
        if [k.tag for k in kids] != ["lhs", "rhs"]:
            _fail("<rule> must contain <lhs> then <rhs>")
        sides = []
        for k in kids:
            _no_attrs(k)
            inner = _children(k)
            if len(inner) != 1:
                _fail(f"<{k.tag}> must contain exactly one term")
            sides.append(self.term(inner[0]))
        return Rule(*sides)

    def polynomial(self, f: Symbol, e: ET.Element) -> Polynomial:
        if e.tag != "polynomial":
            _fail(f"expected <polynomial>, found <{e.tag}>")
        _no_attrs(e)
        terms = []
        for mono in _children(e):
            if mono.tag != "monomial":
                _fail(f"expected <monomial>, found <{mono.tag}>")
            _no_attrs(mono, ("coef",))
            c = mono.get("coef")
            if c is None or not _INT.match(c.strip()):
                _fail(f"monomial coefficient must be an integer, got {c!r}")
            exps = [0] * f.arity
            for x in _children(mono):
                if x.tag != "exp":
                    _fail(f"expected <exp>, found <{x.tag}>")
                _no_attrs(x, ("var", "pow"))
                if len(x) or (x.text or "").strip():
                    _fail("<exp> must be empty")
                v, pw = x.get("var"), x.get("pow")
                if v is None or pw is None or not _NAT.match(v) or not _NAT.match(pw):
                    _fail("<exp> needs natural-number var and pow attributes")
                v = int(v)
                if int(pw) > MAX_POW:
                    _fail(f"exponent {pw} exceeds the supported maximum {MAX_POW}")
                if not 1 <= v <= f.arity:
                    raise PolyArityMismatch(
                        str(f), f"variable x_{v} outside x_1..x_{f.arity}"
                    )
                exps[v - 1] += int(pw)
            terms.append((int(c), tuple(exps)))
        return Polynomial(f.arity, terms)

    def interpretation(self, e: ET.Element) -> PolyInterpretation:
        _no_attrs(e)
        kids = _children(e)
        if not kids or len(kids) % 2:
            _fail("<poly_int> must hold one or more <fun>/<polynomial> pairs")
        mapping: dict[Symbol, Polynomial] = {}
        for fe, pe in zip(kids[::2], kids[1::2]):
            f = self.symbol(fe)
            if f in mapping:
                _fail(f"symbol {f} interpreted twice")
            mapping[f] = self.polynomial(f, pe)
        return PolyInterpretation(mapping)

    def proof(self, e: ET.Element) -> Proof:
        _no_attrs(e)
        tag = e.tag
        if tag == "trivial":
            if _children(e):
                _fail("<trivial/> must be empty")
            return Trivial()
        kids = _children(e)
        if tag == "dp":
            if len(kids) != 1:
                _fail("<dp> must contain exactly one proof")
            return DpTrans(self.proof(kids[0]))
        if tag == "manna_ness":
            if len(kids) != 2 or kids[0].tag != "poly_int":
                _fail("<manna_ness> must contain <poly_int> then a proof")
            return PolyOrd(self.interpretation(kids[0]), self.proof(kids[1]))
        if tag == "decomp":
            if not kids or kids[0].tag != "graph":
                _fail("<decomp> must start with <graph>")
            _no_attrs(kids[0])
            g = _children(kids[0])
            if len(g) != 1 or g[0].tag not in APPROXES or _children(g[0]):
                _fail("<graph> must contain <hde/> or <unif/>")
            _no_attrs(g[0])
            comps = [self.component(c) for c in kids[1:]]
            if not comps:
                _fail("<decomp> needs at least one <component>")
            return Decomp(g[0].tag, tuple(comps))
        _fail(f"unknown proof step <{tag}>")

    def component(self, e: ET.Element) -> Component:
        if e.tag != "component":
            _fail(f"expected <component>, found <{e.tag}>")
        _no_attrs(e)
        kids = _children(e)
        if not kids or kids[0].tag != "rules" or len(kids) > 2:
            _fail("<component> must contain <rules> and at most one proof")
        _no_attrs(kids[0])
        rules = tuple(self.rule(r) for r in _children(kids[0]))
        proof = self.proof(kids[1]) if len(kids) == 2 else None
        return Component(rules, proof)


def parse_certificate(text: str | bytes, sig: Signature, names: NameTable | None = None) -> Proof:
    """Read a certificate, resolving symbol names against the base signature ``sig``."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as e:
        line, col = getattr(e, "position", (None, None))
        raise CertificateSyntaxError(f"malformed XML: {e}", line, col) from None
    except (ValueError, RecursionError) as e:
        raise CertificateSyntaxError(f"malformed XML: {e}") from None
    try:
        return _CertReader(sig).proof(root)
    except RecursionError:
        raise CertificateSyntaxError("certificate nested too deeply") from None
    except ValueError as e:
        # e.g. integers beyond the interpreter's digit limit
        raise CertificateSyntaxError(str(e)) from None


# certificate writer

def _term_xml(t: Term, parent: ET.Element):
    if isinstance(t, Var):
        ET.SubElement(parent, "var").text = str(t.index)
        return
    app = ET.SubElement(parent, "app")
    f = ET.SubElement(app, "fun")
    if t.symbol.marked:
        f.set("sharp", "true")
    f.text = t.symbol.name
    for a in t.args:
        _term_xml(a, app)


def _proof_xml(p: Proof, parent: ET.Element | None) -> ET.Element:
    def node(tag):
        return ET.Element(tag) if parent is None else ET.SubElement(parent, tag)

    if isinstance(p, Trivial):
        return node("trivial")
    if isinstance(p, DpTrans):
        e = node("dp")
        _proof_xml(p.sub, e)
        return e
    if isinstance(p, PolyOrd):
        e = node("manna_ness")
        pi = ET.SubElement(e, "poly_int")
        for f, poly in p.interpretation.items():
            fe = ET.SubElement(pi, "fun")
            if f.marked:
                fe.set("sharp", "true")
            fe.text = f.name
            pe = ET.SubElement(pi, "polynomial")
            for m, c in poly.as_dict().items():
                me = ET.SubElement(pe, "monomial", coef=str(c))
                for i, k in enumerate(m):
                    if k:
                        ET.SubElement(me, "exp", var=str(i + 1), pow=str(k))
        _proof_xml(p.sub, e)
        return e
    if isinstance(p, Decomp):
        e = node("decomp")
        g = ET.SubElement(e, "graph")
        ET.SubElement(g, p.approx)
        for c in p.components:
            ce = ET.SubElement(e, "component")
            rs = ET.SubElement(ce, "rules")
            for r in c.rules:
                re_ = ET.SubElement(rs, "rule")
                _term_xml(r.lhs, ET.SubElement(re_, "lhs"))
                _term_xml(r.rhs, ET.SubElement(re_, "rhs"))
            if c.proof is not None:
                _proof_xml(c.proof, ce)
        return e
    raise TypeError(f"not a proof node: {p!r}")


def certificate_to_xml(proof: Proof) -> str:
    root = _proof_xml(proof, None)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"
