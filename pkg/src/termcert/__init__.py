"""First-order term rewriting and a checker for termination certificates."""
from .checker import (
    Accepted,
    Component,
    Decomp,
    DpTrans,
    Full,
    PolyOrd,
    Rejected,
    TopRel,
    Trivial,
    check,
)
from .parsing import certificate_to_xml, parse_certificate, parse_trs, print_trs
from .rewrite import TRS
from .terms import App, Rule, Signature, Symbol, Var, mk_app

__version__ = "0.1.0"

__all__ = [
    "Accepted",
    "App",
    "Component",
    "Decomp",
    "DpTrans",
    "Full",
    "PolyOrd",
    "Rejected",
    "Rule",
    "Signature",
    "Symbol",
    "TRS",
    "TopRel",
    "Trivial",
    "Var",
    "certificate_to_xml",
    "check",
    "mk_app",
    "parse_certificate",
    "parse_trs",
    "print_trs",
]
