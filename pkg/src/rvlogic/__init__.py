"""Decision procedures for interval sentences over Lukasiewicz and Goedel logic."""

from .decide import EntailResult, SatResult, check_entails, check_sat
from .formula import Atom, Binary, Connective, Constant, Formula, ParseError, Unary, Weighted, atoms, parse_formula, subformula_closure, to_text
from .intervals import Interval, IntervalSet, complement, contains, intersect, normalize, parse_interval_set
from .semantics import Logic, connective_value, evaluate
from .theory import SimpleSentence, Theory, TheoryError, decompose_interval_sentence, negate_sentence, parse_theory

__version__ = "0.1.0"

__all__ = [
    "EntailResult", "SatResult", "check_entails", "check_sat",
    "Atom", "Binary", "Connective", "Constant", "Formula", "ParseError", "Unary", "Weighted",
    "atoms", "parse_formula", "subformula_closure", "to_text",
    "Interval", "IntervalSet", "complement", "contains", "intersect", "normalize", "parse_interval_set",
    "Logic", "connective_value", "evaluate",
    "SimpleSentence", "Theory", "TheoryError", "decompose_interval_sentence", "negate_sentence", "parse_theory",
]
