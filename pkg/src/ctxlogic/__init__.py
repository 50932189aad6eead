"""Context Logic with an activation bit vector reasoner and imager."""
from .bitvec import BitVec, band, bnot, bor, is_ones, is_zero, popcount, random_bitvec
from .reasoner import KnowledgeBase, assert_atom, assert_formula, entails, model_fraction, overlaps, query
from .syntax import expand_defs, fragment_of, parse_formula, parse_one, to_text

__version__ = "0.1.0"
