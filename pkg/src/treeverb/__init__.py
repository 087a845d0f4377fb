"""Automorphisms of regular rooted trees: exact arithmetic and the verbal chain."""
from ._backend import BACKEND
from .core import (
    AutomatonError,
    DegreeMismatch,
    Portrait,
    TreeAutomorphism,
    apply,
    commutator,
    compose,
    conjugate,
    equals,
    in_stabilizer,
    inverse,
    is_level_transitive,
    label_at,
    portrait_to_automaton,
    power,
    section_at,
    truncate,
    validate_automaton,
)
from .parity import (
    ChainIndex,
    ParitySequence,
    alt_exponent,
    classify_chain,
    epsilon,
    in_ker_P,
    in_M,
    parity_sequence,
)
from .perm import Permutation

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AutomatonError",
    "ChainIndex",
    "DegreeMismatch",
    "ParitySequence",
    "Permutation",
    "Portrait",
    "TreeAutomorphism",
    "alt_exponent",
    "apply",
    "classify_chain",
    "commutator",
    "compose",
    "conjugate",
    "epsilon",
    "equals",
    "in_M",
    "in_ker_P",
    "in_stabilizer",
    "inverse",
    "is_level_transitive",
    "label_at",
    "parity_sequence",
    "portrait_to_automaton",
    "power",
    "section_at",
    "truncate",
    "validate_automaton",
]
