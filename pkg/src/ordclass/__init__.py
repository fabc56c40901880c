"""Ordinal arithmetic and isomorphic classification of C(xi), C(xi, X) and K(C(lambda, l_p), C(xi, l_q))."""

from .classifier import (
    AxiomContext,
    CanonicalPair,
    KSpace,
    NoRVMBelow,
    Outcome,
    ScalarC,
    Verdict,
    VectorC,
    XDescriptor,
    canonical_pair,
    classify,
    iso_K,
    iso_K_abstract,
    iso_scalar,
    iso_vector,
    psi,
)
from .ordinals import (
    OMEGA,
    ONE,
    ZERO,
    Aleph,
    Atom,
    Finite,
    Ordinal,
    Sum,
    add,
    aleph,
    cardinality,
    cofinality,
    compare,
    divide,
    gamma_min,
    initial_ordinal,
    is_regular,
    mul,
    nat,
    normalize,
    ordinal,
    power,
)
from .textio import ParseError, parse_ordinal, parse_space, print_normal

__version__ = "0.1.0"
