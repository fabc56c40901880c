"""Isomorphic classification of C(xi), C(xi, X) and K(C(lambda, l_p), C(xi, l_q)).

Every decision returns a :class:`Verdict` that records which rule fired and
which set-theoretic assumption (if any) the conclusion rests on.  The only
assumption ever consumed is "there is no real-valued measurable cardinal at or
below |lambda|"; it is never computed, only toggled through
:class:`AxiomContext`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

from .ordinals import (
    ALEPH_0,
    OMEGA,
    ONE,
    Aleph,
    CardinalRank,
    Finite,
    Ordinal,
    cardinality,
    coerce,
    compare,
    divide,
    gamma_min,
    initial_ordinal,
    is_finite,
    is_regular,
    is_zero,
    mul,
    ordinal_max,
    power,
)


class ClassifierDomainError(ValueError):
    """A query violates a hard precondition (zero ordinal, p <= 1, ...)."""


class Outcome(str, enum.Enum):
    ISOMORPHIC = "Isomorphic"
    NOT_ISOMORPHIC = "NotIsomorphic"
    UNDECIDED = "Undecided"
    OUT_OF_SCOPE = "OutOfScope"

    def __str__(self):
        return self.value


PSI_MODES = ("repaired", "literal")


@dataclass(frozen=True)
class AxiomContext:
    assume_no_rvm: bool = True
    psi_mode: str = "repaired"

    def __post_init__(self):
        if self.psi_mode not in PSI_MODES:
            raise ValueError(f"psi_mode must be one of {PSI_MODES}, got {self.psi_mode!r}")


DEFAULT_CONTEXT = AxiomContext()


@dataclass(frozen=True)
class NoRVMBelow:
    """No real-valued measurable cardinal is <= the given cardinal."""

    cardinal: CardinalRank

    def __str__(self):
        return f"NoRVMBelow({self.cardinal})"


@dataclass(frozen=True)
class TraceStep:
    case: str
    citation: str


@dataclass(frozen=True)
class CanonicalPair:
    lambda0: Ordinal
    psi: Ordinal


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    trace: Tuple[TraceStep, ...] = ()
    assumptions: frozenset = frozenset()
    canonical: Optional[Tuple[CanonicalPair, CanonicalPair]] = None
    reason: Optional[str] = None

    @property
    def isomorphic(self) -> bool:
        return self.outcome is Outcome.ISOMORPHIC


@dataclass(frozen=True)
class XDescriptor:
    """What is known about the coefficient space X of C(xi, X)."""

    square_iso: bool  # X ~ X + X
    c0_self_iso: bool  # X ~ c_0(X)
    in_class_F: bool  # Mazur property, no copy of c_0(Gamma) with |Gamma| = aleph_1
    dual_AP: bool = True


# l_p, 1 < p < oo: reflexive, so in class F; l_p is not c_0(l_p).
L_P = XDescriptor(square_iso=True, c0_self_iso=False, in_class_F=True)


def k_space_descriptor(lam) -> XDescriptor:
    """Descriptor of X with K(C(lam, l_p), C(xi, l_q)) ~ C(xi, X), 1 < p <= q < oo."""
    return XDescriptor(square_iso=True, c0_self_iso=is_finite(coerce(lam)), in_class_F=True)


# -- space expressions -------------------------------------------------------------


@dataclass(frozen=True)
class ScalarC:
    xi: Ordinal


@dataclass(frozen=True)
class VectorC:
    xi: Ordinal
    p: Fraction


@dataclass(frozen=True)
class KSpace:
    lam: Ordinal
    p: Fraction
    xi: Ordinal
    q: Fraction


SpaceExpr = Union[ScalarC, VectorC, KSpace]


# -- helpers -----------------------------------------------------------------------

_CITE = {
    "scalar/cardinality": "C(xi) ~ C(eta) forces |xi| = |eta|",
    "scalar/power-criterion": "xi <= eta: C(xi) ~ C(eta) iff eta < xi^w",
    "scalar/across-square": "alpha uncountable regular, xi < alpha^2 < eta: C(xi) and C(eta) not isomorphic",
    "scalar/quotient-cardinality": "alpha uncountable regular, alpha <= xi <= eta <= alpha^2: "
    "C(xi) ~ C(eta) iff |xi'| = |eta'| for xi = alpha*xi' + delta, eta = alpha*eta' + gamma",
    "vector/cardinality": "C(xi,X) ~ C(eta,X) with X in F forces |xi| = |eta|",
    "vector/power-criterion": "X in F, alpha singular or alpha uncountable regular with alpha^2 <= xi: "
    "C(xi,X) ~ C(eta,X) iff eta < xi^w",
    "vector/countable-power-criterion": "X in F, |xi| = |eta| = aleph_0, X not c_0(X): "
    "C(xi,X) ~ C(eta,X) iff eta < xi^w",
    "vector/countable-collapse": "X in F with X ~ c_0(X), |xi| = |eta| = aleph_0: "
    "C(xi,X) ~ C(eta,X) iff gamma_min(xi) = gamma_min(eta) (all of [w, w^w) collapses to c_0(X) ~ X)",
    "vector/across-square": "X in F, alpha uncountable regular, alpha <= xi < alpha^2 <= eta: C(xi,X), C(eta,X) not isomorphic",
    "vector/uncountable-quotients": "X in F, xi, eta in [alpha, alpha^2]: with an uncountable quotient, "
    "C(xi,X) ~ C(eta,X) iff |xi'| = |eta'| > aleph_0",
    "vector/c0-sum": "X in F, xi, eta in [alpha, alpha^2], |xi'||eta'| <= aleph_0: "
    "C(xi,X) ~ C(eta,X) iff c_0(J,X) ~ c_0(I,X), |J| = |xi'|, |I| = |eta'|",
    "K/regime": "classification covers 1 < p <= q < oo",
    "K/initial-lambda": "K(C(lambda,l_p),C(xi,l_q)) ~ K(C(mu,l_p),C(eta,l_q)) forces lambda_0 = mu_0",
    "K/canonical-sufficiency": "K(C(lambda,l_p),C(xi,l_q)) ~ K(C(lambda_0,l_p),C(psi(lambda,xi),l_q))",
    "K/canonical-necessity": "for |lambda| below the least real-valued measurable cardinal m_r, "
    "isomorphism forces psi(lambda,xi) = psi(mu,eta)",
    "K/undecided-without-assumption": "psi(lambda,xi) != psi(mu,eta) separates the spaces only when "
    "|lambda| < m_r; that assumption is switched off",
    "abstract/initial-lambda": "lambda, mu must both be finite or have equal cardinality",
    "abstract/finite-targets": "lambda infinite: K(C(lambda,l_p),C(xi,l_q)) with xi finite is not "
    "isomorphic to one with eta infinite (no copy in K(C(lambda,l_p),l_q))",
    "abstract/finite-promotion": "lambda, mu finite: a finite xi may be replaced by w since K(l_p,l_q) ~ K(l_p,c_0(l_q))",
    "abstract/scalar-clause": "C(xi) ~ C(eta)",
    "abstract/regular-multiple-clause": "C(xi) ~ C(alpha*m), C(eta) ~ C(alpha*n) for an uncountable regular alpha",
    "abstract/no-clause": "neither C(xi) ~ C(eta) nor a common uncountable regular alpha with admissible m, n",
}


def _step(case: str, detail: str = "") -> TraceStep:
    citation = _CITE[case]
    if detail:
        citation = f"{citation} [{detail}]"
    return TraceStep(case, citation)


def _out_of_scope(reason: str, *trace: TraceStep) -> Verdict:
    return Verdict(
        Outcome.OUT_OF_SCOPE,
        tuple(trace) + (TraceStep("out-of-scope", reason),),
        reason=reason,
    )


def _nonzero(*xs):
    out = []
    for x in xs:
        x = coerce(x)
        if is_zero(x):
            raise ClassifierDomainError("ordinal index must be at least 1")
        out.append(x)
    return out


def _ordered(xi, eta):
    return (xi, eta) if compare(xi, eta) <= 0 else (eta, xi)


def _verdict(iso: bool, *trace: TraceStep) -> Verdict:
    return Verdict(Outcome.ISOMORPHIC if iso else Outcome.NOT_ISOMORPHIC, tuple(trace))


# -- C(xi) -------------------------------------------------------------------------


def iso_scalar(xi, eta) -> Verdict:
    """Decide C(xi) ~ C(eta) for infinite xi, eta."""
    xi, eta = _nonzero(xi, eta)
    if is_finite(xi) or is_finite(eta):
        return _out_of_scope("finite-dimensional C(xi): isomorphic iff dimensions agree")
    xi, eta = _ordered(xi, eta)
    if cardinality(xi) != cardinality(eta):
        return _verdict(False, _step("scalar/cardinality"))
    alpha = initial_ordinal(xi)
    if alpha == OMEGA or not is_regular(alpha):
        return _verdict(compare(eta, power(xi, OMEGA)) < 0, _step("scalar/power-criterion"))
    square = mul(alpha, alpha)
    if compare(xi, square) >= 0:
        return _verdict(compare(eta, power(xi, OMEGA)) < 0, _step("scalar/power-criterion"))
    if compare(eta, square) > 0:
        return _verdict(False, _step("scalar/across-square"))
    qx, qy = divide(xi, alpha)[0], divide(eta, alpha)[0]
    return _verdict(
        cardinality(qx) == cardinality(qy),
        _step("scalar/quotient-cardinality", f"|xi'| = {cardinality(qx)}, |eta'| = {cardinality(qy)}"),
    )


# -- C(xi, X) ----------------------------------------------------------------------


def c0_sum_iso(m: CardinalRank, n: CardinalRank, x: XDescriptor) -> bool:
    """Whether c_0(J, X) ~ c_0(I, X) for |J| = m, |I| = n, both at most aleph_0."""
    if not x.square_iso:
        raise ClassifierDomainError("c0_sum_iso needs X ~ X + X")
    for r in (m, n):
        if isinstance(r, Aleph) and r != ALEPH_0:
            raise ClassifierDomainError(f"c0_sum_iso handles ranks up to aleph_0, got {r}")
        if r == Finite(0):
            raise ClassifierDomainError("c_0 over an empty index set")
    if m == n:
        return True
    if isinstance(m, Finite) and isinstance(n, Finite):
        return True
    return x.c0_self_iso


def iso_vector(xi, eta, x: XDescriptor) -> Verdict:
    """Decide C(xi, X) ~ C(eta, X) for infinite xi, eta and X in class F with X ~ X + X."""
    xi, eta = _nonzero(xi, eta)
    if not (x.in_class_F and x.square_iso):
        return _out_of_scope("X must lie in class F and be isomorphic to its square")
    if is_finite(xi) or is_finite(eta):
        return _out_of_scope("finite xi: C(xi, X) is a finite power of X")
    xi, eta = _ordered(xi, eta)
    if cardinality(xi) != cardinality(eta):
        return _verdict(False, _step("vector/cardinality"))
    alpha = initial_ordinal(xi)
    if alpha == OMEGA:
        if x.c0_self_iso:
            return _verdict(gamma_min(xi) == gamma_min(eta), _step("vector/countable-collapse"))
        return _verdict(
            compare(eta, power(xi, OMEGA)) < 0, _step("vector/countable-power-criterion")
        )
    if not is_regular(alpha):
        return _verdict(compare(eta, power(xi, OMEGA)) < 0, _step("vector/power-criterion"))
    square = mul(alpha, alpha)
    if compare(xi, square) >= 0:
        return _verdict(compare(eta, power(xi, OMEGA)) < 0, _step("vector/power-criterion"))
    if compare(eta, square) > 0:
        return _verdict(False, _step("vector/across-square"))
    qx = cardinality(divide(xi, alpha)[0])
    qy = cardinality(divide(eta, alpha)[0])
    detail = f"|xi'| = {qx}, |eta'| = {qy}"
    if qx > ALEPH_0 or qy > ALEPH_0:
        return _verdict(qx == qy, _step("vector/uncountable-quotients", detail))
    return _verdict(c0_sum_iso(qx, qy, x), _step("vector/c0-sum", detail))


# -- psi and canonical pairs ------------------------------------------------------

_PSI_CITE = {
    "psi/finite": "xi finite, or lambda finite and xi < w^w: psi = 1",
    "psi/regular-window-infinite-lambda": "lambda >= w, xi_0 uncountable regular, xi = xi_0*xi' + delta <= xi_0^2: "
    "psi = xi_0*(xi')_0 if xi' >= w, psi = xi_0 if xi' < w",
    "psi/regular-window-finite-lambda": "lambda < w, xi_0 uncountable regular, xi = xi_0*xi' + delta <= xi_0^2: "
    "psi = xi_0 for countable xi', psi = xi_0*(xi')_0 for uncountable xi'",
    "psi/regular-window-finite-lambda-literal": "lambda < w, xi_0 uncountable regular, xi = xi_0*xi' + delta <= xi_0^2: "
    "psi = xi_0*(xi')_0 if xi' > w, psi = xi_0 if xi' <= w",
    "psi/above-square": "xi_0 uncountable regular, xi_0^2 < xi: psi = max(xi_0^2, gamma_min(xi))",
    "psi/gamma-min": "xi_0 = w with lambda >= w, or xi_0 singular: psi = least gamma with gamma^w > xi",
    "psi/gamma-min-finite-lambda": "lambda < w, xi_0 = w, xi >= w^w: psi = least gamma with gamma^w > xi",
}

_OMEGA_OMEGA = power(OMEGA, OMEGA)


@lru_cache(maxsize=1 << 16)
def _psi(lam: Ordinal, xi: Ordinal, mode: str):
    lam_finite = is_finite(lam)
    if is_finite(xi) or (lam_finite and compare(xi, _OMEGA_OMEGA) < 0):
        return ONE, "psi/finite"
    xi0 = initial_ordinal(xi)
    if xi0 == OMEGA:
        if lam_finite:
            return gamma_min(xi), "psi/gamma-min-finite-lambda"
        return gamma_min(xi), "psi/gamma-min"
    if not is_regular(xi0):
        return gamma_min(xi), "psi/gamma-min"
    square = mul(xi0, xi0)
    if compare(xi, square) > 0:
        return ordinal_max(square, gamma_min(xi)), "psi/above-square"
    quotient = divide(xi, xi0)[0]
    if not lam_finite:
        if compare(quotient, OMEGA) >= 0:
            return mul(xi0, initial_ordinal(quotient)), "psi/regular-window-infinite-lambda"
        return xi0, "psi/regular-window-infinite-lambda"
    if mode == "literal":
        if compare(quotient, OMEGA) > 0:
            return mul(xi0, initial_ordinal(quotient)), "psi/regular-window-finite-lambda-literal"
        return xi0, "psi/regular-window-finite-lambda-literal"
    if cardinality(quotient) > ALEPH_0:
        return mul(xi0, initial_ordinal(quotient)), "psi/regular-window-finite-lambda"
    return xi0, "psi/regular-window-finite-lambda"


def psi_case(lam, xi, ctx: AxiomContext = DEFAULT_CONTEXT) -> Tuple[Ordinal, TraceStep]:
    """The canonical target index together with the trace step that produced it."""
    lam, xi = _nonzero(lam, xi)
    value, case = _psi(lam, xi, ctx.psi_mode)
    return value, TraceStep(case, _PSI_CITE[case])


def psi(lam, xi, ctx: AxiomContext = DEFAULT_CONTEXT) -> Ordinal:
    return psi_case(lam, xi, ctx)[0]


def canonical_pair(lam, xi, ctx: AxiomContext = DEFAULT_CONTEXT) -> CanonicalPair:
    lam, xi = _nonzero(lam, xi)
    return CanonicalPair(initial_ordinal(lam), psi(lam, xi, ctx))


# -- K(C(lambda, l_p), C(xi, l_q)) -------------------------------------------------


def _check_exponents(p, q):
    p, q = Fraction(p), Fraction(q)
    if p <= 1 or q <= 1:
        raise ClassifierDomainError(f"exponents must exceed 1 (got p={p}, q={q})")
    return p, q


def _separated(lam: Ordinal, ctx: AxiomContext, *trace: TraceStep, canonical=None) -> Verdict:
    """NotIsomorphic, resting on |lam| < m_r when lam is infinite."""
    if is_finite(lam):
        return Verdict(Outcome.NOT_ISOMORPHIC, tuple(trace), canonical=canonical)
    tags = frozenset({NoRVMBelow(cardinality(lam))})
    if not ctx.assume_no_rvm:
        return Verdict(
            Outcome.UNDECIDED,
            tuple(trace) + (_step("K/undecided-without-assumption"),),
            tags,
            canonical,
        )
    return Verdict(Outcome.NOT_ISOMORPHIC, tuple(trace), tags, canonical)


def iso_K(lam, xi, mu, eta, p, q, ctx: AxiomContext = DEFAULT_CONTEXT) -> Verdict:
    """Decide K(C(lam,l_p),C(xi,l_q)) ~ K(C(mu,l_p),C(eta,l_q)) through canonical pairs."""
    p, q = _check_exponents(p, q)
    lam, xi, mu, eta = _nonzero(lam, xi, mu, eta)
    regime = _step("K/regime", f"p={p}, q={q}")
    if p > q:
        return _out_of_scope("p > q regime is not classified here", regime)
    psi_left, step_left = psi_case(lam, xi, ctx)
    psi_right, step_right = psi_case(mu, eta, ctx)
    left = CanonicalPair(initial_ordinal(lam), psi_left)
    right = CanonicalPair(initial_ordinal(mu), psi_right)
    canonical = (left, right)
    trace = [
        regime,
        TraceStep("left:" + step_left.case, step_left.citation),
        TraceStep("right:" + step_right.case, step_right.citation),
        _step("K/canonical-sufficiency"),
    ]
    if left.lambda0 != right.lambda0:
        trace.append(_step("K/initial-lambda"))
        return Verdict(Outcome.NOT_ISOMORPHIC, tuple(trace), canonical=canonical)
    if left.psi == right.psi:
        return Verdict(Outcome.ISOMORPHIC, tuple(trace), canonical=canonical)
    trace.append(_step("K/canonical-necessity"))
    return _separated(lam, ctx, *trace, canonical=canonical)


def _regular_multiple(xi: Ordinal, alpha: Ordinal, allow_omega: bool):
    """An admissible m with C(xi) ~ C(alpha*m), or None."""
    quotient = divide(xi, alpha)[0]
    if is_finite(quotient):
        m = quotient
    elif allow_omega:
        m = OMEGA
    else:
        return None
    if is_zero(m) or not iso_scalar(xi, mul(alpha, m)).isomorphic:
        return None
    return m


def _criterion(xi: Ordinal, eta: Ordinal, allow_omega: bool):
    """Scalar clause or common-regular-multiple clause; returns (holds, steps)."""
    scalar = iso_scalar(xi, eta)
    if scalar.isomorphic:
        return True, (_step("abstract/scalar-clause"),) + scalar.trace
    alpha = initial_ordinal(xi)
    if alpha != OMEGA and is_regular(alpha) and initial_ordinal(eta) == alpha:
        m = _regular_multiple(xi, alpha, allow_omega)
        n = _regular_multiple(eta, alpha, allow_omega)
        if m is not None and n is not None:
            return True, (_step("abstract/regular-multiple-clause", f"alpha={alpha}, m={m}, n={n}"),)
    return False, (_step("abstract/no-clause"),) + scalar.trace


def iso_K_abstract(lam, xi, mu, eta, p, q, ctx: AxiomContext = DEFAULT_CONTEXT) -> Verdict:
    """Same question as :func:`iso_K`, decided from the scalar classification of C(xi).

    Shares no code with the canonical-pair route beyond ordinal arithmetic and
    :func:`iso_scalar`; it is the cross-check for :func:`iso_K`.
    """
    p, q = _check_exponents(p, q)
    lam, xi, mu, eta = _nonzero(lam, xi, mu, eta)
    regime = _step("K/regime", f"p={p}, q={q}")
    if p > q:
        return _out_of_scope("p > q regime is not classified here", regime)
    lam_finite, mu_finite = is_finite(lam), is_finite(mu)
    if lam_finite != mu_finite:
        return _verdict(False, regime, _step("abstract/initial-lambda"))
    if not lam_finite:
        if cardinality(lam) != cardinality(mu):
            return _verdict(False, regime, _step("abstract/initial-lambda"))
        if is_finite(xi) or is_finite(eta):
            if is_finite(xi) and is_finite(eta):
                return _verdict(True, regime, _step("abstract/finite-targets"))
            return _separated(lam, ctx, regime, _step("abstract/finite-targets"))
        holds, steps = _criterion(xi, eta, allow_omega=False)
        if holds:
            return _verdict(True, regime, *steps)
        return _separated(lam, ctx, regime, *steps)
    trace = [regime]
    if is_finite(xi) or is_finite(eta):
        trace.append(_step("abstract/finite-promotion"))
        xi = OMEGA if is_finite(xi) else xi
        eta = OMEGA if is_finite(eta) else eta
    holds, steps = _criterion(xi, eta, allow_omega=True)
    return _verdict(holds, *trace, *steps)


# -- dispatch by shape ---------------------------------------------------------------


def classify(a: SpaceExpr, b: SpaceExpr, ctx: AxiomContext = DEFAULT_CONTEXT) -> Verdict:
    """Classify two space expressions of the same shape."""
    if isinstance(a, ScalarC) and isinstance(b, ScalarC):
        return iso_scalar(a.xi, b.xi)
    if isinstance(a, VectorC) and isinstance(b, VectorC):
        if a.p != b.p:
            return _out_of_scope("C(xi, l_p) against C(eta, l_r) with p != r is not classified here")
        return iso_vector(a.xi, b.xi, L_P)
    if isinstance(a, KSpace) and isinstance(b, KSpace):
        for s in (a, b):
            _check_exponents(s.p, s.q)
        for s in (a, b):
            if s.p > s.q:
                return _out_of_scope(
                    "p > q regime is not classified here",
                    _step("K/regime", f"p={s.p}, q={s.q}"),
                )
        if (a.p, a.q) != (b.p, b.q):
            return _out_of_scope("K-spaces with different exponent pairs are not classified here")
        return iso_K(a.lam, a.xi, b.lam, b.xi, a.p, a.q, ctx)
    return _out_of_scope("spaces of different shapes are not classified here")
