"""Exact arithmetic on ordinals built from naturals, omega and initial-ordinal atoms.

An ordinal is held in one of two shapes:

* ``Sum`` -- a Cantor normal form ``w^e1*c1 + ... + w^ek*ck`` with strictly
  decreasing exponents and positive integer coefficients (the empty sum is 0);
* ``Atom`` -- the initial ordinal ``w_a`` for an index ``a >= 1``.

Every uncountable initial ordinal is an epsilon number, so ``w^(w_a) = w_a``.
That identity is kept structurally: a sum whose only term is ``w^(w_a)*1`` is
never built, the atom is returned instead.  With that rule the representation
of every value is unique, and equality is plain structural equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Union


class OrdinalDomainError(ValueError):
    """An operation was applied outside its domain (division by zero, ...)."""


class Ordinal:
    """Common base of :class:`Sum` and :class:`Atom`."""

    __slots__ = ()

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __lt__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else compare(self, other) < 0

    def __le__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else compare(self, other) <= 0

    def __gt__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else compare(self, other) > 0

    def __ge__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else compare(self, other) >= 0

    def __add__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else add(self, other)

    def __radd__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else add(other, self)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else mul(self, other)

    def __rmul__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else mul(other, self)

    def __pow__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else power(self, other)

    def __rpow__(self, other):
        other = _coerce_or_none(other)
        return NotImplemented if other is None else power(other, self)

    def __str__(self):
        from .textio import print_normal

        return print_normal(self)

    def __repr__(self):
        return f"ordinal({str(self)!r})"


class Term(NamedTuple):
    exp: Ordinal
    coef: int


class Sum(Ordinal):
    """``sum(w^exp * coef for exp, coef in terms)``; exponents strictly decreasing."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=()):
        terms = tuple(Term(e, c) for e, c in terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(("Sum", terms)))

    @classmethod
    def _raw(cls, terms: tuple) -> "Sum":
        # trusted fast path: terms is already a tuple of Term
        self = object.__new__(cls)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(("Sum", terms)))
        return self

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Sum)
            and self._hash == other._hash
            and self.terms == other.terms
        )

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Sum, (self.terms,))


class Atom(Ordinal):
    """The initial ordinal ``w_index`` (index >= 1)."""

    __slots__ = ("index", "_hash")

    def __init__(self, index: Ordinal):
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_hash", hash(("Atom", index)))

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Atom)
            and self._hash == other._hash
            and self.index == other.index
        )

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (Atom, (self.index,))


ZERO = Sum()
ONE = Sum([(ZERO, 1)])
OMEGA = Sum([(ONE, 1)])


def nat(n: int) -> Sum:
    if n < 0:
        raise OrdinalDomainError(f"negative integer {n} is not an ordinal")
    if n == 0:
        return ZERO
    if n == 1:
        return ONE
    return Sum([(ZERO, n)])


def aleph(index) -> Ordinal:
    """``w_index``; index 0 gives ``w`` itself."""
    index = coerce(index)
    if index == ZERO:
        return OMEGA
    return Atom(index)


def omega_power(exp, coef: int = 1) -> Ordinal:
    """``w^exp * coef``."""
    if coef == 0:
        return ZERO
    return _build((Term(coerce(exp), coef),))


def coerce(x) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return nat(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


def _coerce_or_none(x):
    try:
        return coerce(x)
    except TypeError:
        return None


def _view(x: Ordinal):
    # An atom reads as the single term w^(atom)*1.
    if isinstance(x, Atom):
        return (Term(x, 1),)
    return x.terms


def from_terms(terms) -> Ordinal:
    """Ordinal with the given CNF terms (``(exp, coef)`` pairs, exponents strictly decreasing)."""
    terms = tuple(Term(e, c) for e, c in terms)
    for t in terms:
        if t.coef < 1:
            raise OrdinalDomainError("coefficients must be positive")
    for a, b in zip(terms, terms[1:]):
        if _compare(a.exp, b.exp) <= 0:
            raise OrdinalDomainError("exponents must be strictly decreasing")
    return _build(terms)


def _build(terms) -> Ordinal:
    terms = tuple(terms)
    if len(terms) == 1 and terms[0].coef == 1 and isinstance(terms[0].exp, Atom):
        return terms[0].exp
    return Sum._raw(terms)


def is_zero(x: Ordinal) -> bool:
    return isinstance(x, Sum) and not x.terms


def is_finite(x: Ordinal) -> bool:
    return isinstance(x, Sum) and (
        not x.terms or (len(x.terms) == 1 and is_zero(x.terms[0].exp))
    )


def finite_value(x: Ordinal) -> int:
    if not is_finite(x):
        raise OrdinalDomainError(f"{x} is not finite")
    return x.terms[0].coef if x.terms else 0


def is_successor(x: Ordinal) -> bool:
    return isinstance(x, Sum) and bool(x.terms) and is_zero(x.terms[-1].exp)


def is_limit(x: Ordinal) -> bool:
    return not is_zero(x) and not is_successor(x)


def leading_exponent(x: Ordinal) -> Ordinal:
    if is_zero(x):
        raise OrdinalDomainError("0 has no leading exponent")
    return _view(x)[0].exp


def size(x: Ordinal) -> int:
    """Number of nodes in the normal form; the termination measure of :func:`compare`."""
    if isinstance(x, Atom):
        return 1 + size(x.index)
    return 1 + sum(size(t.exp) for t in x.terms)


# -- comparison ----------------------------------------------------------------


@lru_cache(maxsize=1 << 18)
def _compare(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    if isinstance(a, Atom) and isinstance(b, Atom):
        return _compare(a.index, b.index)
    # At most one side is an atom here, so each recursive call works on a
    # strictly smaller pair: the atom is kept and a sum is replaced by one of
    # its exponents.
    ta, tb = _view(a), _view(b)
    for x, y in zip(ta, tb):
        c = _compare(x.exp, y.exp)
        if c:
            return c
        if x.coef != y.coef:
            return -1 if x.coef < y.coef else 1
    return (len(ta) > len(tb)) - (len(ta) < len(tb))


def compare(a, b) -> int:
    """-1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
    return _compare(coerce(a), coerce(b))


def ordinal_max(*xs):
    best = coerce(xs[0])
    for x in xs[1:]:
        x = coerce(x)
        if _compare(x, best) > 0:
            best = x
    return best


# -- arithmetic ----------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _add(a: Ordinal, b: Ordinal) -> Ordinal:
    tb = _view(b)
    if not tb:
        return a
    e0, c0 = tb[0]
    out = []
    for t in _view(a):
        c = _compare(t.exp, e0)
        if c > 0:
            out.append(t)
            continue
        if c == 0:
            out.append(Term(e0, t.coef + c0))
            out.extend(tb[1:])
            return _build(out)
        break
    out.extend(tb)
    return _build(out)


def add(a, b) -> Ordinal:
    return _add(coerce(a), coerce(b))


@lru_cache(maxsize=1 << 16)
def _mul(a: Ordinal, b: Ordinal) -> Ordinal:
    ta, tb = _view(a), _view(b)
    if not ta or not tb:
        return ZERO
    e1, c1 = ta[0]
    out = []
    for f, d in tb:
        if is_zero(f):
            out.append(Term(e1, c1 * d))
            out.extend(ta[1:])
        else:
            out.append(Term(_add(e1, f), d))
    return _build(out)


def mul(a, b) -> Ordinal:
    return _mul(coerce(a), coerce(b))


def _split_finite(b: Ordinal):
    """``b = limit_part + k`` with ``k`` finite; returns ``(limit_terms, k)``."""
    tb = _view(b)
    if tb and is_zero(tb[-1].exp):
        return tb[:-1], tb[-1].coef
    return tb, 0


def _pow_finite_exponent(a: Ordinal, k: int) -> Ordinal:
    result, base = ONE, a
    while k:
        if k & 1:
            result = _mul(result, base)
        k >>= 1
        if k:
            base = _mul(base, base)
    return result


@lru_cache(maxsize=1 << 16)
def _power(a: Ordinal, b: Ordinal) -> Ordinal:
    if is_zero(b):
        return ONE
    if is_zero(a):
        return ZERO
    if a == ONE:
        return ONE
    limit_terms, k = _split_finite(b)
    if is_finite(a):
        n = finite_value(a)
        if not limit_terms:
            return nat(n**k)
        # n^(w*beta) = w^beta
        beta = []
        for f, d in limit_terms:
            if is_finite(f):
                f = nat(finite_value(f) - 1)
            beta.append(Term(f, d))
        return omega_power(_build(beta), n**k)
    result = ONE
    if limit_terms:
        # a^b = w^(e1*b) for limit b, e1 the leading exponent of a
        result = omega_power(_mul(leading_exponent(a), _build(limit_terms)))
    if k:
        result = _mul(result, _pow_finite_exponent(a, k))
    return result


def power(a, b) -> Ordinal:
    """``a ** b``, with ``0 ** 0 == 1``."""
    return _power(coerce(a), coerce(b))


def left_subtract(a, b) -> Ordinal:
    """The unique ``c`` with ``a + c == b``; requires ``a <= b``."""
    a, b = coerce(a), coerce(b)
    if _compare(a, b) > 0:
        raise OrdinalDomainError(f"{a} exceeds {b}; no left difference")
    ta, tb = _view(a), _view(b)
    for i, (x, y) in enumerate(zip(ta, tb)):
        if x == y:
            continue
        if x.exp == y.exp:
            return _build((Term(y.exp, y.coef - x.coef),) + tuple(tb[i + 1 :]))
        return _build(tb[i:])
    return _build(tb[len(ta) :])


@lru_cache(maxsize=1 << 14)
def _divide(xi: Ordinal, alpha: Ordinal):
    if _compare(xi, alpha) < 0:
        return ZERO, xi
    a1, c1 = _view(alpha)[0]
    tx = _view(xi)
    q_terms = []
    i = 0
    while i < len(tx) and _compare(tx[i].exp, a1) > 0:
        q_terms.append(Term(left_subtract(a1, tx[i].exp), tx[i].coef))
        i += 1
    rest = _build(tx[i:])
    k = 0
    if i < len(tx) and tx[i].exp == a1:
        k = tx[i].coef // c1
        if k and _compare(_mul(alpha, nat(k)), rest) > 0:
            k -= 1
    if k:
        q_terms.append(Term(ZERO, k))
    return _build(q_terms), left_subtract(_mul(alpha, nat(k)), rest)


def divide(xi, alpha):
    """Left division: ``(q, r)`` with ``xi == alpha*q + r`` and ``r < alpha``."""
    xi, alpha = coerce(xi), coerce(alpha)
    if is_zero(alpha):
        raise OrdinalDomainError("division by zero")
    return _divide(xi, alpha)


# -- cardinals, initial ordinals, cofinality ------------------------------------


@dataclass(frozen=True)
class Finite:
    n: int

    @property
    def _key(self):
        return (0, self.n)

    def __str__(self):
        return str(self.n)


@dataclass(frozen=True)
class Aleph:
    index: Ordinal

    @property
    def _key(self):
        return (1, self.index)

    def __str__(self):
        if is_finite(self.index):
            return f"aleph_{finite_value(self.index)}"
        return f"aleph_[{self.index}]"


CardinalRank = Union[Finite, Aleph]


def _rank_lt(self, other):
    return self._key < other._key


def _rank_le(self, other):
    return self._key <= other._key


for _cls in (Finite, Aleph):
    _cls.__lt__ = _rank_lt
    _cls.__le__ = _rank_le
    _cls.__gt__ = lambda self, other: other._key < self._key
    _cls.__ge__ = lambda self, other: other._key <= self._key

ALEPH_0 = Aleph(ZERO)


def _largest_atom_index(x: Ordinal):
    if isinstance(x, Atom):
        # atoms inside the index are all smaller than x itself
        return x.index
    best = None
    for t in x.terms:
        idx = _largest_atom_index(t.exp)
        if idx is not None and (best is None or _compare(idx, best) > 0):
            best = idx
    return best


def cardinality(xi) -> CardinalRank:
    xi = coerce(xi)
    if is_finite(xi):
        return Finite(finite_value(xi))
    idx = _largest_atom_index(xi)
    return Aleph(ZERO if idx is None else idx)


def initial_ordinal(xi) -> Ordinal:
    """Least ordinal of the same cardinality; 1 for every finite ordinal (0 included)."""
    card = cardinality(xi)
    if isinstance(card, Finite):
        return ONE
    return aleph(card.index)


def cofinality(xi) -> Ordinal:
    xi = coerce(xi)
    if is_zero(xi):
        return ZERO
    if isinstance(xi, Atom):
        if is_successor(xi.index):
            return xi
        return cofinality(xi.index)
    last = xi.terms[-1].exp
    if is_zero(last):
        return ONE
    # cf(w^e): w when e is a successor, cf(e) when e is a limit
    if is_successor(last):
        return OMEGA
    return cofinality(last)


def is_regular(xi) -> bool:
    xi = coerce(xi)
    if is_finite(xi):
        raise OrdinalDomainError("regularity is defined here for infinite ordinals only")
    return xi == initial_ordinal(xi) and cofinality(xi) == xi


def gamma_min(xi) -> Ordinal:
    """Least ``g`` with ``g ** w > xi`` (needs ``xi >= w``).

    ``g ** w`` only depends on the leading exponent ``b`` of ``g`` and equals
    ``w^(b*w)``; so the answer is ``w^(w^e)`` where ``e`` is the leading
    exponent of the leading exponent of ``xi``.
    """
    xi = coerce(xi)
    if _compare(xi, OMEGA) < 0:
        raise OrdinalDomainError(f"gamma_min needs an infinite ordinal, got {xi}")
    e = leading_exponent(leading_exponent(xi))
    return omega_power(omega_power(e))


# -- expression trees ------------------------------------------------------------


@dataclass(frozen=True)
class Nat:
    value: int


@dataclass(frozen=True)
class Omega:
    pass


@dataclass(frozen=True)
class AlephExpr:
    index: "OrdinalExpr"


@dataclass(frozen=True)
class Add:
    left: "OrdinalExpr"
    right: "OrdinalExpr"


@dataclass(frozen=True)
class Mul:
    left: "OrdinalExpr"
    right: "OrdinalExpr"


@dataclass(frozen=True)
class Pow:
    base: "OrdinalExpr"
    exponent: "OrdinalExpr"


OrdinalExpr = Union[Nat, Omega, AlephExpr, Add, Mul, Pow]


def normalize(x) -> Ordinal:
    """Evaluate an expression tree (or pass through a normal form / int)."""
    if isinstance(x, (Ordinal, int)):
        return coerce(x)
    if isinstance(x, Nat):
        return nat(x.value)
    if isinstance(x, Omega):
        return OMEGA
    if isinstance(x, AlephExpr):
        return aleph(normalize(x.index))
    if isinstance(x, Add):
        return add(normalize(x.left), normalize(x.right))
    if isinstance(x, Mul):
        return mul(normalize(x.left), normalize(x.right))
    if isinstance(x, Pow):
        return power(normalize(x.base), normalize(x.exponent))
    raise TypeError(f"not an ordinal expression: {x!r}")


def ordinal(text: str) -> Ordinal:
    """Parse and normalize, e.g. ``ordinal("w_1*w + 5")``."""
    from .textio import parse_ordinal

    return normalize(parse_ordinal(text))
