"""Naive reference ordinals, grid enumeration and differential checks.

A naive ordinal is a hereditary base-w tree: a plain tuple of
``(exponent, coefficient)`` parts read as their left-to-right ordinal sum.
Inputs need not be normalized; :func:`naive_nf` recovers the Cantor normal
form by absorption.  The arithmetic follows the textbook recursive definitions
and shares no code with :mod:`ordclass.ordinals`; the only bridge is
structural conversion (:func:`to_naive`, :func:`from_naive`).
"""

from __future__ import annotations

import gc
import json
from dataclasses import dataclass, field
from functools import cmp_to_key, lru_cache
from itertools import combinations, product
from typing import List, Tuple

from . import ordinals as core
from .ordinals import Atom, Ordinal, Sum


class OracleLimitError(RuntimeError):
    """Input falls outside the fragment the oracle is willing to handle."""


# Repeated multiplication in naive_pow is capped at this many factors.
MAX_FINITE_EXPONENT = 512


# A naive ordinal is a tuple of ``(exponent, coefficient)`` parts whose value is
# the left-to-right ordinal sum; exponents are naive ordinals themselves.
NaiveOrdinal = Tuple[Tuple["NaiveOrdinal", int], ...]

N_ZERO: NaiveOrdinal = ()
N_ONE: NaiveOrdinal = ((N_ZERO, 1),)


def naive_nat(n: int) -> NaiveOrdinal:
    return ((N_ZERO, n),) if n else N_ZERO


def _nf(parts) -> NaiveOrdinal:
    """Absorb parts whose exponents are already in normal form.

    Each part swallows the smaller parts before it.  In normal form Python's
    tuple order is the ordinal order: larger leading exponent wins, then larger
    coefficient, and a proper prefix is smaller.
    """
    out = []
    for e, c in parts:
        if c == 0:
            continue
        while out and out[-1][0] < e:
            out.pop()
        if out and out[-1][0] == e:
            out[-1] = (e, out[-1][1] + c)
        else:
            out.append((e, c))
    return tuple(out)


def naive_nf(x: NaiveOrdinal) -> NaiveOrdinal:
    """Cantor normal form of an arbitrary naive ordinal."""
    return _nf([(naive_nf(e), c) for e, c in x])


def naive_compare(a: NaiveOrdinal, b: NaiveOrdinal) -> int:
    ka, kb = naive_nf(a), naive_nf(b)
    return (ka > kb) - (ka < kb)


def _finite(x: NaiveOrdinal):
    """The integer value of normal-form x, or None when x is infinite."""
    if not x:
        return 0
    return x[0][1] if len(x) == 1 and x[0][0] == N_ZERO else None


# The underscored operations take and return normal forms.


def _add(a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    # order types concatenate
    return _nf(a + b)


@lru_cache(maxsize=1 << 16)
def _mul(a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    if not a or not b:
        return N_ZERO
    lead = a[0][0]
    parts = []
    for f, d in b:
        if f == N_ZERO:
            # a*d = a + a + ... + a
            if d > MAX_FINITE_EXPONENT:
                raise OracleLimitError(f"finite multiplier {d} too large")
            parts.extend(a * d)
        else:
            # a * w^f = w^(lead + f) for f > 0
            parts.append((_add(lead, f), d))
    return _nf(parts)


def _omega_to(e: NaiveOrdinal) -> NaiveOrdinal:
    return ((e, 1),)


def _pow(a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    if not b:
        return N_ONE
    if not a:
        return N_ZERO
    n = _finite(a)
    if n == 1:
        return N_ONE
    result = N_ONE
    # a^(b1 + b2 + ...) = a^b1 * a^b2 * ...
    for f, d in b:
        if d > MAX_FINITE_EXPONENT:
            raise OracleLimitError(f"exponent coefficient {d} too large")
        if f == N_ZERO:
            factor = a
        elif n is not None:
            # n^(w^m) = w^(w^(m-1)) for finite m >= 1, n^(w^f) = w^(w^f) for infinite f
            m = _finite(f)
            inner = naive_nat(m - 1) if m is not None else f
            factor = _omega_to(_omega_to(inner))
        else:
            # a^(w^f) = w^(lead(a) * w^f) for infinite a
            factor = _omega_to(_mul(a[0][0], _omega_to(f)))
        for _ in range(d):
            result = factor if result == N_ONE else _mul(result, factor)
    return result


def naive_add(a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    return _add(naive_nf(a), naive_nf(b))


def naive_mul(a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    return _mul(naive_nf(a), naive_nf(b))


def naive_pow(a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    return _pow(naive_nf(a), naive_nf(b))


def naive_arith(op: str, a: NaiveOrdinal, b: NaiveOrdinal) -> NaiveOrdinal:
    try:
        fn = {"add": naive_add, "mul": naive_mul, "pow": naive_pow}[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(a, b)


@lru_cache(maxsize=1 << 16)
def to_naive(x: Ordinal) -> NaiveOrdinal:
    if isinstance(x, Atom):
        raise OracleLimitError("the oracle covers countable ordinals only")
    return tuple((to_naive(e), c) for e, c in x.terms)


def from_naive(x: NaiveOrdinal) -> Ordinal:
    return Sum([(from_naive(e), c) for e, c in naive_nf(x)])


# -- grids -------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """All normal forms of bounded shape.

    Level ``d`` holds sums of at most ``max_terms`` terms with coefficients
    ``<= max_coef`` and exponents drawn from level ``d-1`` together with 1 and
    the atoms.  Below the top level, ``exponent_terms`` (when nonzero) replaces
    the term bound and ``exponent_coef[d-1]`` (when present) the coefficient
    bound of level ``d``.  Level 0 is ``{0}``.
    """

    depth: int = 0
    max_coef: int = 1
    max_terms: int = 2
    exponent_terms: int = 0  # 0: same as max_terms
    exponent_coef: Tuple[int, ...] = ()  # innermost level first
    atoms: Tuple[Ordinal, ...] = ()
    name: str = "custom"


_by_value = cmp_to_key(core.compare)


def _sums(pool, max_terms: int, max_coef: int):
    pool = sorted(pool, key=_by_value, reverse=True)
    out = {core.ZERO}
    for k in range(1, max_terms + 1):
        for exps in combinations(pool, k):
            for coefs in product(range(1, max_coef + 1), repeat=k):
                out.add(core.from_terms(zip(exps, coefs)))
    return out


def enumerate_grid(spec: GridSpec) -> List[Ordinal]:
    """Deterministic, duplicate-free, sorted by value."""
    level = {core.ZERO}
    inner_terms = spec.exponent_terms or spec.max_terms
    for d in range(1, spec.depth + 1):
        pool = level | {core.ONE} | set(spec.atoms)
        if d == spec.depth:
            terms, coef = spec.max_terms, spec.max_coef
        else:
            terms = inner_terms
            coef = spec.exponent_coef[d - 1] if d <= len(spec.exponent_coef) else spec.max_coef
        level = _sums(pool, terms, coef)
    return sorted(level, key=_by_value)


_W1, _W2, _WW = core.aleph(1), core.aleph(2), core.aleph(core.OMEGA)

GRIDS = {
    "small-v1": GridSpec(depth=2, max_coef=2, max_terms=2, exponent_terms=1, name="small-v1"),
    "countable-v1": GridSpec(
        depth=3, max_coef=3, max_terms=2, exponent_terms=1, exponent_coef=(2, 3), name="countable-v1"
    ),
    "k-countable-v1": GridSpec(
        depth=2, max_coef=2, max_terms=3, exponent_terms=1, exponent_coef=(1,), name="k-countable-v1"
    ),
    "atoms-v1": GridSpec(
        depth=2, max_coef=2, max_terms=2, exponent_terms=1, atoms=(_W1, _W2, _WW), name="atoms-v1"
    ),
}


def named_grid(name: str) -> List[Ordinal]:
    try:
        return enumerate_grid(GRIDS[name])
    except KeyError:
        raise KeyError(f"unknown grid {name!r}; known: {', '.join(sorted(GRIDS))}") from None


# -- differential checks ------------------------------------------------------------


@dataclass
class Report:
    suite: str
    grid: str
    checked: int = 0
    mismatches: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_text(self) -> str:
        status = "ok" if self.ok else "FAIL"
        lines = [f"{self.suite} on {self.grid}: {self.checked} checks, {len(self.mismatches)} mismatches [{status}]"]
        for m in sorted(self.mismatches, key=lambda m: json.dumps(m, sort_keys=True)):
            lines.append("  " + ", ".join(f"{k}={v}" for k, v in sorted(m.items())))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "grid": self.grid,
            "checked": self.checked,
            "mismatches": sorted(self.mismatches, key=lambda m: json.dumps(m, sort_keys=True)),
            "ok": self.ok,
        }


# Grid values are already Ordinals and their naive images are already in
# normal form, so both sides are called through their unchecked entry points.
# Top-level calls bypass the memo tables: every pair is new, and filling the
# tables would only evict the inner results that do get reused.
def _uncached(fn):
    return getattr(fn, "__wrapped__", fn)


_OPS = (
    ("add", _uncached(core._add), _add),
    ("mul", _uncached(core._mul), _uncached(_mul)),
    ("pow", _uncached(core._power), _pow),
)


def _check_arith(grid, report: Report):
    pairs = list(zip(grid, [naive_nf(to_naive(x)) for x in grid]))
    image = _uncached(to_naive)
    for op, fn, naive_fn in _OPS:
        bad = report.mismatches
        for a, na in pairs:
            for b, nb in pairs:
                got = fn(a, b)
                want = naive_fn(na, nb)
                if want != image(got):
                    bad.append(
                        {"op": op, "a": str(a), "b": str(b), "core": str(got), "oracle": str(from_naive(want))}
                    )
        report.checked += len(pairs) ** 2


def _check_gamma_min(grid, report: Report):
    for xi in grid:
        if core.compare(xi, core.OMEGA) < 0:
            continue
        g = core.gamma_min(xi)
        report.checked += 1
        if core.compare(core.power(g, core.OMEGA), xi) <= 0:
            report.mismatches.append({"xi": str(xi), "gamma_min": str(g), "failure": "g^w <= xi"})
        for gamma in grid:
            if core.compare(gamma, g) >= 0:
                break
            report.checked += 1
            if core.compare(core.power(gamma, core.OMEGA), xi) > 0:
                report.mismatches.append(
                    {"xi": str(xi), "gamma_min": str(g), "smaller_witness": str(gamma)}
                )


def _check_division(grid, report: Report):
    for xi in grid:
        for alpha in grid:
            if alpha == core.ZERO:
                continue
            report.checked += 1
            q, r = core.divide(xi, alpha)
            if core.add(core.mul(alpha, q), r) != xi or core.compare(r, alpha) >= 0:
                report.mismatches.append({"xi": str(xi), "alpha": str(alpha), "q": str(q), "r": str(r)})


SUITES = {"arith": _check_arith, "gamma_min": _check_gamma_min, "division": _check_division}


def differential_check(suite: str, grid) -> Report:
    """Run one suite over a grid (a name from :data:`GRIDS`, a GridSpec, or a list)."""
    if isinstance(grid, str):
        name, values = grid, named_grid(grid)
    elif isinstance(grid, GridSpec):
        name, values = grid.name, enumerate_grid(grid)
    else:
        name, values = "explicit", list(grid)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; known: {', '.join(SUITES)}")
    report = Report(suite, name)
    # Suites allocate millions of short-lived acyclic objects; cyclic GC passes
    # over the large memo tables only cost time.
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        SUITES[suite](values, report)
    finally:
        if was_enabled:
            gc.enable()
    return report
