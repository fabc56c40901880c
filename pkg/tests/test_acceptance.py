"""Acceptance criteria, one test each.

Run with ``pytest tests/test_acceptance.py -s`` to see the PASS/FAIL lines.
"""

import random
import time
from functools import lru_cache
from itertools import product
from pathlib import Path

from ordclass import oracle
from ordclass.classifier import (
    AxiomContext,
    NoRVMBelow,
    Outcome,
    iso_K,
    iso_K_abstract,
    iso_scalar,
    psi,
)
from ordclass.ordinals import (
    OMEGA,
    ONE,
    ZERO,
    add,
    aleph,
    cardinality,
    compare,
    divide,
    gamma_min,
    initial_ordinal,
    is_finite,
    is_zero,
    mul,
    nat,
    normalize,
    ordinal,
    power,
)
from ordclass.textio import parse_ordinal, print_normal
from strategies import random_ordinal
from test_cli import GOLDEN, GOLDEN_DIR, transcript

SEED = 20240611
REPAIRED = AxiomContext()
LITERAL = AxiomContext(psi_mode="literal")


def verdict_line(number, title, ok, detail, started):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} ({detail}; {time.perf_counter() - started:.1f}s)"
    print("\n" + line)
    assert ok, line


def depth(x):
    return 0 if is_finite(x) else 1 + max(depth(e) for e, _ in x.terms)


def coefficients(x):
    return [c for _, c in x.terms] + [c for e, _ in x.terms for c in coefficients(e)]


def test_1_arithmetic_differential():
    started = time.perf_counter()
    grid = oracle.named_grid("countable-v1")
    shape_ok = (
        len(grid) >= 1000
        and max(depth(x) for x in grid) <= 3
        and max(max(coefficients(x), default=0) for x in grid) <= 3
    )
    report = oracle.differential_check("arith", grid)
    verdict_line(
        1,
        "add/mul/pow agree with the naive oracle",
        shape_ok and report.ok,
        f"{len(grid)} ordinals, {report.checked} checks, {len(report.mismatches)} mismatches",
        started,
    )


def test_2_algebraic_laws():
    started = time.perf_counter()
    rng = random.Random(SEED)
    triples = 10_000
    violations = []
    for _ in range(triples):
        a, b, c = (random_ordinal(rng, 4) for _ in range(3))
        laws = {
            "add-assoc": add(add(a, b), c) == add(a, add(b, c)),
            "mul-assoc": mul(mul(a, b), c) == mul(a, mul(b, c)),
            "left-distrib": mul(a, add(b, c)) == add(mul(a, b), mul(a, c)),
            "pow-sum": power(a, add(b, c)) == mul(power(a, b), power(a, c)),
            "pow-pow": power(power(a, b), c) == power(a, mul(b, c)),
        }
        if not is_zero(a):
            q, r = divide(b, a)
            laws["division"] = add(mul(a, q), r) == b and compare(r, a) < 0
        violations += [(name, a, b, c) for name, ok in laws.items() if not ok]
    verdict_line(
        2,
        "algebraic laws on seeded triples",
        not violations,
        f"{triples} triples, seed {SEED}, {len(violations)} violations",
        started,
    )


def test_3_gamma_min_minimality():
    started = time.perf_counter()
    reports = [oracle.differential_check("gamma_min", name) for name in ("countable-v1", "atoms-v1")]
    verdict_line(
        3,
        "gamma_min is minimal with gamma^w > xi",
        all(r.ok for r in reports),
        ", ".join(f"{r.grid}: {r.checked} checks, {len(r.mismatches)} violations" for r in reports),
        started,
    )


def test_4_scalar_classification():
    started = time.perf_counter()
    grid = [x for x in oracle.named_grid("countable-v1") if not is_finite(x)]
    g = [gamma_min(x) for x in grid]
    bad = [
        (x, y)
        for (x, gx), (y, gy) in product(zip(grid, g), repeat=2)
        if iso_scalar(x, y).isomorphic != (gx == gy)
    ]
    reps = [power(OMEGA, power(OMEGA, nat(b))) for b in range(5)]
    reps_ok = all(
        iso_scalar(x, y).isomorphic == (i == j)
        for (i, x), (j, y) in product(enumerate(reps), repeat=2)
    )
    verdict_line(
        4,
        "iso_scalar matches gamma_min classes; five representatives distinct",
        not bad and reps_ok,
        f"{len(grid) ** 2} pairs, {len(bad)} disagreements",
        started,
    )


def k_grid():
    alphas = [OMEGA, aleph(1), aleph(2), aleph(OMEGA)]
    points = set()
    for alpha in alphas:
        for m in (ONE, nat(2), nat(3), OMEGA, add(OMEGA, ONE), alpha):
            for d in (ZERO, ONE, OMEGA):
                points.add(add(mul(alpha, m), d))
    lams = [ONE, nat(2), OMEGA, mul(OMEGA, 2), aleph(1)]
    xis = sorted(points, key=print_normal)
    return [(lam, xi) for lam in lams for xi in xis]


@lru_cache(maxsize=None)
def k_tables(assume_no_rvm: bool):
    """Verdicts of both routes on every ordered pair of the K-grid."""
    ctx = AxiomContext(assume_no_rvm=assume_no_rvm)
    pts = k_grid()
    canonical, abstract = {}, {}
    for i, (lam, xi) in enumerate(pts):
        for j, (mu, eta) in enumerate(pts):
            canonical[i, j] = iso_K(lam, xi, mu, eta, 2, 2, ctx)
            abstract[i, j] = iso_K_abstract(lam, xi, mu, eta, 2, 2, ctx)
    return pts, canonical, abstract


def test_5_k_classifier_coherence():
    started = time.perf_counter()
    pts, canonical, abstract = k_tables(True)
    n = len(pts)
    applicable = [
        key for key in canonical
        if Outcome.OUT_OF_SCOPE not in (canonical[key].outcome, abstract[key].outcome)
    ]
    disagree = [key for key in applicable if canonical[key].outcome != abstract[key].outcome]
    iso = {key for key, v in canonical.items() if v.isomorphic}
    reflexive = all((i, i) in iso for i in range(n))
    symmetric = all((j, i) in iso for i, j in iso)
    # S(a) = {b : a ~ b}; transitivity over all triples is S(b) subset of S(a) for b in S(a)
    classes = [0] * n
    for i, j in iso:
        classes[i] |= 1 << j
    transitive = all(
        classes[j] & ~classes[i] == 0
        for i in range(n)
        for j in range(n)
        if classes[i] >> j & 1
    )
    verdict_line(
        5,
        "iso_K agrees with iso_K_abstract and is an equivalence",
        not disagree and reflexive and symmetric and transitive and len(applicable) == n * n,
        f"{n} points, {len(applicable)} applicable pairs, {len(disagree)} disagreements, "
        f"reflexive={reflexive}, symmetric={symmetric}, transitive={transitive}",
        started,
    )


def test_6_cancellation_law():
    started = time.perf_counter()
    grid = [x for x in oracle.named_grid("k-countable-v1") if not is_finite(x)]
    scalar = {(x, y): iso_scalar(x, y).isomorphic for x, y in product(grid, repeat=2)}
    bad = 0
    for lam, mu in product(grid, repeat=2):
        for xi, eta in product(grid, repeat=2):
            if iso_K(lam, xi, mu, eta, 2, 2).isomorphic != scalar[xi, eta]:
                bad += 1
    verdict_line(
        6,
        "K-spaces over countable lambda cancel to C(xi) ~ C(eta)",
        bad == 0,
        f"{len(grid) ** 4} quadruples, {bad} violations",
        started,
    )


def test_7_card_invariants_and_idempotence():
    started = time.perf_counter()
    grid = [x for x in oracle.named_grid("atoms-v1") if not is_zero(x)]
    card_bad = idem_bad = 0
    for lam, xi in product(grid, repeat=2):
        value = psi(lam, xi)
        lam0 = initial_ordinal(lam)
        if not is_finite(lam) and not is_finite(xi):
            card_bad += cardinality(value) != cardinality(xi)
            card_bad += cardinality(lam0) != cardinality(lam)
        idem_bad += psi(lam0, value) != value
    verdict_line(
        7,
        "psi keeps cardinalities and is idempotent",
        card_bad == 0 and idem_bad == 0,
        f"{len(grid) ** 2} pairs, {card_bad} cardinality and {idem_bad} idempotence violations",
        started,
    )


def test_8_axiom_hygiene():
    started = time.perf_counter()
    _, can_on, abs_on = k_tables(True)
    _, can_off, abs_off = k_tables(False)
    tagged_iso = converted = wrong = 0
    for on, off in ((can_on, can_off), (abs_on, abs_off)):
        for key, v in on.items():
            w = off[key]
            tagged = any(isinstance(a, NoRVMBelow) for a in v.assumptions)
            if v.isomorphic and v.assumptions:
                tagged_iso += 1
            if tagged and v.outcome is Outcome.NOT_ISOMORPHIC:
                converted += 1
                wrong += w.outcome is not Outcome.UNDECIDED
            else:
                wrong += w.outcome is not v.outcome or w.assumptions != v.assumptions
    verdict_line(
        8,
        "no tagged Isomorphic; the flag turns exactly the tagged NotIsomorphic into Undecided",
        tagged_iso == 0 and wrong == 0,
        f"{2 * len(can_on)} verdicts, {converted} tagged, {tagged_iso} tagged Isomorphic, {wrong} unexpected changes",
        started,
    )


def test_9_literal_mode_regression():
    started = time.perf_counter()
    xi, eta = ordinal("w_1*(w+1)"), ordinal("w_1*w")
    got = {
        (ctx.psi_mode, route.__name__): route(1, xi, 1, eta, 2, 2, ctx).outcome
        for ctx in (LITERAL, REPAIRED)
        for route in (iso_K, iso_K_abstract)
    }
    expected = {
        ("literal", "iso_K"): Outcome.NOT_ISOMORPHIC,
        ("literal", "iso_K_abstract"): Outcome.ISOMORPHIC,
        ("repaired", "iso_K"): Outcome.ISOMORPHIC,
        ("repaired", "iso_K_abstract"): Outcome.ISOMORPHIC,
    }
    names = ("literal-canonical", "literal-abstract", "repaired-canonical", "repaired-abstract")
    golden_ok = all(
        (GOLDEN_DIR / f"{name}.txt").read_bytes() == transcript(GOLDEN[name]).encode("utf-8")
        for name in names
    )
    verdict_line(
        9,
        "literal psi splits the discrepancy pair, repaired psi joins it",
        got == expected and golden_ok,
        f"verdicts {'match' if got == expected else 'differ'}, golden transcripts {'match' if golden_ok else 'differ'}",
        started,
    )


def test_10_round_trip_and_golden_transcripts():
    started = time.perf_counter()
    checked = bad = 0
    for name in sorted(oracle.GRIDS):
        for x in oracle.named_grid(name):
            for unicode in (False, True):
                checked += 1
                bad += normalize(parse_ordinal(print_normal(x, unicode))) != x
    golden_bad = [
        name for name, argv in GOLDEN.items()
        if not (
            transcript(argv) == transcript(argv)
            and (GOLDEN_DIR / f"{name}.txt").read_bytes() == transcript(argv).encode("utf-8")
        )
    ]
    verdict_line(
        10,
        "parse/print round trip; golden CLI transcripts byte-identical",
        bad == 0 and not golden_bad,
        f"{checked} round trips, {bad} failures, {len(GOLDEN)} transcripts, {len(golden_bad)} differ",
        started,
    )


def test_golden_transcripts_include_the_cli_examples():
    for name in ("classify-cancellation", "psi-window", "classify-p-greater-than-q"):
        assert (GOLDEN_DIR / f"{name}.txt").exists()
