"""Finite, numeric verification of the Rothaus-type identities.

Each claim has an instance checker (pure, on one triple) and a sweep that runs it over all
triples of a small domain or a seeded sample, returning a VerificationReport.
"""
import logging
import time
from functools import lru_cache
from typing import Callable, Dict, List, Optional

import numpy as np

from bent_toolkit.config import (
    COMPOSITION_MAX_VARIABLES,
    MAJORITY_EXHAUSTIVE_MAX_N,
    ROTHAUS_EXHAUSTIVE_MAX_N,
)
from bent_toolkit.errors import DimensionError, IntegrityError, RefusalError
from bent_toolkit.tools.boolean_function import (
    BooleanFunction,
    decompose_top2,
    direct_sum,
    hamming_weight,
    lift,
    majority,
    popcount_table,
    xor_all,
)
from bent_toolkit.tools.constructions import (
    BentTriple,
    HodzicVariant,
    RothausVariant,
    hodzic,
    random_affine_shift_triple,
    rothaus,
    seeded_generator,
)
from bent_toolkit.tools.spectral_tool import composition_spectrum, is_bent, wht_fast
from bent_toolkit.tools.sweep import SweepMode, VerificationReport, partition_ranges, run_partitions

logger = logging.getLogger(__name__)

ROTHAUS_NECESSITY = "rothaus-necessity"
MAJORITY_IDENTITY = "majority-identity"
FIRST_LEVEL = "first-level"
SECOND_LEVEL = "second-level"
HODZIC_LEVEL = "hodzic-level"

QUADRATIC_BLOCK = BooleanFunction(2, [0, 0, 0, 1])


@lru_cache(maxsize=None)
def rothaus_selector() -> BooleanFunction:
    """h(z) = z1z2 + z1z3 + z2z3 + z4z5 + (z1+z2)z4 + (z1+z3)z5, so f = h(A, B, C, x_{n+1}, x_{n+2})."""
    z1, z2, z3, z4, z5 = (BooleanFunction.variable(5, i) for i in range(1, 6))
    return majority(z1, z2, z3) ^ (z4 & z5) ^ ((z1 ^ z2) & z4) ^ ((z1 ^ z3) & z5)


@lru_cache(maxsize=None)
def majority_kernel() -> BooleanFunction:
    """h(z) = z1z2 + z1z3 + z2z3 + z1 + z2 + z3, zero exactly where the majority identity holds."""
    z1, z2, z3 = (BooleanFunction.variable(3, i) for i in range(1, 4))
    return majority(z1, z2, z3) ^ z1 ^ z2 ^ z3


def _inputs(*functions: BooleanFunction) -> List[str]:
    return [f.to_binary() if f.n < 3 else f.to_hex() for f in functions]


def _same_even_n(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> BentTriple:
    if not (a.n == b.n == c.n):
        raise DimensionError(f"Triple members disagree on variable count: {a.n}, {b.n}, {c.n}")
    return BentTriple(a, b, c)


# --- necessity of the Rothaus conditions ---

def quarter_spectrum_mismatches(t: BentTriple, f: BooleanFunction) -> List[str]:
    """Compare W_f quarter by quarter with 2W_A, 2W_B, 2W_C and -2W_{A+B+C}.

    Quarters are indexed by (u_{n+1}, u_{n+2}); (0,1) carries B and (1,0) carries C.
    A mismatch is reported with its quarter and sign, never normalised away.
    """
    quarters = wht_fast(f).values.astype(np.int64).reshape(4, 1 << t.n)
    expected = {
        (0, 0): 2 * wht_fast(t.a).values.astype(np.int64),
        (1, 0): 2 * wht_fast(t.c).values.astype(np.int64),
        (0, 1): 2 * wht_fast(t.b).values.astype(np.int64),
        (1, 1): -2 * wht_fast(t.triple_sum).values.astype(np.int64),
    }
    problems = []
    for (a, b), values in expected.items():
        got = quarters[a + 2 * b]
        if not np.array_equal(got, values):
            hint = "sign flipped" if np.array_equal(got, -values) else "values differ"
            problems.append(f"quarter-spectrum ({a},{b}): {hint}")
    return problems


def rothaus_composition_check(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> bool:
    """W_f through the composition formula with h = rothaus_selector equals the direct transform."""
    t = _same_even_n(a, b, c)
    m = t.n + 2
    if m > COMPOSITION_MAX_VARIABLES:
        raise DimensionError(f"Composition route is limited to {COMPOSITION_MAX_VARIABLES} variables")
    inner = [lift(t.a, 2), lift(t.b, 2), lift(t.c, 2),
             BooleanFunction.variable(m, t.n + 1), BooleanFunction.variable(m, t.n + 2)]
    return composition_spectrum(rothaus_selector(), inner) == wht_fast(rothaus(t, RothausVariant.F))


def check_rothaus_necessity_instance(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> bool:
    """True when [f bent] agrees with [A, B, C and A+B+C all bent] for this triple."""
    t = _same_even_n(a, b, c)
    return is_bent(rothaus(t, RothausVariant.F)) == t.satisfies_quadruple()


def _rothaus_outcome(t: BentTriple, report: VerificationReport) -> None:
    f = rothaus(t, RothausVariant.F)
    f_bent = is_bent(f)
    quadruple = t.satisfies_quadruple()
    if f_bent:
        report.satisfying_count += 1
    if f_bent != quadruple:
        report.add_counterexample(_inputs(t.a, t.b, t.c), f"f bent={f_bent} but conditions={t.failing_conditions() or 'all bent'}")
    for problem in quarter_spectrum_mismatches(t, f):
        report.add_counterexample(_inputs(t.a, t.b, t.c), problem)
    report.count("quarter_spectrum_checked")
    if f_bent:
        report.count("quarter_spectrum_bent_instances")
    if t.n + 2 <= COMPOSITION_MAX_VARIABLES:
        if not rothaus_composition_check(t.a, t.b, t.c):
            report.add_counterexample(_inputs(t.a, t.b, t.c), "composition formula disagrees with direct transform")
        report.count("composition_checked")


# --- first and second level of the Rothaus-only iteration ---

def first_level_sum(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> BooleanFunction:
    """f + f' + f'', checked against (AB + AC + BC) + x_{n+1}x_{n+2}."""
    t = _same_even_n(a, b, c)
    total = xor_all([rothaus(t, v) for v in RothausVariant])
    expected = direct_sum(majority(t.a, t.b, t.c), QUADRATIC_BLOCK)
    if total != expected:
        raise IntegrityError("f + f' + f'' differs from (AB + AC + BC) + x_{n+1}x_{n+2}")
    return total


def _first_level_outcome(t: BentTriple, report: VerificationReport) -> None:
    try:
        total = first_level_sum(t.a, t.b, t.c)
    except IntegrityError as e:
        report.add_counterexample(_inputs(t.a, t.b, t.c), str(e))
        return
    total_bent = is_bent(total)
    if total_bent:
        report.satisfying_count += 1
    if total_bent != is_bent(majority(t.a, t.b, t.c)):
        report.add_counterexample(_inputs(t.a, t.b, t.c), "bentness of the sum differs from bentness of AB + AC + BC")


class SecondLevelResult:
    """Structure of E = ff' + ff'' + f'f'' for one triple."""

    def __init__(self, decomposition_ok: bool, is_bent: bool, equals_condition: bool, d_bent: bool):
        self.decomposition_ok = decomposition_ok
        self.is_bent = is_bent
        self.equals_condition = equals_condition
        self.d_bent = d_bent

    @property
    def consistent(self) -> bool:
        # bent(E) <=> (D = A+B+C and D bent)
        return self.is_bent == (self.equals_condition and self.d_bent)

    def to_dict(self) -> Dict[str, bool]:
        return {
            "decomposition_ok": self.decomposition_ok,
            "is_bent": self.is_bent,
            "equals_condition": self.equals_condition,
            "d_bent": self.d_bent,
            "consistent": self.consistent
        }


def second_level_obstruction(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> SecondLevelResult:
    t = _same_even_n(a, b, c)
    f, f1, f2 = (rothaus(t, v) for v in RothausVariant)
    e = majority(f, f1, f2)
    d = majority(t.a, t.b, t.c)
    s = t.triple_sum
    # (f00, f10, f01, f11) must read (D, S, S, S + 1)
    blocks = decompose_top2(e)
    if blocks != (d, s, s, ~s):
        raise IntegrityError("ff' + ff'' + f'f'' does not split into (D, A+B+C, A+B+C, A+B+C+1)")
    return SecondLevelResult(True, is_bent(e), d == s, is_bent(d))


def _second_level_outcome(t: BentTriple, report: VerificationReport) -> None:
    try:
        result = second_level_obstruction(t.a, t.b, t.c)
    except IntegrityError as e:
        report.add_counterexample(_inputs(t.a, t.b, t.c), str(e))
        return
    if result.is_bent:
        report.satisfying_count += 1
    if result.equals_condition:
        report.count("equals_condition")
    if not result.consistent:
        report.add_counterexample(_inputs(t.a, t.b, t.c), f"bent(E)={result.is_bent} but D = A+B+C is {result.equals_condition}, D bent is {result.d_bent}")


# --- the majority identity AB + AC + BC = A + B + C ---

def check_majority_identity_instance(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> bool:
    """True when [AB + AC + BC = A + B + C] agrees with [A = B = C], by both routes.

    The second route reads the identity as h(A, B, C) = 0 and tests
    wt(A+B) + wt(A+C) + wt(B+C) = 0 instead of comparing tables.
    """
    if not (a.n == b.n == c.n):
        raise DimensionError(f"Triple members disagree on variable count: {a.n}, {b.n}, {c.n}")
    identity = majority(a, b, c) == (a ^ b ^ c)
    diagonal = a == b == c
    kernel_zero = hamming_weight(majority(a, b, c) ^ a ^ b ^ c) == 0
    weights_zero = hamming_weight(a ^ b) + hamming_weight(a ^ c) + hamming_weight(b ^ c) == 0
    return identity == diagonal and kernel_zero == identity and weights_zero == diagonal


def majority_spectral_route(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> bool:
    """W_h(A,B,C)(u) = (-W_0(u) + W_{A+B}(u) + W_{A+C}(u) + W_{B+C}(u)) / 2 at every u."""
    if not (a.n == b.n == c.n):
        raise DimensionError(f"Triple members disagree on variable count: {a.n}, {b.n}, {c.n}")
    direct = wht_fast(majority(a, b, c) ^ a ^ b ^ c).values.astype(np.int64)
    zero = wht_fast(BooleanFunction.zero(a.n)).values.astype(np.int64)
    pairs = sum(wht_fast(x ^ y).values.astype(np.int64) for x, y in ((a, b), (a, c), (b, c)))
    halves = pairs - zero
    if np.any(halves % 2):
        raise IntegrityError("Pair spectra sum is odd")
    via_formula = composition_spectrum(majority_kernel(), [a, b, c]).values.astype(np.int64)
    return bool(np.array_equal(direct, halves // 2) and np.array_equal(direct, via_formula))


def _majority_partition(n: int, start: int, end: int) -> VerificationReport:
    """Exhaustive slice over A in [start, end) with tables coded as integers."""
    report = VerificationReport(MAJORITY_IDENTITY, n, SweepMode.exhaustive())
    size = 1 << n
    count = 1 << size
    pc = popcount_table(size)
    others = np.arange(count * count, dtype=np.int64)
    b, c = np.divmod(others, count)
    pc_bc = pc[b ^ c]
    for a in range(start, end):
        identity = ((a & b) ^ (a & c) ^ (b & c)) == (a ^ b ^ c)
        diagonal = (b == a) & (c == a)
        weights = pc[a ^ b] + pc[a ^ c] + pc_bc
        bad = (identity != diagonal) | ((weights == 0) != diagonal)
        report.cases_checked += int(others.size)
        report.satisfying_count += int(identity.sum())
        offending = np.flatnonzero(bad)
        for idx in offending[:4]:
            triple = [BooleanFunction.from_int(n, int(v)) for v in (a, b[idx], c[idx])]
            report.add_counterexample(_inputs(*triple), "identity and A = B = C disagree")
        report.counterexample_total += max(0, offending.size - 4)
        for idx in np.flatnonzero(identity):
            fa, fb, fc = (BooleanFunction.from_int(n, int(v)) for v in (a, b[idx], c[idx]))
            at_zero = sum(wht_fast(x ^ y).at(0) for x, y in ((fa, fb), (fa, fc), (fb, fc)))
            report.count("spectral_route_checked")
            if at_zero != 3 * size or not majority_spectral_route(fa, fb, fc):
                report.add_counterexample(_inputs(fa, fb, fc), f"pair spectra at 0 sum to {at_zero}, expected {3 * size}")
    return report


def verify_majority_identity(n: int, mode: SweepMode, jobs: int = 1) -> VerificationReport:
    if n < 1:
        raise DimensionError(f"n must be positive, got {n}")
    started = time.perf_counter()
    report = VerificationReport(MAJORITY_IDENTITY, n, mode)
    if mode.is_exhaustive:
        if n > MAJORITY_EXHAUSTIVE_MAX_N:
            cost = 1 << (3 << n)
            raise RefusalError(f"Exhaustive sweep at n={n} would check 2^{3 << n} = {cost} triples", cost)
        tasks = [(n, lo, hi) for lo, hi in partition_ranges(1 << (1 << n), max(1, jobs) * 32)]
        logger.info("Majority identity, n=%d: %d partitions over %d jobs", n, len(tasks), jobs)
        for part in run_partitions(_majority_partition, tasks, jobs, MAJORITY_IDENTITY):
            report.merge(part)
        expected = 1 << (1 << n)
        if report.satisfying_count != expected:
            report.add_counterexample([str(report.satisfying_count)], f"satisfying count is not 2^(2^n) = {expected}")
    else:
        rng = seeded_generator(mode.seed)
        for _ in range(mode.count):
            a, b, c = (BooleanFunction.random(n, rng) for _ in range(3))
            # every other sample sits on the diagonal so both sides of the equivalence get exercised
            if report.cases_checked % 2:
                b, c = a, a
            report.cases_checked += 1
            if majority(a, b, c) == (a ^ b ^ c):
                report.satisfying_count += 1
            if not check_majority_identity_instance(a, b, c):
                report.add_counterexample(_inputs(a, b, c), "identity and A = B = C disagree")
            if n <= COMPOSITION_MAX_VARIABLES:
                report.count("spectral_route_checked")
                if not majority_spectral_route(a, b, c):
                    report.add_counterexample(_inputs(a, b, c), "spectral route disagrees")
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info("%s n=%d: %s", MAJORITY_IDENTITY, n, "holds" if report.success else "FAILED")
    return report


# --- the Hodzic level ---

class HodzicLevelResult:
    """g + g' + g'' for one triple, split as (A+B+C)(x) + Q(x_{n+1}, ..., x_{n+4})."""

    def __init__(self, total: BooleanFunction, q: BooleanFunction, triple_sum_bent: bool, is_bent_given_quadruple: bool):
        self.sum = total
        self.q = q
        self.triple_sum_bent = triple_sum_bent
        self.is_bent_given_quadruple = is_bent_given_quadruple


def hodzic_level_sum(a: BooleanFunction, b: BooleanFunction, c: BooleanFunction) -> HodzicLevelResult:
    t = _same_even_n(a, b, c)
    total = xor_all([hodzic(t, v) for v in HodzicVariant])
    s = t.triple_sum
    # restriction to x = 0 is Q shifted by the constant S(0)
    q = BooleanFunction(4, total.table[::1 << t.n] ^ s.table[0])
    if total != direct_sum(s, q):
        raise IntegrityError("g + g' + g'' is not a direct sum of A+B+C and a 4-variable function")
    if not is_bent(q):
        raise IntegrityError(f"Extracted Q = {q.to_binary()} is not bent")
    s_bent = t.flag("A+B+C")
    total_bent = is_bent(total)
    if s_bent and not total_bent:
        raise IntegrityError("A+B+C is bent but g + g' + g'' is not")
    return HodzicLevelResult(total, q, s_bent, total_bent)


def _hodzic_level_outcome(t: BentTriple, report: VerificationReport) -> None:
    try:
        result = hodzic_level_sum(t.a, t.b, t.c)
    except IntegrityError as e:
        report.add_counterexample(_inputs(t.a, t.b, t.c), str(e))
        return
    q = result.q.to_binary()
    seen = report.details.setdefault("q", q)
    if seen != q:
        report.add_counterexample(_inputs(t.a, t.b, t.c), f"Q = {q} differs from {seen}")
    if result.is_bent_given_quadruple:
        report.satisfying_count += 1


# --- generic triple sweeps ---

_OUTCOMES: Dict[str, Callable[[BentTriple, VerificationReport], None]] = {
    ROTHAUS_NECESSITY: _rothaus_outcome,
    FIRST_LEVEL: _first_level_outcome,
    SECOND_LEVEL: _second_level_outcome,
    HODZIC_LEVEL: _hodzic_level_outcome,
}


def _triple_at(n: int, index: int) -> BentTriple:
    count = 1 << (1 << n)
    rest, a = divmod(index, count)
    c, b = divmod(rest, count)
    return BentTriple(*(BooleanFunction.from_int(n, v) for v in (a, b, c)))


def _triple_partition(claim: str, n: int, start: int, end: int) -> VerificationReport:
    report = VerificationReport(claim, n, SweepMode.exhaustive())
    outcome = _OUTCOMES[claim]
    for index in range(start, end):
        outcome(_triple_at(n, index), report)
        report.cases_checked += 1
    return report


def _sweep_triples(claim: str, n: int, mode: SweepMode, jobs: int,
                   sampler: Optional[Callable[[np.random.Generator], BentTriple]] = None) -> VerificationReport:
    if n < 2 or n % 2:
        raise DimensionError(f"{claim} needs an even n >= 2, got {n}")
    started = time.perf_counter()
    report = VerificationReport(claim, n, mode)
    if mode.is_exhaustive:
        if n > ROTHAUS_EXHAUSTIVE_MAX_N:
            exponent = 3 << n
            raise RefusalError(f"Exhaustive sweep at n={n} would check 2^{exponent} = {1 << exponent} triples", 1 << exponent)
        total = 1 << (3 << n)
        tasks = [(claim, n, lo, hi) for lo, hi in partition_ranges(total, max(1, jobs) * 8)]
        logger.info("%s, n=%d: %d triples in %d partitions", claim, n, total, len(tasks))
        for part in run_partitions(_triple_partition, tasks, jobs, claim):
            report.merge(part)
    else:
        rng = seeded_generator(mode.seed)
        outcome = _OUTCOMES[claim]
        for _ in range(mode.count):
            if sampler is not None:
                t = sampler(rng)
            else:
                t = BentTriple(*(BooleanFunction.random(n, rng) for _ in range(3)))
            outcome(t, report)
            report.cases_checked += 1
    report.elapsed_ms = (time.perf_counter() - started) * 1000
    logger.info("%s n=%d: %s", claim, n, "holds" if report.success else "FAILED")
    return report


def verify_rothaus_necessity(n: int, mode: SweepMode, jobs: int = 1) -> VerificationReport:
    """f bent <=> A, B, C, A+B+C bent, with the quarter-spectrum identity checked on every instance."""
    return _sweep_triples(ROTHAUS_NECESSITY, n, mode, jobs)


def verify_first_level(n: int, mode: SweepMode, jobs: int = 1) -> VerificationReport:
    return _sweep_triples(FIRST_LEVEL, n, mode, jobs)


def verify_second_level(n: int, mode: SweepMode, jobs: int = 1) -> VerificationReport:
    return _sweep_triples(SECOND_LEVEL, n, mode, jobs)


def verify_hodzic_level(n: int, mode: SweepMode, jobs: int = 1) -> VerificationReport:
    """Sampled mode draws affine-shift triples so the bent side is exercised."""
    return _sweep_triples(HODZIC_LEVEL, n, mode, jobs, sampler=lambda rng: random_affine_shift_triple(n, rng))


VERIFIERS: Dict[str, Callable[[int, SweepMode, int], VerificationReport]] = {
    ROTHAUS_NECESSITY: verify_rothaus_necessity,
    MAJORITY_IDENTITY: verify_majority_identity,
    FIRST_LEVEL: verify_first_level,
    SECOND_LEVEL: verify_second_level,
    HODZIC_LEVEL: verify_hodzic_level,
}
