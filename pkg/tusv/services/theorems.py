"""
Identity, reduction and table checks, plus bounded universality scans.

Everything here is numeric: an identity holds on the checked range, a
reduction is an equivalence of attained sets on [0, N], and a scan reports
the least missed value of each form up to N, if any.
"""

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from tusv.core.generators import Generator, GeneratorKind, TernaryForm, display_form
from tusv.core.grammar import format_form, parse_form
from tusv.core.sieve import (
    ValueMask,
    constrained_form_mask,
    find_representation,
    form_mask,
    generator_mask,
    sumset_mask,
    term_table,
)
from tusv.schemas.catalog import DecompositionTableSpec, ParametricSpec, PairSetSpec
from tusv.services.cache import MaskCache
from tusv.services.catalog import conjecture_1_2_forms, load_catalog, theorem_1_4_forms
from tusv.services.classifier import FamilyKind, family_form
from tusv.services.pool import run_tasks
from tusv.services.verdicts import SuiteVerdict

logger = logging.getLogger(__name__)

CONJECTURES = ("remaining-1.1", "1.2")

# Lists whose union is the first conjecture before the proven sums are removed.
CONJECTURE_1_1_LISTS = ("1.1", "1.2", "1.3i", "1.3ii")


@dataclass(frozen=True)
class ShiftReduction:
    """
    target attains n  <=>  base attains n + floor with one of the given
    variables >= k.
    """

    name: str
    target: TernaryForm
    base: TernaryForm
    variables: tuple[int, ...]
    k: int
    floor: int


@dataclass(frozen=True)
class ScanEntry:
    form: str
    display: str
    first_witness: Optional[int]


@dataclass(frozen=True)
class ScanReport:
    which: str
    bound: int
    entries: tuple[ScanEntry, ...]

    @property
    def counterexamples(self) -> tuple[ScanEntry, ...]:
        return tuple(e for e in self.entries if e.first_witness is not None)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def _kernel(kind: str, index):
    """Square or triangular number at index (int or int64 array)."""
    if kind == "sq":
        return index * index
    return index * (index + 1) // 2


def _term_text(kind: str, coeff: int, index: int) -> str:
    lead = "" if coeff == 1 else str(coeff)
    return f"{lead}T_{index}" if kind == "tri" else f"{lead}{index}^2"


def _triangular_any(index):
    # T_n = n(n+1)/2 for every integer n, so T_{-1} = 0.
    return index * (index + 1) // 2


def euler_identity_check(bound: int, m: int) -> SuiteVerdict:
    """
    {x^2 + 2T_y} = {T_x + T_y} on [0, bound], and
    x^2 + y(y+1) = T_{x+y} + T_{x-y-1} for 0 <= x, y <= m.
    """
    if bound < 1 or m < 1:
        raise ValueError(f"bound and m must be >= 1, got {bound} and {m}")
    verdict = SuiteVerdict("euler")
    left = form_mask(parse_form("1*sq+2*tri"), bound)
    right = form_mask(parse_form("1*tri+1*tri"), bound)
    differ = np.flatnonzero(left.bits != right.bits)
    verdict.add(
        f"x^2+2T_y and T_x+T_y attain the same n <= {bound}",
        len(differ) == 0,
        "" if len(differ) == 0 else f"first difference at {int(differ[0])}",
    )
    x, y = np.meshgrid(np.arange(m + 1, dtype=np.int64), np.arange(m + 1, dtype=np.int64))
    lhs = x * x + y * (y + 1)
    rhs = _triangular_any(x + y) + _triangular_any(x - y - 1)
    bad = np.argwhere(lhs != rhs)
    detail = ""
    if len(bad):
        row, col = bad[0]
        detail = f"fails at (x, y) = ({int(x[row, col])}, {int(y[row, col])})"
    verdict.add(f"x^2+y(y+1) = T_(x+y) + T_(x-y-1) for x, y <= {m}", len(bad) == 0, detail)
    return verdict


def three_square_eligible(n: int) -> bool:
    """True iff n is not of the form 4^k(8l + 7)."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    while n and n % 4 == 0:
        n //= 4
    return n % 8 != 7


def gauss_legendre_check(bound: int) -> SuiteVerdict:
    """three_square_eligible agrees with the x^2+y^2+z^2 mask on [0, bound]."""
    verdict = SuiteVerdict("gauss-legendre")
    mask = form_mask(parse_form("1*sq+1*sq+1*sq"), bound)
    wrong = [n for n in range(bound + 1) if three_square_eligible(n) != (n in mask)]
    verdict.add(
        f"4^k(8l+7) test matches three squares for n <= {bound}",
        not wrong,
        "" if not wrong else f"disagrees at {wrong[:10]}",
    )
    return verdict


def constrained_representation(
    n: int, base: TernaryForm, variables: Sequence[int], k: int
) -> Optional[tuple[int, int, int]]:
    """An (x, y, z) attaining n in base with one of the given variables >= k, or None."""
    if n < 0 or k < 0:
        raise ValueError(f"n and k must be >= 0, got {n} and {k}")
    free = [term_table(g, n)[0] for g in base.terms]
    for index in variables:
        tables = list(free)
        tables[index] = term_table(base.terms[index], n, z_min=k)[0]
        triple = find_representation(base, n, tables)
        if triple is not None:
            return triple
    return None


def constrained_rep_check(n: int, base: TernaryForm, variables: Sequence[int], k: int) -> bool:
    return constrained_representation(n, base, variables, k) is not None


def load_reductions() -> list[ShiftReduction]:
    return [
        ShiftReduction(
            spec.name,
            parse_form(spec.target),
            parse_form(spec.base),
            tuple(spec.variables),
            spec.k,
            spec.floor,
        )
        for spec in load_catalog().reductions
    ]


def shift_reduction_equiv(red: ShiftReduction, bound: int) -> list[int]:
    """
    Every n <= bound where the target and the constrained base disagree.

    An empty list means the equivalence holds on [0, bound].
    """
    target = form_mask(red.target, bound)
    base = constrained_form_mask(red.base, bound + red.floor, red.variables, red.k)
    shifted = base.bits[red.floor :]
    return [int(n) for n in np.flatnonzero(target.bits != shifted)]


def reductions_check(bound: int) -> SuiteVerdict:
    verdict = SuiteVerdict("reductions")
    for red in load_reductions():
        broken = shift_reduction_equiv(red, bound)
        verdict.add(
            f"{red.name}: {display_form(red.target)} ~ {display_form(red.base)} "
            f"shifted by {red.floor}, k={red.k}",
            not broken,
            "" if not broken else f"breaks at {broken[:10]}",
        )
    return verdict


def decomposition_table_verify(table: DecompositionTableSpec, verdict: SuiteVerdict) -> None:
    """Re-evaluate each entry; misprinted targets are reported as findings."""
    for entry in table.entries:
        total = sum(coeff * _kernel(kind, index) for kind, coeff, index in entry.terms)
        rhs = " + ".join(_term_text(*term) for term in entry.terms)
        verdict.add(
            f"{table.name}: {entry.n} = {rhs}",
            total == entry.n,
            "" if total == entry.n else f"right side is {total}",
        )
        if entry.printed_n is not None and entry.printed_n != entry.n:
            message = (
                f"{table.name}: printed target {entry.printed_n} for {rhs} corrected to {total}"
            )
            logger.warning(message)
            verdict.findings.append(message)


def parametric_min_x(spec: ParametricSpec) -> int:
    """Least x >= 0 at which every index scale * x + shift is >= 0."""
    x_min = 0
    for _, _, scale, shift in spec.terms:
        if scale == 0:
            if shift < 0:
                raise ValueError(f"{spec.name}: constant index {shift} is negative")
            continue
        x_min = max(x_min, -(shift // scale))
    return x_min


def parametric_verify(spec: ParametricSpec, x_max: int) -> Optional[int]:
    """First x in [min index, x_max] where the identity fails, or None."""
    xs = np.arange(parametric_min_x(spec), x_max + 1, dtype=np.int64)
    kind, coeff = spec.lhs
    lhs = coeff * _kernel(kind, xs) + spec.r
    rhs = np.zeros_like(xs)
    for term_kind, term_coeff, scale, shift in spec.terms:
        rhs += term_coeff * _kernel(term_kind, scale * xs + shift)
    bad = np.flatnonzero(lhs != rhs)
    return int(xs[bad[0]]) if len(bad) else None


def pair_set_check(spec: PairSetSpec) -> bool:
    values = [int(_kernel(spec.kind, i)) for i in range(spec.max_index + 1)]
    sums = {u + v for u in values for v in values}
    expected = (set(range(spec.upto + 1)) | set(spec.extra)) - set(spec.excluded)
    return sums == expected


def tables_check(x_max: int) -> SuiteVerdict:
    """All decomposition tables, parametric identities and pair-set identities."""
    catalog = load_catalog()
    verdict = SuiteVerdict("tables")
    for table in catalog.tables:
        decomposition_table_verify(table, verdict)
    for spec in catalog.parametric:
        failure = parametric_verify(spec, x_max)
        verdict.add(
            f"{spec.name} identity for x in [{parametric_min_x(spec)}, {x_max}]",
            failure is None,
            "" if failure is None else f"fails at x = {failure}",
        )
    for spec in catalog.pair_sets:
        verdict.add(spec.name, pair_set_check(spec))
    return verdict


def _odd_squares(bound: int) -> ValueMask:
    # (2k+1)^2 = 8T_k + 1
    eight_t = generator_mask(Generator(GeneratorKind.triangular(), 8), bound)
    return ValueMask.from_values(eight_t.values() + 1, bound)


def s07_parity_scan(bound: int) -> list[int]:
    """
    Non-triangular n <= bound lacking a^2 + b^2 + T_c with a, b of opposite
    parity, or lacking one with a, b of equal parity.
    """
    if bound < 1:
        raise ValueError(f"bound must be >= 1, got {bound}")
    even = generator_mask(Generator(GeneratorKind.square(), 4), bound)
    odd = _odd_squares(bound)
    tri = generator_mask(Generator(GeneratorKind.triangular()), bound)
    mixed = sumset_mask(even, odd, bound)
    same = ValueMask(bound, sumset_mask(even, even, bound).bits | sumset_mask(odd, odd, bound).bits)
    split_odd = sumset_mask(mixed, tri, bound).bits
    split_even = sumset_mask(same, tri, bound).bits
    lacking = ~(split_odd & split_even) & ~tri.bits
    return [int(n) for n in np.flatnonzero(lacking)]


def s07_check(bound: int) -> SuiteVerdict:
    verdict = SuiteVerdict("s07")
    lacking = s07_parity_scan(bound)
    verdict.add(
        f"every non-triangular n <= {bound} has both parity splits of a^2+b^2+T_c",
        not lacking,
        "" if not lacking else f"lacking at {lacking[:10]}",
    )
    return verdict


def _scan_task(task: tuple[str, int, Optional[str]]) -> tuple[str, Optional[int]]:
    text, bound, cache_dir = task
    form = parse_form(text)
    if cache_dir is None:
        mask = form_mask(form, bound)
    else:
        mask, _ = MaskCache(Path(cache_dir)).get_or_build(form, bound)
    missing = np.flatnonzero(~mask.bits)
    return text, int(missing[0]) if len(missing) else None


def universality_scan(
    which: str,
    forms: Sequence[TernaryForm],
    bound: int,
    jobs: int = 1,
    cache: Optional[MaskCache] = None,
) -> ScanReport:
    """First witness up to bound of each form, in sorted canonical order."""
    texts = sorted({format_form(f) for f in forms})
    cache_dir = str(cache.cache_dir) if cache is not None and cache.is_available else None
    logger.info(f"Scanning {which}: {len(texts)} sums up to {bound}, jobs={jobs}")
    start = time.perf_counter()
    results = run_tasks(_scan_task, [(t, bound, cache_dir) for t in texts], jobs, chunksize=1)
    entries = tuple(
        ScanEntry(text, display_form(parse_form(text)), witness) for text, witness in results
    )
    report = ScanReport(which, bound, entries)
    for entry in report.counterexamples:
        logger.warning(f"{which}: {entry.display} misses {entry.first_witness}")
    logger.info(
        f"{which}: {len(report.counterexamples)} counterexamples in "
        f"{time.perf_counter() - start:.2f}s"
    )
    return report


def remaining_conjecture_1_1_forms() -> list[TernaryForm]:
    """Sums of the published lists not covered by the proven sums."""
    theorems = load_catalog().theorems
    proven = set(theorem_1_4_forms())
    forms = []
    for key in CONJECTURE_1_1_LISTS:
        entry = theorems[key]
        family = FamilyKind(entry.family)
        forms.extend(family_form(family, params) for params in entry.expected)
    return sorted(set(forms) - proven, key=format_form)


def thm14_scan(bound: int, jobs: int = 1, cache: Optional[MaskCache] = None) -> ScanReport:
    return universality_scan("1.4", theorem_1_4_forms(), bound, jobs, cache)


def conjecture_scan(
    which: str, bound: int, jobs: int = 1, cache: Optional[MaskCache] = None
) -> ScanReport:
    """Bounded scan of a conjecture's sums; a counterexample is a finding."""
    if which == "remaining-1.1":
        forms = remaining_conjecture_1_1_forms()
    elif which == "1.2":
        forms = conjecture_1_2_forms()
    else:
        raise ValueError(f"unknown conjecture {which!r}; choose from {', '.join(CONJECTURES)}")
    return universality_scan(which, forms, bound, jobs, cache)


def scan_verdict(report: ScanReport) -> SuiteVerdict:
    verdict = SuiteVerdict(report.which)
    for entry in report.entries:
        verdict.add(
            f"{entry.display} attains every n <= {report.bound}",
            entry.first_witness is None,
            "" if entry.first_witness is None else f"misses {entry.first_witness}",
        )
    return verdict
