"""
Parameter-family surveys.

A survey enumerates every parameter tuple within the caps, drops each tuple
whose form misses some n <= W, and diffs the survivors against a published
list. Caps come from anchor arguments: a value t outside the fixed two-term
subform plus {0, d} forces the third term to be used with z >= 2, and
f(z) >= f(2) = c + 2d there, so c <= t - 2d.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Optional, Sequence

from tusv.core.errors import AnchorError, WitnessContradiction
from tusv.core.generators import (
    Generator,
    GeneratorKind,
    Kind,
    TernaryForm,
    branches,
    display_form,
    generator_values,
)
from tusv.core.grammar import format_term, parse_form
from tusv.core.sieve import (
    check_nonrep,
    find_representation,
    first_witness,
    form_mask,
    non_representables,
)
from tusv.schemas.catalog import Caps
from tusv.services.catalog import anchor_fixed, errata_for, get_theorem, load_catalog
from tusv.services.pool import run_tasks
from tusv.services.verdicts import SuiteVerdict

logger = logging.getLogger(__name__)

PARAM_NAMES = ("a", "b", "c", "d")

READINGS = ("k_list", "value_list")


class FamilyKind(str, Enum):
    """Parameter families; gp families require d not dividing c."""

    TYPE_I = "I"  # a x^2 + b y^2 + gp(c, d), a <= b
    TYPE_II = "II"  # a T_x + b T_y + gp(c, d), a <= b
    TYPE_III = "III"  # a T_x + b y^2 + gp(c, d)
    TRI_TRIPLE = "tri"  # a T_x + b T_y + c T_z, a <= b <= c

    @property
    def arity(self) -> int:
        return 3 if self is FamilyKind.TRI_TRIPLE else 4


_FIXED_KINDS = {
    FamilyKind.TYPE_I: (Kind.SQUARE, Kind.SQUARE),
    FamilyKind.TYPE_II: (Kind.TRIANGULAR, Kind.TRIANGULAR),
    FamilyKind.TYPE_III: (Kind.TRIANGULAR, Kind.SQUARE),
}


@dataclass(frozen=True)
class SurveyDiff:
    """Survivors against a published list; errata are extras already on record."""

    missing: tuple[tuple[int, ...], ...]
    extra: tuple[tuple[int, ...], ...]
    errata: tuple[tuple[int, ...], ...]

    @property
    def unresolved(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p for p in self.extra if p not in self.errata)

    @property
    def expected_match(self) -> bool:
        return not self.missing and not self.unresolved


@dataclass
class CandidateSurvey:
    family: FamilyKind
    caps: Caps
    witness_bound: int
    survivors: tuple[tuple[int, ...], ...]
    excluded: dict[tuple[int, ...], int]
    expected: Optional[tuple[tuple[int, ...], ...]] = None
    diff: Optional[SurveyDiff] = None
    seconds: float = 0.0

    @property
    def expected_match(self) -> Optional[bool]:
        return None if self.diff is None else self.diff.expected_match

    def display(self, params: Sequence[int]) -> str:
        return display_form(family_form(self.family, params))


def family_form(family: FamilyKind, params: Sequence[int]) -> TernaryForm:
    """The form a family assigns to a parameter tuple."""
    if len(params) != family.arity:
        raise ValueError(f"family {family.value} takes {family.arity} parameters, got {params}")
    if family is FamilyKind.TRI_TRIPLE:
        tri = GeneratorKind.triangular()
        return TernaryForm(tuple(Generator(tri, k) for k in params))
    a, b, c, d = params
    first, second = (GeneratorKind(kind) for kind in _FIXED_KINDS[family])
    return TernaryForm(
        (Generator(first, a), Generator(second, b), Generator(GeneratorKind.genpoly(c, d)))
    )


def family_tuples(
    family: FamilyKind, caps: Caps, exclude_ab: Sequence[tuple[int, int]] = ()
) -> list[tuple[int, ...]]:
    """All tuples within caps under the family constraints, tuples with d | c skipped."""
    if family is FamilyKind.TRI_TRIPLE:
        return [
            (a, b, c)
            for a in range(1, caps.a + 1)
            for b in range(a, caps.b + 1)
            for c in range(b, caps.c + 1)
        ]
    if caps.d is None:
        raise ValueError(f"family {family.value} needs a cap on d")
    excluded = {tuple(p) for p in exclude_ab}
    ordered = family in (FamilyKind.TYPE_I, FamilyKind.TYPE_II)
    tuples = []
    for a, b in product(range(1, caps.a + 1), range(1, caps.b + 1)):
        if (ordered and a > b) or (a, b) in excluded:
            continue
        for d in range(1, caps.d + 1):
            tuples.extend((a, b, c, d) for c in range(1, caps.c + 1) if c % d)
    return tuples


def min_positive_value(g: Generator) -> int:
    """Least positive value of g."""
    if g.kind.kind == Kind.ZERO:
        raise ValueError("the zero term has no positive value")
    # The primary branch has value coeff * d >= 1 at z = 1.
    upper = branches(g)[0].value(1)
    values = generator_values(g, upper)
    return int(values[values > 0].min())


def cap_from_anchor(fixed: Sequence[Generator], d: int, targets: Sequence[int]) -> int:
    """
    Cap on c implied by anchors missing fixed[0] + fixed[1] + {0, d}.

    Raises:
        AnchorError: if an anchor (or anchor - d) is attained by the fixed pair
    """
    if not targets:
        raise ValueError("at least one anchor is required")
    pair = TernaryForm.of(fixed[0], fixed[1])
    mask = form_mask(pair, max(targets))
    caps = []
    for target in targets:
        for used in (0, d):
            rest = target - used
            if rest >= 0 and rest in mask:
                x, y, _ = find_representation(pair, rest)
                raise AnchorError(
                    target, f"{target} = {used} + f1({x}) + f2({y}) in {display_form(pair)}"
                )
        caps.append(target - 2 * d)
    return min(caps)


def _survey_task(task: tuple[str, tuple[int, ...], int]) -> tuple[tuple[int, ...], Optional[int]]:
    family, params, bound = task
    return params, first_witness(family_form(FamilyKind(family), params), bound)


def enumerate_survivors(
    family: FamilyKind,
    caps: Caps,
    witness_bound: int,
    jobs: int = 1,
    exclude_ab: Sequence[tuple[int, int]] = (),
) -> CandidateSurvey:
    """
    Test every tuple within caps; a survivor attains every n <= witness_bound.

    Args:
        family: Parameter family
        caps: Upper bounds per parameter
        witness_bound: W
        jobs: Worker processes (1 runs inline)
        exclude_ab: (a, b) pairs left out of the family

    Returns:
        Survey with sorted survivors and the first witness of every excluded tuple
    """
    if witness_bound < 0:
        raise ValueError(f"witness bound must be >= 0, got {witness_bound}")
    tuples = family_tuples(family, caps, exclude_ab)
    logger.info(
        f"Surveying family {family.value}: {len(tuples)} tuples, W={witness_bound}, jobs={jobs}"
    )
    start = time.perf_counter()
    results = run_tasks(_survey_task, [(family.value, p, witness_bound) for p in tuples], jobs)
    survivors = tuple(sorted(p for p, witness in results if witness is None))
    excluded = {p: witness for p, witness in sorted(results) if witness is not None}
    elapsed = time.perf_counter() - start
    logger.info(f"Family {family.value}: {len(survivors)} survivors in {elapsed:.2f}s")
    return CandidateSurvey(family, caps, witness_bound, survivors, excluded, seconds=elapsed)


def diff_survivors(
    survivors: Sequence[tuple[int, ...]],
    expected: Sequence[tuple[int, ...]],
    errata: set[tuple[int, ...]],
) -> SurveyDiff:
    found, wanted = set(survivors), set(expected)
    extra = tuple(sorted(found - wanted))
    return SurveyDiff(
        missing=tuple(sorted(wanted - found)),
        extra=extra,
        errata=tuple(p for p in extra if p in errata),
    )


def reproduce_theorem_list(
    which: str,
    witness_bound: Optional[int] = None,
    caps: Optional[Caps] = None,
    jobs: int = 1,
) -> CandidateSurvey:
    """Run the survey behind a published list and diff against it."""
    entry = get_theorem(which)
    family = FamilyKind(entry.family)
    survey = enumerate_survivors(
        family,
        caps or entry.caps,
        entry.witness_bound if witness_bound is None else witness_bound,
        jobs,
        entry.exclude_ab,
    )
    survey.expected = tuple(sorted(tuple(p) for p in entry.expected))
    survey.diff = diff_survivors(survey.survivors, survey.expected, errata_for(which))
    for params in survey.diff.errata:
        logger.warning(f"{which}: survivor {survey.display(params)} is a recorded erratum")
    if not survey.diff.expected_match:
        logger.warning(
            f"{which}: mismatch, missing={list(survey.diff.missing)} "
            f"extra={list(survey.diff.unresolved)}"
        )
    return survey


def confirm_published_witnesses(
    include_supplementary: bool = True, strict: bool = False
) -> SuiteVerdict:
    """
    Check every cited non-attained value exhaustively.

    Raises:
        WitnessContradiction: in strict mode, on the first attained value
    """
    catalog = load_catalog()
    claims = list(catalog.witnesses)
    if include_supplementary:
        claims += catalog.supplementary_witnesses
    verdict = SuiteVerdict("witnesses")
    for claim in claims:
        form = parse_form(claim.form)
        certificate = check_nonrep(form, claim.value)
        name = f"{claim.source}: {claim.value} not in {display_form(form)}"
        if certificate.nonrepresentable:
            verdict.add(name, True)
            continue
        if strict:
            raise WitnessContradiction(claim.form, claim.value, certificate.representation)
        verdict.add(name, False, f"attained at (x, y, z) = {certificate.representation}")
    logger.info(f"Confirmed {len(verdict.checks) - len(verdict.failures)}/{len(claims)} witnesses")
    return verdict


def confirm_two_term_witnesses() -> SuiteVerdict:
    """Each two-term claim lists exactly the non-attained values up to its maximum."""
    verdict = SuiteVerdict("two-term")
    for claim in load_catalog().two_term_witnesses:
        form = parse_form(claim.form)
        report = non_representables(form, max(claim.values))
        passed = list(report.witnesses) == sorted(claim.values)
        detail = "" if passed else f"found {list(report.witnesses)}"
        name = f"{claim.source}: {claim.values} missed by {display_form(form)}"
        verdict.add(name, passed, detail)
    return verdict


def verify_anchor_caps() -> SuiteVerdict:
    """Recompute every stated cap from its anchor."""
    verdict = SuiteVerdict("anchors")
    for claim in load_catalog().anchors:
        name = f"{claim.source}: anchor {claim.anchor}, d={claim.d} -> c <= {claim.cap}"
        try:
            cap = cap_from_anchor(anchor_fixed(claim), claim.d, [claim.anchor])
        except AnchorError as e:
            verdict.add(name, False, str(e))
            continue
        verdict.add(name, cap == claim.cap, "" if cap == claim.cap else f"computed c <= {cap}")
    return verdict


def _anchor_cap(fixed: tuple[str, str], d: int) -> Optional[int]:
    for claim in load_catalog().anchors:
        if tuple(claim.fixed) == fixed and claim.d == d:
            return claim.cap
    return None


def open_cases(which: str, ab: tuple[int, int], d: int) -> dict[str, list[tuple[int, ...]]]:
    """
    Tuples (a, b, c, d) of one proof case that are neither on the published
    list nor excluded by a cited witness, per reading of the cited values.

    c runs up to the case's anchor cap when one is recorded.
    """
    entry = get_theorem(which)
    family = FamilyKind(entry.family)
    if family is FamilyKind.TRI_TRIPLE:
        raise ValueError("open cases are defined for gp families only")
    sample = family_form(family, (*ab, 1, d))
    fixed = (format_term(sample.terms[0]), format_term(sample.terms[1]))
    cap = _anchor_cap(fixed, d)
    c_max = entry.caps.c if cap is None else cap
    expected = {tuple(p) for p in entry.expected}
    candidates = [(*ab, c, d) for c in range(1, c_max + 1) if c % d and (*ab, c, d) not in expected]
    claims = load_catalog().witnesses
    cases = {}
    for reading in READINGS:
        cited = {
            parse_form(claim.form)
            for claim in claims
            if claim.reading is None or claim.reading == reading
        }
        cases[reading] = [p for p in candidates if family_form(family, p) not in cited]
    return cases
