"""
Command dispatch: RunConfig in, exit code and serialized report out.

Exit codes: 0 when every check passes, 1 when a mathematical mismatch is
found (a list diff, a failed identity, a counterexample), 2 on usage or IO
errors. Usage errors surface as ValueError / OSError and are mapped to 2
by the entry point.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

import numpy as np
from jinja2 import Environment, PackageLoader
from pydantic import BaseModel

from tusv.core.generators import TernaryForm, display_form, display_generator, evaluate
from tusv.core.grammar import format_form, format_term, parse_form, parse_term
from tusv.core.sieve import check_bound, check_nonrep, iter_witnesses
from tusv.export.table_export import (
    stream_witness_csv,
    survivors_table,
    table_to_csv,
    witnesses_table,
)
from tusv.schemas.catalog import Caps
from tusv.schemas.reports import (
    CacheReport,
    CheckItem,
    ConjecturesReport,
    EvalReport,
    NonrepReport,
    ScanEntryOut,
    ScanReportOut,
    SieveReport,
    SuiteReport,
    SurveyDiffOut,
    SurveyReport,
    SurvivorOut,
    VerifyReport,
    WitnessReportOut,
)
from tusv.schemas.run import RunConfig
from tusv.services.cache import MaskCache
from tusv.services.catalog import get_theorem
from tusv.services.classifier import (
    PARAM_NAMES,
    CandidateSurvey,
    FamilyKind,
    confirm_published_witnesses,
    confirm_two_term_witnesses,
    enumerate_survivors,
    reproduce_theorem_list,
    verify_anchor_caps,
)
from tusv.services.theorems import (
    CONJECTURES,
    ScanReport,
    conjecture_scan,
    euler_identity_check,
    gauss_legendre_check,
    reductions_check,
    s07_check,
    scan_verdict,
    tables_check,
    thm14_scan,
)
from tusv.services.verdicts import SuiteVerdict

logger = logging.getLogger(__name__)

SUITES = ("euler", "gauss-legendre", "reductions", "tables", "s07", "thm14", "witnesses", "anchors")

DEFAULT_SIEVE_BOUND = 1000
GAUSS_LEGENDRE_BOUND = 100_000
REDUCTION_BOUND = 10_000
S07_BOUND = 10_000

CSV_COMMANDS = ("witness", "classify")
EMPTY_WITNESSES_JSON = '"witnesses": []'

_templates = Environment(
    loader=PackageLoader("tusv", "templates"),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    autoescape=False,
)


@dataclass
class RunResult:
    """Exit code plus the report as text chunks (one chunk unless streamed)."""

    exit_code: int
    chunks: Iterable[str] = field(default_factory=list)

    def text(self) -> str:
        return "".join(self.chunks)


def render(report: BaseModel, template: str, output: str) -> str:
    if output == "text":
        return _templates.get_template(f"{template}.txt.j2").render(r=report)
    return report.model_dump_json(indent=2) + "\n"


def _cache(config: RunConfig) -> MaskCache:
    return MaskCache(config.cache_dir, enabled=config.cache_enabled)


def _require(value, flag: str, command: str):
    if value is None:
        raise ValueError(f"{command} requires {flag}")
    return value


def _form(config: RunConfig) -> TernaryForm:
    return parse_form(_require(config.form, "--form", config.command), strict=config.strict)


def run_eval(config: RunConfig) -> RunResult:
    term = parse_term(_require(config.term, "TERM", "eval"), strict=config.strict)
    z = _require(config.z, "Z", "eval")
    report = EvalReport(
        term=format_term(term), display=display_generator(term), z=z, value=evaluate(term, z)
    )
    return RunResult(0, [render(report, "eval", config.output)])


def run_sieve(config: RunConfig) -> RunResult:
    form = _form(config)
    bound = DEFAULT_SIEVE_BOUND if config.bound is None else config.bound
    check_bound(bound, config.max_bound)
    mask, hit = _cache(config).get_or_build(form, bound, config.max_bound)
    missing = mask.missing()
    report = SieveReport(
        form=format_form(form),
        display=display_form(form),
        bound=bound,
        attained=mask.count,
        missed=len(missing),
        first_witness=int(missing[0]) if len(missing) else None,
        universal_up_to_bound=len(missing) == 0,
        cache_hit=hit,
    )
    return RunResult(0, [render(report, "sieve", config.output)])


def run_witness(config: RunConfig) -> RunResult:
    form = _form(config)
    text = format_form(form)
    if config.check is not None:
        certificate = check_nonrep(form, config.check)
        report = NonrepReport(
            form=text,
            display=display_form(form),
            value=config.check,
            nonrepresentable=certificate.nonrepresentable,
            representation=certificate.representation,
            ranges=list(certificate.ranges),
        )
        return RunResult(0, [render(report, "nonrep", config.output)])

    bound = DEFAULT_SIEVE_BOUND if config.bound is None else config.bound
    check_bound(bound, config.max_bound)
    mask, _ = _cache(config).get_or_build(form, bound, config.max_bound)
    missed = mask.missing_count()
    if missed > config.witness_stream_threshold:
        logger.info(f"Streaming {missed} witnesses as {config.output}")
        if config.output == "csv":
            return RunResult(0, stream_witness_csv(text, bound, iter_witnesses(mask)))
        report = WitnessReportOut(
            form=text, display=display_form(form), bound=bound, missed=missed, witnesses=[]
        )
        stream = stream_witness_json if config.output == "json" else stream_witness_text
        return RunResult(0, stream(report, iter_witnesses(mask)))
    if config.output == "csv":
        return RunResult(0, [table_to_csv(witnesses_table(text, bound, mask.missing()))])
    report = WitnessReportOut(
        form=text,
        display=display_form(form),
        bound=bound,
        missed=missed,
        witnesses=mask.missing().tolist(),
    )
    return RunResult(0, [render(report, "witness", config.output)])


def stream_witness_json(report: WitnessReportOut, chunks: Iterable[np.ndarray]) -> Iterator[str]:
    """
    The JSON of report with its witness array written chunk by chunk.

    The output is byte-identical to rendering the report with every witness
    in memory; report.witnesses must be empty.
    """
    head, tail = render(report, "witness", "json").split(EMPTY_WITNESSES_JSON, 1)
    yield head + '"witnesses": ['
    first = True
    for chunk in chunks:
        yield ("\n    " if first else ",\n    ") + ",\n    ".join(map(str, chunk.tolist()))
        first = False
    yield ("]" if first else "\n  ]") + tail


def stream_witness_text(report: WitnessReportOut, chunks: Iterable[np.ndarray]) -> Iterator[str]:
    """Text report with the witness line written chunk by chunk."""
    yield render(report, "witness", "text")
    first = True
    for chunk in chunks:
        yield ("  " if first else ", ") + ", ".join(map(str, chunk.tolist()))
        first = False
    if not first:
        yield "\n"


def _survivor_out(survey: CandidateSurvey, params: tuple[int, ...]) -> SurvivorOut:
    values = dict(zip(PARAM_NAMES, params))
    return SurvivorOut(**values, display=survey.display(params))


def survey_report(survey: CandidateSurvey, expect: Optional[str] = None) -> SurveyReport:
    diff = None
    if survey.diff is not None:
        diff = SurveyDiffOut(
            missing=[_survivor_out(survey, p) for p in survey.diff.missing],
            extra=[_survivor_out(survey, p) for p in survey.diff.extra],
            errata=[_survivor_out(survey, p) for p in survey.diff.errata],
        )
    return SurveyReport(
        family=survey.family.value,
        expect=expect,
        caps=survey.caps.model_dump(exclude_none=True),
        witness_bound=survey.witness_bound,
        survivors=[_survivor_out(survey, p) for p in survey.survivors],
        excluded=len(survey.excluded),
        expected_match=survey.expected_match,
        diff=diff,
    )


def run_classify(config: RunConfig, list_witness_bound: int) -> RunResult:
    if config.expect is not None:
        entry = get_theorem(config.expect)
        if config.family is not None and config.family != entry.family:
            raise ValueError(
                f"--expect {config.expect} surveys family {entry.family}, not {config.family}"
            )
        caps = Caps(**{**entry.caps.model_dump(exclude_none=True), **config.caps})
        survey = reproduce_theorem_list(
            config.expect, config.witness_bound, caps, config.jobs
        )
    else:
        family = FamilyKind(_require(config.family, "--family or --expect", "classify"))
        absent = [f"--cap-{n}" for n in PARAM_NAMES[: family.arity] if n not in config.caps]
        if absent:
            raise ValueError(f"classify --family {family.value} without --expect needs {absent}")
        witness_bound = list_witness_bound if config.witness_bound is None else config.witness_bound
        survey = enumerate_survivors(family, Caps(**config.caps), witness_bound, config.jobs)

    exit_code = 1 if survey.expected_match is False else 0
    if config.output == "csv":
        rows = [(p, survey.display(p)) for p in survey.survivors]
        expected = None if survey.expected is None else set(survey.expected)
        table = survivors_table(survey.family.value, rows, expected)
        return RunResult(exit_code, [table_to_csv(table)])
    report = survey_report(survey, config.expect)
    return RunResult(exit_code, [render(report, "survey", config.output)])


def suite_report(verdict: SuiteVerdict) -> SuiteReport:
    return SuiteReport(
        suite=verdict.suite,
        passed=verdict.passed,
        items=[CheckItem(name=c.name, passed=c.passed, detail=c.detail) for c in verdict.checks],
        findings=list(verdict.findings),
    )


def _witness_suites(config: RunConfig) -> list[SuiteVerdict]:
    return [confirm_published_witnesses(strict=config.strict), confirm_two_term_witnesses()]


def _suite_runners(config: RunConfig) -> dict[str, Callable[[], list[SuiteVerdict]]]:
    def bound_or(default: int) -> int:
        return default if config.bound is None else config.bound

    return {
        "euler": lambda: [
            euler_identity_check(bound_or(config.scan_bound), config.parametric_x_max)
        ],
        "gauss-legendre": lambda: [gauss_legendre_check(bound_or(GAUSS_LEGENDRE_BOUND))],
        "reductions": lambda: [reductions_check(bound_or(REDUCTION_BOUND))],
        "tables": lambda: [tables_check(config.parametric_x_max)],
        "s07": lambda: [s07_check(bound_or(S07_BOUND))],
        "thm14": lambda: [
            scan_verdict(thm14_scan(bound_or(config.scan_bound), config.jobs, _cache(config)))
        ],
        "witnesses": lambda: _witness_suites(config),
        "anchors": lambda: [verify_anchor_caps()],
    }


def run_verify(config: RunConfig) -> RunResult:
    if config.bound is not None:
        check_bound(config.bound, config.max_bound)
    runners = _suite_runners(config)
    selected = SUITES if config.suite == "all" else (config.suite,)
    verdicts = []
    for name in selected:
        logger.info(f"Running suite {name}")
        verdicts.extend(runners[name]())
    for verdict in verdicts:
        for failure in verdict.failures:
            logger.warning(f"{verdict.suite}: {failure.name} failed {failure.detail}")
    report = VerifyReport(
        passed=all(v.passed for v in verdicts), suites=[suite_report(v) for v in verdicts]
    )
    return RunResult(0 if report.passed else 1, [render(report, "verify", config.output)])


def scan_report(report: ScanReport) -> ScanReportOut:
    def entry_out(entry) -> ScanEntryOut:
        return ScanEntryOut(
            form=entry.form, display=entry.display, first_witness=entry.first_witness
        )

    return ScanReportOut(
        which=report.which,
        bound=report.bound,
        passed=report.passed,
        entries=[entry_out(e) for e in report.entries],
        counterexamples=[entry_out(e) for e in report.counterexamples],
    )


def run_conjectures(config: RunConfig) -> RunResult:
    bound = config.scan_bound if config.bound is None else config.bound
    check_bound(bound, config.max_bound)
    selected = CONJECTURES if config.which == "all" else (config.which,)
    cache = _cache(config)
    scans = [scan_report(conjecture_scan(w, bound, config.jobs, cache)) for w in selected]
    report = ConjecturesReport(passed=all(s.passed for s in scans), scans=scans)
    return RunResult(0 if report.passed else 1, [render(report, "conjectures", config.output)])


def run_cache(config: RunConfig) -> RunResult:
    cache = _cache(config)
    action = _require(config.action, "an action", "cache")
    removed = built = None
    if action == "clear":
        removed = cache.clear()
    elif action == "build":
        form = _form(config)
        bound = DEFAULT_SIEVE_BOUND if config.bound is None else config.bound
        check_bound(bound, config.max_bound)
        if not cache.is_available:
            raise OSError(f"cache directory {config.cache_dir} is not usable")
        cache.get_or_build(form, bound, config.max_bound)
        built = cache.path_for(form, bound).name
    info = cache.info()
    report = CacheReport(
        action=action,
        cache_dir=info["cache_dir"],
        enabled=info["enabled"],
        entries=info["entries"],
        total_bytes=info["total_bytes"],
        removed=removed,
        built=built,
    )
    return RunResult(0, [render(report, "cache", config.output)])


def run(config: RunConfig, list_witness_bound: int = 1000) -> RunResult:
    """
    Dispatch one command.

    Raises:
        ValueError: on usage errors (including --output csv where unsupported)
        OSError: on IO failures outside the cache
    """
    if config.output == "csv" and config.command not in CSV_COMMANDS:
        raise ValueError(f"--output csv is only available for {', '.join(CSV_COMMANDS)}")
    if config.command == "witness" and config.output == "csv" and config.check is not None:
        raise ValueError("--output csv is not available with --check")
    if config.command == "eval":
        return run_eval(config)
    if config.command == "sieve":
        return run_sieve(config)
    if config.command == "witness":
        return run_witness(config)
    if config.command == "classify":
        return run_classify(config, list_witness_bound)
    if config.command == "verify":
        return run_verify(config)
    if config.command == "conjectures":
        return run_conjectures(config)
    return run_cache(config)
