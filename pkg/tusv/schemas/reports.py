"""Pydantic schemas for command reports (JSON output)."""

from typing import Optional

from pydantic import BaseModel, Field


class EvalReport(BaseModel):
    term: str
    display: str
    z: int
    value: int


class SieveReport(BaseModel):
    """Summary of one form mask."""

    form: str
    display: str
    bound: int = Field(..., ge=0)
    attained: int = Field(..., description="Values in [0, bound] attained")
    missed: int = Field(..., description="Values in [0, bound] not attained")
    first_witness: Optional[int] = Field(None, description="Least missed value, null if none")
    universal_up_to_bound: bool
    cache_hit: bool = False


class WitnessReportOut(BaseModel):
    form: str
    display: str
    bound: int = Field(..., ge=0)
    missed: int = Field(..., ge=0, description="Number of non-attained values")
    witnesses: list[int]
    exhaustive: bool = True


class NonrepReport(BaseModel):
    """Exhaustive decision for one value, with the enumerated variable ranges."""

    form: str
    display: str
    value: int
    nonrepresentable: bool
    representation: Optional[tuple[int, int, int]] = None
    ranges: list[tuple[int, int]]


class SurvivorOut(BaseModel):
    a: int
    b: int
    c: int
    d: Optional[int] = None
    display: str


class SurveyDiffOut(BaseModel):
    missing: list[SurvivorOut] = Field(default_factory=list)
    extra: list[SurvivorOut] = Field(default_factory=list)
    errata: list[SurvivorOut] = Field(default_factory=list, description="Extras on record")


class SurveyReport(BaseModel):
    family: str
    expect: Optional[str] = None
    caps: dict[str, int]
    witness_bound: int
    survivors: list[SurvivorOut]
    excluded: int = Field(..., description="Tuples with a witness <= witness_bound")
    expected_match: Optional[bool] = None
    diff: Optional[SurveyDiffOut] = None


class CheckItem(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class SuiteReport(BaseModel):
    suite: str
    passed: bool
    items: list[CheckItem]
    findings: list[str] = Field(default_factory=list)


class VerifyReport(BaseModel):
    passed: bool
    suites: list[SuiteReport]


class ScanEntryOut(BaseModel):
    form: str
    display: str
    first_witness: Optional[int] = None


class ScanReportOut(BaseModel):
    which: str
    bound: int
    passed: bool
    entries: list[ScanEntryOut]
    counterexamples: list[ScanEntryOut] = Field(default_factory=list)


class ConjecturesReport(BaseModel):
    passed: bool
    scans: list[ScanReportOut]


class CacheReport(BaseModel):
    action: str
    cache_dir: str
    enabled: bool
    entries: int
    total_bytes: int
    removed: Optional[int] = None
    built: Optional[str] = None
