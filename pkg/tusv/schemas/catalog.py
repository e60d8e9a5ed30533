"""Pydantic schemas for the embedded catalog of published lists and tables."""

from typing import Annotated, Literal, Optional

from pydantic import AfterValidator, BaseModel, Field, field_validator, model_validator

from tusv.core.grammar import parse_form, parse_term

TermKind = Literal["sq", "tri"]


def _check_form(text: str) -> str:
    parse_form(text)
    return text


FormText = Annotated[str, AfterValidator(_check_form)]


class Caps(BaseModel):
    """Per-parameter upper bounds of a family survey."""

    a: int = Field(..., ge=1)
    b: int = Field(..., ge=1)
    c: int = Field(..., ge=1)
    d: Optional[int] = Field(None, ge=1, description="Absent for the triangular-triple family")


class TheoremList(BaseModel):
    """A published list together with the survey that reproduces it."""

    title: str
    family: Literal["I", "II", "III", "tri"]
    caps: Caps
    witness_bound: int = Field(..., ge=1)
    expected: list[tuple[int, ...]]
    exclude_ab: list[tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_arity(self) -> "TheoremList":
        arity = 3 if self.family == "tri" else 4
        for params in self.expected:
            if len(params) != arity:
                raise ValueError(f"{self.family} entries need {arity} parameters, got {params}")
        if (self.family == "tri") != (self.caps.d is None):
            raise ValueError("cap d is required exactly for gp families")
        return self


class Erratum(BaseModel):
    theorem: str
    params: tuple[int, ...]
    note: str


class WitnessClaim(BaseModel):
    """A value the published proof says a form does not attain."""

    source: str
    form: FormText
    value: int = Field(..., ge=0)
    reading: Optional[str] = Field(None, description="Set when the source admits two readings")


class TwoTermClaim(BaseModel):
    """Exact non-attained values of a two-term form up to max(values)."""

    source: str
    form: FormText
    values: list[int] = Field(..., min_length=1)


class AnchorClaim(BaseModel):
    """Anchor argument: anchor misses fixed + {0, d}, so c <= anchor - 2d."""

    source: str
    fixed: tuple[str, str]
    d: int = Field(..., ge=1)
    anchor: int = Field(..., ge=0)
    cap: int

    @field_validator("fixed")
    @classmethod
    def check_terms(cls, fixed: tuple[str, str]) -> tuple[str, str]:
        for text in fixed:
            parse_term(text)
        return fixed


class ReductionSpec(BaseModel):
    name: str
    target: FormText
    base: FormText
    variables: list[int] = Field(..., min_length=1)
    k: int = Field(..., ge=0)
    floor: int = Field(..., ge=0)

    @field_validator("variables")
    @classmethod
    def check_variables(cls, variables: list[int]) -> list[int]:
        if any(v not in (0, 1, 2) for v in variables):
            raise ValueError(f"variable indices must be 0, 1 or 2, got {variables}")
        return variables


class TableEntry(BaseModel):
    """n = sum of coeff * kind(index); printed_n records a misprinted target."""

    n: int = Field(..., ge=0)
    terms: list[tuple[TermKind, int, int]] = Field(..., min_length=3, max_length=3)
    printed_n: Optional[int] = None


class DecompositionTableSpec(BaseModel):
    name: str
    entries: list[TableEntry]


class ParametricSpec(BaseModel):
    """coeff * kind(x) + r = sum of coeff_i * kind_i(scale_i * x + shift_i)."""

    name: str
    lhs: tuple[TermKind, int]
    r: int = Field(..., ge=0)
    terms: list[tuple[TermKind, int, int, int]] = Field(..., min_length=3, max_length=3)


class PairSetSpec(BaseModel):
    """{kind_i + kind_j : i, j <= max_index} = [0, upto] + extra - excluded."""

    name: str
    kind: TermKind
    max_index: int = Field(..., ge=0)
    upto: int = Field(..., ge=0)
    extra: list[int] = Field(default_factory=list)
    excluded: list[int] = Field(default_factory=list)


class Catalog(BaseModel):
    """Every transcribed list, witness and table, validated on load."""

    version: int
    theorems: dict[str, TheoremList]
    errata: list[Erratum] = Field(default_factory=list)
    findings: list[str] = Field(default_factory=list)
    witnesses: list[WitnessClaim]
    supplementary_witnesses: list[WitnessClaim] = Field(default_factory=list)
    two_term_witnesses: list[TwoTermClaim]
    anchors: list[AnchorClaim]
    theorem_1_4: list[FormText]
    conjecture_1_2: list[FormText]
    reductions: list[ReductionSpec]
    tables: list[DecompositionTableSpec]
    parametric: list[ParametricSpec]
    pair_sets: list[PairSetSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_errata(self) -> "Catalog":
        for erratum in self.errata:
            if erratum.theorem not in self.theorems:
                raise ValueError(f"erratum names unknown list {erratum.theorem!r}")
        return self
