"""Per-invocation configuration assembled from CLI flags over Settings."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

Command = Literal["eval", "sieve", "witness", "classify", "verify", "conjectures", "cache"]
OutputFormat = Literal["json", "csv", "text"]
Suite = Literal[
    "euler",
    "gauss-legendre",
    "reductions",
    "tables",
    "s07",
    "thm14",
    "witnesses",
    "anchors",
    "all",
]


class RunConfig(BaseModel):
    """Validated options for one command."""

    command: Command
    bound: Optional[int] = Field(None, ge=0)
    jobs: int = Field(1, ge=1)
    cache_dir: Path
    cache_enabled: bool = True
    output: OutputFormat = "json"
    out: Optional[Path] = None
    strict: bool = False
    max_bound: int = Field(2**32, ge=0)
    witness_stream_threshold: int = Field(1_000_000, ge=1)

    # eval
    term: Optional[str] = None
    z: Optional[int] = None

    # sieve / witness / cache build
    form: Optional[str] = None
    check: Optional[int] = Field(None, ge=0)

    # classify
    family: Optional[Literal["I", "II", "III", "tri"]] = None
    expect: Optional[Literal["1.1", "1.2", "1.3i", "1.3ii", "liouville"]] = None
    caps: dict[str, int] = Field(default_factory=dict)
    witness_bound: Optional[int] = Field(None, ge=0)

    # verify / conjectures
    suite: Suite = "all"
    which: Literal["remaining-1.1", "1.2", "all"] = "all"
    scan_bound: int = Field(1_000_000, ge=0)
    parametric_x_max: int = Field(1000, ge=1)

    # cache
    action: Optional[Literal["info", "build", "clear"]] = None

    @field_validator("caps")
    @classmethod
    def caps_positive(cls, caps: dict[str, int]) -> dict[str, int]:
        for name, value in caps.items():
            if name not in ("a", "b", "c", "d"):
                raise ValueError(f"unknown cap {name!r}")
            if value < 1:
                raise ValueError(f"cap {name} must be positive, got {value}")
        return caps
