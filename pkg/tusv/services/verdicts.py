"""Pass/fail records shared by the verification suites."""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckResult:
    """One checked item; detail says what failed (or what was found)."""

    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteVerdict:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, passed, detail))
