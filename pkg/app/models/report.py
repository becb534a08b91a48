"""Invariant report models."""

from pydantic import BaseModel, Field

SAFETY_CHECK = "safety"


class CheckResult(BaseModel):
    """Outcome of one invariant check over a log."""

    name: str
    applicable: bool = True
    passed: bool = True
    value: float | None = None
    threshold: float | None = None
    detail: str = ""
    offending_time: float | None = None


class InvariantReport(BaseModel):
    """Per-check pass/fail for one episode."""

    scenario: str
    checks: list[CheckResult] = Field(default_factory=list)

    def get(self, name: str) -> CheckResult | None:
        return next((c for c in self.checks if c.name == name), None)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.applicable)

    @property
    def safety_passed(self) -> bool:
        check = self.get(SAFETY_CHECK)
        return check is None or check.passed

    @property
    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.applicable and not c.passed]

    def render(self, verbosity: int = 1) -> str:
        """Plain-text rendering for the CLI."""
        status = "PASS" if self.passed else "FAIL"
        lines = [f"[{status}] {self.scenario}"]
        if verbosity == 0:
            return lines[0]
        for c in self.checks:
            if not c.applicable and verbosity < 2:
                continue
            mark = "n/a " if not c.applicable else ("ok  " if c.passed else "FAIL")
            line = f"  {mark} {c.name}"
            if c.value is not None:
                line += f" value={c.value:.6g}"
            if c.threshold is not None:
                line += f" threshold={c.threshold:.6g}"
            if c.offending_time is not None:
                line += f" at t={c.offending_time:.6g}"
            if c.detail and (verbosity >= 2 or not c.passed):
                line += f" ({c.detail})"
            lines.append(line)
        return "\n".join(lines)


class SuiteEntryResult(BaseModel):
    """One scenario of a suite run."""

    name: str
    safety_critical: bool
    report: InvariantReport | None = None
    error: str | None = None
    outputs: list[str] = Field(default_factory=list)

    @property
    def blocks_exit(self) -> bool:
        """A safety-critical entry whose log violated the barrier."""
        return self.safety_critical and self.report is not None and not self.report.safety_passed


class SuiteReport(BaseModel):
    """Results of a whole suite."""

    entries: list[SuiteEntryResult] = Field(default_factory=list)

    @property
    def safe(self) -> bool:
        return not any(e.blocks_exit for e in self.entries)

    @property
    def aborted(self) -> list[SuiteEntryResult]:
        return [e for e in self.entries if e.error is not None]
