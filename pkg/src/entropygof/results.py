"""Common decision record returned by every hypothesis test in the package."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TestResult:
    """Outcome of a single test: statistic vs critical value at level alpha.

    p_value is None where no analytic reference distribution applies
    (e.g. Monte Carlo calibrated critical values).
    """

    statistic: float
    critical: float
    p_value: float | None
    reject: bool
    method: str = ""

    def report_lines(self) -> list[str]:
        lines = [
            f"method: {self.method}" if self.method else "method: unknown",
            f"statistic: {self.statistic:.6g}",
            f"critical: {self.critical:.6g}",
            f"p_value: {'n/a' if self.p_value is None else format(self.p_value, '.6g')}",
            f"decision: {'reject' if self.reject else 'do not reject'}",
        ]
        return lines
