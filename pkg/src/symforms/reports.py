"""Structured verification reports.

Reports are data, never prose: every measured quantity is
machine-readable and JSON rendering is canonical (sorted keys, fixed
separators), so identical runs emit identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

__all__ = [
    "PASS",
    "FAIL",
    "HYPOTHESES_NOT_MET",
    "EXIT_PASS",
    "EXIT_FAIL",
    "EXIT_HYPOTHESES_NOT_MET",
    "EXIT_CAP",
    "Hypothesis",
    "VerificationReport",
    "report_json",
    "json_ready",
]

PASS = "pass"
FAIL = "fail"
HYPOTHESES_NOT_MET = "hypotheses-not-met"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_HYPOTHESES_NOT_MET = 2
EXIT_CAP = 3

_EXITS = {PASS: EXIT_PASS, FAIL: EXIT_FAIL, HYPOTHESES_NOT_MET: EXIT_HYPOTHESES_NOT_MET}


def json_ready(value: Any) -> Any:
    """Recursively convert report values to plain JSON types.

    Fractions become exact "a/b" strings; no floats are ever produced.
    """
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, dict):
        return {str(k): json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    if hasattr(value, "item") and callable(value.item):  # numpy scalars
        return json_ready(value.item())
    raise TypeError(f"value of type {type(value).__name__} is not report-safe")


@dataclass(frozen=True)
class Hypothesis:
    name: str
    holds: bool
    measured: Any = None

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "holds": self.holds,
            "measured": json_ready(self.measured),
        }


@dataclass(frozen=True)
class VerificationReport:
    theorem: str
    verdict: str
    hypotheses: list[Hypothesis] = field(default_factory=list)
    quantities: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in _EXITS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL and not self.witnesses:
            raise ValueError("a failing report must carry a witness")
        if self.verdict == HYPOTHESES_NOT_MET and not any(
            not h.holds for h in self.hypotheses
        ):
            raise ValueError("hypotheses-not-met must list a failed hypothesis")

    @property
    def exit_code(self) -> int:
        return _EXITS[self.verdict]

    def hypothesis(self, name: str) -> Optional[Hypothesis]:
        for h in self.hypotheses:
            if h.name == name:
                return h
        return None

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "hypotheses": [h.to_json_dict() for h in self.hypotheses],
            "quantities": json_ready(self.quantities),
            "witnesses": json_ready(self.witnesses),
        }


def report_json(report: VerificationReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"
