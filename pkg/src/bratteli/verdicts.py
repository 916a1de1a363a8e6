"""Tri-state verdicts for bounded semi-decision procedures.

The engine never returns a bare boolean for a question that quantifies over
infinitely many levels.  A definite answer carries evidence (a witness or an
obstruction that re-verifies by direct arithmetic); everything else at the
bound is honestly "unknown".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

YES = "yes"
NO = "no"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    kind: str
    witness: Any = None
    obstruction: Any = None
    detail: str = ""

    @staticmethod
    def yes(witness: Any = None, detail: str = "") -> "Verdict":
        return Verdict(YES, witness=witness, detail=detail)

    @staticmethod
    def no(obstruction: Any = None, detail: str = "") -> "Verdict":
        return Verdict(NO, obstruction=obstruction, detail=detail)

    @staticmethod
    def unknown(detail: str = "") -> "Verdict":
        return Verdict(UNKNOWN, detail=detail)

    @property
    def is_yes(self) -> bool:
        return self.kind == YES

    @property
    def is_no(self) -> bool:
        return self.kind == NO

    @property
    def is_unknown(self) -> bool:
        return self.kind == UNKNOWN

    def exit_code(self) -> int:
        """CLI convention: 0 affirmative, 1 definite negative, 2 unknown."""
        return {YES: 0, NO: 1, UNKNOWN: 2}[self.kind]


@dataclass(frozen=True)
class NeverVanishes:
    """A residual column provably never becomes zero.

    The column's gcd-normalized value and tail phase repeat between levels
    m_start and m_end without hitting zero, so the linear orbit repeats up to
    a positive scalar forever.
    """

    level: int
    column: int
    m_start: int
    m_end: int
    residual: tuple = field(default=())
