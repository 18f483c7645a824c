"""
In-memory collector of expectation outcomes for example runs.
"""
import time
from typing import Dict, List, Optional

from shiftlab.constants import Evidence, Outcome


class VerificationLog:
    """Stores one entry per checked expectation, oldest dropped first."""

    def __init__(self, max_records: int = 1000):
        self.records: List[Dict] = []
        self.max_records = max_records

    def _add(
        self,
        outcome: str,
        description: str,
        detail: str = "",
        evidence: str = Evidence.EXACT,
        exception: Optional[str] = None,
    ):
        if len(self.records) >= self.max_records:
            self.records.pop(0)
        entry = {
            "outcome": outcome,
            "description": description,
            "detail": detail,
            "evidence": evidence,
            "timestamp": time.time(),
        }
        if exception:
            entry["exception"] = exception
        self.records.append(entry)

    def passed(self, description: str, detail: str = "",
               evidence: str = Evidence.EXACT):
        self._add(Outcome.PASS, description, detail, evidence)

    def failed(self, description: str, detail: str = "",
               evidence: str = Evidence.EXACT):
        self._add(Outcome.FAIL, description, detail, evidence)

    def errored(self, description: str, exception: str,
                evidence: str = Evidence.EXACT):
        """Record an expectation whose check raised."""
        self._add(Outcome.ERROR, description, "", evidence, exception)

    def get_entries(self) -> List[Dict]:
        return list(self.records)

    def get_failures(self) -> List[Dict]:
        """Return FAIL and ERROR entries."""
        return [
            entry
            for entry in self.records
            if entry["outcome"] in Outcome.get_problem_outcomes()
        ]

    def get_summary(self) -> Dict:
        """Return total count and per-outcome counts."""
        summary = {"total": len(self.records), "by_outcome": {}}
        for entry in self.records:
            outcome = entry["outcome"]
            summary["by_outcome"][outcome] = (
                summary["by_outcome"].get(outcome, 0) + 1
            )
        return summary

    def clear(self) -> None:
        self.records.clear()
