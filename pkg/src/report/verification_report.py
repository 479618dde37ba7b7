"""Verification report: one entry per executed check."""

import json
from enum import Enum
from typing import Any, Iterable, List, Optional

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    NOT_RUN = "not-run"
    NOT_APPLICABLE = "n/a"


class ReportEntry(BaseModel):
    check_id: str
    status: CheckStatus
    payload: dict[str, Any] = Field(default_factory=dict)
    metadata: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_outcome(
        cls,
        check_id: str,
        passed: bool,
        payload: Optional[dict] = None,
        metadata: Optional[dict] = None,
    ) -> "ReportEntry":
        return cls(
            check_id=check_id,
            status=CheckStatus.PASS if passed else CheckStatus.FAIL,
            payload=payload or {},
            metadata=metadata or {},
        )

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL

    def to_record(self) -> dict:
        return self.model_dump(mode="json")


class VerificationReport(BaseModel):
    command: str
    entries: List[ReportEntry] = Field(default_factory=list)

    def add(self, entry: ReportEntry) -> ReportEntry:
        if any(e.check_id == entry.check_id for e in self.entries):
            raise ValueError(f"Check {entry.check_id} already reported")
        self.entries.append(entry)
        return entry

    def extend(self, entries: Iterable[ReportEntry]):
        for entry in entries:
            self.add(entry)

    def get(self, check_id: str) -> Optional[ReportEntry]:
        return next((e for e in self.entries if e.check_id == check_id), None)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_records(self) -> List[str]:
        """Line-delimited JSON, one record per check, keys sorted."""
        return [
            json.dumps(
                {"command": self.command, **entry.to_record()},
                sort_keys=True,
                separators=(",", ":"),
            )
            for entry in self.entries
        ]

    def render_text(self) -> str:
        width = max((len(e.check_id) for e in self.entries), default=10)
        lines = [f"{self.command} report", "-" * (width + 12)]
        for entry in self.entries:
            summary = ", ".join(
                f"{key}={_short(value)}"
                for key, value in entry.payload.items()
                if not isinstance(value, (dict, list))
            )
            status = entry.status.value
            lines.append(f"{entry.check_id:<{width}}  {status:<7}  {summary}")
        verdict = "all checks passed" if self.passed else "some checks FAILED"
        lines.append("-" * (width + 12))
        lines.append(verdict)
        return "\n".join(lines)


def _short(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
