"""
Check reports for the suite runner and the CLI.

`CaseRecord` holds one evaluated case: the inputs needed to replay it, the
computed value, its comparators and residual, and the verdict. `Report`
collects records in case-id order, summarizes them and writes them out as
JSON lines (one record per line, summary last) or as a flat CSV table.
"""

import csv
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Iterable, List, Optional

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("case_id", "method", "re", "im", "residual", "ms")


@dataclass
class CaseRecord:
    """
    One evaluated case.

    `inputs` echoes everything needed to replay the case: either the seed,
    size and separation rule of a generated draw, or a full parameter document.
    """
    case_id: str
    suite: str
    method: str
    n: int
    inputs: Dict[str, Any]
    value_re: Optional[float] = None
    value_im: Optional[float] = None
    comparators: Dict[str, List[float]] = field(default_factory=dict)
    residual: Optional[float] = None
    tolerance: Optional[float] = None
    passed: bool = False
    elapsed_ms: Optional[float] = None
    error: Optional[str] = None

    @property
    def value(self) -> Optional[complex]:
        if self.value_re is None:
            return None
        return complex(self.value_re, self.value_im or 0.0)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CaseRecord":
        return cls(**data)


class Report:
    """
    Collects case records and writes them in a deterministic order.
    """

    def __init__(self, name: str = "report"):
        """
        Initializes an empty report.

        Args:
            name (str): Label written into the summary line.
        """
        self.name = name
        self._records: List[CaseRecord] = []

    def add(self, record: CaseRecord) -> None:
        self._records.append(record)
        if not record.passed:
            logger.debug(f"case {record.case_id} failed: residual={record.residual}, error={record.error}")

    def extend(self, records: Iterable[CaseRecord]) -> None:
        for record in records:
            self.add(record)

    @property
    def records(self) -> List[CaseRecord]:
        """Records sorted by case id, independent of insertion order."""
        return sorted(self._records, key=lambda r: r.case_id)

    @property
    def failures(self) -> List[CaseRecord]:
        return [r for r in self.records if not r.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def get_stats(self) -> Dict[str, Any]:
        """
        Summary of the report.

        Returns:
            Dict[str, Any]: Case and failure counts, the largest residual and
                            the number of cases per method.
        """
        residuals = [r.residual for r in self._records if r.residual is not None]
        methods: Dict[str, int] = {}
        for record in self.records:
            methods[record.method] = methods.get(record.method, 0) + 1
        return {
            "name": self.name,
            "cases": len(self._records),
            "failures": len(self.failures),
            "max_residual": max(residuals) if residuals else None,
            "methods": methods,
        }

    def exit_code(self) -> int:
        """0 when every case passed, 1 otherwise."""
        return 0 if self.passed else 1

    def __len__(self) -> int:
        return len(self._records)

    def __str__(self) -> str:
        stats = self.get_stats()
        return f"Report({self.name}: {stats['cases']} cases, {stats['failures']} failures)"

    def _prepare(self, path: str) -> None:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    def save_jsonl(self, path: str) -> None:
        """Writes one JSON object per record, then a summary object."""
        self._prepare(path)
        with open(path, "w", encoding="utf-8") as f:
            for record in self.records:
                f.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
            f.write(json.dumps({"summary": self.get_stats()}, sort_keys=True) + "\n")
        logger.info(f"Saved {len(self)} records to {path}")

    def save_csv(self, path: str) -> None:
        """Writes the flat table: case id, method, value, residual and elapsed ms."""
        self._prepare(path)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(CSV_COLUMNS)
            for r in self.records:
                writer.writerow([
                    r.case_id,
                    r.method,
                    "" if r.value_re is None else repr(r.value_re),
                    "" if r.value_im is None else repr(r.value_im),
                    "" if r.residual is None else repr(r.residual),
                    "" if r.elapsed_ms is None else f"{r.elapsed_ms:.3f}",
                ])
        logger.info(f"Saved {len(self)} rows to {path}")

    @classmethod
    def load_jsonl(cls, path: str) -> "Report":
        """Reads a report written by save_jsonl; the summary line is skipped."""
        report = cls(os.path.splitext(os.path.basename(path))[0])
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                data = json.loads(line)
                if "summary" in data:
                    report.name = data["summary"].get("name", report.name)
                    continue
                report.add(CaseRecord.from_dict(data))
        logger.info(f"Loaded {len(report)} records from {path}")
        return report


__all__ = ["CSV_COLUMNS", "CaseRecord", "Report"]
