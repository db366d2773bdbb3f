"""File writers: a JSON document, or per-table CSV files beside a JSON summary."""

import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional, TextIO

from ..errors import UsageError
from ..interfaces import ReportWriter
from .base import Report

logger = logging.getLogger(__name__)


def render_json(document: Any) -> str:
    return json.dumps(document, indent=2, sort_keys=True)


class JsonReportWriter(ReportWriter):
    """Writes the full report as JSON to ``path``, or to ``stream`` (stdout) without one."""

    def __init__(self, path: Optional[Path] = None, stream: Optional[TextIO] = None) -> None:
        self.path = Path(path) if path is not None else None
        self.stream = stream

    def write(self, report: Report) -> Optional[Path]:
        text = render_json(report.summary())
        if self.path is None:
            (self.stream or sys.stdout).write(text + "\n")
            return None
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(text + "\n", encoding="utf-8")
        except Exception as e:
            raise RuntimeError(f"Failed to write report {str(self.path)!r}: {e}") from e
        logger.info("Report written to %s", self.path)
        return self.path


class CsvReportWriter(ReportWriter):
    """
    Writes ``<stem>.<table>.csv`` for every table and ``<stem>.json`` with the
    verdicts and totals. Floats keep their repr so values round-trip exactly.
    """

    def __init__(self, path: Optional[Path]) -> None:
        if path is None:
            raise UsageError("CSV output needs an output path (--out)")
        self.path = Path(path)

    def table_path(self, name: str) -> Path:
        return self.path.with_name(f"{self.path.stem}.{name}.csv")

    @staticmethod
    def _cell(value: Any) -> str:
        return repr(value) if isinstance(value, float) else str(value)

    def write(self, report: Report) -> List[Path]:
        written: List[Path] = []
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            summary = self.path.with_suffix(".json")
            summary.write_text(render_json(report.summary(include_tables=False)) + "\n", encoding="utf-8")
            written.append(summary)
            for name in sorted(report.tables):
                table = report.tables[name]
                target = self.table_path(name)
                with open(target, "w", encoding="utf-8", newline="") as f:
                    writer = csv.writer(f, lineterminator="\n")
                    writer.writerow(table.columns)
                    for row in table.rows:
                        writer.writerow([self._cell(v) for v in row])
                written.append(target)
        except Exception as e:
            raise RuntimeError(f"Failed to write report {str(self.path)!r}: {e}") from e
        logger.info("Report written to %d files next to %s", len(written), self.path)
        return written
