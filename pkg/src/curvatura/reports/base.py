"""Report value types: verdicts, tables and the assembled run report."""

import math
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class Verdict(BaseModel):
    """One tolerance decision. ``value`` is compared against ``tolerance``."""

    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    model_config = ConfigDict(frozen=True)

    @classmethod
    def at_most(cls, name: str, value: float, tolerance: float, detail: str = "") -> "Verdict":
        value = float(value)
        return cls(
            name=name,
            value=value,
            tolerance=float(tolerance),
            passed=bool(math.isfinite(value) and value <= tolerance),
            detail=detail,
        )

    @classmethod
    def at_least(cls, name: str, value: float, tolerance: float, detail: str = "") -> "Verdict":
        value = float(value)
        return cls(
            name=name,
            value=value,
            tolerance=float(tolerance),
            passed=bool(math.isfinite(value) and value >= tolerance),
            detail=detail,
        )

    @classmethod
    def flag(cls, name: str, passed: bool, detail: str = "") -> "Verdict":
        """A yes/no verdict; value is 1.0 when it holds."""
        return cls(name=name, value=1.0 if passed else 0.0, tolerance=1.0, passed=bool(passed), detail=detail)


class Table(BaseModel):
    """Rows of plottable columns, one row per node, radius or field."""

    columns: List[str]
    rows: List[List[Any]] = Field(default_factory=list)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"Row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append([v if isinstance(v, (str, int)) else float(v) for v in values])


class CheckOutcome(BaseModel):
    """What a single check handler contributes to a report."""

    command: str
    totals: Dict[str, float] = Field(default_factory=dict)
    verdicts: List[Verdict] = Field(default_factory=list)
    tables: Dict[str, Table] = Field(default_factory=dict)

    def table(self, name: str, columns: List[str]) -> Table:
        return self.tables.setdefault(name, Table(columns=columns))


class Report(BaseModel):
    """Self-describing result of one run: the settings used plus every total, verdict and table."""

    command: str
    manifold: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    n: int
    m: int
    ambient: str
    settings: Dict[str, Any] = Field(default_factory=dict)
    totals: Dict[str, float] = Field(default_factory=dict)
    verdicts: List[Verdict] = Field(default_factory=list)
    tables: Dict[str, Table] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(verdict.passed for verdict in self.verdicts)

    @property
    def failures(self) -> List[Verdict]:
        return [verdict for verdict in self.verdicts if not verdict.passed]

    def merge(self, outcome: CheckOutcome) -> None:
        """Fold a handler outcome in, prefixing names with its command under report-all."""
        prefix = "" if outcome.command == self.command else f"{outcome.command}."
        for key, value in outcome.totals.items():
            self.totals[prefix + key] = float(value)
        for verdict in outcome.verdicts:
            self.verdicts.append(verdict.model_copy(update={"name": prefix + verdict.name}))
        for key, table in outcome.tables.items():
            self.tables[prefix + key] = table

    def summary(self, include_tables: bool = True) -> Dict[str, Any]:
        document = self.model_dump(mode="json")
        document["passed"] = self.passed
        if not include_tables:
            document.pop("tables")
        return document

    def verdict(self, name: str) -> Optional[Verdict]:
        return next((v for v in self.verdicts if v.name == name), None)
