"""End-to-end comparison of two source versions and rendering of the result."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .behavior import BehaviorChange, report_behavior_changes
from .detectors import Refactoring, detect
from .matcher import ModelDiff, match_models
from .parser import parse


@dataclass
class ComparisonReport:
    before_file: str
    after_file: str
    refactorings: list[Refactoring] = field(default_factory=list)
    behavior_changes: list[BehaviorChange] = field(default_factory=list)
    tool_version: str = __version__
    diff: Optional[ModelDiff] = field(default=None, repr=False, compare=False)

    @property
    def is_empty(self) -> bool:
        return not self.refactorings and not self.behavior_changes

    def to_dict(self) -> dict:
        return {
            "before": self.before_file,
            "after": self.after_file,
            "refactorings": [
                {"type": r.type.value, "description": r.description,
                 "affectedLines": list(r.affected_lines_after)}
                for r in self.refactorings
            ],
            "behaviorChanges": [
                {"kind": c.kind.value, "lines": list(c.line_span)}
                for c in self.behavior_changes
            ],
            "toolVersion": self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        out = [f"--- {self.before_file}", f"+++ {self.after_file}"]
        for r in self.refactorings:
            lines = ",".join(str(n) for n in r.affected_lines_after)
            out.append(f"{r.label}\t{r.description}\tlines {lines}")
        for c in self.behavior_changes:
            out.append(f"Behavior change\t{c.describe()}")
        if self.is_empty:
            out.append("no changes detected")
        return "\n".join(out)


def compare_sources(before_source: str, after_source: str, before_id: str = "before",
                    after_id: str = "after", report_behavior: bool = True) -> ComparisonReport:
    """Parse, match, detect and optionally report behavior changes for one file pair."""
    before = parse(before_source, before_id)
    after = parse(after_source, after_id)
    diff = match_models(before, after)
    findings = detect(diff, before, after)
    changes = report_behavior_changes(diff, findings) if report_behavior else []
    return ComparisonReport(before_id, after_id, findings, changes, diff=diff)
