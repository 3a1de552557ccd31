"""Behavior-altering changes left over once refactorings are accounted for."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .detectors import Refactoring
from .matcher import MatchKind, ModelDiff
from .model import OperationDecl, SourceLocation, Statement, StatementKind


class BehaviorKind(str, Enum):
    METHOD_ADDED = "method-added"
    METHOD_REMOVED = "method-removed"
    STATEMENT_MODIFIED = "statement-modified"
    STATEMENT_ADDED = "statement-added"
    STATEMENT_REMOVED = "statement-removed"

    @property
    def in_before_file(self) -> bool:
        return self in (BehaviorKind.METHOD_REMOVED, BehaviorKind.STATEMENT_REMOVED)


@dataclass(frozen=True)
class BehaviorChange:
    kind: BehaviorKind
    location: SourceLocation
    line_span: tuple[int, int]

    @property
    def lines(self) -> range:
        return range(self.line_span[0], self.line_span[1] + 1)

    def describe(self) -> str:
        a, b = self.line_span
        where = f"line {a}" if a == b else f"lines {a}-{b}"
        side = "before" if self.kind.in_before_file else "after"
        return f"{self.kind.value} at {where} ({side})"


def _span(loc: SourceLocation) -> tuple[int, int]:
    return loc.start_line, loc.end_line


def _stmt_span(stmt: Statement) -> tuple[int, int]:
    # a composite is reported by its header line; its children speak for themselves
    if stmt.is_leaf:
        return _span(stmt.location)
    return stmt.location.start_line, stmt.location.start_line


def _change(kind: BehaviorKind, loc: SourceLocation, span: tuple[int, int]) -> BehaviorChange:
    return BehaviorChange(kind, loc, span)


def _unmatched(op: OperationDecl, mapped: set[int]) -> Iterable[Statement]:
    if op.body is None:
        return ()
    # a bare block has no header of its own; its contents are reported individually
    return [s for s in op.body.walk()
            if s.kind is not StatementKind.BLOCK and id(s) not in mapped]


def report_behavior_changes(diff: ModelDiff, findings: list[Refactoring]) -> list[BehaviorChange]:
    """Structural edits of `diff` not explained by any of `findings`.

    Changes located in the after file are dropped when they touch any line a
    finding claims. Changes located in the before file are dropped when a
    finding explains the removed element.
    """
    claimed: set[int] = set()
    for f in findings:
        claimed.update(f.affected_lines_after)
    explained = [loc for f in findings for loc in f.explained_before]

    changes: list[BehaviorChange] = []
    for cd in diff.class_diffs:
        changes += [_change(BehaviorKind.METHOD_ADDED, op.location, _span(op.location))
                    for op in cd.added_operations]
        changes += [_change(BehaviorKind.METHOD_REMOVED, op.location, _span(op.location))
                    for op in cd.removed_operations]
        for om in cd.operation_matches:
            if om.body is None:
                continue
            for m in om.body.mappings:
                if m.match_kind is MatchKind.MODIFIED:
                    changes.append(_change(BehaviorKind.STATEMENT_MODIFIED, m.after.location,
                                           _stmt_span(m.after)))
            mapped_b = {id(m.before) for m in om.body.mappings}
            mapped_a = {id(m.after) for m in om.body.mappings}
            changes += [_change(BehaviorKind.STATEMENT_REMOVED, s.location, _stmt_span(s))
                        for s in _unmatched(om.before, mapped_b)]
            changes += [_change(BehaviorKind.STATEMENT_ADDED, s.location, _stmt_span(s))
                        for s in _unmatched(om.after, mapped_a)]
    for cls in diff.added_classes:
        changes += [_change(BehaviorKind.METHOD_ADDED, op.location, _span(op.location))
                    for op in cls.operations]
    for cls in diff.removed_classes:
        changes += [_change(BehaviorKind.METHOD_REMOVED, op.location, _span(op.location))
                    for op in cls.operations]

    kept = []
    for c in changes:
        if c.kind.in_before_file:
            if any(loc.contains(c.location) for loc in explained):
                continue
        elif claimed.intersection(c.lines):
            continue
        kept.append(c)
    kept.sort(key=lambda c: (c.kind.in_before_file, c.line_span, c.kind.value,
                             c.location.start_column))
    return kept
