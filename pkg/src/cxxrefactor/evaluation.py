"""Precision/recall evaluation over a corpus of seeded before/after fixtures."""

from __future__ import annotations

import json
import time
import warnings
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .detectors import RefactoringType
from .errors import AnalysisError, HarnessError
from .report import compare_sources

# one fixture per row, in table order
TABLE_ROWS = (
    RefactoringType.MOVE_CLASS, RefactoringType.EXTRACT_METHOD,
    RefactoringType.CHANGE_VARIABLE_TYPE, RefactoringType.CHANGE_PARAMETER_TYPE,
    RefactoringType.RENAME_PARAMETER, RefactoringType.CHANGE_RETURN_TYPE,
    RefactoringType.RENAME_METHOD, RefactoringType.PULL_UP_METHOD, RefactoringType.MOVE_METHOD,
    RefactoringType.RENAME_VARIABLE, RefactoringType.MOVE_FIELD,
    RefactoringType.CHANGE_FIELD_TYPE, RefactoringType.EXTRACT_AND_MOVE_METHOD,
    RefactoringType.RENAME_FIELD, RefactoringType.PULL_UP_FIELD, RefactoringType.INLINE_METHOD,
)

Finding = tuple[str, tuple[tuple[str, str], ...]]


def finding_key(rtype: str, detail: dict) -> Finding:
    return rtype, tuple(sorted((str(k), str(v)) for k, v in detail.items()))


@dataclass(frozen=True)
class FixtureManifest:
    fixture_id: str
    before_file: Path
    after_file: Path
    expected: tuple[Finding, ...]
    notes: str = ""


@dataclass
class FixtureResult:
    fixture_id: str
    expected: Counter
    detected: Counter

    @property
    def true_positives(self) -> Counter:
        return self.expected & self.detected

    @property
    def false_positives(self) -> Counter:
        return self.detected - self.expected

    @property
    def false_negatives(self) -> Counter:
        return self.expected - self.detected

    @property
    def recall(self) -> Optional[float]:
        n = sum(self.expected.values())
        return sum(self.true_positives.values()) / n if n else None

    @property
    def passed(self) -> bool:
        return not self.false_positives and not self.false_negatives


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def _f1(p: Optional[float], r: Optional[float]) -> Optional[float]:
    if p is None or r is None:
        return None
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


@dataclass
class TypeRow:
    type: str
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> Optional[float]:
        return _ratio(self.tp, self.tp + self.fp)

    @property
    def recall(self) -> Optional[float]:
        return _ratio(self.tp, self.tp + self.fn)


@dataclass
class EvalResult:
    fixtures: list[FixtureResult] = field(default_factory=list)
    elapsed_seconds: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def _total(self, attr: str) -> int:
        return sum(sum(getattr(f, attr).values()) for f in self.fixtures)

    @property
    def true_positives(self) -> int:
        return self._total("true_positives")

    @property
    def false_positives(self) -> int:
        return self._total("false_positives")

    @property
    def false_negatives(self) -> int:
        return self._total("false_negatives")

    @property
    def precision(self) -> Optional[float]:
        return _ratio(self.true_positives, self.true_positives + self.false_positives)

    @property
    def recall(self) -> Optional[float]:
        return _ratio(self.true_positives, self.true_positives + self.false_negatives)

    @property
    def f1(self) -> Optional[float]:
        return _f1(self.precision, self.recall)

    def per_type(self) -> list[TypeRow]:
        """One row per table type, then any other type that showed up."""
        rows = {t.value: TypeRow(t.value) for t in TABLE_ROWS}
        for f in self.fixtures:
            for attr, col in (("true_positives", "tp"), ("false_positives", "fp"),
                              ("false_negatives", "fn")):
                for (rtype, _), n in getattr(f, attr).items():
                    row = rows.setdefault(rtype, TypeRow(rtype))
                    setattr(row, col, getattr(row, col) + n)
        return list(rows.values())

    def to_dict(self) -> dict:
        def fmt(c: Counter) -> list:
            return [{"type": t, "detail": dict(d), "count": n} for (t, d), n in sorted(c.items())]
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "elapsedSeconds": round(self.elapsed_seconds, 3),
            "warnings": list(self.warnings),
            "fixtures": [
                {"id": f.fixture_id, "passed": f.passed,
                 "truePositives": fmt(f.true_positives),
                 "falsePositives": fmt(f.false_positives),
                 "falseNegatives": fmt(f.false_negatives)}
                for f in self.fixtures
            ],
            "perType": [
                {"type": r.type, "tp": r.tp, "fp": r.fp, "fn": r.fn,
                 "precision": r.precision, "recall": r.recall}
                for r in self.per_type()
            ],
        }

    def to_text(self) -> str:
        def num(x: Optional[float]) -> str:
            return "n/a" if x is None else f"{x:.2f}"
        width = max([len(r.type) for r in self.per_type()] + [len("Refactoring type")])
        out = [f"{'Refactoring type':<{width}}  TP  FP  FN  precision  recall"]
        for r in self.per_type():
            out.append(f"{r.type:<{width}}  {r.tp:>2}  {r.fp:>2}  {r.fn:>2}  "
                       f"{num(r.precision):>9}  {num(r.recall):>6}")
        for f in self.fixtures:
            if not f.passed:
                missed = ", ".join(t for t, _ in sorted(f.false_negatives)) or "-"
                extra = ", ".join(t for t, _ in sorted(f.false_positives)) or "-"
                out.append(f"fixture {f.fixture_id}: missed [{missed}] unexpected [{extra}]")
        out += [f"warning: {w}" for w in self.warnings]
        out.append(f"precision {num(self.precision)}  recall {num(self.recall)}  "
                   f"F1 {num(self.f1)}  ({len(self.fixtures)} fixtures, "
                   f"{self.elapsed_seconds:.2f}s)")
        return "\n".join(out)


def bundled_corpus() -> Path:
    return Path(str(resources.files("cxxrefactor") / "corpus"))


def load_manifest(path: Path) -> FixtureManifest:
    fixture = path.parent.name
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise HarnessError(f"{fixture}: unreadable manifest: {exc}", [fixture]) from exc
    if not isinstance(doc, dict):
        raise HarnessError(f"{fixture}: manifest must be an object", [fixture])
    missing = [k for k in ("id", "before", "after", "expected") if k not in doc]
    if missing:
        raise HarnessError(f"{fixture}: manifest lacks {', '.join(missing)}", [fixture])
    known = {t.value for t in RefactoringType}
    expected = []
    if not isinstance(doc["expected"], list):
        raise HarnessError(f"{fixture}: 'expected' must be a list", [fixture])
    for i, entry in enumerate(doc["expected"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("detail", {}), dict):
            raise HarnessError(f"{fixture}: expected[{i}] is malformed", [fixture])
        if entry.get("type") not in known:
            raise HarnessError(f"{fixture}: expected[{i}] has unknown type "
                               f"{entry.get('type')!r}", [fixture])
        expected.append(finding_key(entry["type"], entry.get("detail", {})))
    before = path.parent / str(doc["before"])
    after = path.parent / str(doc["after"])
    for p in (before, after):
        if not p.is_file():
            raise HarnessError(f"{fixture}: missing file {p.name}", [fixture])
    return FixtureManifest(str(doc["id"]), before, after, tuple(expected),
                           str(doc.get("notes", "")))


def load_corpus(corpus_dir: Path) -> list[FixtureManifest]:
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise HarnessError(f"corpus directory not found: {corpus_dir}")
    manifests, problems = [], []
    for path in sorted(corpus_dir.glob("*/manifest.json")):
        try:
            manifests.append(load_manifest(path))
        except HarnessError as exc:
            problems.append((path.parent.name, str(exc)))
    if problems:
        raise HarnessError("invalid fixtures: " + "; ".join(m for _, m in problems),
                           [f for f, _ in problems])
    return manifests


def evaluate_fixture(manifest: FixtureManifest) -> FixtureResult:
    report = compare_sources(manifest.before_file.read_text(encoding="utf-8"),
                             manifest.after_file.read_text(encoding="utf-8"),
                             manifest.before_file.name, manifest.after_file.name,
                             report_behavior=False)
    detected = Counter(finding_key(r.type.value, r.detail) for r in report.refactorings)
    return FixtureResult(manifest.fixture_id, Counter(manifest.expected), detected)


def run_eval(corpus_dir: Optional[Path] = None) -> EvalResult:
    """Evaluate every fixture under `corpus_dir` (the bundled corpus by default)."""
    start = time.perf_counter()
    manifests = load_corpus(Path(corpus_dir) if corpus_dir is not None else bundled_corpus())
    result = EvalResult()
    if not manifests:
        msg = "corpus contains no fixtures; metrics are undefined"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        result.warnings.append(msg)
    for m in manifests:
        try:
            result.fixtures.append(evaluate_fixture(m))
        except AnalysisError as exc:
            raise HarnessError(f"{m.fixture_id}: {exc}", [m.fixture_id]) from exc
    result.elapsed_seconds = time.perf_counter() - start
    return result
