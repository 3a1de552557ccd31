"""Comparing the C++ files of two git revisions, one file pair at a time."""

from __future__ import annotations

import fnmatch
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .report import ComparisonReport, compare_sources

CXX_SUFFIXES = (".cpp", ".cc", ".cxx", ".c++", ".hpp", ".hh", ".hxx", ".h", ".h++", ".ipp")


class GitError(Exception):
    """The repository or one of the revisions cannot be used."""


@dataclass
class CommitComparison:
    rev_before: str
    rev_after: str
    reports: list[ComparisonReport] = field(default_factory=list)
    added_files: list[str] = field(default_factory=list)
    removed_files: list[str] = field(default_factory=list)


def _git(repo: Path, *args: str) -> str:
    try:
        proc = subprocess.run(["git", "-C", str(repo), *args], capture_output=True, check=False)
    except FileNotFoundError as exc:
        raise GitError("git executable not found") from exc
    if proc.returncode != 0:
        msg = proc.stderr.decode("utf-8", "replace").strip() or f"git {args[0]} failed"
        raise GitError(msg)
    return proc.stdout.decode("utf-8", "replace")


def resolve_revision(repo: Path, rev: str) -> str:
    try:
        return _git(repo, "rev-parse", "--verify", "--quiet", f"{rev}^{{commit}}").strip()
    except GitError as exc:
        raise GitError(f"cannot resolve revision {rev!r}") from exc


def list_cxx_files(repo: Path, commit: str, path_filter: Optional[str] = None) -> set[str]:
    out = _git(repo, "ls-tree", "-r", "--name-only", "-z", commit)
    names = {n for n in out.split("\0") if n and n.lower().endswith(CXX_SUFFIXES)}
    if path_filter:
        names = {n for n in names if fnmatch.fnmatch(n, path_filter)}
    return names


def read_blob(repo: Path, commit: str, path: str) -> str:
    return _git(repo, "show", f"{commit}:{path}")


def compare_commits(repo_path: str | Path, rev_before: str, rev_after: str,
                    path_filter: Optional[str] = None,
                    report_behavior: bool = True) -> CommitComparison:
    """Compare every C++ file present in both revisions, paired by identical path."""
    repo = Path(repo_path)
    if not repo.is_dir():
        raise GitError(f"not a directory: {repo}")
    try:
        _git(repo, "rev-parse", "--git-dir")
    except GitError as exc:
        raise GitError(f"not a git repository: {repo}") from exc
    old = resolve_revision(repo, rev_before)
    new = resolve_revision(repo, rev_after)
    old_files = list_cxx_files(repo, old, path_filter)
    new_files = list_cxx_files(repo, new, path_filter)
    result = CommitComparison(rev_before, rev_after,
                              added_files=sorted(new_files - old_files),
                              removed_files=sorted(old_files - new_files))
    for path in sorted(old_files & new_files):
        before = read_blob(repo, old, path)
        after = read_blob(repo, new, path)
        result.reports.append(compare_sources(
            before, after, f"{rev_before}:{path}", f"{rev_after}:{path}",
            report_behavior=report_behavior))
    return result
