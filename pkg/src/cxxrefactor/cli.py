"""Command-line interface.

Exit status: 0 on success, 1 on usage errors (bad arguments, unreadable
files, unusable git revisions), 2 when analysis fails (lexing, parsing,
unsupported constructs, invalid evaluation corpus).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .errors import AnalysisError, HarnessError
from .evaluation import run_eval
from .gitops import GitError, compare_commits
from .model import serialize_model
from .parser import parse
from .report import compare_sources

EXIT_OK, EXIT_USAGE, EXIT_ANALYSIS = 0, 1, 2

FORMAT = click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
                      show_default=True, help="Output format.")
BEHAVIOR = click.option("--report-behavior/--no-report-behavior", default=True,
                        show_default=True, help="Also report behavior-altering changes.")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise click.UsageError(f"cannot read {path}: {exc}") from exc


@click.group()
@click.version_option(__version__, prog_name="cxxrefactor")
def cli() -> None:
    """Detect refactorings between two versions of a C++ source file."""


@cli.command("compare-files")
@click.argument("before_path")
@click.argument("after_path")
@FORMAT
@BEHAVIOR
def compare_files_cmd(before_path: str, after_path: str, fmt: str,
                      report_behavior: bool) -> None:
    """Compare BEFORE_PATH with AFTER_PATH."""
    report = compare_sources(_read(before_path), _read(after_path), before_path, after_path,
                             report_behavior=report_behavior)
    click.echo(report.to_json() if fmt == "json" else report.to_text())


@cli.command("compare-commits")
@click.argument("repo_path")
@click.argument("rev_before")
@click.argument("rev_after")
@click.option("--path", "path_filter", default=None, metavar="GLOB",
              help="Only compare files whose repository path matches GLOB.")
@FORMAT
@BEHAVIOR
def compare_commits_cmd(repo_path: str, rev_before: str, rev_after: str,
                        path_filter: Optional[str], fmt: str, report_behavior: bool) -> None:
    """Compare the C++ files shared by two revisions of a git repository."""
    try:
        result = compare_commits(repo_path, rev_before, rev_after, path_filter, report_behavior)
    except GitError as exc:
        raise click.UsageError(str(exc)) from exc
    if fmt == "json":
        doc = {"revBefore": rev_before, "revAfter": rev_after,
               "reports": [r.to_dict() for r in result.reports],
               "addedFiles": result.added_files, "removedFiles": result.removed_files,
               "toolVersion": __version__}
        click.echo(json.dumps(doc, indent=2, ensure_ascii=False))
        return
    blocks = [r.to_text() for r in result.reports]
    blocks += [f"added file (not analyzed): {p}" for p in result.added_files]
    blocks += [f"removed file (not analyzed): {p}" for p in result.removed_files]
    if blocks:
        click.echo("\n".join(blocks))


@cli.command("dump-model")
@click.argument("path")
def dump_model_cmd(path: str) -> None:
    """Print the JSON code model of PATH."""
    click.echo(serialize_model(parse(_read(path), path)).decode("utf-8").rstrip("\n"))


@cli.command("eval")
@click.argument("corpus_dir", required=False)
@FORMAT
def eval_cmd(corpus_dir: Optional[str], fmt: str) -> None:
    """Evaluate detection on a fixture corpus (the bundled one by default)."""
    result = run_eval(Path(corpus_dir) if corpus_dir else None)
    if fmt == "json":
        click.echo(json.dumps(result.to_dict(), indent=2))
    else:
        click.echo(result.to_text())


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point that maps failures onto the documented exit statuses."""
    try:
        cli.main(args=argv, prog_name="cxxrefactor", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except (AnalysisError, HarnessError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_ANALYSIS
    except click.exceptions.Exit as exc:
        return exc.exit_code
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
