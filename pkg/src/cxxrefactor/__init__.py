"""Refactoring detection for a subset of C++.

Two versions of a source file are parsed into language-neutral code models,
the models are aligned, and the alignment is mined for refactorings and for
behavior-altering edits.
"""

__version__ = "0.1.0"

from .errors import (
    AnalysisError,
    HarnessError,
    LexError,
    ModelFormatError,
    ParseError,
    UnsupportedConstructError,
)
from .model import CodeModel, deserialize_model, lookup_class, serialize_model
from .parser import parse, parse_file
from .matcher import match_models
from .detectors import detect, RefactoringType
from .behavior import report_behavior_changes
from .report import ComparisonReport, compare_sources

__all__ = [
    "AnalysisError",
    "CodeModel",
    "ComparisonReport",
    "HarnessError",
    "LexError",
    "ModelFormatError",
    "ParseError",
    "RefactoringType",
    "UnsupportedConstructError",
    "compare_sources",
    "deserialize_model",
    "detect",
    "lookup_class",
    "match_models",
    "parse",
    "parse_file",
    "report_behavior_changes",
    "serialize_model",
]
