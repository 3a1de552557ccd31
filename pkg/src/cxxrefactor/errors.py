"""Exception hierarchy shared by the front-end, model I/O and tooling."""

from __future__ import annotations

from typing import Optional


class AnalysisError(Exception):
    """Base class for failures while analyzing a source file.

    The CLI maps every subclass to exit status 2.
    """

    def __init__(self, message: str, file_id: str = "", line: Optional[int] = None,
                 column: Optional[int] = None):
        self.message = message
        self.file_id = file_id
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self) -> str:
        where = self.file_id or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.message}"


class LexError(AnalysisError):
    pass


class ParseError(AnalysisError):
    pass


class UnsupportedConstructError(ParseError):
    """Input uses a construct outside the supported subset (lambdas, nested classes...)."""

    def __init__(self, construct: str, file_id: str = "", line: Optional[int] = None,
                 column: Optional[int] = None):
        self.construct = construct
        super().__init__(f"unsupported construct: {construct}", file_id, line, column)


class ModelFormatError(ValueError):
    """A model interchange document is malformed; `path` names the offending element."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path or '<root>'}: {message}")


class HarnessError(Exception):
    """Invalid or missing fixture manifests in an evaluation corpus."""

    def __init__(self, message: str, fixtures: Optional[list[str]] = None):
        self.fixtures = list(fixtures or [])
        super().__init__(message)
