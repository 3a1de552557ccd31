"""Tokenizer for C++ source text, plus the canonical token-joining used for statement text."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

from .errors import LexError
from .model import SourceLocation


class TokenKind(str, Enum):
    IDENTIFIER = "identifier"
    KEYWORD = "keyword"
    LITERAL = "literal"
    PUNCTUATOR = "punctuator"
    COMMENT = "comment"
    PREPROCESSOR = "preprocessor"


KEYWORDS = frozenset("""
    alignas alignof and and_eq asm auto bitand bitor bool break case catch char char8_t
    char16_t char32_t class compl concept const consteval constexpr constinit const_cast
    continue co_await co_return co_yield decltype default delete do double dynamic_cast
    else enum explicit export extern false float for friend goto if inline int long mutable
    namespace new noexcept not not_eq nullptr operator or or_eq private protected public
    register reinterpret_cast requires return short signed sizeof static static_assert
    static_cast struct switch template this thread_local throw true try typedef typeid
    typename union unsigned using virtual void volatile wchar_t while xor xor_eq
""".split())

# longest first so that the alternation below is greedy
PUNCTUATORS = sorted("""
    >>= <<= <=> ->* ... :: -> ++ -- << >> <= >= == != && || += -= *= /= %= &= |= ^= .*
    { } [ ] ( ) ; : , . ? ~ ! + - * / % ^ & | = < > #
""".split(), key=len, reverse=True)

_PUNCT_RE = re.compile("|".join(re.escape(p) for p in PUNCTUATORS))
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUMBER_RE = re.compile(
    r"""(?:0[xX][0-9a-fA-F']+(?:\.[0-9a-fA-F']*)?(?:[pP][+-]?\d+)?
        |0[bB][01']+
        |(?:\d[\d']*\.?[\d']*|\.\d[\d']*)(?:[eE][+-]?\d+)?)
        [A-Za-z_0-9]*""",
    re.VERBOSE,
)
_STRING_PREFIX_RE = re.compile(r"(?:u8|u|U|L)?R?(?=[\"'])")


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    location: SourceLocation

    @property
    def line(self) -> int:
        return self.location.start_line

    def is_punct(self, *texts: str) -> bool:
        return self.kind is TokenKind.PUNCTUATOR and self.text in texts

    def is_keyword(self, *texts: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.text in texts


class _Scanner:
    def __init__(self, source: str, file_id: str):
        self.src = source
        self.file_id = file_id
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: list[Token] = []
        self.line_has_code = False

    def error(self, message: str, line: int, col: int) -> LexError:
        return LexError(message, self.file_id, line, col)

    def advance_to(self, end: int) -> tuple[int, int]:
        """Move to `end`, returning the (line, column) of the last consumed character."""
        last_line, last_col = self.line, self.col
        while self.pos < end:
            ch = self.src[self.pos]
            last_line, last_col = self.line, self.col
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1
        return last_line, last_col

    def emit(self, kind: TokenKind, end: int) -> None:
        start_line, start_col = self.line, self.col
        text = self.src[self.pos:end]
        end_line, end_col = self.advance_to(end)
        self.tokens.append(Token(kind, text, SourceLocation(
            self.file_id, start_line, start_col, end_line, end_col)))
        if kind is not TokenKind.COMMENT:
            self.line_has_code = True

    def run(self) -> list[Token]:
        src = self.src
        n = len(src)
        while self.pos < n:
            ch = src[self.pos]
            if ch == "\n":
                self.line_has_code = False
                self.advance_to(self.pos + 1)
                continue
            if ch in " \t\r\f\v":
                self.advance_to(self.pos + 1)
                continue
            if src.startswith("//", self.pos):
                end = src.find("\n", self.pos)
                self.emit(TokenKind.COMMENT, n if end < 0 else end)
                continue
            if src.startswith("/*", self.pos):
                end = src.find("*/", self.pos + 2)
                if end < 0:
                    raise self.error("unterminated comment", self.line, self.col)
                self.emit(TokenKind.COMMENT, end + 2)
                continue
            if ch == "#" and not self.line_has_code:
                self.emit(TokenKind.PREPROCESSOR, self._directive_end())
                self.line_has_code = False
                continue
            m = _STRING_PREFIX_RE.match(src, self.pos)
            if m is not None and (ch in "\"'" or m.end() > self.pos):
                self.emit(TokenKind.LITERAL, self._quoted_end(m.end(), "R" in m.group(0)))
                continue
            if ch.isdigit() or (ch == "." and self.pos + 1 < n and src[self.pos + 1].isdigit()):
                m = _NUMBER_RE.match(src, self.pos)
                self.emit(TokenKind.LITERAL, m.end())
                continue
            m = _IDENT_RE.match(src, self.pos)
            if m is not None:
                kind = TokenKind.KEYWORD if m.group(0) in KEYWORDS else TokenKind.IDENTIFIER
                self.emit(kind, m.end())
                continue
            m = _PUNCT_RE.match(src, self.pos)
            if m is not None:
                self.emit(TokenKind.PUNCTUATOR, m.end())
                continue
            raise self.error(f"unexpected character {ch!r}", self.line, self.col)
        return self.tokens

    def _directive_end(self) -> int:
        """End of a preprocessor directive, following backslash continuations."""
        src = self.src
        i = self.pos
        while True:
            end = src.find("\n", i)
            if end < 0:
                return len(src)
            if src[i:end].rstrip("\r").endswith("\\"):
                i = end + 1
                continue
            return end

    def _quoted_end(self, quote_pos: int, raw: bool) -> int:
        src = self.src
        quote = src[quote_pos]
        if raw:
            open_paren = src.find("(", quote_pos)
            if open_paren < 0:
                raise self.error("malformed raw string literal", self.line, self.col)
            delim = src[quote_pos + 1:open_paren]
            close = src.find(")" + delim + '"', open_paren)
            if close < 0:
                raise self.error("unterminated raw string literal", self.line, self.col)
            end = close + len(delim) + 2
        else:
            i = quote_pos + 1
            while True:
                if i >= len(src) or src[i] == "\n":
                    kind = "string" if quote == '"' else "character"
                    raise self.error(f"unterminated {kind} literal", self.line, self.col)
                if src[i] == "\\":
                    i += 2
                    continue
                if src[i] == quote:
                    break
                i += 1
            end = i + 1
        # user-defined literal suffix
        m = _IDENT_RE.match(src, end)
        return m.end() if m and src[end] == "_" else end


def tokenize(source: str, file_id: str = "") -> list[Token]:
    """Split `source` into tokens with exact 1-based, inclusive locations.

    Comments and preprocessor directives are kept as tokens of their own kind.
    """
    return _Scanner(source, file_id).run()


def strip_preprocessor(tokens: Iterable[Token]) -> list[Token]:
    return [t for t in tokens if t.kind is not TokenKind.PREPROCESSOR]


def code_tokens(tokens: Iterable[Token]) -> list[Token]:
    return [t for t in tokens if t.kind not in (TokenKind.PREPROCESSOR, TokenKind.COMMENT)]


# ---------------------------------------------------------------------------
# Canonical text
# ---------------------------------------------------------------------------

TIGHT = frozenset({"::", "(", ")", ",", ".", "->", "[", "]"})


def join_tokens(texts: Iterable[str]) -> str:
    """Single spaces between tokens, none around the tight punctuators, no trailing ';'."""
    parts: list[str] = []
    prev = None
    for text in texts:
        if prev is not None and prev not in TIGHT and text not in TIGHT:
            parts.append(" ")
        parts.append(text)
        prev = text
    while parts and parts[-1] == ";":
        parts.pop()
        if parts and parts[-1] == " ":
            parts.pop()
    return "".join(parts)


@lru_cache(maxsize=65536)
def _text_tokens(text: str) -> tuple[tuple[str, bool], ...]:
    return tuple((t.text, t.kind is TokenKind.IDENTIFIER) for t in code_tokens(tokenize(text)))


def identifiers_in(text: str) -> list[str]:
    return [t for t, is_ident in _text_tokens(text) if is_ident]


def substitute_identifiers(text: str, mapping: dict[str, str]) -> str:
    """Rename identifier tokens of canonical `text` according to `mapping`."""
    if not mapping or not text:
        return text
    return join_tokens(mapping.get(t, t) if is_ident else t for t, is_ident in _text_tokens(text))
