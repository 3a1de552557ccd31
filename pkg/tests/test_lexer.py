import pytest

from cxxrefactor.errors import LexError
from cxxrefactor.lexer import (
    TokenKind,
    code_tokens,
    identifiers_in,
    join_tokens,
    strip_preprocessor,
    substitute_identifiers,
    tokenize,
)


def kinds_and_texts(tokens):
    return [(t.kind, t.text) for t in tokens]


def test_declaration_tokens():
    toks = tokenize("double PI = 3.14159;")
    assert kinds_and_texts(toks) == [
        (TokenKind.KEYWORD, "double"),
        (TokenKind.IDENTIFIER, "PI"),
        (TokenKind.PUNCTUATOR, "="),
        (TokenKind.LITERAL, "3.14159"),
        (TokenKind.PUNCTUATOR, ";"),
    ]


def test_empty_source():
    assert tokenize("") == []


def test_comment_then_code():
    toks = tokenize("/* x */ int a;")
    assert toks[0].kind is TokenKind.COMMENT
    assert [t.text for t in toks[1:]] == ["int", "a", ";"]


def test_locations_are_one_based_and_inclusive():
    toks = tokenize("int\n  value = 10;", "f.cpp")
    value = toks[1]
    assert (value.location.start_line, value.location.start_column) == (2, 3)
    assert (value.location.end_line, value.location.end_column) == (2, 7)
    assert value.location.file_id == "f.cpp"


def test_multiline_comment_location():
    tok = tokenize("/* a\n b */")[0]
    assert tok.location.start_line == 1 and tok.location.end_line == 2
    assert tok.location.end_column == 5  # " b */" ends in column 5


def test_longest_punctuator_wins():
    assert [t.text for t in tokenize("a<<=b->c::d")] == ["a", "<<=", "b", "->", "c", "::", "d"]


@pytest.mark.parametrize("src", ['"abc', "'a", "/* never closed", 'R"x(raw'])
def test_unterminated_literals_and_comments(src):
    with pytest.raises(LexError) as info:
        tokenize(src, "bad.cpp")
    assert info.value.line == 1
    assert "bad.cpp:1:" in str(info.value)


def test_unexpected_character():
    with pytest.raises(LexError, match="unexpected character"):
        tokenize("int a = 1 @ 2;")


def test_string_forms():
    toks = tokenize(r'auto s = u8"h\"i"; auto r = R"d(a)"b)d"; char c = L' + "'x';")
    lits = [t.text for t in toks if t.kind is TokenKind.LITERAL]
    assert lits == ['u8"h\\"i"', 'R"d(a)"b)d"', "L'x'"]


def test_numbers():
    lits = [t.text for t in tokenize("0x1F 1'000 2.5e-3f .5 42ul") if t.kind is TokenKind.LITERAL]
    assert lits == ["0x1F", "1'000", "2.5e-3f", ".5", "42ul"]


def test_preprocessor_with_continuation():
    toks = tokenize("#define X \\\n  1\nint x;")
    assert toks[0].kind is TokenKind.PREPROCESSOR
    assert toks[1].text == "int" and toks[1].line == 3


def test_hash_inside_line_is_not_a_directive():
    toks = tokenize("a # b")
    assert [t.kind for t in toks] == [TokenKind.IDENTIFIER, TokenKind.PUNCTUATOR,
                                      TokenKind.IDENTIFIER]


def test_strip_preprocessor_keeps_lines():
    stripped = strip_preprocessor(tokenize("#include <cmath>\nint x;"))
    assert [t.text for t in stripped] == ["int", "x", ";"]
    assert all(t.line == 2 for t in stripped)


def test_strip_preprocessor_edge_cases():
    plain = tokenize("int x;")
    assert strip_preprocessor(plain) == plain
    assert strip_preprocessor(tokenize("#pragma once\n#include <a>")) == []


def test_code_tokens_drop_comments():
    assert [t.text for t in code_tokens(tokenize("int /*c*/ a; // d"))] == ["int", "a", ";"]


def test_join_tokens_canonical_spacing():
    texts = [t.text for t in code_tokens(tokenize("std :: cout << f ( a , b ) ;"))]
    assert join_tokens(texts) == "std::cout << f(a,b)"


def test_identifiers_and_substitution():
    assert identifiers_in("return PI * r * r") == ["PI", "r", "r"]
    assert substitute_identifiers("return PI * r * r", {"r": "radius"}) == \
        "return PI * radius * radius"
    assert substitute_identifiers("x.r + r", {}) == "x.r + r"
