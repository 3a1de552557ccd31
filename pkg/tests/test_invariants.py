"""Structural invariants of parsed models, checked on every fixture file."""

import pytest

from cxxrefactor.parser import parse_file

from conftest import all_fixture_files, read


def slice_of(src: str, loc) -> str:
    lines = src.splitlines()
    if loc.start_line == loc.end_line:
        return lines[loc.start_line - 1][loc.start_column - 1:loc.end_column]
    parts = [lines[loc.start_line - 1][loc.start_column - 1:]]
    parts += lines[loc.start_line:loc.end_line - 1]
    parts.append(lines[loc.end_line - 1][:loc.end_column])
    return "\n".join(parts)


FILES = all_fixture_files()


@pytest.mark.parametrize("path", FILES, ids=lambda p: f"{p.parent.name}/{p.name}")
def test_locations_contain_names(path):
    src = read(path)
    model = parse_file(path)
    for cls in model.classes:
        if not cls.is_artificial:
            assert cls.simple_name in slice_of(src, cls.location)
        for attr in cls.attributes:
            assert attr.name in slice_of(src, attr.location)
        for op in cls.operations:
            assert op.name in slice_of(src, op.location)
            for p in op.parameters:
                assert p.name in slice_of(src, p.location)


@pytest.mark.parametrize("path", FILES, ids=lambda p: f"{p.parent.name}/{p.name}")
def test_statement_nesting_and_shape(path):
    model = parse_file(path)
    for cls in model.classes:
        for op in cls.operations:
            if op.is_constructor:
                assert op.return_type is None
            assert [p.position for p in op.parameters] == list(range(len(op.parameters)))
            if op.body is None:
                continue
            assert op.location.contains(op.body.location)
            for stmt in op.body.walk():
                if stmt.is_leaf:
                    assert stmt.children == () and stmt.normalized_text
                else:
                    assert stmt.normalized_text == ""
                for child in stmt.children:
                    assert stmt.location.contains(child.location)


@pytest.mark.parametrize("path", FILES, ids=lambda p: f"{p.parent.name}/{p.name}")
def test_parse_is_deterministic(path):
    assert parse_file(path) == parse_file(path)
