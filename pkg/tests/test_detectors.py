import pytest

from cxxrefactor.detectors import RefactoringType as T
from cxxrefactor.detectors import call_arguments, detect
from cxxrefactor.evaluation import bundled_corpus
from cxxrefactor.matcher import match_models
from cxxrefactor.parser import parse

from conftest import DATA, read

TABLE = [
    (T.RENAME_CLASS, None, (1,)),
    (T.ADD_ATTRIBUTE_MODIFIER, "const", (2,)),
    (T.ADD_ATTRIBUTE_MODIFIER, "inline", (2,)),
    (T.ADD_ATTRIBUTE_MODIFIER, "static", (2,)),
    (T.ADD_METHOD_MODIFIER, "static", (4,)),
    (T.RENAME_METHOD, None, (4,)),
    (T.RENAME_PARAMETER, None, (4, 5)),
    (T.ADD_METHOD_MODIFIER, "static", (11,)),
]


def run(before: str, after: str):
    b, a = parse(before, "before.cpp"), parse(after, "after.cpp")
    return detect(match_models(b, a), b, a)


def keyed(findings):
    return sorted((f.type.value, tuple(sorted(f.detail.items()))) for f in findings)


def test_listing_findings(listing1, listing2):
    findings = run(listing1, listing2)
    got = [(f.type, f.detail.get("modifier"), f.affected_lines_after) for f in findings]
    assert got == TABLE


def test_listing_details(listing1, listing2):
    details = {f.type: f.detail for f in run(listing1, listing2)}
    assert details[T.RENAME_CLASS] == {"before": "Circle", "after": "CircleCalculator"}
    assert details[T.RENAME_METHOD] == {"class": "CircleCalculator", "before": "getArea",
                                        "after": "calcArea"}
    assert details[T.RENAME_PARAMETER] == {"class": "CircleCalculator", "method": "calcArea",
                                           "before": "r", "after": "radius"}


def test_identity_yields_nothing(listing1):
    assert run(listing1, listing1) == []


def test_pull_up_field_is_not_also_a_move():
    before = "class Base { int a; };\nclass Derived : Base {\n int b;\n int c;\n};"
    after = "class Base { int a;\n int c; };\nclass Derived : Base {\n int b;\n};"
    findings = run(before, after)
    assert keyed(findings) == [("PullUpField", (("field", "c"), ("from", "Derived"),
                                                ("to", "Base")))]


def test_multiple_inheritance_pull_ups():
    findings = run(read(DATA / "multi_inheritance" / "before.cpp"),
                   read(DATA / "multi_inheritance" / "after.cpp"))
    assert sorted((f.type, f.detail["field"], f.detail["to"]) for f in findings) == [
        (T.PULL_UP_FIELD, "x", "A"), (T.PULL_UP_FIELD, "y", "B")]


def test_multiple_inheritance_without_access_specifiers():
    before = "class A {};\nclass B {};\nclass D : A, B { int x; double y; };"
    after = "class A { int x; };\nclass B { double y; };\nclass D : A, B { };"
    assert sorted(f.detail["to"] for f in run(before, after) if f.type is T.PULL_UP_FIELD) == \
        ["A", "B"]


def test_move_into_unrelated_class_is_move_field():
    before = "class A { int x; int k; };\nclass B { int y; };"
    after = "class A { int k; };\nclass B { int y; int x; };"
    assert keyed(run(before, after)) == [("MoveField", (("field", "x"), ("from", "A"),
                                                        ("to", "B")))]


def test_modifier_removal():
    findings = run("class A { static int f() { return 1; } };",
                   "class A { int f() { return 1; } };")
    assert [(f.type, f.detail) for f in findings] == [
        (T.REMOVE_METHOD_MODIFIER, {"class": "A", "method": "f", "modifier": "static"})]
    assert findings[0].label == "Remove Method Modifier (static)"


def test_attribute_modifier_removal():
    findings = run("class A { static const int N = 1; };", "class A { static int N = 1; };")
    assert [(f.type, f.detail["modifier"]) for f in findings] == [
        (T.REMOVE_ATTRIBUTE_MODIFIER, "const")]


def test_constructor_changes_are_not_method_renames():
    findings = run("class A { public: A(int v) { x = v; } int x; };",
                   "class B { public: B(int v) { x = v; } int x; };")
    assert [f.type for f in findings] == [T.RENAME_CLASS]


def test_rename_method_requires_similar_body():
    findings = run("class A { int f() { return 1; } };",
                   "class A { int g() { int z = 5; z++; return z * z; } };")
    assert T.RENAME_METHOD not in {f.type for f in findings}


def test_change_parameter_type_and_rename_together():
    findings = run("class A { int f(int a) { return a; } };",
                   "class A { int f(long b) { return b; } };")
    assert {f.type for f in findings} == {T.CHANGE_PARAMETER_TYPE, T.RENAME_PARAMETER}


def test_extract_method_statement_lines():
    root = bundled_corpus() / "extract_method"
    before, after = read(root / "before.cpp"), read(root / "after.cpp")
    (finding,) = run(before, after)
    assert finding.type is T.EXTRACT_METHOD
    # the extracted operation plus the source operation it now calls
    assert finding.affected_lines_after == tuple(range(4, 12))


def test_extract_with_argument_mapping():
    before = "class A { int f(int a, int b) { int s = a * a + b; return s; } };"
    after = ("class A { int f(int a, int b) { int s = sq(a) + b; return s; }\n"
             " int sq(int v) { return v * v; } };")
    assert {f.type for f in run(before, after)} == {T.EXTRACT_METHOD}


def test_inline_of_whole_statements():
    before = ("class A { void f() { g(); x = 2; } void g() { x = 1; y = 1; } int x; int y; };")
    after = "class A { void f() { x = 1; y = 1; x = 2; } int x; int y; };"
    assert keyed(run(before, after)) == [("InlineMethod", (("class", "A"), ("inlined", "g"),
                                                           ("target", "f")))]


def test_output_order_is_deterministic(listing1, listing2):
    first = run(listing1, listing2)
    assert first == run(listing1, listing2)
    locs = [(f.after_location.start_line, f.after_location.start_column) for f in first]
    assert locs == sorted(locs)


@pytest.mark.parametrize("text, name, expected", [
    ("return f(a,b)", "f", ["a", "b"]),
    ("return f()", "f", []),
    ("x = obj.f(a + 1,g(c))", "f", ["", ""]),
    ("return g(a)", "f", None),
])
def test_call_arguments(text, name, expected):
    assert call_arguments(text, name) == expected


def test_display_names():
    assert T.PULL_UP_FIELD.display_name == "Pull Up Field"
    assert T.EXTRACT_AND_MOVE_METHOD.display_name == "Extract And Move Method"
