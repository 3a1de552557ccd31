import pytest

from cxxrefactor.errors import ParseError, UnsupportedConstructError
from cxxrefactor.model import (
    GLOBALS_CLASS,
    ClassKind,
    Generalization,
    Modifier,
    StatementKind,
    TypeRef,
    Visibility,
    lookup_class,
)
from cxxrefactor.parser import parse, parse_file

from conftest import DATA, all_fixture_files


def only_class(model):
    assert len(model.classes) == 1
    return model.classes[0]


def test_listing1_model(listing1):
    model = parse(listing1, "listing1.cpp")
    circle = only_class(model)
    assert circle.qualified_name == "Circle"
    assert circle.kind is ClassKind.CLASS
    (pi,) = circle.attributes
    assert pi.name == "PI" and pi.type == TypeRef("double")
    assert pi.visibility is Visibility.PRIVATE and pi.initializer_text == "3.14159"
    assert pi.modifiers == frozenset()
    get_area, circumference = circle.operations
    assert get_area.name == "getArea"
    assert [(p.name, str(p.type)) for p in get_area.parameters] == [("r", "double")]
    assert get_area.visibility is Visibility.PUBLIC
    assert [s.normalized_text for s in get_area.leaves()] == ["return PI * r * r"]
    assert [s.normalized_text for s in circumference.leaves()] == [
        "double diameter = radius * radius", "return PI * diameter"]
    assert circumference.body.kind is StatementKind.BLOCK


def test_listing2_model(listing2):
    cls = only_class(parse(listing2, "listing2.cpp"))
    assert cls.simple_name == "CircleCalculator"
    assert cls.attributes[0].modifiers == {Modifier.INLINE, Modifier.STATIC, Modifier.CONST}
    assert str(cls.attributes[0].type) == "double"
    assert [o.name for o in cls.operations] == ["calcArea", "calcSectorArea", "calcCircumference"]
    assert all(Modifier.STATIC in o.modifiers for o in cls.operations)
    sector = cls.operations[1]
    assert len(sector.parameters) == 2
    assert (sector.location.start_line, sector.location.end_line) == (7, 10)


def test_statement_locations(listing2):
    cls = only_class(parse(listing2))
    decl = cls.operations[2].leaves()[0]
    assert decl.location.start_line == 12
    assert decl.declared_variables == (("diameter", TypeRef("double")),)
    assert {"radius", "diameter"} <= decl.referenced_identifiers


def test_struct_with_multiple_bases():
    model = parse("struct P : A, B {};")
    p = lookup_class(model, "P")
    assert p.kind is ClassKind.STRUCT
    assert set(model.generalizations) == {Generalization("P", "A"), Generalization("P", "B")}


def test_struct_members_default_public():
    cls = only_class(parse("struct S { int a; private: int b; };"))
    assert [a.visibility for a in cls.attributes] == [Visibility.PUBLIC, Visibility.PRIVATE]


def test_namespace_and_globals():
    model = parse("namespace math { int add(int a, int b) { return a + b; } int zero = 0; }")
    g = lookup_class(model, f"math::{GLOBALS_CLASS}")
    assert g is not None and g.kind is ClassKind.ARTIFICIAL
    assert [o.name for o in g.operations] == ["add"]
    assert [a.name for a in g.attributes] == ["zero"]


def test_nested_namespaces_become_package_path():
    model = parse("namespace a { namespace b { class C {}; } }")
    assert model.class_names() == ["a::b::C"]


def test_empty_file_gives_empty_model():
    assert parse("", "empty.cpp").classes == ()
    assert parse("#include <x>\n// nothing\n").classes == ()


def test_templates_are_generic_classes():
    cls = only_class(parse(
        "template <typename T, int N> class Box { T items; std::vector<T> all() { return {}; } };"))
    assert cls.template_params == ("T", "N")
    assert str(cls.operations[0].return_type) == "std::vector<T>"


def test_constructor_destructor_and_init_list():
    cls = only_class(parse(
        "class K { int v; public: K(int x) : v(x) { } ~K() { } virtual int get() const = 0; };"))
    ctor, dtor, get = cls.operations
    assert ctor.is_constructor and ctor.return_type is None
    assert [s.normalized_text for s in ctor.leaves()] == ["v(x)"]
    assert dtor.is_destructor
    assert get.body is None
    assert {Modifier.VIRTUAL, Modifier.CONST} <= get.modifiers


def test_control_flow_statements():
    src = """
class F {
public:
    int f(int n) {
        int s = 0;
        for (int i = 0; i < n; ++i) {
            if (i % 2 == 0) s += i; else continue;
        }
        while (n > 0) { n--; }
        switch (n) { case 0: break; default: s = 1; }
        return s;
    }
};
"""
    op = only_class(parse(src)).operations[0]
    kinds = [s.kind for s in op.body.walk()]
    assert StatementKind.FOR in kinds and StatementKind.IF in kinds
    assert StatementKind.WHILE in kinds and StatementKind.SWITCH in kinds
    loop = next(s for s in op.body.walk() if s.kind is StatementKind.FOR)
    assert loop.header_text.startswith("for(int i = 0")
    assert loop.declared_variables == (("i", TypeRef("int")),)


def test_prototype_merged_with_definition():
    model = parse("int f(int a);\nint f(int a) { return a; }")
    ops = model.classes[0].operations
    assert len(ops) == 1 and ops[0].body is not None


def test_pointer_reference_const_types():
    cls = only_class(parse("class T { const std::string& name(const char* p, int** q); };"))
    op = cls.operations[0]
    assert str(op.return_type) == "const std::string&"
    assert [str(p.type) for p in op.parameters] == ["const char*", "int**"]


def test_closing_angle_brackets_split():
    cls = only_class(parse("class T { std::map<int, std::vector<int>> m; };"))
    assert str(cls.attributes[0].type) == "std::map<int, std::vector<int>>"


@pytest.mark.parametrize("src, construct", [
    ("class A { void f() { auto g = [](int x) { return x; }; } };", "lambda"),
    ("class A { class B {}; };", "nested class"),
    ("void f() { class L {}; }", "class defined inside a function"),
    ("union U { int a; };", "union"),
    ("class A { int a[3]; };", "array"),
    ("class A { void f(); }; void A::f() {}", "out-of-class member definition"),
])
def test_unsupported_constructs(src, construct):
    with pytest.raises(UnsupportedConstructError) as info:
        parse(src, "x.cpp")
    assert construct in str(info.value)
    assert info.value.line is not None


def test_lambda_file_reports_line():
    with pytest.raises(UnsupportedConstructError) as info:
        parse_file(DATA / "lambda.cpp")
    assert info.value.line == 4 and "lambda" in str(info.value)


def test_subscript_is_not_a_lambda():
    op = parse("int f(int* a) { return a[0] + (a)[1]; }").classes[0].operations[0]
    # brackets and parentheses are tight on both sides in canonical text
    assert op.leaves()[0].normalized_text == "return a[0]+(a)[1]"


@pytest.mark.parametrize("src", ["class A {", "class A { int f( };", "int x = ;", "void f(int a = ) {}", "}"])
def test_malformed_input(src):
    with pytest.raises(ParseError) as info:
        parse(src, "bad.cpp")
    assert info.value.file_id == "bad.cpp"


def test_every_fixture_parses():
    for path in all_fixture_files():
        parse_file(path)
