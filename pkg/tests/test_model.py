import copy
import json

import pytest

from cxxrefactor.errors import ModelFormatError
from cxxrefactor.model import (
    CodeModel,
    Generalization,
    SourceLocation,
    TypeRef,
    deserialize_model,
    lookup_class,
    model_to_dict,
    serialize_model,
)
from cxxrefactor.parser import parse, parse_file

from conftest import all_fixture_files


def test_lookup_class_listing1(listing1):
    circle = lookup_class(parse(listing1), "Circle")
    assert circle is not None
    assert len(circle.attributes) == 1 and len(circle.operations) == 2


def test_lookup_class_absent():
    assert lookup_class(CodeModel("e"), "X") is None


def test_lookup_artificial_class():
    model = parse("namespace math { int add(int a, int b) { return a + b; } }")
    g = lookup_class(model, "math::<globals>")
    assert g.is_artificial and g.operations[0].name == "add"


def test_ancestors_follow_generalizations():
    model = CodeModel("m", (), (Generalization("C", "B"), Generalization("B", "A"),
                                Generalization("C", "M")))
    assert model.parents_of("C") == ["B", "M"]
    assert model.ancestors_of("C") == {"A", "B", "M"}
    assert model.ancestors_of("A") == set()


def test_type_spelling():
    t = TypeRef("std::map", (TypeRef("int"), TypeRef("char", is_const=True, pointer_depth=1)),
                is_const=True, is_reference=True)
    assert str(t) == "const std::map<int, const char*>&"
    with pytest.raises(ValueError):
        TypeRef("")


def test_location_validation_and_span():
    a = SourceLocation("f", 2, 5, 2, 9)
    b = SourceLocation("f", 4, 1, 5, 3)
    assert a.span(b) == SourceLocation("f", 2, 5, 5, 3)
    assert a.span(b).contains(a) and not a.contains(b)
    with pytest.raises(ValueError):
        SourceLocation("f", 3, 1, 2, 1)


def test_serialized_document_shape(listing1):
    doc = json.loads(serialize_model(parse(listing1, "listing1.cpp")))
    assert [c["simpleName"] for c in doc["classes"]] == ["Circle"]
    assert doc["fileId"] == "listing1.cpp"


def test_serialize_empty_model():
    doc = json.loads(serialize_model(CodeModel("empty.cpp")))
    assert doc["classes"] == [] and doc["generalizations"] == []
    assert deserialize_model(serialize_model(CodeModel("empty.cpp"))) == CodeModel("empty.cpp")


def test_serialization_is_deterministic(listing2):
    assert serialize_model(parse(listing2)) == serialize_model(parse(listing2))


def test_roundtrip_listing2(listing2):
    model = parse(listing2)
    back = deserialize_model(serialize_model(model))
    assert back == model
    assert lookup_class(back, "CircleCalculator") is not None


@pytest.mark.parametrize("path", all_fixture_files(), ids=lambda p: f"{p.parent.name}/{p.name}")
def test_roundtrip_every_fixture(path):
    model = parse_file(path)
    assert deserialize_model(serialize_model(model)) == model


def _doc(listing1):
    return model_to_dict(parse(listing1))


def test_duplicate_qualified_names_rejected(listing1):
    doc = _doc(listing1)
    doc["classes"].append(copy.deepcopy(doc["classes"][0]))
    with pytest.raises(ModelFormatError, match=r"classes\[1\]"):
        deserialize_model(json.dumps(doc))


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d["classes"][0].pop("simpleName"), "classes[0]"),
    (lambda d: d["classes"][0]["attributes"][0]["type"].update(pointerDepth="x"),
     "classes[0].attributes[0].type"),
    (lambda d: d["classes"][0]["operations"][0].update(visibility="secret"),
     "classes[0].operations[0]"),
    (lambda d: d["classes"][0]["operations"][1]["body"]["children"][0].update(kind="goto"),
     "classes[0].operations[1].body"),
    (lambda d: d["generalizations"].append({"child": "Nope", "parent": "Circle"}),
     "generalizations[0]"),
])
def test_malformed_documents_name_the_path(listing1, mutate, where):
    doc = _doc(listing1)
    mutate(doc)
    with pytest.raises(ModelFormatError) as info:
        deserialize_model(json.dumps(doc))
    assert where in str(info.value)


@pytest.mark.parametrize("data", [b"\xff", "not json", "[]", "{}"])
def test_garbage_rejected(data):
    with pytest.raises(ModelFormatError):
        deserialize_model(data)


def test_empty_classes_document():
    model = deserialize_model('{"fileId": "x", "classes": [], "generalizations": []}')
    assert model.classes == ()
