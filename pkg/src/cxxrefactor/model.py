"""Language-neutral code model of one program version, and its JSON interchange form.

All model objects are frozen dataclasses holding tuples/frozensets, so a model
can be shared freely between comparisons once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator, Optional

from .errors import ModelFormatError

GLOBALS_CLASS = "<globals>"


class Modifier(str, Enum):
    STATIC = "static"
    CONST = "const"
    INLINE = "inline"
    VIRTUAL = "virtual"
    EXPLICIT = "explicit"
    MUTABLE = "mutable"
    CONSTEXPR = "constexpr"


class Visibility(str, Enum):
    PUBLIC = "public"
    PROTECTED = "protected"
    PRIVATE = "private"


class ClassKind(str, Enum):
    CLASS = "class"
    STRUCT = "struct"
    ARTIFICIAL = "artificial"


class StatementKind(str, Enum):
    BLOCK = "block"
    IF = "if"
    FOR = "for"
    WHILE = "while"
    DO = "do"
    SWITCH = "switch"
    TRY = "try"
    EXPRESSION = "expression"
    DECLARATION = "declaration"
    RETURN = "return"
    BREAK = "break"
    CONTINUE = "continue"

    @property
    def is_leaf(self) -> bool:
        return self in LEAF_KINDS


LEAF_KINDS = frozenset({
    StatementKind.EXPRESSION,
    StatementKind.DECLARATION,
    StatementKind.RETURN,
    StatementKind.BREAK,
    StatementKind.CONTINUE,
})


@dataclass(frozen=True, order=True)
class SourceLocation:
    """Inclusive span; columns are 1-based and `end_column` is the last character."""

    file_id: str
    start_line: int
    start_column: int
    end_line: int
    end_column: int

    def __post_init__(self):
        if (self.start_line, self.start_column) > (self.end_line, self.end_column):
            raise ValueError(f"location ends before it starts: {self}")

    def contains(self, other: "SourceLocation") -> bool:
        return ((self.start_line, self.start_column) <= (other.start_line, other.start_column)
                and (other.end_line, other.end_column) <= (self.end_line, self.end_column))

    @property
    def lines(self) -> range:
        return range(self.start_line, self.end_line + 1)

    def span(self, other: "SourceLocation") -> "SourceLocation":
        """Smallest location covering both."""
        start = min((self.start_line, self.start_column), (other.start_line, other.start_column))
        end = max((self.end_line, self.end_column), (other.end_line, other.end_column))
        return SourceLocation(self.file_id, start[0], start[1], end[0], end[1])


@dataclass(frozen=True)
class TypeRef:
    base_name: str
    template_args: tuple["TypeRef", ...] = ()
    is_const: bool = False
    pointer_depth: int = 0
    is_reference: bool = False

    def __post_init__(self):
        if not self.base_name:
            raise ValueError("TypeRef.base_name must be non-empty")
        if self.pointer_depth < 0:
            raise ValueError("pointer_depth must be non-negative")

    def __str__(self) -> str:
        text = self.base_name
        if self.template_args:
            text += "<" + ", ".join(str(a) for a in self.template_args) + ">"
        if self.is_const:
            text = "const " + text
        return text + "*" * self.pointer_depth + ("&" if self.is_reference else "")


@dataclass(frozen=True)
class Parameter:
    name: str
    type: TypeRef
    position: int
    location: SourceLocation
    default_value: Optional[str] = None


@dataclass(frozen=True)
class Statement:
    """One node of an operation body.

    Leaf kinds carry `normalized_text`; composite kinds carry `header_text`
    (condition or loop clause) and `children`.
    """

    kind: StatementKind
    location: SourceLocation
    normalized_text: str = ""
    header_text: str = ""
    children: tuple["Statement", ...] = ()
    declared_variables: tuple[tuple[str, TypeRef], ...] = ()
    referenced_identifiers: frozenset[str] = frozenset()

    @property
    def is_leaf(self) -> bool:
        return self.kind.is_leaf

    def walk(self) -> Iterator["Statement"]:
        """Pre-order traversal including self."""
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self) -> Iterator["Statement"]:
        return (s for s in self.walk() if s.is_leaf)


@dataclass(frozen=True)
class OperationDecl:
    name: str
    parameters: tuple[Parameter, ...]
    return_type: Optional[TypeRef]
    modifiers: frozenset[Modifier]
    visibility: Visibility
    body: Optional[Statement]
    is_constructor: bool
    location: SourceLocation

    @property
    def is_destructor(self) -> bool:
        return self.name.startswith("~")

    @property
    def parameter_types(self) -> tuple[TypeRef, ...]:
        return tuple(p.type for p in self.parameters)

    @property
    def signature_key(self) -> tuple:
        """Name plus parameter types; constructors and destructors share a class-independent name."""
        name = "#ctor" if self.is_constructor else "#dtor" if self.is_destructor else self.name
        return ("op", name, self.parameter_types)

    def leaves(self) -> list[Statement]:
        return list(self.body.leaves()) if self.body is not None else []


@dataclass(frozen=True)
class AttributeDecl:
    name: str
    type: TypeRef
    modifiers: frozenset[Modifier]
    visibility: Visibility
    initializer_text: Optional[str]
    location: SourceLocation

    @property
    def signature_key(self) -> tuple:
        return ("attr", self.name, self.type)


@dataclass(frozen=True)
class ClassDecl:
    simple_name: str
    package: str
    kind: ClassKind
    template_params: tuple[str, ...]
    attributes: tuple[AttributeDecl, ...]
    operations: tuple[OperationDecl, ...]
    location: SourceLocation

    @property
    def qualified_name(self) -> str:
        return qualify(self.package, self.simple_name)

    @property
    def is_artificial(self) -> bool:
        return self.kind is ClassKind.ARTIFICIAL


def qualify(package: str, simple_name: str) -> str:
    return f"{package}::{simple_name}" if package else simple_name


@dataclass(frozen=True)
class Generalization:
    child_qualified_name: str
    parent_qualified_name: str


@dataclass(frozen=True)
class CodeModel:
    file_id: str
    classes: tuple[ClassDecl, ...] = ()
    generalizations: tuple[Generalization, ...] = field(default=())

    def class_names(self) -> list[str]:
        return [c.qualified_name for c in self.classes]

    def parents_of(self, qualified_name: str) -> list[str]:
        return [g.parent_qualified_name for g in self.generalizations
                if g.child_qualified_name == qualified_name]

    def ancestors_of(self, qualified_name: str) -> set[str]:
        """Transitive closure over the generalization list."""
        seen: set[str] = set()
        stack = self.parents_of(qualified_name)
        while stack:
            parent = stack.pop()
            if parent not in seen:
                seen.add(parent)
                stack.extend(self.parents_of(parent))
        return seen


def lookup_class(model: CodeModel, qualified_name: str) -> Optional[ClassDecl]:
    for cls in model.classes:
        if cls.qualified_name == qualified_name:
            return cls
    return None


# ---------------------------------------------------------------------------
# Interchange document
# ---------------------------------------------------------------------------

def _loc(loc: SourceLocation) -> dict:
    return {"startLine": loc.start_line, "startColumn": loc.start_column,
            "endLine": loc.end_line, "endColumn": loc.end_column}


def _type(t: TypeRef) -> dict:
    return {"baseName": t.base_name, "templateArgs": [_type(a) for a in t.template_args],
            "isConst": t.is_const, "pointerDepth": t.pointer_depth,
            "isReference": t.is_reference}


def _modifiers(mods: frozenset[Modifier]) -> list[str]:
    return sorted(m.value for m in mods)


def _statement(s: Statement) -> dict:
    return {
        "kind": s.kind.value,
        "text": s.normalized_text,
        "header": s.header_text,
        "declaredVariables": [{"name": n, "type": _type(t)} for n, t in s.declared_variables],
        "referencedIdentifiers": sorted(s.referenced_identifiers),
        "children": [_statement(c) for c in s.children],
        "location": _loc(s.location),
    }


def _attribute(a: AttributeDecl) -> dict:
    return {"name": a.name, "type": _type(a.type), "modifiers": _modifiers(a.modifiers),
            "visibility": a.visibility.value, "initializer": a.initializer_text,
            "location": _loc(a.location)}


def _operation(o: OperationDecl) -> dict:
    return {
        "name": o.name,
        "parameters": [{"name": p.name, "type": _type(p.type), "position": p.position,
                        "default": p.default_value, "location": _loc(p.location)}
                       for p in o.parameters],
        "returnType": _type(o.return_type) if o.return_type is not None else None,
        "modifiers": _modifiers(o.modifiers),
        "visibility": o.visibility.value,
        "isConstructor": o.is_constructor,
        "body": _statement(o.body) if o.body is not None else None,
        "location": _loc(o.location),
    }


def model_to_dict(model: CodeModel) -> dict:
    return {
        "fileId": model.file_id,
        "classes": [
            {"simpleName": c.simple_name, "package": c.package, "kind": c.kind.value,
             "templateParams": list(c.template_params),
             "attributes": [_attribute(a) for a in c.attributes],
             "operations": [_operation(o) for o in c.operations],
             "location": _loc(c.location)}
            for c in model.classes
        ],
        "generalizations": [{"child": g.child_qualified_name, "parent": g.parent_qualified_name}
                            for g in model.generalizations],
    }


def serialize_model(model: CodeModel) -> bytes:
    return (json.dumps(model_to_dict(model), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


class _Reader:
    """Typed field access that reports the JSON path of whatever is wrong."""

    def __init__(self, file_id: str):
        self.file_id = file_id

    def field(self, obj: Any, key: str, kind, path: str, nullable: bool = False):
        if not isinstance(obj, dict):
            raise ModelFormatError(path, "expected an object")
        if key not in obj:
            raise ModelFormatError(f"{path}.{key}" if path else key, "missing field")
        value = obj[key]
        sub = f"{path}.{key}" if path else key
        if value is None and nullable:
            return None
        if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
            raise ModelFormatError(sub, "expected an integer")
        if kind is not int and not isinstance(value, kind):
            raise ModelFormatError(sub, f"expected {kind.__name__}")
        return value

    def enum(self, obj, key, enum_cls, path):
        raw = self.field(obj, key, str, path)
        try:
            return enum_cls(raw)
        except ValueError:
            raise ModelFormatError(f"{path}.{key}", f"unknown value {raw!r}") from None

    def location(self, obj, path) -> SourceLocation:
        raw = self.field(obj, "location", dict, path)
        sub = f"{path}.location"
        try:
            return SourceLocation(self.file_id, self.field(raw, "startLine", int, sub),
                                  self.field(raw, "startColumn", int, sub),
                                  self.field(raw, "endLine", int, sub),
                                  self.field(raw, "endColumn", int, sub))
        except ValueError as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(sub, str(exc)) from None

    def type_ref(self, raw, path) -> TypeRef:
        args = self.field(raw, "templateArgs", list, path)
        try:
            return TypeRef(
                self.field(raw, "baseName", str, path),
                tuple(self.type_ref(a, f"{path}.templateArgs[{i}]") for i, a in enumerate(args)),
                self.field(raw, "isConst", bool, path),
                self.field(raw, "pointerDepth", int, path),
                self.field(raw, "isReference", bool, path),
            )
        except ModelFormatError:
            raise
        except ValueError as exc:
            raise ModelFormatError(path, str(exc)) from None

    def modifiers(self, raw, path) -> frozenset[Modifier]:
        values = self.field(raw, "modifiers", list, path)
        mods = []
        for i, v in enumerate(values):
            try:
                mods.append(Modifier(v))
            except ValueError:
                raise ModelFormatError(f"{path}.modifiers[{i}]", f"unknown modifier {v!r}") from None
        if len(set(mods)) != len(mods):
            raise ModelFormatError(f"{path}.modifiers", "duplicate modifier")
        return frozenset(mods)

    def statement(self, raw, path) -> Statement:
        decls = []
        for i, d in enumerate(self.field(raw, "declaredVariables", list, path)):
            sub = f"{path}.declaredVariables[{i}]"
            decls.append((self.field(d, "name", str, sub),
                          self.type_ref(self.field(d, "type", dict, sub), f"{sub}.type")))
        idents = self.field(raw, "referencedIdentifiers", list, path)
        for i, ident in enumerate(idents):
            if not isinstance(ident, str):
                raise ModelFormatError(f"{path}.referencedIdentifiers[{i}]", "expected str")
        children = self.field(raw, "children", list, path)
        return Statement(
            kind=self.enum(raw, "kind", StatementKind, path),
            location=self.location(raw, path),
            normalized_text=self.field(raw, "text", str, path),
            header_text=self.field(raw, "header", str, path),
            children=tuple(self.statement(c, f"{path}.children[{i}]")
                           for i, c in enumerate(children)),
            declared_variables=tuple(decls),
            referenced_identifiers=frozenset(idents),
        )

    def operation(self, raw, path) -> OperationDecl:
        params = []
        for i, p in enumerate(self.field(raw, "parameters", list, path)):
            sub = f"{path}.parameters[{i}]"
            params.append(Parameter(self.field(p, "name", str, sub),
                                    self.type_ref(self.field(p, "type", dict, sub), f"{sub}.type"),
                                    self.field(p, "position", int, sub),
                                    self.location(p, sub),
                                    self.field(p, "default", str, sub, nullable=True)))
        if [p.position for p in params] != list(range(len(params))):
            raise ModelFormatError(f"{path}.parameters", "positions must be contiguous from 0")
        ret = self.field(raw, "returnType", dict, path, nullable=True)
        body = self.field(raw, "body", dict, path, nullable=True)
        return OperationDecl(
            name=self.field(raw, "name", str, path),
            parameters=tuple(params),
            return_type=self.type_ref(ret, f"{path}.returnType") if ret is not None else None,
            modifiers=self.modifiers(raw, path),
            visibility=self.enum(raw, "visibility", Visibility, path),
            body=self.statement(body, f"{path}.body") if body is not None else None,
            is_constructor=self.field(raw, "isConstructor", bool, path),
            location=self.location(raw, path),
        )

    def attribute(self, raw, path) -> AttributeDecl:
        return AttributeDecl(
            name=self.field(raw, "name", str, path),
            type=self.type_ref(self.field(raw, "type", dict, path), f"{path}.type"),
            modifiers=self.modifiers(raw, path),
            visibility=self.enum(raw, "visibility", Visibility, path),
            initializer_text=self.field(raw, "initializer", str, path, nullable=True),
            location=self.location(raw, path),
        )

    def klass(self, raw, path) -> ClassDecl:
        params = self.field(raw, "templateParams", list, path)
        attrs = tuple(self.attribute(a, f"{path}.attributes[{i}]")
                      for i, a in enumerate(self.field(raw, "attributes", list, path)))
        names = [a.name for a in attrs]
        if len(set(names)) != len(names):
            raise ModelFormatError(f"{path}.attributes", "duplicate attribute name")
        return ClassDecl(
            simple_name=self.field(raw, "simpleName", str, path),
            package=self.field(raw, "package", str, path),
            kind=self.enum(raw, "kind", ClassKind, path),
            template_params=tuple(str(p) for p in params),
            attributes=attrs,
            operations=tuple(self.operation(o, f"{path}.operations[{i}]")
                             for i, o in enumerate(self.field(raw, "operations", list, path))),
            location=self.location(raw, path),
        )


def model_from_dict(doc: Any) -> CodeModel:
    if not isinstance(doc, dict):
        raise ModelFormatError("", "expected a top-level object")
    file_id = doc.get("fileId")
    if not isinstance(file_id, str):
        raise ModelFormatError("fileId", "missing or not a string")
    reader = _Reader(file_id)
    classes = tuple(reader.klass(c, f"classes[{i}]")
                    for i, c in enumerate(reader.field(doc, "classes", list, "")))
    seen: set[str] = set()
    for i, c in enumerate(classes):
        if c.qualified_name in seen:
            raise ModelFormatError(f"classes[{i}]", f"duplicate qualified name {c.qualified_name!r}")
        seen.add(c.qualified_name)
    gens = []
    for i, g in enumerate(reader.field(doc, "generalizations", list, "")):
        sub = f"generalizations[{i}]"
        child = reader.field(g, "child", str, sub)
        if child not in seen:
            raise ModelFormatError(f"{sub}.child", f"unknown class {child!r}")
        gens.append(Generalization(child, reader.field(g, "parent", str, sub)))
    return CodeModel(file_id, classes, tuple(gens))


def deserialize_model(data: bytes | str) -> CodeModel:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ModelFormatError("", f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ModelFormatError("", f"invalid JSON: {exc}") from None
    return model_from_dict(doc)
