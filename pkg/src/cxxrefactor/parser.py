"""Recursive-descent parser for the supported C++ subset.

Mapping onto the code model:

* namespaces become the package path (``a::b``),
* ``struct`` becomes a class of kind ``struct`` with public default visibility,
* namespace-level functions and variables go into one artificial class per
  namespace, named ``<globals>``,
* every base-class clause yields one generalization entry,
* template parameter lists are kept as the class's ``template_params``.

Lambdas, classes nested in classes or functions, and out-of-class member
definitions are rejected with :class:`UnsupportedConstructError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ParseError, UnsupportedConstructError
from .lexer import Token, TokenKind, code_tokens, join_tokens, tokenize
from .model import (
    GLOBALS_CLASS,
    AttributeDecl,
    ClassDecl,
    ClassKind,
    CodeModel,
    Generalization,
    Modifier,
    OperationDecl,
    Parameter,
    SourceLocation,
    Statement,
    StatementKind,
    TypeRef,
    Visibility,
    qualify,
)

BUILTIN_TYPES = frozenset("""
    void bool char char8_t char16_t char32_t wchar_t short int long float double
    signed unsigned auto
""".split())

SPECIFIERS = {
    "static": Modifier.STATIC,
    "inline": Modifier.INLINE,
    "virtual": Modifier.VIRTUAL,
    "explicit": Modifier.EXPLICIT,
    "mutable": Modifier.MUTABLE,
    "constexpr": Modifier.CONSTEXPR,
}
# accepted but not part of the modifier vocabulary
IGNORED_SPECIFIERS = frozenset({"extern", "thread_local", "register", "consteval", "constinit",
                                "volatile"})

# a '[' after one of these keywords starts a lambda rather than a subscript
_LAMBDA_AFTER_KEYWORDS = frozenset({"return", "co_return", "co_yield", "co_await", "throw",
                                    "case", "else", "do"})


class _Backtrack(Exception):
    pass


@dataclass
class _ClassBuilder:
    simple_name: str
    package: str
    kind: ClassKind
    template_params: tuple[str, ...] = ()
    attributes: list[AttributeDecl] = field(default_factory=list)
    operations: list[OperationDecl] = field(default_factory=list)
    bases: list[str] = field(default_factory=list)
    location: Optional[SourceLocation] = None

    @property
    def default_visibility(self) -> Visibility:
        return Visibility.PRIVATE if self.kind is ClassKind.CLASS else Visibility.PUBLIC

    def build(self) -> ClassDecl:
        return ClassDecl(self.simple_name, self.package, self.kind, self.template_params,
                         tuple(self.attributes), tuple(self.operations), self.location)


def _strip_attribute_specifiers(tokens: list[Token]) -> list[Token]:
    out: list[Token] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if (tok.is_punct("[") and i + 1 < len(tokens) and tokens[i + 1].is_punct("[")
                and not (out and (out[-1].kind is TokenKind.IDENTIFIER
                                  or out[-1].is_punct(")", "]")))):
            depth = 0
            j = i
            while j < len(tokens):
                if tokens[j].is_punct("["):
                    depth += 1
                elif tokens[j].is_punct("]"):
                    depth -= 1
                    if depth == 0:
                        break
                j += 1
            i = j + 1
            continue
        out.append(tok)
        i += 1
    return out


def _is_lambda_bracket(prev: Optional[Token]) -> bool:
    if prev is None:
        return True
    if prev.kind is TokenKind.PUNCTUATOR:
        return prev.text not in (")", "]", ">")
    if prev.kind is TokenKind.KEYWORD:
        return prev.text in _LAMBDA_AFTER_KEYWORDS
    return False


class Parser:
    def __init__(self, tokens: list[Token], file_id: str):
        self.toks = tokens
        self.file_id = file_id
        self.pos = 0
        self.split_gt = False
        self.namespace: list[str] = []
        self.slots: list[object] = []  # _ClassBuilder or package name of a globals slot
        self.globals: dict[str, _ClassBuilder] = {}
        self.classes: dict[str, _ClassBuilder] = {}

    # -- token access -----------------------------------------------------

    @property
    def cur(self) -> Optional[Token]:
        if self.pos >= len(self.toks):
            return None
        tok = self.toks[self.pos]
        if self.split_gt:
            loc = tok.location
            return Token(TokenKind.PUNCTUATOR, ">", SourceLocation(
                loc.file_id, loc.end_line, loc.end_column, loc.end_line, loc.end_column))
        return tok

    def peek(self, k: int = 1) -> Optional[Token]:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def advance(self) -> Token:
        tok = self.cur
        if tok is None:
            raise self.error("unexpected end of input")
        self.split_gt = False
        self.pos += 1
        return tok

    def at(self, *texts: str) -> bool:
        tok = self.cur
        return tok is not None and tok.kind in (TokenKind.PUNCTUATOR, TokenKind.KEYWORD) \
            and tok.text in texts

    def at_ident(self, text: Optional[str] = None) -> bool:
        tok = self.cur
        return tok is not None and tok.kind is TokenKind.IDENTIFIER \
            and (text is None or tok.text == text)

    def accept(self, *texts: str) -> Optional[Token]:
        return self.advance() if self.at(*texts) else None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if not self.at_ident():
            raise self.error("expected identifier")
        return self.advance()

    def state(self):
        return self.pos, self.split_gt

    def restore(self, state) -> None:
        self.pos, self.split_gt = state

    def prev_token(self) -> Token:
        return self.toks[self.pos - 1]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.cur
        if tok is None:
            last = self.toks[-1].location if self.toks else None
            return ParseError(f"{message}, found end of input", self.file_id,
                              last.end_line if last else None, last.end_column if last else None)
        return ParseError(f"{message}, found {tok.text!r}", self.file_id, tok.line,
                          tok.location.start_column)

    def unsupported(self, construct: str, tok: Optional[Token] = None) -> UnsupportedConstructError:
        tok = tok or self.cur
        return UnsupportedConstructError(construct, self.file_id, tok.line if tok else None,
                                         tok.location.start_column if tok else None)

    def loc(self, first: Token, last: Token) -> SourceLocation:
        return SourceLocation(self.file_id, first.location.start_line, first.location.start_column,
                              last.location.end_line, last.location.end_column)

    def skip_balanced(self, stop: tuple[str, ...]) -> list[Token]:
        """Consume tokens until one of `stop` at bracket depth 0 (stop token not consumed)."""
        out = []
        depth = 0
        while True:
            tok = self.cur
            if tok is None:
                raise self.error(f"expected one of {', '.join(repr(s) for s in stop)}")
            if depth == 0 and tok.kind is TokenKind.PUNCTUATOR and tok.text in stop:
                return out
            if tok.is_punct("(", "[", "{"):
                depth += 1
            elif tok.is_punct(")", "]", "}"):
                if depth == 0:
                    raise self.error("unbalanced bracket")
                depth -= 1
            out.append(self.advance())

    def skip_declaration(self) -> None:
        """Skip through the terminating ';' of a declaration we do not model."""
        self.skip_balanced((";",))
        self.advance()

    # -- translation unit -------------------------------------------------

    def parse_translation_unit(self) -> CodeModel:
        self.check_lambdas()
        self.declarations(top_level=True)
        return self.finish()

    def check_lambdas(self) -> None:
        prev = None
        for tok in self.toks:
            if tok.is_punct("[") and _is_lambda_bracket(prev):
                raise self.unsupported("lambda expression", tok)
            prev = tok

    @property
    def package(self) -> str:
        return "::".join(self.namespace)

    def declarations(self, top_level: bool) -> None:
        while True:
            tok = self.cur
            if tok is None:
                if top_level:
                    return
                raise self.error("expected '}'")
            if tok.is_punct("}"):
                if top_level:
                    raise self.error("unexpected '}'")
                return
            self.namespace_member()

    def namespace_member(self) -> None:
        tok = self.cur
        if tok.is_punct(";"):
            self.advance()
        elif tok.is_keyword("namespace") or (tok.is_keyword("inline")
                                             and self.peek() and self.peek().is_keyword("namespace")):
            self.namespace_definition()
        elif tok.is_keyword("using", "typedef", "static_assert"):
            self.skip_declaration()
        elif tok.is_keyword("enum"):
            self.skip_declaration()
        elif tok.is_keyword("extern") and self.peek() and self.peek().kind is TokenKind.LITERAL:
            self.advance()
            self.advance()
            if self.accept("{"):
                self.declarations(top_level=False)
                self.expect("}")
            else:
                self.namespace_member()
        elif tok.is_keyword("template"):
            params = self.template_header()
            self.templated_declaration(params, None)
        elif tok.is_keyword("class", "struct", "union") and self.is_class_definition():
            self.class_definition(())
        elif self.is_forward_declaration():
            self.skip_declaration()
        else:
            self.member_declaration(None, Visibility.PUBLIC)

    def namespace_definition(self) -> None:
        self.accept("inline")
        self.expect("namespace")
        names: list[str] = []
        while self.at_ident():
            names.append(self.advance().text)
            if not self.accept("::"):
                break
            self.accept("inline")
        if self.accept("="):
            self.skip_declaration()
            return
        self.expect("{")
        self.namespace.extend(names)
        self.declarations(top_level=False)
        self.expect("}")
        del self.namespace[len(self.namespace) - len(names):]

    def template_header(self) -> tuple[str, ...]:
        tmpl = self.expect("template")
        self.expect("<")
        if self.at(">"):
            raise self.unsupported("explicit template specialization", tmpl)
        names: list[str] = []
        while True:
            if self.at("typename", "class"):
                self.advance()
                self.accept("...")
                if self.at_ident():
                    names.append(self.advance().text)
                else:
                    names.append(f"${len(names)}")
                if self.accept("="):
                    self.template_argument()
            elif self.at("template"):
                raise self.unsupported("template template parameter")
            else:
                self.type_ref()
                names.append(self.expect_ident().text)
                if self.accept("="):
                    self.template_argument()
            if self.accept(","):
                continue
            self.close_angle()
            return tuple(names)

    def templated_declaration(self, params: tuple[str, ...],
                              owner: Optional[_ClassBuilder], visibility=Visibility.PUBLIC) -> None:
        if self.at("class", "struct", "union") and self.is_class_definition():
            if owner is not None:
                raise self.unsupported("nested class")
            self.class_definition(params)
        elif self.at("template"):
            raise self.unsupported("nested template declaration")
        elif self.is_forward_declaration():
            self.skip_declaration()
        else:
            self.member_declaration(owner, visibility)

    def is_forward_declaration(self) -> bool:
        return (self.at("class", "struct", "union") and self.peek() is not None
                and self.peek().kind is TokenKind.IDENTIFIER and self.peek(2) is not None
                and self.peek(2).is_punct(";"))

    def is_class_definition(self) -> bool:
        """At class/struct/union: is this a definition (as opposed to a forward or elaborated use)?"""
        i = 1
        nxt = self.peek(i)
        if nxt is not None and nxt.kind is TokenKind.IDENTIFIER:
            i += 1
            while (self.peek(i) is not None and self.peek(i).is_punct("::")
                   and self.peek(i + 1) is not None):
                i += 2
            nxt = self.peek(i)
            if nxt is not None and nxt.kind is TokenKind.IDENTIFIER and nxt.text == "final":
                nxt = self.peek(i + 1)
        return nxt is not None and nxt.is_punct("{", ":")

    # -- classes ----------------------------------------------------------

    def class_definition(self, template_params: tuple[str, ...]) -> None:
        kw = self.advance()
        if kw.text == "union":
            raise self.unsupported("union", kw)
        if not self.at_ident():
            raise self.unsupported("anonymous class", kw)
        name_tok = self.advance()
        if self.at("::"):
            raise self.unsupported("out-of-class nested class definition", name_tok)
        if self.at_ident("final"):
            self.advance()
        kind = ClassKind.STRUCT if kw.text == "struct" else ClassKind.CLASS
        builder = _ClassBuilder(name_tok.text, self.package, kind, template_params)
        qn = qualify(builder.package, builder.simple_name)
        if qn in self.classes:
            raise ParseError(f"duplicate class {qn!r}", self.file_id, name_tok.line,
                             name_tok.location.start_column)
        if self.accept(":"):
            while True:
                while self.at("virtual", "public", "protected", "private"):
                    self.advance()
                base = self.type_ref()
                builder.bases.append(base.base_name)
                if not self.accept(","):
                    break
        self.expect("{")
        visibility = builder.default_visibility
        while not self.at("}"):
            if self.cur is None:
                raise self.error("expected '}'")
            visibility = self.class_member(builder, visibility)
        self.expect("}")
        if not self.at(";"):
            raise self.unsupported("declarator after class definition")
        end = self.advance()
        builder.location = self.loc(kw, end)
        self.classes[qn] = builder
        self.slots.append(builder)

    def class_member(self, builder: _ClassBuilder, visibility: Visibility) -> Visibility:
        tok = self.cur
        if tok.is_keyword("public", "protected", "private") and self.peek() \
                and self.peek().is_punct(":"):
            self.advance()
            self.advance()
            return Visibility(tok.text)
        if tok.is_punct(";"):
            self.advance()
        elif tok.is_keyword("using", "typedef", "static_assert", "enum"):
            self.skip_declaration()
        elif tok.is_keyword("friend"):
            self.skip_balanced((";", "{"))
            if self.at("{"):
                raise self.unsupported("friend function definition", tok)
            self.advance()
        elif tok.is_keyword("template"):
            self.template_header()
            self.templated_declaration((), builder, visibility)
        elif tok.is_keyword("class", "struct", "union"):
            if self.is_class_definition():
                raise self.unsupported("nested class", tok)
            if self.is_forward_declaration():
                self.skip_declaration()
            else:
                self.member_declaration(builder, visibility)
        else:
            self.member_declaration(builder, visibility)
        return visibility

    # -- declarations -----------------------------------------------------

    def specifiers(self) -> tuple[set[Modifier], bool, Optional[Token]]:
        """Leading decl-specifiers; returns (modifiers, saw_const, first token)."""
        mods: set[Modifier] = set()
        saw_const = False
        first = self.cur
        while True:
            tok = self.cur
            if tok is None or tok.kind is not TokenKind.KEYWORD:
                break
            if tok.text in SPECIFIERS:
                mods.add(SPECIFIERS[tok.text])
            elif tok.text == "const":
                saw_const = True
            elif tok.text not in IGNORED_SPECIFIERS:
                break
            self.advance()
        return mods, saw_const, first

    def member_declaration(self, owner: Optional[_ClassBuilder], visibility: Visibility) -> None:
        mods, saw_const, first = self.specifiers()
        class_name = owner.simple_name if owner is not None else None
        if self.at("~"):
            if owner is None:
                raise self.unsupported("out-of-class member definition")
            self.advance()
            name_tok = self.expect_ident()
            if name_tok.text != class_name:
                raise self.error("destructor name does not match class", name_tok)
            self.function_rest(owner, visibility, first, mods, "~" + name_tok.text, None,
                               is_constructor=False)
            return
        if (class_name is not None and self.at_ident(class_name) and self.peek() is not None
                and self.peek().is_punct("(")):
            self.advance()
            self.function_rest(owner, visibility, first, mods, class_name, None,
                               is_constructor=True)
            return
        if self.at("operator"):
            self.advance()
            target = self.type_ref()
            self.function_rest(owner, visibility, first, mods, f"operator {target}", target,
                               is_constructor=False)
            return
        base_type = self.type_ref()
        if saw_const:
            base_type = _with_const(base_type)
        declarator_type, name = self.declarator(base_type)
        if self.at("::"):
            raise self.unsupported("out-of-class member definition", self.prev_token())
        if self.at("("):
            self.function_rest(owner, visibility, first, mods, name.text, declarator_type,
                               is_constructor=False)
            return
        # variable declarators
        while True:
            attr_mods = set(mods) & {Modifier.STATIC, Modifier.INLINE, Modifier.MUTABLE,
                                     Modifier.CONSTEXPR}
            if declarator_type.is_const:
                attr_mods.add(Modifier.CONST)
                declarator_type = _with_const(declarator_type, False)
            init = None
            if self.at("["):
                raise self.unsupported("array declarator")
            if self.at(":"):
                raise self.unsupported("bit-field")
            if self.accept("="):
                init_tokens = self.skip_balanced((",", ";"))
                if not init_tokens:
                    raise self.error("expected initializer")
                init = join_tokens(t.text for t in init_tokens)
            elif self.at("{"):
                init = join_tokens(t.text for t in self.braced())
            elif self.at("("):
                raise self.error("expected member initializer")
            last = self.prev_token()
            self.add_attribute(owner, AttributeDecl(
                name.text, declarator_type, frozenset(attr_mods),
                visibility, init, self.loc(first, last)))
            if self.accept(","):
                declarator_type, name = self.declarator(base_type)
                continue
            end = self.expect(";")
            # extend the last attribute to cover the terminating ';'
            self.extend_last_attribute(owner, end)
            return

    def declarator(self, base: TypeRef) -> tuple[TypeRef, Token]:
        """Pointer/reference operators followed by the declared name."""
        t = base
        while self.at("*"):
            self.advance()
            t = TypeRef(t.base_name, t.template_args, t.is_const, t.pointer_depth + 1,
                        t.is_reference)
            while self.at("const", "volatile"):
                self.advance()
        if self.at("&", "&&"):
            self.advance()
            t = TypeRef(t.base_name, t.template_args, t.is_const, t.pointer_depth, True)
        if self.at("operator"):
            op_tok = self.advance()
            return t, Token(TokenKind.IDENTIFIER, "operator" + self.operator_symbol(),
                            op_tok.location)
        if self.at("("):
            raise self.unsupported("function pointer declarator")
        return t, self.expect_ident()

    def operator_symbol(self) -> str:
        if self.at("(") and self.peek() is not None and self.peek().is_punct(")"):
            self.advance()
            self.advance()
            return "()"
        if self.at("[") and self.peek() is not None and self.peek().is_punct("]"):
            self.advance()
            self.advance()
            return "[]"
        if self.at("new", "delete"):
            word = self.advance().text
            if self.at("[") and self.peek() is not None and self.peek().is_punct("]"):
                self.advance()
                self.advance()
                word += "[]"
            return " " + word
        tok = self.cur
        if tok is not None and tok.kind is TokenKind.PUNCTUATOR:
            self.advance()
            return tok.text
        raise self.error("expected operator symbol")

    def add_attribute(self, owner: Optional[_ClassBuilder], attr: AttributeDecl) -> None:
        target = owner if owner is not None else self.globals_for(self.package)
        if any(a.name == attr.name for a in target.attributes):
            raise ParseError(f"duplicate variable {attr.name!r}", self.file_id,
                             attr.location.start_line, attr.location.start_column)
        target.attributes.append(attr)

    def extend_last_attribute(self, owner: Optional[_ClassBuilder], end: Token) -> None:
        target = owner if owner is not None else self.globals_for(self.package)
        last = target.attributes[-1]
        target.attributes[-1] = AttributeDecl(
            last.name, last.type, last.modifiers, last.visibility, last.initializer_text,
            last.location.span(end.location))

    def globals_for(self, package: str) -> _ClassBuilder:
        builder = self.globals.get(package)
        if builder is None:
            builder = _ClassBuilder(GLOBALS_CLASS, package, ClassKind.ARTIFICIAL)
            self.globals[package] = builder
            self.slots.append(builder)
        return builder

    def function_rest(self, owner: Optional[_ClassBuilder], visibility: Visibility, first: Token,
                      mods: set[Modifier], name: str, return_type: Optional[TypeRef],
                      is_constructor: bool) -> None:
        params = self.parameters()
        mods = set(mods)
        while True:
            if self.accept("const"):
                mods.add(Modifier.CONST)
            elif self.at("volatile", "&", "&&"):
                self.advance()
            elif self.at("noexcept"):
                self.advance()
                if self.at("("):
                    self.advance()
                    self.skip_balanced((")",))
                    self.advance()
            elif self.at("throw"):
                self.advance()
                self.expect("(")
                self.skip_balanced((")",))
                self.advance()
            elif self.at_ident("override") or self.at_ident("final"):
                self.advance()
            elif self.at("->"):
                self.advance()
                return_type = self.type_ref()
            else:
                break
        body = None
        if self.accept("="):
            if not (self.at("default", "delete") or (self.cur is not None and self.cur.text == "0")):
                raise self.error("expected 0, default or delete")
            self.advance()
            end = self.expect(";")
        elif self.at(";"):
            end = self.advance()
        elif self.at(":"):
            if not is_constructor:
                raise self.error("member initializer list on a non-constructor")
            colon = self.advance()
            inits = self.member_initializers()
            block = self.block()
            body = Statement(StatementKind.BLOCK, self.loc(colon, self.prev_token()),
                             children=tuple(inits) + block.children)
            end = self.prev_token()
        elif self.at("{"):
            body = self.block()
            end = self.prev_token()
        elif self.at("try"):
            raise self.unsupported("function try block")
        else:
            raise self.error("expected function body or ';'")
        op = OperationDecl(name, tuple(params), return_type, frozenset(mods), visibility, body,
                           is_constructor, self.loc(first, end))
        self.add_operation(owner, op)

    def add_operation(self, owner: Optional[_ClassBuilder], op: OperationDecl) -> None:
        target = owner if owner is not None else self.globals_for(self.package)
        for i, existing in enumerate(target.operations):
            if existing.signature_key == op.signature_key and existing.name == op.name:
                if existing.body is None and op.body is not None:
                    target.operations[i] = op  # definition after prototype
                    return
                if op.body is None:
                    return
                raise ParseError(f"redefinition of {op.name!r}", self.file_id,
                                 op.location.start_line, op.location.start_column)
        target.operations.append(op)

    def parameters(self) -> list[Parameter]:
        self.expect("(")
        params: list[Parameter] = []
        if self.at("void") and self.peek() is not None and self.peek().is_punct(")"):
            self.advance()
        while not self.at(")"):
            if self.at("..."):
                raise self.unsupported("variadic parameter")
            start = self.cur
            _, saw_const, _ = self.specifiers()
            ptype = self.type_ref()
            if saw_const:
                ptype = _with_const(ptype)
            ptype, name = self._param_declarator(ptype)
            if self.at("["):
                raise self.unsupported("array parameter")
            last = self.prev_token()
            default = None
            if self.accept("="):
                default_tokens = self.skip_balanced((",", ")"))
                if not default_tokens:
                    raise self.error("expected default argument")
                default = join_tokens(t.text for t in default_tokens)
            params.append(Parameter(name, ptype, len(params), self.loc(start, last), default))
            if not self.accept(","):
                break
        self.expect(")")
        return params

    def _param_declarator(self, base: TypeRef) -> tuple[TypeRef, str]:
        t = base
        while self.at("*"):
            self.advance()
            t = TypeRef(t.base_name, t.template_args, t.is_const, t.pointer_depth + 1,
                        t.is_reference)
            while self.at("const", "volatile"):
                self.advance()
        if self.at("&", "&&"):
            self.advance()
            t = TypeRef(t.base_name, t.template_args, t.is_const, t.pointer_depth, True)
        if self.at("("):
            raise self.unsupported("function pointer parameter")
        name = self.advance().text if self.at_ident() else ""
        return t, name

    def member_initializers(self) -> list[Statement]:
        inits = []
        while True:
            start = self.cur
            toks = []
            while self.at_ident() or self.at("::", "<"):
                if self.at("<"):
                    state = self.state()
                    try:
                        self.template_arguments()
                    except (ParseError, _Backtrack):
                        self.restore(state)
                        break
                    toks.extend(self.toks[state[0]:self.pos])
                    continue
                toks.append(self.advance())
            if not toks:
                raise self.error("expected member initializer")
            if self.at("("):
                open_tok = self.advance()
                toks.append(open_tok)
                toks.extend(self.skip_balanced((")",)))
                toks.append(self.advance())
            elif self.at("{"):
                toks.extend(self.braced())
            else:
                raise self.error("expected '(' or '{' in member initializer")
            inits.append(self.leaf(StatementKind.EXPRESSION, toks, start, self.prev_token()))
            if not self.accept(","):
                break
        return inits

    def braced(self) -> list[Token]:
        open_tok = self.expect("{")
        inner = self.skip_balanced(("}",))
        return [open_tok, *inner, self.advance()]

    # -- types ------------------------------------------------------------

    def type_ref(self) -> TypeRef:
        is_const = False
        while self.at("const", "volatile"):
            is_const |= self.advance().text == "const"
        self.accept("typename")
        if self.at("class", "struct", "enum"):
            self.advance()
        tok = self.cur
        template_args: tuple[TypeRef, ...] = ()
        if tok is None:
            raise self.error("expected type")
        if tok.kind is TokenKind.KEYWORD and tok.text in BUILTIN_TYPES:
            words = []
            while self.cur is not None and (
                    (self.cur.kind is TokenKind.KEYWORD and self.cur.text in BUILTIN_TYPES)
                    or self.at("const", "volatile")):
                word = self.advance().text
                if word == "const":
                    is_const = True
                elif word != "volatile":
                    words.append(word)
            base = " ".join(words)
        elif tok.is_keyword("decltype"):
            self.advance()
            open_tok = self.expect("(")
            inner = self.skip_balanced((")",))
            self.advance()
            base = "decltype" + join_tokens(t.text for t in [open_tok, *inner]) + ")"
        elif tok.kind is TokenKind.IDENTIFIER or tok.is_punct("::"):
            parts: list[str] = []
            if self.accept("::"):
                parts.append("")
            while True:
                if self.at("template"):
                    self.advance()
                parts.append(self.expect_ident().text)
                if self.at("<"):
                    state = self.state()
                    try:
                        args = self.template_arguments()
                    except _Backtrack:
                        self.restore(state)
                        args = None
                    if args is not None:
                        if self.at("::") and self.peek() is not None \
                                and self.peek().kind is TokenKind.IDENTIFIER:
                            parts[-1] += "<" + ", ".join(str(a) for a in args) + ">"
                        else:
                            template_args = args
                            break
                if self.at("::") and self.peek() is not None and (
                        self.peek().kind is TokenKind.IDENTIFIER or self.peek().is_keyword("template")):
                    self.advance()
                    continue
                break
            base = "::".join(parts).lstrip(":") if parts[0] == "" else "::".join(parts)
        else:
            raise self.error("expected type")
        while self.at("const", "volatile"):
            is_const |= self.advance().text == "const"
        pointer_depth = 0
        is_reference = False
        return TypeRef(base, template_args, is_const, pointer_depth, is_reference)

    def template_arguments(self) -> tuple[TypeRef, ...]:
        self.expect("<")
        args: list[TypeRef] = []
        if self.at(">", ">>"):
            self.close_angle()
            return ()
        while True:
            args.append(self.template_argument())
            if self.accept(","):
                continue
            if self.at(">", ">>"):
                self.close_angle()
                return tuple(args)
            raise _Backtrack()

    def template_argument(self) -> TypeRef:
        state = self.state()
        try:
            arg = self.type_ref()
            arg, _ = self._abstract_declarator(arg)
            if self.at(",", ">", ">>"):
                return arg
        except ParseError:
            pass
        self.restore(state)
        toks = []
        depth = 0
        while True:
            tok = self.cur
            if tok is None:
                raise _Backtrack()
            if depth == 0 and (tok.is_punct(",", ">", ">>")):
                break
            if tok.is_punct(";", "{", "}"):
                raise _Backtrack()
            if tok.is_punct("(", "["):
                depth += 1
            elif tok.is_punct(")", "]"):
                if depth == 0:
                    raise _Backtrack()
                depth -= 1
            toks.append(self.advance())
        if not toks:
            raise _Backtrack()
        return TypeRef(join_tokens(t.text for t in toks))

    def _abstract_declarator(self, t: TypeRef) -> tuple[TypeRef, None]:
        while self.at("*"):
            self.advance()
            t = TypeRef(t.base_name, t.template_args, t.is_const, t.pointer_depth + 1,
                        t.is_reference)
            while self.at("const", "volatile"):
                self.advance()
        if self.at("&", "&&"):
            self.advance()
            t = TypeRef(t.base_name, t.template_args, t.is_const, t.pointer_depth, True)
        return t, None

    def close_angle(self) -> None:
        tok = self.cur
        if tok is None:
            raise _Backtrack()
        if tok.is_punct(">"):
            self.advance()
        elif tok.is_punct(">>") and not self.split_gt:
            self.split_gt = True
        else:
            raise _Backtrack()

    # -- statements -------------------------------------------------------

    def leaf(self, kind: StatementKind, toks: list[Token], first: Token, last: Token) -> Statement:
        text = join_tokens(t.text for t in toks)
        idents = frozenset(t.text for t in toks if t.kind is TokenKind.IDENTIFIER)
        return Statement(kind, self.loc(first, last), normalized_text=text,
                         referenced_identifiers=idents)

    def block(self) -> Statement:
        open_tok = self.expect("{")
        children = []
        while not self.at("}"):
            if self.cur is None:
                raise self.error("expected '}'")
            stmt = self.statement()
            if stmt is not None:
                children.append(stmt)
        close = self.advance()
        return Statement(StatementKind.BLOCK, self.loc(open_tok, close), children=tuple(children))

    def sub_statement(self) -> Statement:
        """Body of a control statement; an empty ';' becomes an empty block."""
        if self.at(";"):
            tok = self.advance()
            return Statement(StatementKind.BLOCK, tok.location)
        stmt = self.statement()
        if stmt is None:
            raise self.error("expected statement")
        return stmt

    def statement(self) -> Optional[Statement]:
        tok = self.cur
        if tok.is_punct("{"):
            return self.block()
        if tok.is_punct(";"):
            self.advance()
            return None
        if tok.kind is TokenKind.KEYWORD:
            text = tok.text
            if text == "if":
                return self.if_statement()
            if text in ("for", "while", "switch"):
                return self.loop_statement(StatementKind(text))
            if text == "do":
                return self.do_statement()
            if text == "try":
                return self.try_statement()
            if text in ("return", "co_return", "throw", "goto"):
                kind = StatementKind.RETURN if text in ("return", "co_return") \
                    else StatementKind.EXPRESSION
                return self.simple(kind)
            if text in ("break", "continue"):
                first = self.advance()
                end = self.expect(";")
                return self.leaf(StatementKind(text), [first, end], first, end)
            if text in ("case", "default"):
                first = tok
                toks = [self.advance()]
                while not self.at(":"):
                    if self.cur is None or self.at(";", "{", "}"):
                        raise self.error("expected ':' after case label")
                    toks.append(self.advance())
                toks.append(self.advance())
                return self.leaf(StatementKind.EXPRESSION, toks, first, toks[-1])
            if text in ("class", "struct", "union") and self.is_class_definition():
                raise self.unsupported("class defined inside a function", tok)
            if text in ("using", "typedef", "static_assert", "enum"):
                self.skip_declaration()
                return None
        if tok.kind is TokenKind.IDENTIFIER and self.peek() is not None \
                and self.peek().is_punct(":"):
            first = self.advance()
            colon = self.advance()
            return self.leaf(StatementKind.EXPRESSION, [first, colon], first, colon)
        decl = self.try_declaration()
        if decl is not None:
            return decl
        return self.simple(StatementKind.EXPRESSION)

    def simple(self, kind: StatementKind) -> Statement:
        first = self.cur
        toks = self.skip_balanced((";",))
        end = self.advance()
        if not toks:
            raise self.error("expected expression", end)
        return self.leaf(kind, toks + [end], first, end)

    def try_declaration(self) -> Optional[Statement]:
        state = self.state()
        first = self.cur
        try:
            variables = self.local_declarators((";",))
        except (ParseError, _Backtrack):
            self.restore(state)
            return None
        if variables is None:
            self.restore(state)
            return None
        end = self.expect(";")
        toks = self.toks[state[0]:self.pos]
        stmt = self.leaf(StatementKind.DECLARATION, toks, first, end)
        return Statement(stmt.kind, stmt.location, stmt.normalized_text,
                         declared_variables=tuple(variables),
                         referenced_identifiers=stmt.referenced_identifiers)

    def local_declarators(self, terminators: tuple[str, ...]) -> Optional[list[tuple[str, TypeRef]]]:
        """Parse `type name [init] (, name [init])*` up to a terminator; None if not a declaration."""
        _, saw_const, _ = self.specifiers()
        if self.cur is None or self.cur.kind is TokenKind.LITERAL:
            return None
        if self.cur.kind is TokenKind.KEYWORD and self.cur.text not in BUILTIN_TYPES \
                and self.cur.text not in ("const", "volatile", "typename", "decltype", "class",
                                          "struct", "enum"):
            return None
        base = self.type_ref()
        if saw_const:
            base = _with_const(base)
        variables = []
        while True:
            t, _ = self._abstract_declarator(base)
            if not self.at_ident():
                return None
            name = self.advance().text
            nxt = self.cur
            if nxt is None:
                return None
            if nxt.is_punct("["):
                raise self.unsupported("array declarator")
            if not (nxt.is_punct("=", "(", "{", ",") or
                    (nxt.kind is TokenKind.PUNCTUATOR and nxt.text in terminators)):
                return None
            variables.append((name, t))
            if self.accept("="):
                self.skip_balanced((",",) + terminators)
            elif self.at("("):
                self.advance()
                self.skip_balanced((")",))
                self.advance()
            elif self.at("{"):
                self.braced()
            if self.accept(","):
                continue
            if self.cur is not None and self.cur.kind is TokenKind.PUNCTUATOR \
                    and self.cur.text in terminators:
                return variables
            return None

    def paren_header(self) -> list[Token]:
        open_tok = self.expect("(")
        inner = self.skip_balanced((")",))
        return [open_tok, *inner, self.advance()]

    def header_declarations(self, inner: list[Token]) -> tuple[tuple[str, TypeRef], ...]:
        """Variables declared in a control header such as `for (int i = 0; ...)`."""
        if not inner:
            return ()
        sub = Parser(inner + [Token(TokenKind.PUNCTUATOR, ";", inner[-1].location)], self.file_id)
        try:
            found = sub.local_declarators((";", ":"))
        except (ParseError, _Backtrack):
            return ()
        return tuple(found or ())

    def composite(self, kind: StatementKind, header: list[Token], first: Token,
                  children: list[Statement], decls=()) -> Statement:
        last = children[-1].location if children else header[-1].location
        loc = SourceLocation(self.file_id, first.location.start_line, first.location.start_column,
                             last.end_line, last.end_column)
        return Statement(kind, loc, header_text=join_tokens(t.text for t in header),
                         children=tuple(children), declared_variables=tuple(decls),
                         referenced_identifiers=frozenset(
                             t.text for t in header if t.kind is TokenKind.IDENTIFIER))

    def if_statement(self) -> Statement:
        first = self.advance()
        header = [first]
        if self.at("constexpr"):
            header.append(self.advance())
        parens = self.paren_header()
        header.extend(parens)
        then = self.sub_statement()
        children = [then]
        if self.accept("else"):
            children.append(self.sub_statement())
        return self.composite(StatementKind.IF, header, first, children,
                              self.header_declarations(_init_clause(parens[1:-1])))

    def loop_statement(self, kind: StatementKind) -> Statement:
        first = self.advance()
        parens = self.paren_header()
        body = self.sub_statement()
        inner = parens[1:-1]
        decls = self.header_declarations(_init_clause(inner) if kind is StatementKind.FOR else inner)
        return self.composite(kind, [first, *parens], first, [body], decls)

    def do_statement(self) -> Statement:
        first = self.advance()
        body = self.sub_statement()
        while_tok = self.expect("while")
        parens = self.paren_header()
        end = self.expect(";")
        stmt = self.composite(StatementKind.DO, [first, while_tok, *parens], first, [body])
        return Statement(stmt.kind, self.loc(first, end), header_text=stmt.header_text,
                         children=stmt.children,
                         referenced_identifiers=stmt.referenced_identifiers)

    def try_statement(self) -> Statement:
        first = self.advance()
        children = [self.block()]
        while self.at("catch"):
            catch_tok = self.advance()
            parens = self.paren_header()
            handler = self.block()
            inner = parens[1:-1]
            decls = () if len(inner) == 1 and inner[0].is_punct("...") \
                else self.header_declarations(inner)
            children.append(Statement(
                StatementKind.BLOCK, self.loc(catch_tok, self.prev_token()),
                header_text=join_tokens(t.text for t in [catch_tok, *parens]),
                children=handler.children, declared_variables=decls,
                referenced_identifiers=frozenset(
                    t.text for t in parens if t.kind is TokenKind.IDENTIFIER)))
        if len(children) == 1:
            raise self.error("expected 'catch'")
        return self.composite(StatementKind.TRY, [first], first, children)

    # -- assembly ---------------------------------------------------------

    def finish(self) -> CodeModel:
        classes: list[ClassDecl] = []
        generalizations: list[Generalization] = []
        for builder in self.slots:
            if builder.kind is ClassKind.ARTIFICIAL:
                members = [m.location for m in (*builder.attributes, *builder.operations)]
                loc = members[0]
                for m in members[1:]:
                    loc = loc.span(m)
                builder.location = loc
            cls = builder.build()
            classes.append(cls)
            for base in builder.bases:
                generalizations.append(Generalization(
                    cls.qualified_name, self.resolve_class(base, builder.package)))
        return CodeModel(self.file_id, tuple(classes), tuple(generalizations))

    def resolve_class(self, spelled: str, package: str) -> str:
        """Qualified name of a base class, searching enclosing namespaces; verbatim if unknown."""
        if spelled.startswith("::"):
            spelled = spelled[2:]
            return spelled
        scope = package.split("::") if package else []
        while True:
            candidate = qualify("::".join(scope), spelled)
            if candidate in self.classes:
                return candidate
            if not scope:
                return spelled
            scope.pop()


def _with_const(t: TypeRef, value: bool = True) -> TypeRef:
    return TypeRef(t.base_name, t.template_args, value, t.pointer_depth, t.is_reference)


def _init_clause(inner: list[Token]) -> list[Token]:
    """Tokens before the first top-level ';' (the init-statement of for/if)."""
    depth = 0
    for i, tok in enumerate(inner):
        if tok.is_punct("(", "[", "{"):
            depth += 1
        elif tok.is_punct(")", "]", "}"):
            depth -= 1
        elif depth == 0 and tok.is_punct(";"):
            return inner[:i]
    return inner


def parse(source: str, file_id: str = "") -> CodeModel:
    """Parse one C++ source text into a code model."""
    tokens = _strip_attribute_specifiers(code_tokens(tokenize(source, file_id)))
    return Parser(tokens, file_id).parse_translation_unit()


def parse_file(path: str | Path, file_id: Optional[str] = None) -> CodeModel:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), file_id if file_id is not None else str(path))
