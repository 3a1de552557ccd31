"""Property tests over generated programs of the supported subset."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cxxrefactor.lexer import code_tokens, tokenize
from cxxrefactor.matcher import MatchKind, match_models
from cxxrefactor.model import deserialize_model, serialize_model
from cxxrefactor.parser import parse
from cxxrefactor.report import compare_sources

from partition import check_partition

KEYWORDISH = {"if", "for", "do", "int", "new", "try", "and", "or", "not", "xor", "asm", "auto"}
names = st.from_regex(r"[a-z][a-z0-9]{0,5}", fullmatch=True).filter(
    lambda n: n not in KEYWORDISH)
types = st.sampled_from(["int", "double", "long", "bool", "std::string", "char*"])


@st.composite
def expressions(draw, idents):
    parts = [draw(st.sampled_from(idents))]
    for _ in range(draw(st.integers(0, 3))):
        parts += [draw(st.sampled_from(["+", "-", "*", "<"])),
                  draw(st.one_of(st.sampled_from(idents), st.integers(0, 99).map(str)))]
    return " ".join(parts)


@st.composite
def methods(draw, fields):
    name = draw(names)
    params = draw(st.lists(names, max_size=3, unique=True))
    idents = fields + params or ["0"]
    body = []
    local = draw(names)
    if local not in idents:
        body.append(f"int {local} = {draw(expressions(idents))};")
        idents = idents + [local]
    for _ in range(draw(st.integers(0, 3))):
        target = draw(st.sampled_from(idents))
        if target.isidentifier():
            stmt = f"{target} = {draw(expressions(idents))};"
            if draw(st.booleans()):
                stmt = f"if ({draw(expressions(idents))}) {{ {stmt} }}"
            body.append(stmt)
    body.append(f"return {draw(expressions(idents))};")
    mods = "static " if draw(st.booleans()) else ""
    plist = ", ".join(f"int {p}" for p in params)
    return name, f"  {mods}int {name}({plist}) {{\n    " + "\n    ".join(body) + "\n  }\n"


@st.composite
def programs(draw):
    out = []
    used = set()
    for _ in range(draw(st.integers(0, 3))):
        cname = draw(names.map(str.capitalize).filter(lambda n: n not in used))
        used.add(cname)
        fields = draw(st.lists(names, max_size=3, unique=True))
        members = [f"  {draw(types)} {f};\n" for f in fields]
        method_names = set(fields)
        for _ in range(draw(st.integers(0, 3))):
            mname, text = draw(methods([f for f in fields]))
            if mname in method_names:
                continue
            method_names.add(mname)
            members.append(text)
        out.append(f"class {cname} {{\npublic:\n{''.join(members)}}};\n")
    return "".join(out)


settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@given(programs())
def test_roundtrip(src):
    model = parse(src, "gen.cpp")
    assert deserialize_model(serialize_model(model)) == model


@given(programs())
def test_identity(src):
    model = parse(src)
    diff = match_models(model, model)
    assert not diff.added_classes and not diff.removed_classes
    for cd in diff.class_diffs:
        assert not cd.added_operations and not cd.removed_operations
        for om in cd.operation_matches:
            assert all(m.match_kind is MatchKind.EXACT for m in om.statement_mappings)
    assert compare_sources(src, src).is_empty


@given(programs(), programs())
def test_partition(before, after):
    check_partition(match_models(parse(before), parse(after)))


@given(programs(), programs())
def test_behavior_never_overlaps_refactored_lines(before, after):
    report = compare_sources(before, after)
    claimed = {n for r in report.refactorings for n in r.affected_lines_after}
    for change in report.behavior_changes:
        if not change.kind.in_before_file:
            assert not claimed.intersection(change.lines)


@given(programs())
def test_token_texts_reproduce_source(src):
    squeezed = "".join(src.split())
    assert "".join(t.text for t in tokenize(src)) == squeezed
    for tok in code_tokens(tokenize(src)):
        loc = tok.location
        line = src.splitlines()[loc.start_line - 1]
        assert line[loc.start_column - 1:loc.end_column] == tok.text


@st.composite
def edited_pairs(draw):
    """A program and a lightly edited copy: renames, operator flips, dropped lines."""
    src = draw(programs())
    after = src
    words = sorted(set(w for t in code_tokens(tokenize(src))
                       if t.kind.value == "identifier" for w in [t.text]))
    for _ in range(draw(st.integers(0, 3))):
        edit = draw(st.sampled_from(["rename", "flip", "drop"]))
        if edit == "rename" and words:
            old = draw(st.sampled_from(words))
            new = old + "x"
            after = " ".join(new if t.text == old else t.text
                             for t in tokenize(after)).replace(";", ";\n").replace("{", "{\n")
        elif edit == "flip" and "+" in after:
            after = after.replace("+", "-", 1)
        elif edit == "drop":
            lines = after.splitlines()
            candidates = [i for i, ln in enumerate(lines) if ln.strip().endswith(";")
                          and "=" in ln and not ln.strip().startswith("return")
                          and not ln.strip().startswith("}")]
            if candidates:
                del lines[draw(st.sampled_from(candidates))]
                after = "\n".join(lines) + "\n"
    return src, after


@given(edited_pairs())
def test_partition_on_edits(pair):
    before, after = pair
    check_partition(match_models(parse(before), parse(after)))


@given(edited_pairs())
def test_disjointness_on_edits(pair):
    report = compare_sources(*pair)
    claimed = {n for r in report.refactorings for n in r.affected_lines_after}
    for change in report.behavior_changes:
        if not change.kind.in_before_file:
            assert not claimed.intersection(change.lines)
