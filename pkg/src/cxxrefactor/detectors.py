"""Rule-based refactoring detection over a :class:`ModelDiff`."""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .lexer import TokenKind, code_tokens, join_tokens, substitute_identifiers, tokenize
from .matcher import (
    BODY_MATCH_THRESHOLD,
    ClassDiff,
    MatchKind,
    ModelDiff,
    OperationMatch,
    RenameOrigin,
    StatementMapping,
    match_operation_bodies,
)
from .model import CodeModel, OperationDecl, SourceLocation, Statement, StatementKind


class RefactoringType(str, Enum):
    RENAME_CLASS = "RenameClass"
    MOVE_CLASS = "MoveClass"
    RENAME_METHOD = "RenameMethod"
    MOVE_METHOD = "MoveMethod"
    PULL_UP_METHOD = "PullUpMethod"
    EXTRACT_METHOD = "ExtractMethod"
    INLINE_METHOD = "InlineMethod"
    EXTRACT_AND_MOVE_METHOD = "ExtractAndMoveMethod"
    RENAME_PARAMETER = "RenameParameter"
    RENAME_VARIABLE = "RenameVariable"
    RENAME_FIELD = "RenameField"
    MOVE_FIELD = "MoveField"
    PULL_UP_FIELD = "PullUpField"
    CHANGE_PARAMETER_TYPE = "ChangeParameterType"
    CHANGE_RETURN_TYPE = "ChangeReturnType"
    CHANGE_VARIABLE_TYPE = "ChangeVariableType"
    CHANGE_FIELD_TYPE = "ChangeFieldType"
    ADD_METHOD_MODIFIER = "AddMethodModifier"
    REMOVE_METHOD_MODIFIER = "RemoveMethodModifier"
    ADD_ATTRIBUTE_MODIFIER = "AddAttributeModifier"
    REMOVE_ATTRIBUTE_MODIFIER = "RemoveAttributeModifier"

    @property
    def display_name(self) -> str:
        """'PullUpField' -> 'Pull Up Field'."""
        return re.sub(r"(?<!^)(?=[A-Z])", " ", self.value)


# findings whose affected lines are whole member spans rather than declaration lines
SPAN_TYPES = frozenset({
    RefactoringType.MOVE_METHOD, RefactoringType.PULL_UP_METHOD, RefactoringType.EXTRACT_METHOD,
    RefactoringType.INLINE_METHOD, RefactoringType.EXTRACT_AND_MOVE_METHOD,
    RefactoringType.MOVE_FIELD, RefactoringType.PULL_UP_FIELD,
})
# findings anchored on a class or operation: only the first line is the declaration
HEADER_TYPES = frozenset({
    RefactoringType.RENAME_CLASS, RefactoringType.MOVE_CLASS, RefactoringType.RENAME_METHOD,
    RefactoringType.ADD_METHOD_MODIFIER, RefactoringType.REMOVE_METHOD_MODIFIER,
    RefactoringType.CHANGE_RETURN_TYPE,
})


@dataclass(frozen=True)
class Refactoring:
    type: RefactoringType
    description: str
    before_location: SourceLocation
    after_location: SourceLocation
    detail: dict = field(hash=False)
    related_locations: tuple[SourceLocation, ...] = ()
    explained_before: tuple[SourceLocation, ...] = ()
    affected_lines_after: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        """Display name, with the modifier in parentheses for modifier findings."""
        if "modifier" in self.detail:
            return f"{self.type.display_name} ({self.detail['modifier']})"
        return self.type.display_name

    def key(self) -> tuple:
        return self.type.value, tuple(sorted(self.detail.items()))


def _head(loc: SourceLocation) -> SourceLocation:
    return SourceLocation(loc.file_id, loc.start_line, loc.start_column,
                          loc.start_line, loc.start_column)


def affected_lines(finding: Refactoring) -> tuple[int, ...]:
    """Lines of the after version touched by `finding`, ascending."""
    lines: set[int] = set()
    if finding.type in SPAN_TYPES:
        for loc in (finding.after_location, *finding.related_locations):
            lines.update(loc.lines)
    else:
        anchor = _head(finding.after_location) if finding.type in HEADER_TYPES \
            else finding.after_location
        lines.update(anchor.lines)
        for loc in finding.related_locations:
            lines.update(loc.lines)
    return tuple(sorted(lines))


class _Collector:
    def __init__(self):
        self.findings: list[Refactoring] = []

    def add(self, rtype: RefactoringType, description: str, before: SourceLocation,
            after: SourceLocation, detail: dict, related: Iterable[SourceLocation] = (),
            explained: Iterable[SourceLocation] = ()) -> None:
        self.findings.append(Refactoring(rtype, description, before, after, dict(detail),
                                         tuple(related), tuple(explained)))


def _mapping_location(m: StatementMapping) -> SourceLocation:
    return m.after.location if m.after.is_leaf else _head(m.after.location)


def _rename_uses(om: OperationMatch, name: str, origin: RenameOrigin) -> list[SourceLocation]:
    body = om.body
    if body is None:
        return []
    rename = body.rename(name)
    if rename is None or rename.origin is not origin:
        return []
    return [_mapping_location(m) for m in body.mappings if name in m.renames_used]


def _modifier_findings(out: _Collector, kind: str, member: str, before, after,
                       cls: str) -> None:
    """Add/remove modifier findings for a matched method or attribute."""
    if kind == "method":
        add_t, rem_t = RefactoringType.ADD_METHOD_MODIFIER, RefactoringType.REMOVE_METHOD_MODIFIER
    else:
        add_t, rem_t = (RefactoringType.ADD_ATTRIBUTE_MODIFIER,
                        RefactoringType.REMOVE_ATTRIBUTE_MODIFIER)
    for rtype, mods in ((add_t, after.modifiers - before.modifiers),
                        (rem_t, before.modifiers - after.modifiers)):
        for mod in sorted(m.value for m in mods):
            out.add(rtype, f"{rtype.display_name} {mod} in {kind} {member} from class {cls}",
                    before.location, after.location,
                    {"class": cls, kind: member, "modifier": mod})


def _class_findings(out: _Collector, cd: ClassDiff) -> None:
    b, a = cd.before, cd.after
    if b.is_artificial or a.is_artificial:
        return
    if b.simple_name != a.simple_name:
        out.add(RefactoringType.RENAME_CLASS,
                f"Rename Class {b.qualified_name} renamed to {a.qualified_name}",
                b.location, a.location, {"before": b.qualified_name, "after": a.qualified_name})
    if b.package != a.package:
        out.add(RefactoringType.MOVE_CLASS,
                f"Move Class {b.qualified_name} moved to {a.qualified_name}",
                b.location, a.location, {"before": b.qualified_name, "after": a.qualified_name})


def _attribute_findings(out: _Collector, cd: ClassDiff, diff: ModelDiff) -> None:
    cls = cd.after.qualified_name
    for am in cd.attribute_matches:
        b, a = am.before, am.after
        if b.name != a.name:
            uses = [loc for d in diff.class_diffs for om in d.operation_matches
                    for loc in _rename_uses(om, b.name, RenameOrigin.ATTRIBUTE)
                    if d is cd or d.before.is_artificial or cd.before.is_artificial]
            out.add(RefactoringType.RENAME_FIELD,
                    f"Rename Attribute {b.name} to {a.name} in class {cls}",
                    b.location, a.location, {"class": cls, "before": b.name, "after": a.name},
                    related=uses)
        if b.type != a.type:
            out.add(RefactoringType.CHANGE_FIELD_TYPE,
                    f"Change Attribute Type {b.type} {b.name} to {a.type} {a.name} in class {cls}",
                    b.location, a.location,
                    {"class": cls, "name": a.name, "before": str(b.type), "after": str(a.type)})
        _modifier_findings(out, "attribute", a.name, b, a, cls)


def _paired_parameters(b: OperationDecl, a: OperationDecl):
    if len(b.parameters) == len(a.parameters):
        return list(zip(b.parameters, a.parameters))
    by_name = {p.name: p for p in a.parameters}
    return [(p, by_name[p.name]) for p in b.parameters if p.name in by_name]


def _operation_findings(out: _Collector, cd: ClassDiff) -> None:
    cls = cd.after.qualified_name
    for om in cd.operation_matches:
        b, a = om.before, om.after
        special = b.is_constructor or a.is_constructor or b.is_destructor or a.is_destructor
        if b.name != a.name and not special and om.body_similarity >= BODY_MATCH_THRESHOLD:
            out.add(RefactoringType.RENAME_METHOD,
                    f"Rename Method {b.name} renamed to {a.name} in class {cls}",
                    b.location, a.location, {"class": cls, "before": b.name, "after": a.name})
        if b.return_type is not None and a.return_type is not None \
                and b.return_type != a.return_type:
            out.add(RefactoringType.CHANGE_RETURN_TYPE,
                    f"Change Return Type {b.return_type} to {a.return_type} in method {a.name} "
                    f"from class {cls}",
                    b.location, a.location,
                    {"class": cls, "method": a.name, "before": str(b.return_type),
                     "after": str(a.return_type)})
        for pb, pa in _paired_parameters(b, a):
            if pb.type != pa.type:
                out.add(RefactoringType.CHANGE_PARAMETER_TYPE,
                        f"Change Parameter Type {pb.type} {pb.name} to {pa.type} {pa.name} "
                        f"in method {a.name} from class {cls}",
                        pb.location, pa.location,
                        {"class": cls, "method": a.name, "name": pa.name,
                         "before": str(pb.type), "after": str(pa.type)})
        _modifier_findings(out, "method", a.name, b, a, cls)
        if om.body is None:
            continue
        for rename in om.body.renames:
            if rename.origin is RenameOrigin.PARAMETER:
                rtype, what = RefactoringType.RENAME_PARAMETER, "Parameter"
            elif rename.origin is RenameOrigin.VARIABLE:
                rtype, what = RefactoringType.RENAME_VARIABLE, "Variable"
            else:
                continue
            anchor = rename.after_location
            before_anchor = rename.before_location
            if rtype is RefactoringType.RENAME_VARIABLE:
                anchor, before_anchor = _decl_anchor(om, rename.after), before_anchor
            out.add(rtype, f"Rename {what} {rename.before} to {rename.after} in method {a.name} "
                           f"from class {cls}",
                    before_anchor, anchor,
                    {"class": cls, "method": a.name, "before": rename.before,
                     "after": rename.after},
                    related=_rename_uses(om, rename.before, rename.origin))
        subs = om.body.substitutions
        for m in om.body.mappings:
            vb, va = m.before.declared_variables, m.after.declared_variables
            if not vb or len(vb) != len(va):
                continue
            for (nb, tb), (na, ta) in zip(vb, va):
                if tb != ta and (nb == na or subs.get(nb) == na):
                    loc = m.after.location if m.after.is_leaf else _head(m.after.location)
                    out.add(RefactoringType.CHANGE_VARIABLE_TYPE,
                            f"Change Variable Type {tb} {nb} to {ta} {na} in method {a.name} "
                            f"from class {cls}",
                            m.before.location, loc,
                            {"class": cls, "method": a.name, "name": na,
                             "before": str(tb), "after": str(ta)})


def _decl_anchor(om: OperationMatch, name: str) -> SourceLocation:
    for s in om.after.body.walk():
        if any(n == name for n, _ in s.declared_variables):
            return s.location if s.is_leaf else _head(s.location)
    return om.after.location


def _operation_pair_similarity(b: OperationDecl, a: OperationDecl) -> float:
    if b.signature_key == a.signature_key:
        return 1.0
    return match_operation_bodies(b, a).similarity


def _move_findings(out: _Collector, diff: ModelDiff, after: CodeModel):
    """Members that left one matched class and arrived in another."""
    consumed_removed: set[int] = set()
    consumed_added: set[int] = set()

    def is_pull_up(src: ClassDiff, dst: ClassDiff) -> bool:
        return dst.after.qualified_name in after.ancestors_of(src.after.qualified_name)

    candidates = []
    for xi, cdx in enumerate(diff.class_diffs):
        for ri, rop in enumerate(cdx.removed_operations):
            for yi, cdy in enumerate(diff.class_diffs):
                if cdy is cdx:
                    continue
                for ai, aop in enumerate(cdy.added_operations):
                    sim = _operation_pair_similarity(rop, aop)
                    if sim >= BODY_MATCH_THRESHOLD:
                        candidates.append((-sim, xi, ri, yi, ai, cdx, rop, cdy, aop))
    candidates.sort(key=lambda c: c[:5])
    for _, _, _, _, _, cdx, rop, cdy, aop in candidates:
        if id(rop) in consumed_removed or id(aop) in consumed_added:
            continue
        consumed_removed.add(id(rop))
        consumed_added.add(id(aop))
        src, dst = cdx.after.qualified_name, cdy.after.qualified_name
        if is_pull_up(cdx, cdy):
            rtype, verb = RefactoringType.PULL_UP_METHOD, "pulled up"
        else:
            rtype, verb = RefactoringType.MOVE_METHOD, "moved"
        out.add(rtype, f"{rtype.display_name} {rop.name} from class {src} {verb} to "
                       f"{aop.name} in class {dst}",
                rop.location, aop.location, {"method": aop.name, "from": src, "to": dst},
                explained=[rop.location])

    attr_candidates = []
    for xi, cdx in enumerate(diff.class_diffs):
        for ri, rat in enumerate(cdx.removed_attributes):
            for yi, cdy in enumerate(diff.class_diffs):
                if cdy is cdx:
                    continue
                for ai, aat in enumerate(cdy.added_attributes):
                    if rat.signature_key == aat.signature_key:
                        attr_candidates.append((xi, ri, yi, ai, cdx, rat, cdy, aat))
    taken: set[int] = set()
    for _, _, _, _, cdx, rat, cdy, aat in sorted(attr_candidates, key=lambda c: c[:4]):
        if id(rat) in taken or id(aat) in taken:
            continue
        taken.update((id(rat), id(aat)))
        src, dst = cdx.after.qualified_name, cdy.after.qualified_name
        if is_pull_up(cdx, cdy):
            rtype, verb = RefactoringType.PULL_UP_FIELD, "pulled up"
        else:
            rtype, verb = RefactoringType.MOVE_FIELD, "moved"
        out.add(rtype, f"{rtype.display_name} {rat.name} from class {src} {verb} to class {dst}",
                rat.location, aat.location, {"field": aat.name, "from": src, "to": dst},
                explained=[rat.location])
    return consumed_removed, consumed_added


_IDENT_RE = re.compile(r"[A-Za-z_]\w*")


@lru_cache(maxsize=4096)
def _call_site(text: str, name: str):
    """Split canonical `text` around its first call to `name`.

    Returns (prefix, arguments, suffix) as canonical strings, the prefix
    without any `X::`, `obj.` or `this->` qualifier of the callee, or None
    when `text` does not call `name`.
    """
    toks = code_tokens(tokenize(text))
    for i, tok in enumerate(toks[:-1]):
        if not (tok.kind is TokenKind.IDENTIFIER and tok.text == name
                and toks[i + 1].is_punct("(")):
            continue
        args: list[list[str]] = [[]]
        depth = 0
        end = len(toks)
        for j in range(i + 2, len(toks)):
            t = toks[j]
            if t.is_punct("(", "[", "{"):
                depth += 1
            elif t.is_punct(")", "]", "}"):
                if depth == 0:
                    end = j
                    break
                depth -= 1
            elif depth == 0 and t.is_punct(","):
                args.append([])
                continue
            args[-1].append(t.text)
        start = i
        while start >= 2 and toks[start - 1].is_punct("::", ".", "->") \
                and (toks[start - 2].kind is TokenKind.IDENTIFIER
                     or toks[start - 2].is_keyword("this")):
            start -= 2
        arg_texts = tuple(join_tokens(a) for a in args) if args != [[]] else ()
        return (join_tokens(t.text for t in toks[:start]), arg_texts,
                join_tokens(t.text for t in toks[end + 1:]))
    return None


def call_arguments(text: str, name: str) -> Optional[list[str]]:
    """Arguments of the first call to `name` in canonical `text`; None when there is no call.

    Each argument is returned as its identifier when it is a bare identifier,
    otherwise as an empty string.
    """
    site = _call_site(text, name)
    if site is None:
        return None
    return [a if _IDENT_RE.fullmatch(a) else "" for a in site[1]]


def _canon(text: str) -> str:
    return join_tokens(t.text for t in code_tokens(tokenize(text)))


def _expanded_calls(text: str, callee: OperationDecl) -> set[str]:
    """`text` with its call to `callee` replaced by the callee's returned expression."""
    site = _call_site(text, callee.name)
    if site is None:
        return set()
    prefix, args, suffix = site
    returns = [s.normalized_text for s in callee.leaves() if s.kind is StatementKind.RETURN]
    if len(returns) != 1 or not returns[0].startswith("return "):
        return set()
    to_arg = {p.name: f"( {a} )" if not _IDENT_RE.fullmatch(a) else a
              for p, a in zip(callee.parameters, args) if p.name}
    expr = _canon(substitute_identifiers(returns[0][len("return "):], to_arg))
    return {_canon(f"{prefix} {e} {suffix}") for e in (expr, f"( {expr} )")}

def _find_call(stmts: Iterable[Statement], name: str) -> Optional[list[str]]:
    for s in stmts:
        text = s.normalized_text if s.is_leaf else s.header_text
        if name in s.referenced_identifiers:
            args = call_arguments(text, name)
            if args is not None:
                return args
    return None


def _not_preserved(om: OperationMatch) -> list[Statement]:
    """Leaves of the before body that were not kept (exactly or up to renaming)."""
    kept = {id(m.before) for m in om.statement_mappings if m.match_kind is not MatchKind.MODIFIED}
    return [s for s in om.before.leaves() if id(s) not in kept]


def _not_preserved_after(om: OperationMatch) -> list[Statement]:
    kept = {id(m.after) for m in om.statement_mappings if m.match_kind is not MatchKind.MODIFIED}
    return [s for s in om.after.leaves() if id(s) not in kept]


def _extract_findings(out: _Collector, diff: ModelDiff, consumed_added: set[int]) -> None:
    added = [(cd, op) for cd in diff.class_diffs for op in cd.added_operations
             if id(op) not in consumed_added and op.body is not None]
    added += [(None, op) for c in diff.added_classes for op in c.operations if op.body is not None]
    for cd in diff.class_diffs:
        for om in cd.operation_matches:
            if om.body is None:
                continue
            residue = _not_preserved(om)
            if not residue:
                continue
            for owner_diff, b_op in added:
                args = _find_call(om.after.body.walk(), b_op.name)
                if args is None:
                    continue
                to_param = {arg: p.name for arg, p in zip(args, b_op.parameters)
                            if arg and p.name and arg != p.name}
                b_texts = {s.normalized_text for s in b_op.leaves()}
                moved = []
                for s in residue:
                    renamed = substitute_identifiers(s.normalized_text, om.body.substitutions)
                    variants = {s.normalized_text, renamed,
                                substitute_identifiers(renamed, to_param)}
                    if variants & b_texts:
                        moved.append(s)
                expanded = {t for c in om.after.leaves() if b_op.name in c.referenced_identifiers
                            for t in _expanded_calls(c.normalized_text, b_op)}
                if expanded:
                    seen = {id(s) for s in moved}
                    moved += [s for s in residue if id(s) not in seen and substitute_identifiers(
                        s.normalized_text, om.body.substitutions) in expanded]
                if not moved:
                    continue
                src = cd.after.qualified_name
                dst = owner_diff.after.qualified_name if owner_diff is not None else None
                if owner_diff is cd:
                    rtype = RefactoringType.EXTRACT_METHOD
                    desc = f"Extract Method {b_op.name} extracted from {om.after.name} in class {src}"
                    detail = {"class": src, "source": om.after.name, "extracted": b_op.name}
                else:
                    if dst is None:
                        dst = _owner_name(diff.after_model, b_op)
                    rtype = RefactoringType.EXTRACT_AND_MOVE_METHOD
                    desc = (f"Extract And Move Method {b_op.name} extracted from {om.after.name} "
                            f"in class {src} & moved to class {dst}")
                    detail = {"from": src, "to": dst, "source": om.after.name,
                              "extracted": b_op.name}
                out.add(rtype, desc, om.before.location, b_op.location, detail,
                        related=[om.after.location],
                        explained=[s.location for s in moved])


def _owner_name(model: CodeModel, op: OperationDecl) -> str:
    for c in model.classes:
        if any(o is op for o in c.operations):
            return c.qualified_name
    return ""


def _inline_findings(out: _Collector, diff: ModelDiff, consumed_removed: set[int]) -> None:
    removed = [(cd, op) for cd in diff.class_diffs for op in cd.removed_operations
               if id(op) not in consumed_removed and op.body is not None]
    for cd in diff.class_diffs:
        for om in cd.operation_matches:
            if om.body is None:
                continue
            gained = _not_preserved_after(om)
            if not gained:
                continue
            gained_texts = {s.normalized_text for s in gained}
            for owner_diff, b_op in removed:
                if owner_diff is not cd:
                    continue
                args = _find_call(om.before.body.walk(), b_op.name)
                if args is None:
                    continue
                to_arg = {p.name: arg for arg, p in zip(args, b_op.parameters)
                          if arg and p.name and arg != p.name}
                hits = []
                for s in b_op.leaves():
                    with_args = substitute_identifiers(s.normalized_text, to_arg)
                    variants = {s.normalized_text, with_args,
                                substitute_identifiers(with_args, om.body.substitutions)}
                    if variants & gained_texts:
                        hits.append(s)
                for s in om.before.leaves():
                    if b_op.name in s.referenced_identifiers:
                        expanded = {substitute_identifiers(t, om.body.substitutions)
                                    for t in _expanded_calls(s.normalized_text, b_op)}
                        if expanded & gained_texts:
                            hits.append(s)
                if not hits:
                    continue
                cls = cd.after.qualified_name
                out.add(RefactoringType.INLINE_METHOD,
                        f"Inline Method {b_op.name} inlined to {om.after.name} in class {cls}",
                        b_op.location, om.after.location,
                        {"class": cls, "target": om.after.name, "inlined": b_op.name},
                        explained=[b_op.location])


def detect(diff: ModelDiff, before: Optional[CodeModel] = None,
           after: Optional[CodeModel] = None) -> list[Refactoring]:
    """All refactorings evidenced by `diff`, ordered by after-location then type.

    `before` and `after` default to the models the diff was built from.
    """
    del before  # only the after model's generalizations matter
    after = after or diff.after_model
    out = _Collector()
    for cd in diff.class_diffs:
        _class_findings(out, cd)
        _attribute_findings(out, cd, diff)
        _operation_findings(out, cd)
    consumed_removed, consumed_added = _move_findings(out, diff, after)
    _extract_findings(out, diff, consumed_added)
    _inline_findings(out, diff, consumed_removed)
    findings = []
    for f in out.findings:
        lines = affected_lines(f)
        findings.append(Refactoring(f.type, f.description, f.before_location, f.after_location,
                                    f.detail, f.related_locations, f.explained_before, lines))
    findings.sort(key=lambda f: (f.after_location.start_line, f.after_location.start_column,
                                 f.after_location.end_line, f.after_location.end_column,
                                 f.type.value, f.description))
    return findings
