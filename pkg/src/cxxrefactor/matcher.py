"""Alignment of two code models: classes, then members, then statements.

The procedure is deterministic. Classes pair on qualified name first, then
greedily by similarity. Inside a class pair, attributes and operations pair
on exact signature, then equal name, then content. Operation bodies are
aligned leaf by leaf in three passes: exact text, text equal under an
inferred identifier substitution, and positional pairing of the leftovers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .lexer import identifiers_in, substitute_identifiers
from .model import (
    AttributeDecl,
    ClassDecl,
    CodeModel,
    OperationDecl,
    SourceLocation,
    Statement,
)

CLASS_MATCH_THRESHOLD = 0.5
BODY_MATCH_THRESHOLD = 0.5


class MatchKind(str, Enum):
    EXACT = "exact"
    RENAMED = "renamed-identifier"
    MODIFIED = "modified"


class RenameOrigin(str, Enum):
    PARAMETER = "parameter"
    VARIABLE = "variable"
    ATTRIBUTE = "attribute"


@dataclass(frozen=True)
class Rename:
    before: str
    after: str
    origin: RenameOrigin
    before_location: SourceLocation
    after_location: SourceLocation


@dataclass(frozen=True)
class StatementMapping:
    before: Statement
    after: Statement
    match_kind: MatchKind
    renames_used: frozenset[str] = frozenset()


@dataclass
class BodyMatch:
    mappings: list[StatementMapping]
    substitutions: dict[str, str]
    renames: list[Rename]
    unmatched_before: list[Statement]
    unmatched_after: list[Statement]
    leaf_count_before: int
    leaf_count_after: int

    @property
    def similarity(self) -> float:
        """Share of leaves matched exactly or up to renaming."""
        n = max(self.leaf_count_before, self.leaf_count_after)
        if n == 0:
            return 0.0
        good = sum(1 for m in self.mappings
                   if m.before.is_leaf and m.match_kind is not MatchKind.MODIFIED)
        return good / n

    def rename(self, name: str) -> Optional[Rename]:
        for r in self.renames:
            if r.before == name:
                return r
        return None


@dataclass(frozen=True)
class ClassMatch:
    before: ClassDecl
    after: ClassDecl
    score: float


@dataclass
class OperationMatch:
    before: OperationDecl
    after: OperationDecl
    score: float
    signature_changed: bool
    body: Optional[BodyMatch]
    kind: str = "operation"

    @property
    def statement_mappings(self) -> list[StatementMapping]:
        return self.body.mappings if self.body is not None else []

    @property
    def body_similarity(self) -> float:
        return self.body.similarity if self.body is not None else 0.0


@dataclass(frozen=True)
class AttributeMatch:
    before: AttributeDecl
    after: AttributeDecl
    score: float
    kind: str = "attribute"


@dataclass
class ClassDiff:
    match: ClassMatch
    attribute_matches: list[AttributeMatch] = field(default_factory=list)
    added_attributes: list[AttributeDecl] = field(default_factory=list)
    removed_attributes: list[AttributeDecl] = field(default_factory=list)
    operation_matches: list[OperationMatch] = field(default_factory=list)
    added_operations: list[OperationDecl] = field(default_factory=list)
    removed_operations: list[OperationDecl] = field(default_factory=list)
    attribute_renames: list[Rename] = field(default_factory=list)

    @property
    def before(self) -> ClassDecl:
        return self.match.before

    @property
    def after(self) -> ClassDecl:
        return self.match.after


@dataclass
class ModelDiff:
    before_model: CodeModel
    after_model: CodeModel
    class_diffs: list[ClassDiff]
    added_classes: list[ClassDecl]
    removed_classes: list[ClassDecl]

    @property
    def class_matches(self) -> list[ClassMatch]:
        return [d.match for d in self.class_diffs]

    def diff_for_after(self, qualified_name: str) -> Optional[ClassDiff]:
        for d in self.class_diffs:
            if d.after.qualified_name == qualified_name:
                return d
        return None

    def diff_for_before(self, qualified_name: str) -> Optional[ClassDiff]:
        for d in self.class_diffs:
            if d.before.qualified_name == qualified_name:
                return d
        return None


# ---------------------------------------------------------------------------
# Similarity
# ---------------------------------------------------------------------------

def _member_keys(cls: ClassDecl) -> set:
    return {a.signature_key for a in cls.attributes} | {o.signature_key for o in cls.operations}


def member_similarity(a: ClassDecl, b: ClassDecl) -> float:
    """|common member signatures| / max(sizes, 1); two empty classes are identical."""
    keys_a, keys_b = _member_keys(a), _member_keys(b)
    if not keys_a and not keys_b:
        return 1.0
    return len(keys_a & keys_b) / max(len(keys_a), len(keys_b), 1)


def body_fallback_similarity(a: ClassDecl, b: ClassDecl) -> float:
    """Share of operation bodies that find a counterpart body matching at least half their leaves."""
    ops_a = [o for o in a.operations if o.body is not None]
    ops_b = [o for o in b.operations if o.body is not None]
    if not ops_a or not ops_b:
        return 0.0
    matched = 0
    for op in ops_a:
        best = max(match_operation_bodies(op, other).similarity for other in ops_b)
        if best >= BODY_MATCH_THRESHOLD:
            matched += 1
    return matched / max(len(ops_a), len(ops_b))


def class_similarity(a: ClassDecl, b: ClassDecl) -> float:
    score = member_similarity(a, b)
    if score < CLASS_MATCH_THRESHOLD:
        score = max(score, body_fallback_similarity(a, b))
    return score


# ---------------------------------------------------------------------------
# Statement alignment
# ---------------------------------------------------------------------------

class _Tree:
    """Pre-order index of an operation body, root excluded."""

    def __init__(self, body: Statement):
        self.nodes: list[Statement] = []
        self.parent: list[int] = []
        self.descendant_leaves: list[list[int]] = []
        self._add(body, -1)
        # drop the root body block itself
        self.nodes = self.nodes[1:]
        self.parent = [p - 1 for p in self.parent[1:]]
        self.descendant_leaves = [[i - 1 for i in d] for d in self.descendant_leaves[1:]]

    def _add(self, stmt: Statement, parent: int) -> list[int]:
        idx = len(self.nodes)
        self.nodes.append(stmt)
        self.parent.append(parent)
        self.descendant_leaves.append([])
        leaves = [idx] if stmt.is_leaf else []
        for child in stmt.children:
            leaves.extend(self._add(child, idx))
        self.descendant_leaves[idx] = [i for i in leaves if i != idx]
        return leaves

    def leaves(self) -> list[int]:
        return [i for i, s in enumerate(self.nodes) if s.is_leaf]

    def composites(self) -> list[int]:
        return [i for i, s in enumerate(self.nodes) if not s.is_leaf]


def _placeholder_text(stmt: Statement, subs: dict[str, str]) -> str:
    text = stmt.normalized_text if stmt.is_leaf else stmt.header_text
    text = substitute_identifiers(text, subs)
    names = {name: f"__v{i}" for i, (name, _) in enumerate(stmt.declared_variables)}
    for name, _ in stmt.declared_variables:
        if name in subs:
            names[subs[name]] = names[name]
    return substitute_identifiers(text, names)


def _statement_text(stmt: Statement) -> str:
    return stmt.normalized_text if stmt.is_leaf else stmt.header_text


def match_operation_bodies(before: OperationDecl, after: OperationDecl,
                           seed: Iterable[Rename] = ()) -> BodyMatch:
    """Align the statements of two operation bodies.

    `seed` supplies renames known from elsewhere (attribute renames of the
    owning class); parameter renames are inferred by position when the arity is
    unchanged, local variable renames by declaration order.
    """
    if before.body is None or after.body is None:
        return BodyMatch([], {}, [], [], [], len(before.leaves()), len(after.leaves()))
    tb, ta = _Tree(before.body), _Tree(after.body)
    subs: dict[str, str] = {}
    renames: list[Rename] = []

    def add_rename(rename: Rename) -> None:
        if rename.before == rename.after or rename.before in subs:
            return
        subs[rename.before] = rename.after
        renames.append(rename)

    if len(before.parameters) == len(after.parameters):
        for pb, pa in zip(before.parameters, after.parameters):
            if pb.name and pa.name:
                add_rename(Rename(pb.name, pa.name, RenameOrigin.PARAMETER,
                                  pb.location, pa.location))
    param_names = {p.name for p in before.parameters}
    for rename in seed:
        if rename.before not in param_names:
            add_rename(rename)

    mapped_b: dict[int, tuple[int, MatchKind, frozenset[str]]] = {}
    mapped_a: dict[int, int] = {}

    def pair(i: int, j: int, kind: MatchKind, used: frozenset[str] = frozenset()) -> None:
        mapped_b[i] = (j, kind, used)
        mapped_a[j] = i

    leaves_b, leaves_a = tb.leaves(), ta.leaves()

    # pass 1: identical text
    for i in leaves_b:
        sb = tb.nodes[i]
        for j in leaves_a:
            if j not in mapped_a and ta.nodes[j].kind is sb.kind \
                    and ta.nodes[j].normalized_text == sb.normalized_text:
                pair(i, j, MatchKind.EXACT)
                break

    # local variable correspondence, in declaration order
    decl_b = [i for i, s in enumerate(tb.nodes) if s.declared_variables and i not in mapped_b]
    decl_a = [j for j, s in enumerate(ta.nodes) if s.declared_variables and j not in mapped_a]
    used_a: set[int] = set()
    for i in decl_b:
        sb = tb.nodes[i]
        for j in decl_a:
            sa = ta.nodes[j]
            if j in used_a or sa.kind is not sb.kind \
                    or len(sa.declared_variables) != len(sb.declared_variables):
                continue
            if _placeholder_text(sb, subs) == _placeholder_text(sa, {}):
                used_a.add(j)
                for (nb, _), (na, _) in zip(sb.declared_variables, sa.declared_variables):
                    add_rename(Rename(nb, na, RenameOrigin.VARIABLE, sb.location, sa.location))
                break

    # pass 2: identical up to the inferred substitution
    if subs:
        for i in leaves_b:
            if i in mapped_b:
                continue
            sb = tb.nodes[i]
            renamed = substitute_identifiers(sb.normalized_text, subs)
            if renamed == sb.normalized_text:
                continue
            for j in leaves_a:
                if j not in mapped_a and ta.nodes[j].kind is sb.kind \
                        and ta.nodes[j].normalized_text == renamed:
                    used = frozenset(n for n in identifiers_in(sb.normalized_text) if n in subs)
                    pair(i, j, MatchKind.RENAMED, used)
                    break

    def header_kind(sb: Statement, sa: Statement) -> Optional[tuple[MatchKind, frozenset[str]]]:
        if sb.header_text == sa.header_text:
            return MatchKind.EXACT, frozenset()
        if substitute_identifiers(sb.header_text, subs) == sa.header_text:
            return MatchKind.RENAMED, frozenset(
                n for n in identifiers_in(sb.header_text) if n in subs)
        return None

    # composites whose header matches and whose leaves mostly correspond
    for i in tb.composites():
        sb = tb.nodes[i]
        desc_b = tb.descendant_leaves[i]
        for j in ta.composites():
            if j in mapped_a or ta.nodes[j].kind is not sb.kind:
                continue
            hk = header_kind(sb, ta.nodes[j])
            if hk is None:
                continue
            desc_a = set(ta.descendant_leaves[j])
            common = sum(1 for k in desc_b if k in mapped_b and mapped_b[k][0] in desc_a)
            n = max(len(desc_b), len(desc_a))
            if n == 0 or 2 * common >= n:
                pair(i, j, *hk)
                break

    def parents_mapped(i: int, j: int) -> bool:
        pb, pa = tb.parent[i], ta.parent[j]
        if pb == -1 or pa == -1:
            return pb == pa
        return pb in mapped_b and mapped_b[pb][0] == pa

    # pass 3: positional pairing under corresponding parents
    for i in tb.composites():
        if i in mapped_b:
            continue
        sb = tb.nodes[i]
        for j in ta.composites():
            if j not in mapped_a and ta.nodes[j].kind is sb.kind and parents_mapped(i, j):
                hk = header_kind(sb, ta.nodes[j]) or (MatchKind.MODIFIED, frozenset())
                pair(i, j, *hk)
                break
    for i in leaves_b:
        if i in mapped_b:
            continue
        sb = tb.nodes[i]
        for j in leaves_a:
            if j not in mapped_a and ta.nodes[j].kind is sb.kind and parents_mapped(i, j):
                pair(i, j, MatchKind.MODIFIED)
                break

    mappings = [StatementMapping(tb.nodes[i], ta.nodes[j], kind, used)
                for i, (j, kind, used) in sorted(mapped_b.items())]
    return BodyMatch(
        mappings=mappings,
        substitutions=dict(subs),
        renames=renames,
        unmatched_before=[s for i, s in enumerate(tb.nodes) if i not in mapped_b],
        unmatched_after=[s for j, s in enumerate(ta.nodes) if j not in mapped_a],
        leaf_count_before=len(leaves_b),
        leaf_count_after=len(leaves_a),
    )


# ---------------------------------------------------------------------------
# Members
# ---------------------------------------------------------------------------

def _usage_evidence(old: str, new: str, before: ClassDecl, after: ClassDecl) -> int:
    after_texts = {s.normalized_text for o in after.operations for s in o.leaves()}
    count = 0
    for op in before.operations:
        for s in op.leaves():
            if old in s.referenced_identifiers and \
                    substitute_identifiers(s.normalized_text, {old: new}) in after_texts:
                count += 1
    return count


def _referenced(name: str, cls: ClassDecl) -> bool:
    return any(name in s.referenced_identifiers for o in cls.operations for s in o.leaves())


def match_attributes(diff: ClassDiff) -> None:
    before, after = diff.before, diff.after
    rest_b = list(before.attributes)
    rest_a = list(after.attributes)

    def take(pred, score):
        for b in list(rest_b):
            for a in rest_a:
                if pred(b, a):
                    diff.attribute_matches.append(AttributeMatch(b, a, score))
                    rest_b.remove(b)
                    rest_a.remove(a)
                    break

    take(lambda b, a: b.signature_key == a.signature_key, 1.0)
    take(lambda b, a: b.name == a.name, 0.5)

    # renamed fields: same type and initializer, backed by usage in the bodies
    candidates = []
    for ib, b in enumerate(rest_b):
        for ia, a in enumerate(rest_a):
            if b.type != a.type or b.initializer_text != a.initializer_text:
                continue
            evidence = _usage_evidence(b.name, a.name, before, after)
            unused = not _referenced(b.name, before) and not _referenced(a.name, after)
            if evidence > 0 or unused:
                candidates.append((-evidence, ib, ia, b, a))
    candidates.sort(key=lambda c: c[:3])
    for _, _, _, b, a in candidates:
        if b in rest_b and a in rest_a:
            diff.attribute_matches.append(AttributeMatch(b, a, 0.5))
            diff.attribute_renames.append(
                Rename(b.name, a.name, RenameOrigin.ATTRIBUTE, b.location, a.location))
            rest_b.remove(b)
            rest_a.remove(a)
    diff.removed_attributes = rest_b
    diff.added_attributes = rest_a


def match_operations(diff: ClassDiff, seed: list[Rename]) -> None:
    rest_b = list(diff.before.operations)
    rest_a = list(diff.after.operations)
    pairs: list[tuple[OperationDecl, OperationDecl, Optional[float], bool]] = []

    def take(pred, changed):
        for b in list(rest_b):
            for a in rest_a:
                if pred(b, a):
                    pairs.append((b, a, None, changed))
                    rest_b.remove(b)
                    rest_a.remove(a)
                    break

    take(lambda b, a: b.signature_key == a.signature_key, False)
    take(lambda b, a: b.signature_key[1] == a.signature_key[1], True)

    scored = []
    for ib, b in enumerate(rest_b):
        for ia, a in enumerate(rest_a):
            if b.body is None or a.body is None or b.is_constructor != a.is_constructor:
                continue
            sim = match_operation_bodies(b, a, seed).similarity
            if sim >= BODY_MATCH_THRESHOLD:
                scored.append((-sim, ib, ia, b, a))
    scored.sort(key=lambda c: c[:3])
    for _, _, _, b, a in scored:
        if b in rest_b and a in rest_a:
            pairs.append((b, a, None, b.parameter_types != a.parameter_types))
            rest_b.remove(b)
            rest_a.remove(a)

    order = {id(o): i for i, o in enumerate(diff.before.operations)}
    pairs.sort(key=lambda p: order[id(p[0])])
    for b, a, _, changed in pairs:
        body = match_operation_bodies(b, a, seed) if b.body is not None and a.body is not None \
            else None
        if b.signature_key == a.signature_key:
            score = 1.0
        else:
            score = body.similarity if body is not None else 0.5
        diff.operation_matches.append(OperationMatch(b, a, score, changed, body))
    diff.removed_operations = rest_b
    diff.added_operations = rest_a


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

def match_classes(before: CodeModel, after: CodeModel) -> tuple[list[ClassMatch], list, list]:
    after_by_name = {c.qualified_name: c for c in after.classes}
    matches: list[ClassMatch] = []
    matched_a: set[str] = set()
    rest_b = []
    for c in before.classes:
        other = after_by_name.get(c.qualified_name)
        if other is not None:
            matches.append(ClassMatch(c, other, class_similarity(c, other)))
            matched_a.add(other.qualified_name)
        else:
            rest_b.append(c)
    rest_a = [c for c in after.classes if c.qualified_name not in matched_a]

    candidates = []
    for b in rest_b:
        if b.is_artificial:
            continue
        for a in rest_a:
            if a.is_artificial:
                continue
            score = class_similarity(b, a)
            if score >= CLASS_MATCH_THRESHOLD:
                candidates.append((-score, b.qualified_name, a.qualified_name, b, a))
    candidates.sort(key=lambda c: c[:3])
    taken_b: set[str] = set()
    for neg_score, bq, aq, b, a in candidates:
        if bq in taken_b or aq in matched_a:
            continue
        matches.append(ClassMatch(b, a, -neg_score))
        taken_b.add(bq)
        matched_a.add(aq)
    removed = [c for c in rest_b if c.qualified_name not in taken_b]
    added = [c for c in rest_a if c.qualified_name not in matched_a]
    order = {c.qualified_name: i for i, c in enumerate(before.classes)}
    matches.sort(key=lambda m: order[m.before.qualified_name])
    return matches, added, removed


def match_models(before: CodeModel, after: CodeModel) -> ModelDiff:
    matches, added, removed = match_classes(before, after)
    diffs = [ClassDiff(m) for m in matches]
    for d in diffs:
        match_attributes(d)
    global_renames = [r for d in diffs if d.before.is_artificial for r in d.attribute_renames]
    for d in diffs:
        seed = list(d.attribute_renames)
        seen = {r.before for r in seed}
        seed.extend(r for r in global_renames if r.before not in seen)
        match_operations(d, seed)
    return ModelDiff(before, after, diffs, added, removed)
