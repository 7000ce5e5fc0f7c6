"""Grammar as data: lexicon, frames, role usages and named elementary trees,
plus the TMA and determiner systems built on top of them."""

from __future__ import annotations

import logging

from collections.abc import Mapping
from dataclasses import dataclass, field

from src.constants import (
    ACTANT, ASPECT_MARKERS, ASPECTS, BELOW_TENSE_CATEGORIES, CIRCUMSTANT, COMPLETE, DEFAULT_DEGREE,
    DEFAULT_PROCESS_ASPECT, DEFAULT_TENSE, DEGREES, DEMONSTRATIVE_MARKER, DETERMINER_TREES,
    HARM_OVERRIDE_FLAG, INDEFINITE_MARKER, LEXICAL_CATEGORIES, PLURAL_DEGREES, PLURAL_MARKER, PROCESS,
    RELATIVE_GAP_FUNCTION, REQUIRED_TREES, RESTRICTED, ROLE_USAGES, STATE, STATE_ASPECT, TENSE_MARKERS,
    TENSES, CLITIC_FLAG, THIRD_PERSON,
)
from src.errors import (
    AspectOnState, InvalidTMA, MissingLexeme, NamedTreeAbsent, NotAPredicate, UnparsableEnding,
    UnsupportedDetermination,
)
from src.fstruct import Atom, FeatureStructure
from src.harmony import harmony_class
from src.tagcore import ElementaryTree, Family, NodeKind, TreeNode, iter_nodes

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LexicalEntry:
    lemma: str
    category: str
    features: FeatureStructure
    frames: tuple[str, ...] = ()
    concept_keys: tuple[str, ...] = ()
    gloss: str = ""
    flags: frozenset[str] = frozenset()

    @property
    def harm(self) -> str | None:
        return self.features.symbol("harm")

    @property
    def type(self) -> str | None:
        return self.features.symbol("type")

    @property
    def epithet(self) -> bool:
        return self.features.symbol("epithete") == "plus"

    @property
    def definite(self) -> bool:
        return self.features.symbol("det") == "def"

    @property
    def person(self) -> str:
        return self.features.symbol("pers") or THIRD_PERSON

    @property
    def clitic(self) -> bool:
        return CLITIC_FLAG in self.flags


@dataclass(frozen=True)
class FrameSpec:
    """Subcategorization frame: which schema realizes it and which functions it fills.

    `relative` names the schema with the object position gapped, if the frame relativizes.
    """
    name: str
    kind: str
    schema: str
    slots: tuple[str, ...]
    relative: str | None = None

    @property
    def complete(self) -> bool:
        return self.kind == COMPLETE


@dataclass(frozen=True)
class RoleUsage:
    role: str
    usage: str
    argument: str


@dataclass(frozen=True)
class TMASpec:
    tense: str = DEFAULT_TENSE
    aspect: str = DEFAULT_PROCESS_ASPECT

    def __post_init__(self):
        if self.tense not in TENSES:
            raise InvalidTMA(f"unknown tense '{self.tense}'")
        if self.aspect not in ASPECTS:
            raise InvalidTMA(f"unknown aspect '{self.aspect}'")


@dataclass(frozen=True)
class DeterminationSpec:
    degree: str = DEFAULT_DEGREE
    plural: bool = False

    def __post_init__(self):
        if self.degree not in DEGREES:
            raise UnsupportedDetermination(f"unknown determination degree '{self.degree}'")
        if self.plural and self.degree not in PLURAL_DEGREES:
            raise UnsupportedDetermination(f"no plural for the {self.degree} degree")


@dataclass(frozen=True)
class DeterminerSelection:
    tree: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class Grammar:
    features: Mapping[str, frozenset[str]]
    roles: tuple[RoleUsage, ...]
    frames: Mapping[str, FrameSpec]
    lexicon: tuple[LexicalEntry, ...]
    trees: Mapping[str, ElementaryTree] = field(default_factory=dict)

    def tree(self, name: str) -> ElementaryTree:
        if name not in self.trees:
            raise NamedTreeAbsent(name)
        return self.trees[name]

    def entry(self, lemma: str) -> LexicalEntry:
        for entry in self.lexicon:
            if entry.lemma == lemma:
                return entry
        raise MissingLexeme(f"no entry for lemma '{lemma}'")

    def usages(self, role: str, usage: str | None = None) -> list[RoleUsage]:
        return [u for u in self.roles if u.role == role and (usage is None or u.usage == usage)]

    def usage(self, role: str, usage: str) -> RoleUsage | None:
        found = self.usages(role, usage)
        return found[0] if found else None

    def function_of(self, role: str) -> str | None:
        """Frame slot function a role fills as an actant."""
        found = self.usage(role, ACTANT)
        return found.argument if found else None

    def roles_for(self, function: str) -> list[str]:
        return [u.role for u in self.roles if u.usage == ACTANT and u.argument == function]

    @property
    def role_names(self) -> list[str]:
        return list(dict.fromkeys(u.role for u in self.roles))


def tma_markers(spec: TMASpec, pred_type: str) -> list[str]:
    """Preverbal particles for a tense/aspect pair: tense first, then aspect."""
    if pred_type == STATE and spec.aspect != STATE_ASPECT:
        raise AspectOnState(f"aspect '{spec.aspect}' on a state predicate")
    if pred_type == PROCESS and spec.aspect == STATE_ASPECT:
        raise InvalidTMA("aspect 'zero' only applies to state predicates")

    markers = [TENSE_MARKERS[spec.tense], ASPECT_MARKERS[spec.aspect]]
    return [marker for marker in markers if marker is not None]


def determiner_trees(spec: DeterminationSpec, harm: str) -> DeterminerSelection:
    """Determiner tree for a degree/number pair and the marker tokens it yields after
    a bare noun of the given harmony class."""
    tree = DETERMINER_TREES[(spec.degree, spec.plural)]
    tokens = {
        "generique": (),
        "indefini": (INDEFINITE_MARKER,),
        "defini": ("-" + harm,),
        "demonstratif": ("-" + DEMONSTRATIVE_MARKER,),
    }[spec.degree]
    if spec.plural:
        tokens = (PLURAL_MARKER + "-",) + tokens
    return DeterminerSelection(tree, tokens)


def select_entries(concept_key: str, grammar: Grammar) -> list[LexicalEntry]:
    return [entry for entry in grammar.lexicon if concept_key in entry.concept_keys]


def frames_of(entry: LexicalEntry) -> list[str]:
    """Declared frames, complete ones first (the loader keeps them in that order)."""
    if entry.category != "Pred" and not entry.frames:
        raise NotAPredicate(entry.lemma)
    return list(entry.frames)


##################
### VALIDATION ###
##################
def _check_features(where: str, fs: FeatureStructure, declared: Mapping[str, frozenset[str]]) -> list[str]:
    issues = []
    for name, value in fs.items():
        if name not in declared:
            issues.append(f"{where}: undeclared feature '{name}'")
        elif isinstance(value, Atom) and value.symbol not in declared[name]:
            issues.append(f"{where}: undeclared value '{value.symbol}' for feature '{name}'")
    return issues


def _check_tree(tree: ElementaryTree, declared: Mapping[str, frozenset[str]]) -> list[str]:
    issues = []
    anchors, feet = [], []
    for address, node in iter_nodes(tree.root):
        where = f"tree '{tree.name}' node {node.category} at {address}"
        issues += _check_features(where, node.top, declared)
        issues += _check_features(where, node.bottom, declared)
        if node.category in BELOW_TENSE_CATEGORIES and ("temps" in node.top or "temps" in node.bottom):
            issues.append(f"{where}: temps can only be introduced above Predbar")
        if node.kind is NodeKind.ANCHOR:
            anchors.append(node)
        elif node.kind is NodeKind.FOOT:
            feet.append(node)

    name = tree.name
    if tree.family is Family.AUXILIARY and len(feet) != 1:
        issues.append(f"auxiliary tree '{name}' needs exactly one foot, has {len(feet)}")
    if tree.family is not Family.AUXILIARY and tree.family is not Family.SCHEMA and feet:
        issues.append(f"initial tree '{name}' can't have a foot")
    if tree.family is Family.SCHEMA and len(anchors) != 1:
        issues.append(f"schema tree '{name}' needs exactly one anchor, has {len(anchors)}")
    if tree.family is not Family.SCHEMA and anchors:
        issues.append(f"{tree.family} tree '{name}' can't have an anchor")
    if tree.family is Family.SCHEMA and len(feet) > 1:
        issues.append(f"schema tree '{name}' has {len(feet)} feet")
    for foot in feet:
        if foot.category != tree.root.category:
            issues.append(f"tree '{name}': foot category {foot.category} differs from root {tree.root.category}")
    return issues


def _has_slot(root: TreeNode, function: str) -> bool:
    return any(
        node.kind is NodeKind.SUBSTITUTION and node.top.symbol("fn") == function
        for _, node in iter_nodes(root)
    )


def _check_frames(grammar: Grammar) -> list[str]:
    issues = []
    for frame in grammar.frames.values():
        if frame.kind not in (COMPLETE, RESTRICTED):
            issues.append(f"frame '{frame.name}': kind must be {COMPLETE} or {RESTRICTED}")
        for schema_name, gap in ((frame.schema, None), (frame.relative, RELATIVE_GAP_FUNCTION)):
            if schema_name is None:
                continue
            schema = grammar.trees.get(schema_name)
            if schema is None:
                issues.append(f"frame '{frame.name}' names missing tree '{schema_name}'")
                continue
            if schema.family is not Family.SCHEMA:
                issues.append(f"frame '{frame.name}': '{schema_name}' is not a schema tree")
            for slot in frame.slots:
                if slot != gap and not _has_slot(schema.root, slot):
                    issues.append(f"frame '{frame.name}': '{schema_name}' has no {slot} slot")
        if frame.relative is not None and RELATIVE_GAP_FUNCTION not in frame.slots:
            issues.append(f"frame '{frame.name}' relativizes a {RELATIVE_GAP_FUNCTION} it doesn't have")
    return issues


def _check_roles(grammar: Grammar) -> list[str]:
    issues = []
    functions = grammar.features.get("fn", frozenset())
    for usage in grammar.roles:
        where = f"role '{usage.role}'"
        if usage.usage not in ROLE_USAGES:
            issues.append(f"{where}: unknown usage '{usage.usage}'")
        elif usage.usage == ACTANT:
            if usage.argument not in functions:
                issues.append(f"{where}: '{usage.argument}' is not a declared fn value")
        elif usage.usage == CIRCUMSTANT:
            frame = grammar.frames.get(usage.argument)
            tree = grammar.trees.get(usage.argument)
            if frame is not None:
                if frame.complete:
                    issues.append(f"{where}: circumstant frame '{frame.name}' must be {RESTRICTED}")
            elif tree is None or tree.family is not Family.AUXILIARY:
                issues.append(f"{where}: '{usage.argument}' is neither a restricted frame nor an auxiliary tree")
        elif usage.argument not in grammar.trees:
            issues.append(f"{where}: missing tree '{usage.argument}'")
    return issues


def _check_lexicon(grammar: Grammar) -> list[str]:
    issues = []
    seen = set()
    for entry in grammar.lexicon:
        where = f"entry '{entry.lemma}'"
        if entry.lemma in seen:
            issues.append(f"{where}: duplicate lemma")
        seen.add(entry.lemma)
        if entry.category not in LEXICAL_CATEGORIES:
            issues.append(f"{where}: category must be one of {', '.join(LEXICAL_CATEGORIES)}")
        issues += _check_features(where, entry.features, grammar.features)

        if entry.category == "Pred":
            if entry.type is None:
                issues.append(f"{where}: Pred entry missing type")
            if entry.features.symbol("epithete") is None:
                issues.append(f"{where}: Pred entry missing epithete")
            if not entry.frames:
                issues.append(f"{where}: Pred entry without frames")
        for frame in entry.frames:
            if frame not in grammar.frames:
                issues.append(f"{where}: unknown frame '{frame}'")

        if entry.harm is None:
            issues.append(f"{where}: no harm and none can be computed")
        elif HARM_OVERRIDE_FLAG not in entry.flags:
            try:
                computed = harmony_class(entry.lemma)
            except UnparsableEnding:
                issues.append(f"{where}: harm can't be computed, flag it {HARM_OVERRIDE_FLAG}")
                continue
            if computed != entry.harm:
                issues.append(f"{where}: harm={entry.harm} but the lemma ending gives {computed}")
    return issues


def validate_grammar(grammar: Grammar) -> list[str]:
    """Every well-formedness problem of a grammar, empty when it's usable."""
    if not grammar.trees:
        return ["no trees"]

    issues = []
    for tree in grammar.trees.values():
        issues += _check_tree(tree, grammar.features)
    for name in REQUIRED_TREES:
        if name not in grammar.trees:
            issues.append(f"required tree '{name}' is missing")
    issues += _check_frames(grammar)
    issues += _check_roles(grammar)
    issues += _check_lexicon(grammar)
    return issues
