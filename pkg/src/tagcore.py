"""FS-TAG machinery: trees with top/bottom feature structures, substitution,
adjunction, schema grafting, finalization, linearization and derivation replay.

All rewriting is persistent: every operation returns new trees and leaves its
inputs untouched. Feature clashes come back as `Failure` values; contract
violations (bad address, wrong node kind, wrong category) raise.
"""

from __future__ import annotations

import re
import logging
import dataclasses

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from src.constants import EMPTY_TOKEN
from src.errors import (
    AddressInvalid, CategoryMismatch, FeatureClash, KindMismatch, NamedTreeAbsent, UnfilledSlot,
)
from src.fstruct import (
    EMPTY, Atom, Bindings, Failure, FeatureStructure, Var, overwrite, remove, resolve, satisfies, unify,
)
from src.surface import Attachment, SurfaceToken

if TYPE_CHECKING:
    from src.grammar import Grammar, LexicalEntry

logger = logging.getLogger(__name__)

GornAddress = tuple[int, ...]

LEX_PREFIX = "lex:"
TOKEN_VAR_REGEX = re.compile(r"\$([A-Z]\w*)")


class NodeKind(StrEnum):
    INTERNAL = "internal"
    ANCHOR = "anchor"
    SUBSTITUTION = "substitution"
    FOOT = "foot"
    LEX = "lex"


LEAF_KINDS = {NodeKind.ANCHOR, NodeKind.SUBSTITUTION, NodeKind.FOOT, NodeKind.LEX}


@dataclass(frozen=True)
class TreeNode:
    """A tree node. `required` lists features the partner structure must carry
    when this node is a substitution slot, an anchor (checked on top) or a foot
    (checked on the adjunction site's bottom)."""
    category: str
    kind: NodeKind = NodeKind.INTERNAL
    top: FeatureStructure = EMPTY
    bottom: FeatureStructure = EMPTY
    children: tuple[TreeNode, ...] = ()
    token: str | None = None
    attachment: Attachment = Attachment.FREE
    required: frozenset[str] = frozenset()
    origin: str | None = None
    lemma: str | None = None

    def __post_init__(self):
        if self.kind in LEAF_KINDS and self.children:
            raise ValueError(f"{self.kind} node {self.category} can't have children")
        if self.kind is NodeKind.LEX and self.token is None:
            raise ValueError(f"lex node {self.category} needs a token")


class Family(StrEnum):
    INITIAL = "initial"
    AUXILIARY = "auxiliary"
    SCHEMA = "schema"


@dataclass(frozen=True)
class ElementaryTree:
    name: str
    family: Family
    root: TreeNode
    anchor_category: str | None = None
    foot_address: GornAddress | None = None

    @classmethod
    def build(cls, name: str, family: Family, root: TreeNode) -> ElementaryTree:
        anchors = find_addresses(root, lambda node: node.kind is NodeKind.ANCHOR)
        feet = find_addresses(root, lambda node: node.kind is NodeKind.FOOT)
        anchor_category = node_at(root, anchors[0]).category if anchors else None
        return cls(name, family, root, anchor_category, feet[0] if feet else None)

    @property
    def anchor_address(self) -> GornAddress | None:
        anchors = find_addresses(self.root, lambda node: node.kind is NodeKind.ANCHOR)
        return anchors[0] if anchors else None


######################
### TREE TRAVERSAL ###
######################
def iter_nodes(root: TreeNode, address: GornAddress = ()) -> Iterator[tuple[GornAddress, TreeNode]]:
    """Preorder walk yielding (Gorn address, node)."""
    yield address, root
    for index, child in enumerate(root.children):
        yield from iter_nodes(child, address + (index,))


def find_addresses(root: TreeNode, predicate: Callable[[TreeNode], bool]) -> list[GornAddress]:
    return [address for address, node in iter_nodes(root) if predicate(node)]


def node_at(root: TreeNode, address: GornAddress) -> TreeNode:
    node = root
    for index in address:
        if not 0 <= index < len(node.children):
            raise AddressInvalid(tuple(address))
        node = node.children[index]
    return node


def replace_at(root: TreeNode, address: GornAddress, new: TreeNode) -> TreeNode:
    if not address:
        return new
    head, rest = address[0], address[1:]
    if not 0 <= head < len(root.children):
        raise AddressInvalid(tuple(address))
    children = list(root.children)
    children[head] = replace_at(children[head], rest, new)
    return dataclasses.replace(root, children=tuple(children))


def slot_address(root: TreeNode, category: str, **features: str) -> GornAddress:
    """Leftmost open substitution slot of a category whose top carries the given atoms."""
    for address, node in iter_nodes(root):
        if node.kind is not NodeKind.SUBSTITUTION or node.category != category:
            continue
        if all(node.top.symbol(name) == value for name, value in features.items()):
            return address
    wanted = ", ".join(f"{name}={value}" for name, value in features.items())
    raise AddressInvalid((), f"no open {category} slot {{{wanted}}}")


def first_address(root: TreeNode, category: str) -> GornAddress:
    """Leftmost internal node of a category."""
    for address, node in iter_nodes(root):
        if node.kind is NodeKind.INTERNAL and node.category == category:
            return address
    raise AddressInvalid((), f"no {category} node")


def tree_yield(root: TreeNode) -> list[str]:
    """Frontier labels: lex tokens (empty markers skipped) and open leaves as Cat↓, Cat*, Cat@."""
    marks = {NodeKind.SUBSTITUTION: "↓", NodeKind.FOOT: "*", NodeKind.ANCHOR: "@"}
    frontier = []
    for _, node in iter_nodes(root):
        if node.kind is NodeKind.LEX:
            if node.token != EMPTY_TOKEN:
                frontier.append(node.token)
        elif node.kind in marks:
            frontier.append(node.category + marks[node.kind])
    return frontier


def resolve_tree(root: TreeNode, env: Bindings) -> TreeNode:
    """Substitute bound variables throughout a tree, tokens included."""
    def close_token(node: TreeNode) -> TreeNode:
        if node.token is None or "$" not in node.token:
            return node

        def lookup(match: re.Match) -> str:
            value = env.walk(Var(match.group(1)))
            return value.symbol if isinstance(value, Atom) else f"${value.name}"

        return dataclasses.replace(node, token=TOKEN_VAR_REGEX.sub(lookup, node.token))

    def walk(node: TreeNode) -> TreeNode:
        node = close_token(node)
        return dataclasses.replace(
            node,
            top=resolve(node.top, env),
            bottom=resolve(node.bottom, env),
            children=tuple(walk(child) for child in node.children),
        )

    return walk(root)


def instantiate(tree: ElementaryTree, index: int) -> ElementaryTree:
    """Fresh copy of an elementary tree: variables suffixed with the instance index,
    nodes stamped with the instance label."""
    label = f"{tree.name}#{index}"

    def rename_fs(fs: FeatureStructure) -> FeatureStructure:
        return FeatureStructure({
            name: Var(f"{value.name}_{index}") if isinstance(value, Var) else value
            for name, value in fs.items()
        })

    def rename(node: TreeNode) -> TreeNode:
        token = node.token
        if token is not None:
            token = TOKEN_VAR_REGEX.sub(lambda match: f"${match.group(1)}_{index}", token)
        return dataclasses.replace(
            node,
            top=rename_fs(node.top),
            bottom=rename_fs(node.bottom),
            token=token,
            origin=label,
            children=tuple(rename(child) for child in node.children),
        )

    return dataclasses.replace(tree, root=rename(tree.root))


#######################
### TREE OPERATIONS ###
#######################
def _missing(partner: FeatureStructure, required: frozenset[str]) -> Failure | None:
    absent = satisfies(partner, required)
    if absent is None:
        return None
    return Failure(absent, None, None)


def substitute(target: TreeNode, address: GornAddress, arg: ElementaryTree,
               env: Bindings) -> tuple[TreeNode, Bindings] | Failure:
    """Replace the substitution slot at `address` by arg's root; the slot's top
    unifies with arg's root top."""
    slot = node_at(target, address)
    if slot.kind is not NodeKind.SUBSTITUTION:
        raise KindMismatch(f"node {slot.category} at {address} is {slot.kind}, not a substitution slot")
    if arg.family is not Family.INITIAL:
        raise KindMismatch(f"can only substitute initial trees, got {arg.family} '{arg.name}'")
    if slot.category != arg.root.category:
        raise CategoryMismatch(f"slot {slot.category} at {address} can't take {arg.root.category}")

    absent = _missing(arg.root.top, slot.required)
    if absent is not None:
        return absent.at(address)
    outcome = unify(slot.top, arg.root.top, env)
    if isinstance(outcome, Failure):
        return outcome.at(address)
    top, env = outcome
    outcome = unify(slot.bottom, arg.root.bottom, env)
    if isinstance(outcome, Failure):
        return outcome.at(address)
    bottom, env = outcome

    new = dataclasses.replace(arg.root, top=top, bottom=bottom)
    return replace_at(target, address, new), env


def adjoin(target: TreeNode, address: GornAddress, aux: ElementaryTree,
           env: Bindings) -> tuple[TreeNode, Bindings] | Failure:
    """Splice `aux` in at `address`: the site's top unifies with aux's root top,
    the site's bottom with aux's foot bottom, and the site's children hang off the foot."""
    site = node_at(target, address)
    if site.kind is not NodeKind.INTERNAL:
        raise KindMismatch(f"can't adjoin at {site.kind} node {site.category} at {address}")
    if aux.family is not Family.AUXILIARY or aux.foot_address is None:
        raise KindMismatch(f"'{aux.name}' is not an auxiliary tree")
    if site.category != aux.root.category:
        raise CategoryMismatch(f"can't adjoin {aux.root.category} tree at {site.category} node {address}")

    foot = node_at(aux.root, aux.foot_address)
    absent = _missing(site.bottom, foot.required)
    if absent is not None:
        return absent.at(address)
    outcome = unify(site.top, aux.root.top, env)
    if isinstance(outcome, Failure):
        return outcome.at(address)
    top, env = outcome
    outcome = unify(site.bottom, foot.bottom, env)
    if isinstance(outcome, Failure):
        return outcome.at(address)
    foot_bottom, env = outcome

    new_foot = dataclasses.replace(foot, kind=NodeKind.INTERNAL, bottom=foot_bottom,
                                   children=site.children, required=frozenset())
    spliced = replace_at(dataclasses.replace(aux.root, top=top), aux.foot_address, new_foot)
    return replace_at(target, address, spliced), env


def graft(schema: ElementaryTree, filler: LexicalEntry | TreeNode | ElementaryTree,
          env: Bindings) -> tuple[ElementaryTree, Bindings] | Failure:
    """Fill a schema's anchor with a lexical entry or an already derived subtree.

    The result is an auxiliary tree if the schema has a foot, else an initial tree.
    """
    if schema.family is not Family.SCHEMA:
        raise KindMismatch(f"'{schema.name}' is not a schema tree")
    address = schema.anchor_address
    if address is None:
        raise KindMismatch(f"schema '{schema.name}' has no anchor")
    anchor = node_at(schema.root, address)

    if isinstance(filler, ElementaryTree):
        filler = filler.root
    if isinstance(filler, TreeNode):
        if filler.category != anchor.category:
            raise CategoryMismatch(f"anchor {anchor.category} of '{schema.name}' can't take {filler.category}")
        partner_top, partner_bottom = filler.top, filler.bottom
    else:
        if filler.category != anchor.category:
            raise CategoryMismatch(
                f"anchor {anchor.category} of '{schema.name}' can't take {filler.category} '{filler.lemma}'")
        partner_top, partner_bottom = filler.features, EMPTY

    absent = _missing(partner_top, anchor.required)
    if absent is not None:
        return absent.at(address)
    outcome = unify(anchor.top, partner_top, env)
    if isinstance(outcome, Failure):
        return outcome.at(address)
    top, env = outcome
    outcome = unify(anchor.bottom, partner_bottom, env)
    if isinstance(outcome, Failure):
        return outcome.at(address)
    bottom, env = outcome

    if isinstance(filler, TreeNode):
        new = dataclasses.replace(filler, top=top, bottom=bottom)
    else:
        attachment = Attachment.CLITIC_LEFT if filler.clitic else Attachment.FREE
        new = TreeNode(anchor.category, NodeKind.LEX, top, bottom, token=filler.lemma,
                       attachment=attachment, origin=anchor.origin, lemma=filler.lemma)

    family = Family.AUXILIARY if schema.foot_address is not None else Family.INITIAL
    root = replace_at(schema.root, address, new)
    return ElementaryTree(schema.name, family, root, None, schema.foot_address), env


def finalize(tree: TreeNode, env: Bindings | None = None) -> TreeNode | Failure:
    """Close a derived tree: unify top and bottom at every node, resolve variables
    and fill token templates. Open slots raise UnfilledSlot; clashes return Failure."""
    env = env if env is not None else Bindings()
    for address, node in iter_nodes(tree):
        if node.kind in (NodeKind.SUBSTITUTION, NodeKind.ANCHOR, NodeKind.FOOT):
            raise UnfilledSlot(address)
        outcome = unify(node.top, node.bottom, env)
        if isinstance(outcome, Failure):
            return outcome.at(address)
        _, env = outcome

    for address, node in iter_nodes(tree):
        for name in TOKEN_VAR_REGEX.findall(node.token or ""):
            value = env.walk(Var(name))
            if not isinstance(value, Atom):
                return Failure(name, value, None, address)

    def close(node: TreeNode) -> TreeNode:
        merged, _ = unify(node.top, node.bottom, env)
        merged = resolve(merged, env)
        unbound = merged.variables()
        if unbound:
            logger.debug("Unbound after finalization at %s: %s", node.category, sorted(v.name for v in unbound))
        attachment = node.attachment
        if node.kind is NodeKind.LEX:
            if merged.symbol("join") == "free":
                attachment = Attachment.FREE
            merged = remove(merged, "join")
        closed = dataclasses.replace(
            node, top=merged, bottom=EMPTY, attachment=attachment,
            children=tuple(close(child) for child in node.children),
        )
        return resolve_tree(closed, env) if node.kind is NodeKind.LEX else closed

    return close(tree)


def linearize(tree: TreeNode) -> list[SurfaceToken]:
    """Left-to-right lex leaves; empty markers emit nothing."""
    tokens = []
    for address, node in iter_nodes(tree):
        if node.kind is NodeKind.LEX and node.token != EMPTY_TOKEN:
            tokens.append(SurfaceToken(node.token, node.attachment, node.lemma, node.origin, address))
    return tokens


##################
### DERIVATION ###
##################
class Operation(StrEnum):
    SUBSTITUTE = "substitute"
    ADJOIN = "adjoin"
    GRAFT = "graft"


@dataclass(frozen=True)
class DerivationStep:
    """One operation. `target` and `argument` are tree instance labels ("name#n");
    a lexical argument is written "lex:<lemma>". `overrides` are overwritten into the
    argument's root top (or the entry's features) before the operation."""
    op: Operation
    target: str
    address: GornAddress
    argument: str
    overrides: FeatureStructure = EMPTY

    def as_dict(self) -> dict:
        return {
            "op": str(self.op),
            "target": self.target,
            "address": list(self.address),
            "argument": self.argument,
            "overrides": {name: str(value) for name, value in self.overrides.items()},
        }


@dataclass(frozen=True)
class Derivation:
    root: str
    steps: tuple[DerivationStep, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {"root": self.root, "steps": [step.as_dict() for step in self.steps]}


def _apply_overrides(fs: FeatureStructure, overrides: FeatureStructure) -> FeatureStructure:
    for name, value in overrides.items():
        fs = overwrite(fs, name, value)
    return fs


class DerivationBuilder:
    """Workspace of tree instances plus the bindings and step log of one derivation.

    Every operation goes through `apply`, so a recorded derivation replays by
    feeding its steps to a fresh builder.
    """

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.env = Bindings()
        self.steps: list[DerivationStep] = []
        self._trees: dict[str, ElementaryTree] = {}
        self._count = 0

    def instantiate(self, name: str) -> str:
        self._count += 1
        label = f"{name}#{self._count}"
        self._trees[label] = instantiate(self.grammar.tree(name), self._count)
        return label

    def tree(self, label: str) -> ElementaryTree:
        if label not in self._trees:
            name, _, index = label.rpartition("#")
            if not name or not index.isdigit():
                raise NamedTreeAbsent(label)
            self._trees[label] = instantiate(self.grammar.tree(name), int(index))
            self._count = max(self._count, int(index))
        return self._trees[label]

    def graft(self, target: str, filler: str | LexicalEntry, overrides: FeatureStructure | None = None) -> str:
        argument = filler if isinstance(filler, str) else LEX_PREFIX + filler.lemma
        address = self.tree(target).anchor_address or ()
        self.apply(DerivationStep(Operation.GRAFT, target, address, argument, overrides or EMPTY))
        return target

    def substitute(self, target: str, address: GornAddress, argument: str,
                   overrides: FeatureStructure | None = None) -> str:
        self.apply(DerivationStep(Operation.SUBSTITUTE, target, tuple(address), argument, overrides or EMPTY))
        return target

    def adjoin(self, target: str, address: GornAddress, argument: str) -> str:
        self.apply(DerivationStep(Operation.ADJOIN, target, tuple(address), argument))
        return target

    def apply(self, step: DerivationStep):
        target = self.tree(step.target)
        lexical = step.argument.startswith(LEX_PREFIX)
        if lexical:
            entry = self.grammar.entry(step.argument[len(LEX_PREFIX):])
            argument = dataclasses.replace(entry, features=_apply_overrides(entry.features, step.overrides))
        else:
            argument = self.tree(step.argument)
            if step.overrides:
                root = dataclasses.replace(argument.root, top=_apply_overrides(argument.root.top, step.overrides))
                argument = dataclasses.replace(argument, root=root)

        logger.debug("%s %s into %s at %s", step.op, step.argument, step.target, step.address)
        if step.op is Operation.GRAFT:
            outcome = graft(target, argument, self.env)
        elif step.op is Operation.SUBSTITUTE:
            outcome = substitute(target.root, step.address, argument, self.env)
        else:
            outcome = adjoin(target.root, step.address, argument, self.env)
        if isinstance(outcome, Failure):
            raise FeatureClash(outcome, step)

        result, self.env = outcome
        if isinstance(result, TreeNode):
            result = dataclasses.replace(target, root=result)
        self._trees[step.target] = result
        if not lexical:
            del self._trees[step.argument]
        self.steps.append(step)

    def derivation(self, root: str) -> Derivation:
        return Derivation(root, tuple(self.steps))

    def derived(self, label: str) -> TreeNode:
        """Current tree of an instance with the bindings substituted in."""
        return resolve_tree(self.tree(label).root, self.env)


def replay(derivation: Derivation, grammar: Grammar) -> TreeNode:
    """Rebuild a derived tree from its steps. Deterministic: the same derivation
    over the same grammar yields an identical tree."""
    builder = DerivationBuilder(grammar)
    for step in derivation.steps:
        builder.apply(step)
    return builder.derived(derivation.root)
