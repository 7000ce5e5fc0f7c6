"""Bracketed tree notation used by grammar files.

    (Label[↓|*|@] {top}? [bottom]? children...)
    (Label {top}? "token")

`↓` marks a substitution slot, `*` a foot, `@` an anchor. A feature written
`!name=value` is also required on the partner structure. Tokens: "∅" is the empty
marker, a leading "-" attaches to the left neighbour, a trailing "-" to the right
one, and `$Var` is filled from the variable's value when the tree is finalized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from nltk import Tree

from src.constants import ANCHOR_MARK, EMPTY_TOKEN, FOOT_MARK, HYPHEN, SUBSTITUTION_MARK
from src.errors import GrammarParseError
from src.fstruct import EMPTY, FeatureStructure, parse_value
from src.surface import Attachment
from src.tagcore import NodeKind, TreeNode

# Leaves are feature blocks, quoted tokens or stray words; any other character
# becomes a one-character leaf so it gets reported instead of skipped.
NODE_PATTERN = r'[^\s(){}\[\]"]+'
LEAF_PATTERN = r'\{[^}]*\}|\[[^\]]*\]|"[^"]*"|[^\s(){}\[\]"]+|\S'
FEATURE_REGEX = re.compile(r"^(!?)([a-z_][\w]*)\s*=\s*(\S+)$")

MARKS = {
    SUBSTITUTION_MARK: NodeKind.SUBSTITUTION,
    FOOT_MARK: NodeKind.FOOT,
    ANCHOR_MARK: NodeKind.ANCHOR,
}


@dataclass(frozen=True)
class FeatureBlock:
    bottom: bool
    features: FeatureStructure
    required: frozenset[str]


@dataclass(frozen=True)
class Token:
    text: str
    attachment: Attachment


def parse_features(block: str) -> tuple[FeatureStructure, frozenset[str]]:
    """Parse the inside of a {...} or [...] block into a structure and its required names."""
    entries = {}
    required = set()
    body = block[1:-1].strip()
    if not body:
        return EMPTY, frozenset()

    for item in body.split(","):
        match = FEATURE_REGEX.match(item.strip())
        if match is None:
            raise GrammarParseError(f"bad feature '{item.strip()}'")
        bang, name, value = match.groups()
        if name in entries:
            raise GrammarParseError(f"feature '{name}' given twice in {block}")
        entries[name] = parse_value(value)
        if bang:
            required.add(name)

    return FeatureStructure(entries), frozenset(required)


def parse_token(quoted: str) -> tuple[str, Attachment]:
    raw = quoted[1:-1]
    if not raw:
        raise GrammarParseError("empty token, use \"∅\" for the empty marker")
    if raw == EMPTY_TOKEN:
        return raw, Attachment.FREE
    if raw.startswith(HYPHEN) and len(raw) > 1:
        return raw[1:], Attachment.HYPHEN_LEFT
    if raw.endswith(HYPHEN) and len(raw) > 1:
        return raw[:-1], Attachment.HYPHEN_RIGHT
    return raw, Attachment.FREE


def read_label(label: str) -> tuple[str, NodeKind]:
    if not label:
        raise GrammarParseError("expected a node label after '('")
    if label[-1] in MARKS and len(label) > 1:
        return label[:-1], MARKS[label[-1]]
    return label, NodeKind.INTERNAL


def read_leaf(text: str) -> FeatureBlock | Token:
    if text[0] in "{[":
        if text[-1] != {"{": "}", "[": "]"}[text[0]] or len(text) < 2:
            raise GrammarParseError(f"unclosed feature block '{text}'")
        return FeatureBlock(text[0] == "[", *parse_features(text))
    if text[0] == '"':
        if len(text) < 2 or text[-1] != '"':
            raise GrammarParseError(f"unclosed token '{text}'")
        return Token(*parse_token(text))
    raise GrammarParseError(f"unexpected '{text}' in tree")


def read_bracketed(text: str) -> Tree:
    """Bracket structure as an nltk Tree of (category, kind) labels and decoded leaves."""
    try:
        return Tree.fromstring(text, read_node=read_label, read_leaf=read_leaf,
                               node_pattern=NODE_PATTERN, leaf_pattern=LEAF_PATTERN)
    except ValueError as e:
        raise GrammarParseError(f"malformed brackets: {' '.join(str(e).split())}") from None


def _to_node(tree: Tree) -> TreeNode:
    label, kind = tree.label()
    top, bottom = EMPTY, EMPTY
    required: frozenset[str] = frozenset()
    children = []
    token = None
    for part in tree:
        if isinstance(part, Tree):
            children.append(_to_node(part))
        elif isinstance(part, FeatureBlock):
            if part.bottom:
                bottom = part.features
            else:
                top = part.features
            required |= part.required
        else:
            if token is not None:
                raise GrammarParseError(f"node {label} has two tokens")
            token = part

    if token is not None:
        if children or kind is not NodeKind.INTERNAL:
            raise GrammarParseError(f"lexical node {label} can't have children or a marker")
        return TreeNode(label, NodeKind.LEX, top, bottom, (), token.text, token.attachment, required)
    if kind is NodeKind.INTERNAL and not children:
        raise GrammarParseError(f"internal node {label} has no children")
    if kind is not NodeKind.INTERNAL and children:
        raise GrammarParseError(f"{kind} node {label} must be a leaf")
    return TreeNode(label, kind, top, bottom, tuple(children), None, Attachment.FREE, required)


def parse_tree(text: str) -> TreeNode:
    return _to_node(read_bracketed(text))


def _render_features(fs: FeatureStructure, required: frozenset[str], opening: str, closing: str) -> str:
    items = [f"{'!' if name in required else ''}{name}={value}" for name, value in fs.items()]
    return opening + ", ".join(items) + closing


def render_tree(node: TreeNode) -> str:
    """Inverse of parse_tree, up to whitespace and feature order."""
    marks = {kind: mark for mark, kind in MARKS.items()}
    parts = [node.category + marks.get(node.kind, "")]
    top_required = node.required if node.kind is not NodeKind.FOOT else frozenset()
    bottom_required = node.required if node.kind is NodeKind.FOOT else frozenset()
    if node.top or top_required:
        parts.append(_render_features(node.top, top_required, "{", "}"))
    if node.bottom or bottom_required:
        parts.append(_render_features(node.bottom, bottom_required, "[", "]"))

    if node.kind is NodeKind.LEX:
        token = node.token
        if node.attachment is Attachment.HYPHEN_LEFT:
            token = HYPHEN + token
        elif node.attachment is Attachment.HYPHEN_RIGHT:
            token = token + HYPHEN
        parts.append(f'"{token}"')
    parts.extend(render_tree(child) for child in node.children)

    return "(" + " ".join(parts) + ")"
