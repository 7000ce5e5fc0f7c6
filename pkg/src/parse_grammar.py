"""Reader for .grammar documents.

A document is split into sections by bare header lines. `#` starts a comment.

    FEATURES    name: value value ...
    ROLES       role | usage | argument
    FRAMES      name | complete|restricted | schema | slot functions | relative schema
    LEXICON     lemma | N|Pred | concept keys | features | frames | flags | gloss
    TREES       name family: (tree ...)      # may continue until parentheses balance
"""

from __future__ import annotations

import logging
import dataclasses

from src.constants import COMPLETE, LEXICAL_CATEGORIES, LEXICON_FLAGS
from src.errors import GrammarParseError, UnparsableEnding, ValidationError
from src.fstruct import Atom, FeatureStructure, overwrite, parse_value
from src.grammar import FrameSpec, Grammar, LexicalEntry, RoleUsage, validate_grammar
from src.harmony import harmony_class
from src.tagcore import ElementaryTree, Family
from src.tree_notation import parse_tree

logger = logging.getLogger(__name__)

SECTIONS = ("FEATURES", "ROLES", "FRAMES", "LEXICON", "TREES")


def _split_row(text: str, width: int, line: int, section: str, optional: int = 0) -> list[str]:
    """Split a table row; the last `optional` columns may be left off."""
    parts = [part.strip() for part in text.split("|")]
    if len(parts) > width or len(parts) < width - optional:
        raise GrammarParseError(f"{section} rows have {width} '|'-separated columns, found {len(parts)}", line)
    return parts + [""] * (width - len(parts))


def _parse_feature_list(text: str, line: int) -> FeatureStructure:
    entries = {}
    for item in text.split():
        name, sep, value = item.partition("=")
        if not sep or not name or not value:
            raise GrammarParseError(f"expected name=value, got '{item}'", line)
        entries[name] = parse_value(value)
    return FeatureStructure(entries)


def _parse_entry(text: str, line: int) -> LexicalEntry:
    lemma, category, concepts, features, frames, flags, gloss = _split_row(text, 7, line, "LEXICON", optional=2)
    if not lemma:
        raise GrammarParseError("lexicon row without a lemma", line)
    if category not in LEXICAL_CATEGORIES:
        raise GrammarParseError(f"category of '{lemma}' must be one of {', '.join(LEXICAL_CATEGORIES)}", line)
    unknown = set(flags.split()) - LEXICON_FLAGS
    if unknown:
        raise GrammarParseError(f"unknown flags {sorted(unknown)} on '{lemma}'", line)

    fs = _parse_feature_list(features, line)
    if "harm" not in fs:
        try:
            fs = overwrite(fs, "harm", Atom(harmony_class(lemma)))
        except UnparsableEnding:
            logger.warning("No harmony class for '%s' (line %d)", lemma, line)

    return LexicalEntry(lemma, category, fs, tuple(frames.split()), tuple(concepts.split()),
                        gloss, frozenset(flags.split()))


def _parse_tree_header(text: str, line: int) -> tuple[str, Family, str]:
    head, sep, body = text.partition(":")
    if not sep:
        raise GrammarParseError("tree definitions look like 'name family: (tree)'", line)
    words = head.split()
    if len(words) != 2:
        raise GrammarParseError(f"expected 'name family' before ':', got '{head.strip()}'", line)
    name, family = words
    try:
        return name, Family(family), body
    except ValueError:
        raise GrammarParseError(f"unknown tree family '{family}'", line) from None


def _balance(text: str) -> int:
    depth = 0
    quoted = False
    for char in text:
        if char == '"':
            quoted = not quoted
        elif not quoted and char == "(":
            depth += 1
        elif not quoted and char == ")":
            depth -= 1
    return depth


def load_grammar(document: str) -> Grammar:
    """Parse and validate a grammar document.

    Raises GrammarParseError(line) on syntax errors and ValidationError listing every
    problem the parsed grammar has.
    """
    features: dict[str, frozenset[str]] = {}
    roles: list[RoleUsage] = []
    frames: dict[str, FrameSpec] = {}
    lexicon: list[LexicalEntry] = []
    trees: dict[str, ElementaryTree] = {}

    section = None
    pending = None  # (name, family, text, first line) of a tree spanning lines
    for number, raw in enumerate(document.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if pending is not None:
            name, family, body, start = pending
            body = f"{body} {text}"
            pending = (name, family, body, start)
            if body.strip() and _balance(body) <= 0:
                trees[name] = _build_tree(name, family, body, start)
                pending = None
            continue
        if not text:
            continue
        if text in SECTIONS:
            section = text
            continue

        if section is None:
            raise GrammarParseError(f"content before any section header: '{text}'", number)
        elif section == "FEATURES":
            name, sep, values = text.partition(":")
            if not sep or not name.strip() or not values.split():
                raise GrammarParseError("feature declarations look like 'name: value value'", number)
            features[name.strip()] = frozenset(values.split())
        elif section == "ROLES":
            role, usage, argument = _split_row(text, 3, number, "ROLES")
            roles.append(RoleUsage(role, usage, argument))
        elif section == "FRAMES":
            name, kind, schema, slots, relative = _split_row(text, 5, number, "FRAMES", optional=1)
            frames[name] = FrameSpec(name, kind, schema, tuple(slots.split()), relative or None)
        elif section == "LEXICON":
            lexicon.append(_parse_entry(text, number))
        else:
            name, family, body = _parse_tree_header(text, number)
            if name in trees:
                raise GrammarParseError(f"tree '{name}' defined twice", number)
            if not body.strip() or _balance(body) > 0:
                pending = (name, family, body, number)
            else:
                trees[name] = _build_tree(name, family, body, number)

    if pending is not None:
        raise GrammarParseError(f"tree '{pending[0]}' never closes", pending[3])

    def frame_rank(frame: str) -> int:
        spec = frames.get(frame)
        return 0 if spec is not None and spec.kind == COMPLETE else 1

    lexicon = [dataclasses.replace(entry, frames=tuple(sorted(entry.frames, key=frame_rank)))
               for entry in lexicon]

    grammar = Grammar(features, tuple(roles), frames, tuple(lexicon), trees)
    issues = validate_grammar(grammar)
    if issues:
        raise ValidationError(issues)

    logger.info("Loaded grammar: %d entries, %d frames, %d trees", len(lexicon), len(frames), len(trees))
    return grammar


def _build_tree(name: str, family: Family, body: str, line: int) -> ElementaryTree:
    try:
        root = parse_tree(body.strip())
    except GrammarParseError as e:
        raise GrammarParseError(f"tree '{name}': {e}", line) from None
    return ElementaryTree.build(name, family, root)


def load_grammar_file(path: str) -> Grammar:
    with open(path, "r", encoding="utf-8") as f:
        return load_grammar(f.read())
