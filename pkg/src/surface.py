"""Surface tokens and their orthographic rendering (hyphens, clitic elision)."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

from src.constants import ELISIONS, VOWEL_LETTERS
from src.errors import DanglingAttachment


class Attachment(StrEnum):
    FREE = "free"
    HYPHEN_LEFT = "hyphen_left"
    HYPHEN_RIGHT = "hyphen_right"
    CLITIC_LEFT = "clitic_left"


@dataclass(frozen=True)
class SurfaceToken:
    """A word or particle in output order.

    Provenance fields (lemma, tree instance, Gorn address) are informative and
    excluded from equality.
    """
    text: str
    attachment: Attachment = Attachment.FREE
    lemma: str | None = field(default=None, compare=False)
    tree: str | None = field(default=None, compare=False)
    address: tuple[int, ...] = field(default=(), compare=False)


def _ends_in_vowel(word: str) -> bool:
    return bool(word) and word[-1].lower() in VOWEL_LETTERS


def surface(tokens: list[SurfaceToken]) -> str:
    """Render one sentence: spaces between free tokens, hyphens, ou → 'w after vowels.

    Raises DanglingAttachment when a hyphenated token has no neighbour on its side.
    """
    words: list[str] = []
    open_right = False
    for token in tokens:
        if open_right:
            if token.attachment is Attachment.HYPHEN_LEFT:
                raise DanglingAttachment(f"'{token.text}' follows an open hyphen")
            words[-1] += token.text
            open_right = False
        elif token.attachment is Attachment.HYPHEN_LEFT:
            if not words:
                raise DanglingAttachment(f"'-{token.text}' has nothing on its left")
            words[-1] += "-" + token.text
            continue
        elif (token.attachment is Attachment.CLITIC_LEFT and words
              and token.text in ELISIONS and _ends_in_vowel(words[-1])):
            words[-1] += ELISIONS[token.text]
            continue
        else:
            words.append(token.text)

        if token.attachment is Attachment.HYPHEN_RIGHT:
            words[-1] += "-"
            open_right = True

    if open_right:
        raise DanglingAttachment(f"'{words[-1]}' has nothing on its right")

    return " ".join(words)


def join_sentences(sentences: list[str]) -> str:
    return ". ".join(sentences)
