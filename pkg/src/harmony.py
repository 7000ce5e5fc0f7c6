"""Consonantal and nasal harmony of the postposed definite marker.

Words ending in a vowel take -a, words ending in a consonant or semivowel (y, w)
take -la; with a nasal final syllable the markers are -an and -lan.
"""

from __future__ import annotations

from enum import StrEnum

from src.constants import NASAL_NUCLEI, VOWEL_LETTERS
from src.errors import UnparsableEnding


class Segment(StrEnum):
    VOWEL = "vowel"
    NASAL = "nasal"
    CONSONANT = "consonant"


def graphemes(word: str) -> list[tuple[str, Segment]]:
    """Split a GEREC-spelled word into graphemes.

    "ou" is one vowel. "an", "en", "on" are nasal vowels unless followed by a vowel
    or a second n. y and w are semivowels and count with the consonants.
    """
    word = word.lower()
    segments = []
    i = 0
    while i < len(word):
        char = word[i]
        if word.startswith("ou", i):
            segments.append(("ou", Segment.VOWEL))
            i += 2
        elif char in NASAL_NUCLEI and word[i + 1:i + 2] == "n" and (
                i + 2 == len(word) or (word[i + 2] not in VOWEL_LETTERS and word[i + 2] != "n")):
            segments.append((word[i:i + 2], Segment.NASAL))
            i += 2
        elif char in VOWEL_LETTERS:
            segments.append((char, Segment.VOWEL))
            i += 1
        elif char.isalpha():
            segments.append((char, Segment.CONSONANT))
            i += 1
        else:
            # apostrophes, hyphens
            i += 1
    return segments


def harmony_class(lemma: str) -> str:
    """Definite marker class of a lemma: "a", "la", "an" or "lan".

    Raises UnparsableEnding when the lemma has no vowel to read nasality from.
    """
    segments = graphemes(lemma)
    nuclei = [kind for _, kind in segments if kind is not Segment.CONSONANT]
    if not segments or not nuclei:
        raise UnparsableEnding(lemma)

    nasal = nuclei[-1] is Segment.NASAL
    open_final = segments[-1][1] is not Segment.CONSONANT
    if open_final:
        return "an" if nasal else "a"
    return "lan" if nasal else "la"
