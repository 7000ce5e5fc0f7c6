"""Structured output of a generation: JSON report and token provenance table."""

from __future__ import annotations

import json

from src.generator import GenerationResult, RealizedSentence

PROVENANCE_HEADER = ("token", "lemma", "tree", "address")


def _address(address: tuple[int, ...]) -> str:
    return ".".join(map(str, address)) or "ε"


def sentence_report(sentence: RealizedSentence) -> dict:
    sp = sentence.plan
    return {
        "text": sentence.text,
        "head": sp.head,
        "frame": sp.frame,
        "actants": [{"function": function, "concept": concept} for function, concept in sp.actants],
        "circumstants": [{"role": role, "concept": concept} for role, concept in sp.circumstants],
        "derivation": sentence.derivation.as_dict(),
        "tokens": [
            {
                "text": token.text,
                "attachment": str(token.attachment),
                "lemma": token.lemma,
                "tree": token.tree,
                "address": list(token.address),
            }
            for token in sentence.tokens
        ],
    }


def generation_report(result: GenerationResult) -> dict:
    return {
        "text": result.text,
        "sentences": [sentence_report(sentence) for sentence in result.sentences],
    }


def report_json(result: GenerationResult) -> str:
    return json.dumps(generation_report(result), indent=4, ensure_ascii=False)


def provenance_table(result: GenerationResult) -> str:
    """One `token|lemma|tree|address` row per emitted token, sentences separated by a blank line."""
    blocks = []
    for sentence in result.sentences:
        rows = ["|".join(PROVENANCE_HEADER)]
        for token in sentence.tokens:
            rows.append("|".join((token.text, token.lemma or "", token.tree or "", _address(token.address))))
        blocks.append("\n".join(rows))
    return "\n\n".join(blocks)
