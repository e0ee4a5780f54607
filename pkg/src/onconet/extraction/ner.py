"""Lexicon-based mention recognition and multi-type resolution."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from ..ontology.gazetteer import CATEGORIES, Gazetteer
from .text import Sentence, tokenize

TAGS = ("B", "I", "O", "X", "CLS", "SEP", "PAD")


class ContractError(ValueError):
    pass


@dataclass(frozen=True)
class Mention:
    doc_id: str
    sentence_index: int
    span: tuple[int, int]  # character offsets into the document body
    surface: str
    tags: tuple[str, ...]
    candidates: tuple[tuple[str, float], ...]

    def __post_init__(self):
        b, e = self.span
        if not b < e:
            raise ContractError(f"empty span {self.span}")
        for t in self.tags:
            if t not in TAGS:
                raise ContractError(f"unknown tag {t!r}")
        for cat, score in self.candidates:
            if not 0.0 <= score <= 1.0:
                raise ContractError(f"candidate score {score} for {cat} outside [0, 1]")

    @property
    def category(self) -> str:
        """The single category after :func:`resolve_types`."""
        if len(self.candidates) != 1:
            raise ContractError(f"mention {self.surface!r} is not type-resolved")
        return self.candidates[0][0]


def _surface_key(text: str) -> str:
    return re.sub(r"\s+", " ", text)


def category_scores(gz: Gazetteer, surface: str) -> tuple[tuple[str, float], ...]:
    """Per-category prior mass for ``surface`` (sum over candidate IRIs, capped at 1)."""
    mass: dict[str, float] = {}
    for e in gz.lookup(surface):
        mass[e.category] = min(1.0, mass.get(e.category, 0.0) + e.prior)
    return tuple(sorted(mass.items(), key=lambda kv: CATEGORIES.index(kv[0])))


def recognize(sentences: Sequence[Sentence], gz: Gazetteer) -> list[Mention]:
    """Longest match, left to right, over each sentence's tokens."""
    if not len(gz):
        raise ContractError("gazetteer is empty")
    width = gz.max_key_tokens(tokenize)
    out = []
    for sent in sentences:
        toks = sent.tokens
        i = 0
        while i < len(toks):
            hit = None
            for j in range(min(len(toks), i + width), i, -1):
                b, e = toks[i][0], toks[j - 1][1]
                surface = _surface_key(sent.text[b - sent.begin : e - sent.begin])
                if gz.lookup(surface):
                    hit = (j, b, e, surface)
                    break
            if hit is None:
                i += 1
                continue
            j, b, e, surface = hit
            n = j - i
            out.append(
                Mention(
                    sent.doc_id,
                    sent.index,
                    (b, e),
                    sent.text[b - sent.begin : e - sent.begin],
                    ("B",) + ("I",) * (n - 1),
                    category_scores(gz, surface),
                )
            )
            i = j
    return out


def sentence_tags(sentence: Sentence, mentions: Iterable[Mention]) -> list[str]:
    """BIO tags over every token of ``sentence`` (``O`` outside mentions)."""
    tags = ["O"] * len(sentence.tokens)
    for m in mentions:
        if m.sentence_index != sentence.index or m.doc_id != sentence.doc_id:
            continue
        inside = [k for k, (b, e) in enumerate(sentence.tokens) if b >= m.span[0] and e <= m.span[1]]
        for n, k in enumerate(inside):
            tags[k] = "B" if n == 0 else "I"
    return tags


def resolve_types(mention: Mention) -> Mention:
    """Keep the argmax category; ties go to Gene > Disease > BiomarkerType > EvidenceSource."""
    if not mention.candidates:
        raise ContractError(f"mention {mention.surface!r} has no candidates")
    for cat, _ in mention.candidates:
        if cat not in CATEGORIES:
            raise ContractError(f"unknown category {cat!r}")
    best = min(mention.candidates, key=lambda c: (-c[1], CATEGORIES.index(c[0])))
    return replace(mention, candidates=(best,))
