"""Exact-match entity-level precision, recall and F1."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..ontology.gazetteer import CATEGORIES


@dataclass(frozen=True)
class GoldSpan:
    doc_id: str
    begin: int
    end: int
    category: str


@dataclass(frozen=True)
class Score:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    undefined: bool  # some ratio was 0/0 and reported as 0

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "Score":
        undefined = False

        def ratio(num, den):
            nonlocal undefined
            if den == 0:
                undefined = True
                return 0.0
            return num / den

        p = ratio(tp, tp + fp)
        r = ratio(tp, tp + fn)
        f1 = ratio(2 * p * r, p + r)
        return cls(tp, fp, fn, p, r, f1, undefined)


class DocumentMismatch(ValueError):
    pass


def read_gold(path) -> list[GoldSpan]:
    """Read ``doc_id<TAB>begin<TAB>end<TAB>category`` rows."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh, delimiter="\t"), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 tab-separated columns")
            doc, b, e, cat = row
            if cat not in CATEGORIES:
                raise ValueError(f"{path}:{lineno}: unknown category {cat!r}")
            out.append(GoldSpan(doc, int(b), int(e), cat))
    return out


def _as_span(item) -> GoldSpan:
    if isinstance(item, GoldSpan):
        return item
    # a type-resolved Mention
    return GoldSpan(item.doc_id, item.span[0], item.span[1], item.category)


def evaluate_exact_match(
    gold: Iterable[GoldSpan],
    predicted: Iterable,
    documents: Optional[Sequence[str]] = None,
) -> dict[str, Score]:
    """Score ``predicted`` mentions against ``gold``; keys are categories plus ``"overall"``.

    A prediction is a true positive only when document, both boundaries and
    category all agree. ``documents`` names the evaluated corpus; without it,
    every predicted document must appear in the gold set.
    """
    g = {_as_span(x) for x in gold}
    p = {_as_span(x) for x in predicted}
    docs = set(documents) if documents is not None else {x.doc_id for x in g}
    stray = sorted({x.doc_id for x in p} - docs)
    if stray:
        raise DocumentMismatch(f"predictions for documents not in the gold set: {', '.join(stray)}")
    if documents is not None:
        stray = sorted({x.doc_id for x in g} - docs)
        if stray:
            raise DocumentMismatch(f"gold annotations for documents not evaluated: {', '.join(stray)}")

    scores = {}
    for cat in CATEGORIES:
        gc = {x for x in g if x.category == cat}
        pc = {x for x in p if x.category == cat}
        if gc or pc:
            scores[cat] = Score.from_counts(len(gc & pc), len(pc - gc), len(gc - pc))
    scores["overall"] = Score.from_counts(len(g & p), len(p - g), len(g - p))
    return scores
