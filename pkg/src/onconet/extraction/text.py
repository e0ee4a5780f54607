"""Documents, sentence splitting and tokenization."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

# Words keep internal hyphens ("cell-cycle", "Li-Fraumeni") and digits
# ("TP53", "BRCA1"); any other non-space character is its own token.
TOKEN = re.compile(r"\w+(?:-\w+)*|[^\w\s]")

# Lower-cased abbreviations after which a period does not end a sentence.
ABBREVIATIONS = frozenset(
    {"e.g", "i.e", "et al", "al", "fig", "figs", "vs", "cf", "dr", "approx", "no", "ref", "refs", "eq", "resp", "ca"}
)

_BOUNDARY = re.compile(r"[.?!](?=\s+[A-Z])")
_WORD_BEFORE = re.compile(r"((?:\w+\.)*\w+)$")


@dataclass(frozen=True)
class Document:
    id: str
    body: str


@dataclass(frozen=True)
class Sentence:
    doc_id: str
    index: int
    begin: int  # character offsets into the document body
    end: int
    text: str
    tokens: tuple  # ((begin, end), ...) document offsets

    def token_text(self, i: int) -> str:
        b, e = self.tokens[i]
        return self.text[b - self.begin : e - self.begin]


def tokenize(text: str, offset: int = 0) -> list[tuple[int, int]]:
    return [(m.start() + offset, m.end() + offset) for m in TOKEN.finditer(text)]


def _is_abbreviation(text: str, dot: int) -> bool:
    if text[dot] != ".":
        return False
    m = _WORD_BEFORE.search(text, 0, dot)
    if not m:
        return False
    word = m.group(1).lower()
    if word in ABBREVIATIONS:
        return True
    # "et al." spans two words
    head = text[max(0, dot - 6) : dot].lower()
    return head.endswith("et al")


def segment(document: Document) -> list[Sentence]:
    """Split at ``.``/``?``/``!`` followed by whitespace and an uppercase letter."""
    body = document.body
    cuts = [m.end() for m in _BOUNDARY.finditer(body) if not _is_abbreviation(body, m.start())]
    sentences = []
    start = 0
    for cut in cuts + [len(body)]:
        chunk = body[start:cut]
        lead = len(chunk) - len(chunk.lstrip())
        b = start + lead
        e = start + len(chunk.rstrip())
        if e > b:
            sentences.append(Sentence(document.id, len(sentences), b, e, body[b:e], tuple(tokenize(body[b:e], b))))
        start = cut
    return sentences


def read_corpus(directory) -> list[Document]:
    """Every ``*.txt`` file in ``directory``; the file stem is the document id."""
    docs = []
    for path in sorted(Path(directory).glob("*.txt")):
        docs.append(Document(path.stem, path.read_text(encoding="utf-8")))
    ids = [d.id for d in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate document ids in corpus")
    return docs
