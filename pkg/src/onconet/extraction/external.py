"""Wire protocol for external NER/RE models (subprocess pipe or HTTP).

Request, one JSON object per line::

    {"doc_id": "...", "sentences": [{"index": 0, "text": "..."}]}

Response::

    {"mentions": [{"sentence_index": 0, "begin": 0, "end": 4,
                   "candidates": [{"category": "Gene", "score": 0.9}],
                   "tags": ["CLS", "B", "X", "SEP"]}],
     "relations": [{"sentence_index": 0, "subj_span": [0, 4],
                    "obj_span": [41, 54], "relation": "causes", "score": 0.8}]}

Offsets are character offsets into the sentence text. ``X`` tags continue
the previous token's tag; ``CLS``, ``SEP`` and ``PAD`` are ignored when
building spans.
"""

from __future__ import annotations

import json
import logging
import select
import shlex
import subprocess
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Sequence

from ..ontology.gazetteer import CATEGORIES
from .ner import TAGS, Mention
from .relations import RELATIONS
from .text import Sentence

log = logging.getLogger(__name__)


class ProtocolError(ValueError):
    """A malformed or failed exchange with an external extractor."""


@dataclass(frozen=True)
class WireRelation:
    sentence_index: int
    subj_span: tuple[int, int]  # document offsets
    obj_span: tuple[int, int]
    relation: str
    score: float


def build_request(doc_id: str, sentences: Sequence[Sentence]) -> dict:
    return {"doc_id": doc_id, "sentences": [{"index": s.index, "text": s.text} for s in sentences]}


def _span_tags(tags) -> list[str]:
    out = []
    for t in tags:
        if t not in TAGS:
            raise ProtocolError(f"unknown tag {t!r}")
        if t in ("CLS", "SEP", "PAD"):
            continue
        if t == "X":
            if not out:
                raise ProtocolError("X tag with no preceding token")
            continue
        out.append(t)
    return out


def _score(value, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProtocolError(f"{what} must be a number")
    if not 0.0 <= value <= 1.0:
        raise ProtocolError(f"{what} {value} outside [0, 1]")
    return float(value)


def _span(value, sent: Sentence, what: str) -> tuple[int, int]:
    if not (isinstance(value, (list, tuple)) and len(value) == 2 and all(isinstance(x, int) for x in value)):
        raise ProtocolError(f"{what} must be a [begin, end] pair of integers")
    b, e = value
    if not 0 <= b < e <= len(sent.text):
        raise ProtocolError(f"{what} {list(value)} outside sentence {sent.index}")
    return b + sent.begin, e + sent.begin


def parse_wire_response(obj, doc_id: str, sentences: Sequence[Sentence]) -> tuple[list[Mention], list[WireRelation]]:
    """Validate a response and convert offsets to document offsets."""
    if not isinstance(obj, dict):
        raise ProtocolError("response must be a JSON object")
    by_index = {s.index: s for s in sentences}
    mentions, relations = [], []
    for k, m in enumerate(obj.get("mentions", [])):
        where = f"mentions[{k}]"
        if not isinstance(m, dict):
            raise ProtocolError(f"{where} must be an object")
        sent = by_index.get(m.get("sentence_index"))
        if sent is None:
            raise ProtocolError(f"{where}: unknown sentence_index {m.get('sentence_index')!r}")
        b, e = _span([m.get("begin"), m.get("end")], sent, where)
        cands = m.get("candidates")
        if not isinstance(cands, list) or not cands:
            raise ProtocolError(f"{where}: candidates must be a nonempty list")
        parsed = []
        for c in cands:
            if not isinstance(c, dict) or c.get("category") not in CATEGORIES:
                raise ProtocolError(f"{where}: bad candidate {c!r}")
            parsed.append((c["category"], _score(c.get("score"), f"{where} candidate score")))
        tags = _span_tags(m.get("tags", []))
        n_tokens = sum(1 for tb, te in sent.tokens if tb >= b and te <= e)
        if tags and (len(tags) != n_tokens or tags[0] != "B" or any(t != "I" for t in tags[1:])):
            raise ProtocolError(f"{where}: tags {m.get('tags')} do not describe a {n_tokens}-token span")
        tags = tags or ["B"] + ["I"] * (n_tokens - 1)
        mentions.append(Mention(doc_id, sent.index, (b, e), sent.text[b - sent.begin : e - sent.begin], tuple(tags), tuple(parsed)))
    for k, r in enumerate(obj.get("relations", [])):
        where = f"relations[{k}]"
        if not isinstance(r, dict):
            raise ProtocolError(f"{where} must be an object")
        sent = by_index.get(r.get("sentence_index"))
        if sent is None:
            raise ProtocolError(f"{where}: unknown sentence_index {r.get('sentence_index')!r}")
        if r.get("relation") not in RELATIONS:
            raise ProtocolError(f"{where}: unknown relation {r.get('relation')!r}")
        relations.append(
            WireRelation(
                sent.index,
                _span(r.get("subj_span"), sent, f"{where}.subj_span"),
                _span(r.get("obj_span"), sent, f"{where}.obj_span"),
                r["relation"],
                _score(r.get("score"), f"{where}.score"),
            )
        )
    return mentions, relations


class SubprocessExtractor:
    """Talks newline-delimited JSON to a long-running child process."""

    name = "subprocess"

    def __init__(self, command, timeout: float = 30.0):
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout
        self._proc = None

    def _start(self):
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, encoding="utf-8", bufsize=1
            )
        return self._proc

    def request(self, payload: dict) -> dict:
        try:
            proc = self._start()
            proc.stdin.write(json.dumps(payload, sort_keys=True) + "\n")
            proc.stdin.flush()
        except OSError as exc:
            raise ProtocolError(f"cannot reach extractor process: {exc}") from None
        ready, _, _ = select.select([proc.stdout], [], [], self.timeout)
        if not ready:
            self.close()
            raise ProtocolError(f"extractor did not answer within {self.timeout}s")
        line = proc.stdout.readline()
        if not line:
            raise ProtocolError("extractor closed its output")
        try:
            return json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"response is not JSON: {exc}") from None

    def close(self) -> None:
        if self._proc is not None:
            try:
                self._proc.stdin.close()
                self._proc.wait(timeout=5)
            except (OSError, subprocess.TimeoutExpired):
                self._proc.kill()
            self._proc = None


class HttpExtractor:
    """POSTs each request as JSON and reads one JSON response."""

    name = "http"

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout

    def request(self, payload: dict) -> dict:
        data = json.dumps(payload, sort_keys=True).encode("utf-8")
        req = urllib.request.Request(self.url, data=data, headers={"Content-Type": "application/json"}, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = resp.read().decode("utf-8")
        except (urllib.error.URLError, OSError) as exc:
            raise ProtocolError(f"extractor request failed: {exc}") from None
        try:
            return json.loads(body)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"response is not JSON: {exc}") from None

    def close(self) -> None:
        pass


def make_extractor(choice: str):
    """``builtin`` -> None; ``subprocess:<cmd>``; ``http:<url>``."""
    if choice in ("", "builtin"):
        return None
    kind, _, arg = choice.partition(":")
    if kind == "subprocess" and arg:
        return SubprocessExtractor(arg)
    if kind == "http" and arg:
        return HttpExtractor(arg)
    raise ValueError(f"unknown extractor {choice!r}; expected builtin, subprocess:<cmd> or http:<url>")
