"""The refresh loop: prompt per document, ask the model, triage, apply."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..extraction.text import Document
from ..ontology.gazetteer import Gazetteer, gazetteer
from ..rdf import Graph
from .client import RequestParams, request
from .prompt import PromptOptions, render_prompt
from .triage import ApplyResult, DiffReport, apply, parse_response, triage

log = logging.getLogger(__name__)


@dataclass
class DocumentRefresh:
    doc_id: str
    diff: DiffReport
    applied: ApplyResult


@dataclass
class RefreshReport:
    documents: list = field(default_factory=list)

    def totals(self) -> dict:
        keys = ("new", "confirmed", "conflicting", "invalid")
        out = {k: 0 for k in keys}
        out["rejected"] = out["inserted"] = out["queued"] = 0
        for d in self.documents:
            for k, n in zip(keys, d.diff.sizes()):
                out[k] += n
            out["rejected"] += len(d.diff.rejected)
            out["inserted"] += len(d.applied.inserted)
            out["queued"] += len(d.applied.queued)
        return out


def refresh(
    documents: Iterable[Document],
    kg: Graph,
    client,
    policy: str = "accept_new",
    *,
    gz: Optional[Gazetteer] = None,
    alias_path=None,
    options: PromptOptions = PromptOptions(),
    params: RequestParams = RequestParams(),
    queue_path=None,
    audit_path=None,
    rules=(),
    sleep=None,
) -> RefreshReport:
    """Run each document (in id order) through prompt, request, triage and apply.

    Each document is triaged against the KG as updated by the previous ones.
    """
    gz = gz if gz is not None else gazetteer(kg, alias_path)
    report = RefreshReport()
    extra = {"sleep": sleep} if sleep is not None else {}
    for doc in sorted(documents, key=lambda d: d.id):
        prompt = render_prompt(kg, doc.body, options)
        text = request(client, prompt.render(), params, **extra)
        parsed = parse_response(text, kg, gz)
        diff = triage(parsed, kg, rules=rules)
        applied = apply(diff, kg, policy, source=doc.id, queue_path=queue_path, audit_path=audit_path)
        log.info("%s: new=%d confirmed=%d conflicting=%d invalid=%d rejected=%d", doc.id, *diff.sizes(), len(diff.rejected))
        report.documents.append(DocumentRefresh(doc.id, diff, applied))
    return report
