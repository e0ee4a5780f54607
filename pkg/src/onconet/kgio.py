"""KG persistence: canonical N-Triples plus a JSON-lines provenance sidecar."""

from __future__ import annotations

import json
from pathlib import Path

from .rdf import Graph, Provenance, Triple, parse_ntriples, serialize_ntriples
from .rdf.ntriples import parse_line


def sidecar_path(kg_path) -> Path:
    p = Path(kg_path)
    return p.with_name(p.name + ".prov.jsonl")


def dump_provenance(graph: Graph) -> str:
    rows = []
    for t, prov in sorted(graph.provenance_items(), key=lambda item: item[0].sort_key()):
        row = {"triple": t.n3()}
        row.update(prov.to_dict())
        rows.append(json.dumps(row, sort_keys=True, ensure_ascii=False))
    return "".join(r + "\n" for r in rows)


def save_kg(graph: Graph, path, *, provenance: bool = True) -> None:
    """Write the canonical dump (and its provenance sidecar)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_ntriples(graph))
    if provenance:
        with open(sidecar_path(path), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dump_provenance(graph))


def load_kg(path, *, strict: bool = True) -> Graph:
    """Read a dump written by :func:`save_kg`; the sidecar is optional."""
    path = Path(path)
    graph = parse_ntriples(path.read_text(encoding="utf-8"), strict=strict)
    side = sidecar_path(path)
    if side.exists():
        for lineno, line in enumerate(side.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            row = json.loads(line)
            t = parse_line(row.pop("triple"))
            if isinstance(t, Triple) and t in graph:
                graph.set_provenance(t, Provenance.from_dict(row))
    return graph
