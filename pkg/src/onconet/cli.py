"""Command-line entry point.

Settings come from an optional ``key = value`` config file, then command-line
flags, then ``ONCONET_<KEY>`` environment variables (later wins).

Exit codes: 0 success, 1 usage error, 2 data error, 3 consistency
violations found by ``reason --strict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from collections import Counter
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import __version__

log = logging.getLogger("onconet")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INCONSISTENT = 0, 1, 2, 3
ENV_PREFIX = "ONCONET_"


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


@dataclass
class RunConfig:
    seed_path: Optional[str] = None
    corpus_dir: Optional[str] = None
    alias_path: Optional[str] = None
    rules_path: Optional[str] = None
    kg_path: Optional[str] = None
    out_path: Optional[str] = None
    extractor: str = "builtin"
    llm_endpoint: Optional[str] = None
    llm_model: Optional[str] = None
    llm_credential_env: str = "ONCONET_LLM_API_KEY"
    llm_mock: Optional[str] = None
    llm_max_retries: int = 3
    theta_link: float = 0.5
    latency_budget_ms: float = 50.0
    trusted_sources: Optional[str] = None
    required_properties: Optional[str] = None
    policy: str = "accept_new"
    queue_path: Optional[str] = None
    audit_path: Optional[str] = None
    report_path: Optional[str] = None
    max_chars: int = 12000

    def validate(self) -> None:
        from .llm import POLICIES

        if not 0.0 <= self.theta_link <= 1.0:
            raise UsageError("theta_link must be in [0, 1]")
        if self.latency_budget_ms <= 0:
            raise UsageError("latency_budget_ms must be positive")
        if self.policy not in POLICIES:
            raise UsageError(f"policy must be one of {', '.join(POLICIES)}")
        if not (self.extractor == "builtin" or self.extractor.startswith(("subprocess:", "http:"))):
            raise UsageError(f"unknown extractor {self.extractor!r}")


_PATH_KEYS = {"seed_path", "corpus_dir", "alias_path", "rules_path", "kg_path", "out_path", "llm_mock", "queue_path", "audit_path", "report_path"}


def read_config_file(path) -> dict:
    """``key = value`` lines; ``#`` comments and ``[section]`` headers are ignored."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        line = re.sub(r"\s+#.*$", "", line)
        if not line or (line.startswith("[") and line.endswith("]")):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        if key not in known:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        if key in _PATH_KEYS and value and not Path(value).is_absolute():
            value = str(path.parent / value)
        values[key] = value
    return values


def _coerce(values: dict) -> dict:
    types = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for k, v in values.items():
        t = types[k]
        try:
            if t == "int":
                out[k] = int(v)
            elif t == "float":
                out[k] = float(v)
            else:
                out[k] = v
        except (TypeError, ValueError):
            raise UsageError(f"bad value for {k}: {v!r}") from None
    return out


def build_config(args: argparse.Namespace, env: Optional[dict] = None) -> RunConfig:
    env = os.environ if env is None else env
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    for f in fields(RunConfig):
        key = ENV_PREFIX + f.name.upper()
        if key in env and env[key] != "":
            values[f.name] = env[key]
    cfg = RunConfig(**_coerce(values))
    cfg.validate()
    return cfg


# -- helpers ---------------------------------------------------------------


def _need(cfg: RunConfig, key: str, what: str, must_exist: bool = True) -> Path:
    value = getattr(cfg, key)
    if not value:
        raise UsageError(f"{what} is required (--{key.replace('_', '-')})")
    p = Path(value)
    if must_exist and not p.exists():
        raise DataError(f"{what} not found: {p}")
    return p


def _load_kg(cfg: RunConfig):
    from .kgio import load_kg

    return load_kg(_need(cfg, "kg_path", "KG file"))


def _save_kg(graph, path) -> None:
    from .kgio import save_kg

    save_kg(graph, path)


def _aliases(cfg: RunConfig):
    from .ontology import DEFAULT_ALIASES

    if cfg.alias_path:
        return _need(cfg, "alias_path", "alias file")
    return DEFAULT_ALIASES


def _rules(cfg: RunConfig, graph):
    from .reasoner import load_rules

    if not cfg.rules_path:
        return []
    return load_rules(_need(cfg, "rules_path", "rules file"), graph)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- commands --------------------------------------------------------------


def cmd_build(cfg: RunConfig, args) -> int:
    from .ontology import DEFAULT_SEED, cancer_types, load_seed

    seed = _need(cfg, "seed_path", "seed") if cfg.seed_path else DEFAULT_SEED
    out = cfg.out_path or cfg.kg_path
    if not out:
        raise UsageError("an output path is required (--out or --kg-path)")
    graph = load_seed(seed)
    _save_kg(graph, out)
    _out(f"built {len(graph)} triples, {len(cancer_types(graph))} cancer types -> {out}")
    return EXIT_OK


def cmd_extract(cfg: RunConfig, args) -> int:
    from .extraction import make_extractor, read_corpus, run

    graph = _load_kg(cfg)
    docs = read_corpus(_need(cfg, "corpus_dir", "corpus directory"))
    extractor = make_extractor(cfg.extractor)
    try:
        report = run(docs, graph, theta=cfg.theta_link, extractor=extractor, alias_path=_aliases(cfg))
    finally:
        if extractor is not None:
            extractor.close()
    _save_kg(graph, cfg.out_path or cfg.kg_path)
    summary = report.summary()
    _out(" ".join(f"{k}={v}" for k, v in summary.items()))
    for t in report.emit.triples:
        _out("new: " + " ".join(graph.compact(x) for x in t))
    for msg in report.emit.skipped:
        log.warning("skipped %s", msg)
    return EXIT_OK


def _client(cfg: RunConfig):
    from .llm import ChatClient, MockClient

    if cfg.llm_mock:
        text = _need(cfg, "llm_mock", "mock response file").read_text(encoding="utf-8")
        parts = [p.strip("\n") for p in text.split("\n---\n")]
        return MockClient(parts)
    return ChatClient(cfg.llm_endpoint or "", os.environ.get(cfg.llm_credential_env, ""), cfg.llm_model or "")


def cmd_refresh(cfg: RunConfig, args) -> int:
    from .extraction import read_corpus
    from .llm import PromptOptions, RequestParams, refresh

    graph = _load_kg(cfg)
    docs = read_corpus(_need(cfg, "corpus_dir", "corpus directory"))
    client = _client(cfg)
    kg_path = Path(cfg.kg_path)
    queue = cfg.queue_path or str(kg_path.with_name(kg_path.name + ".queue.nt"))
    audit = cfg.audit_path or str(kg_path.with_name(kg_path.name + ".audit.jsonl"))
    report = refresh(
        docs,
        graph,
        client,
        cfg.policy,
        alias_path=_aliases(cfg),
        options=PromptOptions(max_chars=cfg.max_chars),
        params=RequestParams(max_retries=cfg.llm_max_retries),
        queue_path=queue,
        audit_path=audit,
        rules=_rules(cfg, graph),
    )
    if cfg.policy != "dry_run":
        _save_kg(graph, cfg.out_path or cfg.kg_path)
    _out(" ".join(f"{k}={v}" for k, v in report.totals().items()))
    for d in report.documents:
        for r in d.diff.rejected:
            log.warning("%s line %d rejected: %s", d.doc_id, r.lineno, r.reason)
    return EXIT_OK


def cmd_reason(cfg: RunConfig, args) -> int:
    from .reasoner import check_consistency, saturate

    graph = _load_kg(cfg)
    sat = saturate(graph, _rules(cfg, graph))
    problems = check_consistency(sat.graph)
    _out(f"asserted={len(sat.asserted)} inferred={len(sat.inferred)} rounds={sat.rounds} violations={len(problems)}")
    for p in problems:
        _out(f"{p.kind}: {p.message}")
        for t in p.offending:
            _out("  " + t.n3())
    if problems and args.strict:
        return EXIT_INCONSISTENT
    return EXIT_OK


def cmd_query(cfg: RunConfig, args) -> int:
    from . import dlq
    from .reasoner import saturate

    if not (args.repl or args.expression):
        raise UsageError("query needs an expression or --repl")
    graph = _load_kg(cfg)
    sat = saturate(graph, _rules(cfg, graph))
    if args.repl:
        return dlq.repl(sat)
    try:
        expr = dlq.parse(args.expression, sat.graph.prefixes)
    except dlq.DLQError as exc:
        raise UsageError(f"query: {exc}") from None
    result = dlq.evaluate(expr, sat.graph)
    for w in result.warnings:
        log.warning(w)
    _out(result.format(sat.graph))
    return EXIT_OK


def cmd_assess(cfg: RunConfig, args) -> int:
    from .quality import assess, load_config

    graph = _load_kg(cfg)
    settings = {"latency_budget_ms": cfg.latency_budget_ms}
    if cfg.trusted_sources:
        settings["trusted_sources"] = cfg.trusted_sources
    if cfg.required_properties:
        settings["required_properties"] = cfg.required_properties
    if args.dereference:
        settings["dereference"] = True
    report = assess(graph, load_config(settings))
    _out(report.table())
    if cfg.report_path:
        Path(cfg.report_path).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK


def cmd_export(cfg: RunConfig, args) -> int:
    from .reasoner import saturate

    graph = _load_kg(cfg)
    if not cfg.out_path:
        raise UsageError("export needs --out")
    if args.saturated:
        graph = saturate(graph, _rules(cfg, graph)).graph
    _save_kg(graph, cfg.out_path)
    _out(f"exported {len(graph)} triples -> {cfg.out_path}")
    return EXIT_OK


def cmd_stats(cfg: RunConfig, args) -> int:
    from .ontology import vocab as V

    graph = _load_kg(cfg)
    classes = Counter(graph.compact(t.object) for t in graph.iter_match(p=V.type_))
    preds = Counter(graph.compact(t.predicate) for t in graph)
    _out(f"triples {len(graph)}")
    _out("instances by class:")
    for name, n in sorted(classes.items()):
        _out(f"  {name} {n}")
    _out("triples by predicate:")
    for name, n in sorted(preds.items()):
        _out(f"  {name} {n}")
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "extract": cmd_extract,
    "refresh": cmd_refresh,
    "reason": cmd_reason,
    "query": cmd_query,
    "assess": cmd_assess,
    "export": cmd_export,
    "stats": cmd_stats,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--kg", "--kg-path", dest="kg_path", help="KG dump (canonical N-Triples)")
    common.add_argument("--out", "--out-path", dest="out_path", help="output path")
    common.add_argument("--seed", dest="seed_path", help="seed file or directory")
    common.add_argument("--corpus", dest="corpus_dir", help="directory of .txt documents")
    common.add_argument("--aliases", dest="alias_path", help="alias TSV")
    common.add_argument("--rules", dest="rules_path", help="user rule file")
    common.add_argument("--extractor", help="builtin, subprocess:<cmd> or http:<url>")
    common.add_argument("--theta-link", dest="theta_link", type=float)
    common.add_argument("--latency-budget-ms", dest="latency_budget_ms", type=float)
    common.add_argument("--policy", help="accept_new, accept_new_and_queue_conflicts or dry_run")
    common.add_argument("--llm-endpoint", dest="llm_endpoint")
    common.add_argument("--llm-model", dest="llm_model")
    common.add_argument("--llm-credential-env", dest="llm_credential_env", help="environment variable holding the API key")
    common.add_argument("--mock", dest="llm_mock", help="canned LLM responses (separate several with a --- line)")
    common.add_argument("--queue", dest="queue_path", help="review queue file")
    common.add_argument("--audit", dest="audit_path", help="audit log file")
    common.add_argument("--report", dest="report_path", help="JSON quality report path")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="onconet", description="Cancer-biomarker knowledge graph toolkit.")
    parser.add_argument("--version", action="version", version=f"onconet {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("build", parents=[common], help="load the seed and write the KG")
    sub.add_parser("extract", parents=[common], help="extract triples from a corpus")
    sub.add_parser("refresh", parents=[common], help="LLM-assisted triple refresh")
    p = sub.add_parser("reason", parents=[common], help="saturate and check consistency")
    p.add_argument("--strict", action="store_true", help="exit 3 when violations are found")
    p = sub.add_parser("query", parents=[common], help="evaluate a DL query")
    p.add_argument("expression", nargs="?")
    p.add_argument("--repl", action="store_true")
    p = sub.add_parser("assess", parents=[common], help="six-dimension quality report")
    p.add_argument("--dereference", action="store_true", help="HTTP HEAD every IRI")
    p = sub.add_parser("export", parents=[common], help="write canonical N-Triples")
    p.add_argument("--saturated", action="store_true", help="include inferred triples")
    sub.add_parser("stats", parents=[common], help="counts by class and predicate")
    return parser


def run(argv=None) -> int:
    from .extraction.external import ProtocolError
    from .llm import ConfigError, LLMError, PromptError
    from .ontology import RecordError
    from .rdf import ParseError, StructuralError
    from .reasoner import RuleError

    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
        cfg = build_config(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"onconet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, RecordError, ParseError, StructuralError, RuleError, ConfigError, PromptError, ProtocolError) as exc:
        print(f"onconet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except LLMError as exc:
        print(f"onconet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError) as exc:
        print(f"onconet: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
