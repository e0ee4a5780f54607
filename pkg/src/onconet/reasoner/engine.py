"""Semi-naive forward chaining to the least fixpoint."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..rdf import IRI, Graph, Literal, Provenance, Triple, utcnow
from ..rdf.terms import RDF_TYPE, RDFS_DOMAIN, RDFS_RANGE, RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF, StructuralError
from . import kernel as _kernel
from .rules import Rule, RuleError, Var

BUILTIN_RULE_NAMES = _kernel.RULE_NAMES


class TermTable:
    """Dense integer ids for terms; literals get negative ids."""

    def __init__(self):
        self._ids: dict = {}
        self._terms: dict[int, object] = {}
        self._next_pos = 1
        self._next_neg = -1

    def id(self, term) -> int:
        i = self._ids.get(term)
        if i is None:
            if isinstance(term, Literal):
                i = self._next_neg
                self._next_neg -= 1
            else:
                i = self._next_pos
                self._next_pos += 1
            self._ids[term] = i
            self._terms[i] = term
        return i

    def get(self, term) -> Optional[int]:
        return self._ids.get(term)

    def term(self, i: int):
        return self._terms[i]

    def encode(self, t: Triple) -> tuple[int, int, int]:
        return (self.id(t[0]), self.id(t[1]), self.id(t[2]))

    def decode(self, t: tuple[int, int, int]) -> Triple:
        return Triple(self._terms[t[0]], self._terms[t[1]], self._terms[t[2]])


@dataclass(frozen=True)
class Derivation:
    rule: str
    body: tuple[Triple, ...]


class _Derivations(Mapping):
    """Inferred triple -> :class:`Derivation`, decoded on first access."""

    def __init__(self, table: TermTable, raw: dict, heads: dict):
        self._table = table
        self._raw = raw
        self._heads = heads
        self._cache: dict = {}

    def __getitem__(self, triple) -> Derivation:
        triple = Triple(*triple)
        d = self._cache.get(triple)
        if d is None:
            name, body = self._raw[self._heads[triple]]
            d = self._cache[triple] = Derivation(name, tuple(self._table.decode(b) for b in body))
        return d

    def __contains__(self, triple) -> bool:
        return Triple(*triple) in self._heads

    def __iter__(self):
        return iter(self._heads)

    def __len__(self) -> int:
        return len(self._heads)


@dataclass
class Saturation:
    """Result of :func:`saturate`: the closed graph and how each inference arose."""

    graph: Graph
    asserted: frozenset
    inferred: frozenset
    derivations: dict = field(default_factory=dict)
    rounds: int = 0

    def is_inferred(self, triple: Triple) -> bool:
        return Triple(*triple) in self.inferred


class _Store:
    def __init__(self):
        self.facts: set = set()
        self.spo: dict = {}
        self.pos: dict = {}

    def add(self, t) -> None:
        s, p, o = t
        self.facts.add(t)
        by_s = self.spo.get(p)
        if by_s is None:
            by_s = self.spo[p] = {}
        objs = by_s.get(s)
        if objs is None:
            by_s[s] = {o}
        else:
            objs.add(o)
        by_o = self.pos.get(p)
        if by_o is None:
            by_o = self.pos[p] = {}
        subs = by_o.get(o)
        if subs is None:
            by_o[o] = {s}
        else:
            subs.add(s)

    def candidates(self, s, p, o):
        """Facts matching the bound (non-None) positions."""
        if p is not None:
            preds = (p,)
        else:
            preds = tuple(self.spo)
        for q in preds:
            if s is not None:
                objs = self.spo.get(q, {}).get(s, ())
                if o is not None:
                    if o in objs:
                        yield (s, q, o)
                else:
                    for x in objs:
                        yield (s, q, x)
            elif o is not None:
                for x in self.pos.get(q, {}).get(o, ()):
                    yield (x, q, o)
            else:
                for x, objs in self.spo.get(q, {}).items():
                    for y in objs:
                        yield (x, q, y)


class _CompiledRule:
    """A user rule with constants interned into the term table."""

    def __init__(self, rule: Rule, table: TermTable):
        self.rule = rule

        def enc(slot):
            return slot if isinstance(slot, Var) else table.id(slot)

        self.body = [tuple(enc(x) for x in pat) for pat in rule.body]
        self.head = tuple(enc(x) for x in rule.head)


def _unify(pattern, fact, binding: dict) -> Optional[dict]:
    out = binding
    for slot, value in zip(pattern, fact):
        if isinstance(slot, Var):
            bound = out.get(slot)
            if bound is None:
                if out is binding:
                    out = dict(binding)
                out[slot] = value
            elif bound != value:
                return None
        elif slot != value:
            return None
    return out


def _resolve(pattern, binding):
    return tuple(binding.get(x) if isinstance(x, Var) else x for x in pattern)


def _join(store: _Store, atoms, binding, matched, out):
    if not atoms:
        out.append((binding, tuple(matched)))
        return
    pattern = atoms[0]
    s, p, o = _resolve(pattern, binding)
    for fact in store.candidates(s, p, o):
        b = _unify(pattern, fact, binding)
        if b is not None:
            matched.append(fact)
            _join(store, atoms[1:], b, matched, out)
            matched.pop()


def _user_round(rule: _CompiledRule, delta: list, store: _Store):
    """Semi-naive: every derivation that uses at least one delta fact."""
    results = []
    n = len(rule.body)
    for i in range(n):
        pivot = rule.body[i]
        rest = rule.body[:i] + rule.body[i + 1 :]
        for fact in delta:
            b = _unify(pivot, fact, {})
            if b is None:
                continue
            found = []
            _join(store, rest, b, [], found)
            for binding, others in found:
                body = list(others)
                body.insert(i, fact)
                results.append((_resolve(rule.head, binding), tuple(body)))
    return results


def check_rules(rules: Iterable[Rule]) -> list[Rule]:
    out = []
    for r in rules:
        if not isinstance(r, Rule):
            raise RuleError(f"not a rule: {r!r}")
        out.append(r)
    return out


def saturate(
    graph: Graph,
    rules: Sequence[Rule] = (),
    *,
    builtins: bool = True,
    round_fn=None,
) -> Saturation:
    """Close ``graph`` under the built-in RDFS rules plus ``rules``.

    Works on a copy; inferred triples get provenance with
    ``extractor="inferred"`` and the rule name as source. ``round_fn``
    overrides the kernel implementation (used by tests and benchmarks).
    """
    rules = check_rules(rules)
    round_fn = round_fn or _kernel.builtin_round
    table = TermTable()
    ids = tuple(table.id(x) for x in (RDF_TYPE, RDFS_SUBCLASSOF, RDFS_SUBPROPERTYOF, RDFS_DOMAIN, RDFS_RANGE))
    compiled = [_CompiledRule(r, table) for r in rules]

    store = _Store()
    delta = []
    for t in sorted(graph, key=Triple.sort_key):
        e = table.encode(t)
        store.add(e)
        delta.append(e)

    derivations: dict = {}
    rounds = 0
    while delta:
        rounds += 1
        new: dict = {}
        if builtins:
            for head, code, b1, b2 in round_fn(delta, store.facts, store.spo, store.pos, ids):
                if head not in new:
                    new[head] = (BUILTIN_RULE_NAMES[code], (b1, b2))
        for rule in compiled:
            for head, body in _user_round(rule, delta, store):
                if head not in store.facts and head not in new:
                    new[head] = (rule.rule.name, body)
        delta = []
        for head, (name, body) in new.items():
            if head[0] < 0 or head[1] < 0:
                continue
            try:
                triple = Triple(*(table.term(i) for i in head))
                if not isinstance(triple.predicate, IRI):
                    continue
            except (StructuralError, KeyError):
                continue
            store.add(head)
            delta.append(head)
            derivations[head] = (name, body)

    out = graph.copy()
    decoded = {table.decode(h): h for h in derivations}
    inferred = frozenset(decoded)
    out._insert_trusted(inferred)
    stamp = utcnow()
    provenance = {}
    for triple, h in decoded.items():
        name = derivations[h][0]
        prov = provenance.get(name)
        if prov is None:
            prov = provenance[name] = Provenance(source=name, extractor="inferred", timestamp=stamp)
        out.set_provenance(triple, prov)
    return Saturation(
        graph=out,
        asserted=graph.triples(),
        inferred=inferred,
        derivations=_Derivations(table, derivations, decoded),
        rounds=rounds,
    )


def closure(graph: Graph, rules: Sequence[Rule] = ()) -> Graph:
    return saturate(graph, rules).graph

