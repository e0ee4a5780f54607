"""Pure-Python semi-naive round for the built-in RDFS rules.

Mirrors ``_kernel.pyx`` line for line; the two must stay in sync.

Facts are integer-encoded ``(s, p, o)`` tuples; literal ids are negative.
``spo`` maps p -> s -> {o} and ``pos`` maps p -> o -> {s}; both already
contain ``delta``. Each returned item is ``(head, rule, body1, body2)`` for a
head not yet in ``facts``, first derivation only.
"""

SUBCLASS_TRANS = 0
TYPE_PROPAGATION = 1
SUBPROPERTY = 2
DOMAIN = 3
RANGE = 4

_EMPTY: dict = {}


def builtin_round(delta, facts, spo, pos, ids):
    rdf_type, sub_class, sub_prop, dom, rng = ids
    out = []
    seen = set()
    sc_out = spo.get(sub_class, _EMPTY)
    sc_in = pos.get(sub_class, _EMPTY)
    type_in = pos.get(rdf_type, _EMPTY)
    sp_out = spo.get(sub_prop, _EMPTY)
    dom_out = spo.get(dom, _EMPTY)
    rng_out = spo.get(rng, _EMPTY)

    for t in delta:
        s, p, o = t
        if p == sub_class:
            # (s sc o), (o sc c) => (s sc c)
            for c in sc_out.get(o, ()):
                h = (s, sub_class, c)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, SUBCLASS_TRANS, t, (o, sub_class, c)))
            # (a sc s), (s sc o) => (a sc o)
            for a in sc_in.get(s, ()):
                h = (a, sub_class, o)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, SUBCLASS_TRANS, (a, sub_class, s), t))
            # (x type s), (s sc o) => (x type o)
            for x in type_in.get(s, ()):
                h = (x, rdf_type, o)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, TYPE_PROPAGATION, (x, rdf_type, s), t))
        elif p == rdf_type:
            # (s type o), (o sc d) => (s type d)
            for d in sc_out.get(o, ()):
                h = (s, rdf_type, d)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, TYPE_PROPAGATION, t, (o, sub_class, d)))

        if p == sub_prop:
            # (x s y), (s sp o) => (x o y)
            if o > 0:
                for x, ys in spo.get(s, _EMPTY).items():
                    for y in ys:
                        h = (x, o, y)
                        if h not in facts and h not in seen:
                            seen.add(h)
                            out.append((h, SUBPROPERTY, (x, s, y), t))
        elif p == dom:
            # (x s y), (s dom o) => (x type o)
            for x in spo.get(s, _EMPTY):
                h = (x, rdf_type, o)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, DOMAIN, (x, s, next(iter(spo[s][x]))), t))
        elif p == rng:
            # (x s y), (s rng o) => (y type o)
            for y, xs in pos.get(s, _EMPTY).items():
                if y > 0:
                    h = (y, rdf_type, o)
                    if h not in facts and h not in seen:
                        seen.add(h)
                        out.append((h, RANGE, (next(iter(xs)), s, y), t))

        # t as the data atom of the property rules
        for q in sp_out.get(p, ()):
            if q > 0:
                h = (s, q, o)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, SUBPROPERTY, t, (p, sub_prop, q)))
        for c in dom_out.get(p, ()):
            h = (s, rdf_type, c)
            if h not in facts and h not in seen:
                seen.add(h)
                out.append((h, DOMAIN, t, (p, dom, c)))
        if o > 0:
            for c in rng_out.get(p, ()):
                h = (o, rdf_type, c)
                if h not in facts and h not in seen:
                    seen.add(h)
                    out.append((h, RANGE, t, (p, rng, c)))
    return out
