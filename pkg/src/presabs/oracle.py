"""Brute-force reference answers for small inputs.

Nothing here is shared with the EL engine: class expressions are used as
they come out of the parser (no normal form, no fresh names) and the
closure is recomputed over every expression in every round until a round
adds nothing. Slow by design; meant for a few hundred expressions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .model import (
    NOTHING, THING, AnnotationAssertion, Bottom, ClassExpression, Complement,
    EquivalentClasses, HasValue, Intersection, Iri, Named, Ontology,
    SomeValues, SubClassOf, SubPropertyChainOf, SubPropertyOf, Top,
)
from .vocabulary import Vocabulary


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class _Individual(ClassExpression):
    """The singleton {i}; kept apart from any class sharing i's IRI."""
    iri: Iri

    @property
    def key(self) -> str:
        return "{" + self.iri.value + "}"


@dataclass(frozen=True)
class OracleResult:
    pairs: frozenset = frozenset()
    inverted: frozenset | None = None
    cells: dict | None = None
    columns: frozenset | None = None

    def restrict(self, names: Iterable[Iri]) -> "OracleResult":
        keep = set(names)
        return OracleResult(frozenset((a, b) for a, b in self.pairs if a in keep and b in keep),
                            self.inverted, self.cells, self.columns)


@dataclass
class Diff:
    only_left: set = field(default_factory=set)
    only_right: set = field(default_factory=set)

    @property
    def empty(self) -> bool:
        return not self.only_left and not self.only_right

    def __str__(self):
        lines = [f"only in left ({len(self.only_left)}):"]
        lines += [f"  {x}" for x in sorted(map(str, self.only_left))]
        lines.append(f"only in right ({len(self.only_right)}):")
        lines += [f"  {x}" for x in sorted(map(str, self.only_right))]
        return "\n".join(lines)


def _as_items(r) -> set:
    if isinstance(r, OracleResult):
        if r.cells is not None:
            return set(r.cells.items())
        return set(r.pairs)
    if isinstance(r, dict):
        return set(r.items())
    return set(r)


def diff(a, b) -> Diff:
    """Items present on exactly one side. Accepts OracleResults, pair sets or cell maps."""
    left, right = _as_items(a), _as_items(b)
    return Diff(left - right, right - left)


def _plain(expr: ClassExpression) -> ClassExpression:
    if isinstance(expr, HasValue):
        return SomeValues(expr.property, _Individual(expr.individual))
    if isinstance(expr, Intersection):
        return Intersection(tuple(_plain(o) for o in expr.operands))
    if isinstance(expr, SomeValues):
        return SomeValues(expr.property, _plain(expr.filler))
    if isinstance(expr, Complement):
        raise OracleError(f"complement is handled only through negates pairs: {expr.key}")
    return expr


def _walk(expr):
    yield expr
    if isinstance(expr, Intersection):
        for o in expr.operands:
            yield from _walk(o)
    elif isinstance(expr, SomeValues):
        yield from _walk(expr.filler)


class _Closure:
    def __init__(self, o: Ontology):
        told = []
        props = set()
        prop_edges = []
        chains = []
        for ax in o.axioms:
            if isinstance(ax, SubClassOf):
                told.append((_plain(ax.sub), _plain(ax.sup)))
            elif isinstance(ax, EquivalentClasses):
                a, b = _plain(ax.a), _plain(ax.b)
                told += [(a, b), (b, a)]
            elif isinstance(ax, SubPropertyOf):
                prop_edges.append((ax.sub, ax.sup))
                props.update((ax.sub, ax.sup))
            elif isinstance(ax, SubPropertyChainOf):
                chains.append((ax.chain[0], ax.chain[1], ax.sup))
                props.update((*ax.chain, ax.sup))

        universe = [Top, Bottom] + [Named(c) for c in sorted(o.classes())]
        for pair in told:
            for e in pair:
                universe.extend(_walk(e))
        self.exprs = list(dict.fromkeys(universe))
        self.index = {e: i for i, e in enumerate(self.exprs)}
        n = len(self.exprs)
        self.top, self.bot = self.index[Top], self.index[Bottom]

        for e in self.exprs:
            if isinstance(e, SomeValues):
                props.add(e.property)
        # properties as small ints; Iri hashing dominates otherwise
        pid = {p: k for k, p in enumerate(sorted(props))}
        # reflexive-transitive property hierarchy, computed pairwise
        self.sup_props = [{k} for k in range(len(pid))]
        grew = True
        while grew:
            grew = False
            for a, b in prop_edges:
                for k in range(len(pid)):
                    if pid[a] in self.sup_props[k] and pid[b] not in self.sup_props[k]:
                        self.sup_props[k].add(pid[b])
                        grew = True
        self.chains = {}
        for r1, r2, sp in chains:
            self.chains.setdefault((pid[r1], pid[r2]), set()).add(pid[sp])

        self.told_up = [set() for _ in range(n)]
        for a, b in told:
            self.told_up[self.index[a]].add(self.index[b])
        self.conj = [(i, [self.index[o] for o in e.operands])
                     for i, e in enumerate(self.exprs) if isinstance(e, Intersection)]
        self.exist = {}
        self.exist_by_prop = {}
        for i, e in enumerate(self.exprs):
            if isinstance(e, SomeValues):
                f = self.index[e.filler]
                r = pid[e.property]
                self.exist[i] = (r, f)
                self.exist_by_prop.setdefault(r, []).append((i, f))

        self.sub = [{i, self.top} for i in range(n)]
        self.sub[self.bot] = set(range(n))
        self.links = [set() for _ in range(n)]

    def add_told(self, a: ClassExpression, b: ClassExpression):
        self.told_up[self.index[a]].add(self.index[b])

    def run(self):
        n = len(self.exprs)
        everything = set(range(n))
        changed = True
        while changed:
            changed = False
            for x in range(n):
                sx, lx = self.sub[x], self.links[x]
                size = (len(sx), len(lx))
                if self.bot in sx:
                    sx |= everything
                add = set()
                for d in sx:
                    add |= self.told_up[d]
                    if d in self.exist:
                        r, f = self.exist[d]
                        for r2 in self.sup_props[r]:
                            lx.add((r2, f))
                for c, ops in self.conj:
                    if c not in sx and all(o in sx for o in ops):
                        add.add(c)
                    elif c in sx:
                        add.update(ops)
                for r, y in list(lx):
                    sy = self.sub[y]
                    if self.bot in sy:
                        add.add(self.bot)
                    for c, f in self.exist_by_prop.get(r, ()):
                        if f in sy:
                            add.add(c)
                    if not self.chains:
                        continue
                    for r2, z in list(self.links[y]):
                        for s in self.chains.get((r, r2), ()):
                            for s2 in self.sup_props[s]:
                                lx.add((s2, z))
                sx |= add
                if (len(sx), len(lx)) != size:
                    changed = True

    def subsumed(self, a: ClassExpression, b: ClassExpression) -> bool:
        return self.index[b] in self.sub[self.index[a]]

    def named_pairs(self, classes) -> set:
        targets = [Named(c) for c in classes] + [Top, Bottom]
        out = set()
        for c in classes:
            sc = self.sub[self.index[Named(c)]]
            for t in targets:
                if self.index[t] in sc:
                    out.add((c, t.iri if isinstance(t, Named) else (THING if t == Top else NOTHING)))
        return out


def oracle_classify(o: Ontology, v: Vocabulary | None = None) -> OracleResult:
    """All named-class subsumptions (targets include owl:Thing/owl:Nothing).

    When the ontology carries ``negates`` annotations, each negated name is
    placed by reversing the full positive closure, then everything is
    re-closed; this repeats until no new inverted pair appears.
    """
    v = v or Vocabulary.default()
    cl = _Closure(o)
    cl.run()
    pairs = {ax.subject: ax.target for ax in o.axioms
             if isinstance(ax, AnnotationAssertion) and ax.property == v.negates}
    inverted = None
    if pairs:
        inverted = set()
        while True:
            new = set()
            for a1, b1 in pairs.items():
                for a2, b2 in pairs.items():
                    if a1 != a2 and cl.subsumed(Named(b1), Named(b2)) and (a2, a1) not in inverted:
                        new.add((a2, a1))
            if not new:
                break
            inverted |= new
            for a2, a1 in new:
                cl.add_told(Named(a2), Named(a1))
            cl.run()
        inverted = frozenset(inverted)
    classes = sorted(o.classes())
    return OracleResult(frozenset(cl.named_pairs(classes)), inverted)


# -- presence / absence by graph reachability ---------------------------------

def _told_graph(anatomy: Ontology, v: Vocabulary):
    rels = {v.part_of: "part_of", v.has_part: "has_part", v.develops_from: "develops_from"}
    edges = {k: {} for k in ("up", "part_of", "has_part", "develops_from")}
    for ax in anatomy.axioms:
        if isinstance(ax, SubClassOf):
            pairs = [(ax.sub, ax.sup)]
        elif isinstance(ax, EquivalentClasses):
            pairs = [(ax.a, ax.b), (ax.b, ax.a)]
        else:
            continue
        for sub, sup in pairs:
            if not isinstance(sub, Named):
                raise OracleError(f"unsupported anatomy axiom {ax.key}")
            if isinstance(sup, Named):
                edges["up"].setdefault(sub.iri, set()).add(sup.iri)
            elif (isinstance(sup, SomeValues) and isinstance(sup.filler, Named)
                  and sup.property in rels):
                edges[rels[sup.property]].setdefault(sub.iri, set()).add(sup.filler.iri)
            elif sup == Top:
                continue
            else:
                raise OracleError(f"unsupported anatomy axiom {ax.key}")
    return edges


def _reach(start, graphs) -> set:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in graphs:
            for y in g.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return seen


def _invert(g: dict) -> dict:
    out: dict = {}
    for a, bs in g.items():
        for b in bs:
            out.setdefault(b, set()).add(a)
    return out


def oracle_presence(m, anatomy: Ontology, v: Vocabulary | None = None) -> OracleResult:
    """Cell codes for a character matrix computed by walking told edges.

    Presence climbs subclass edges and follows part_of, has_part and
    develops_from; absence descends subclass edges and follows part_of and
    develops_from backwards.
    """
    from .matrix import CellState  # cell vocabulary only

    v = v or Vocabulary.default()
    g = _told_graph(anatomy, v)
    up_graphs = [g["up"], g["part_of"], g["has_part"], g["develops_from"]]
    down_graphs = [_invert(g["up"]), _invert(g["part_of"]), _invert(g["develops_from"])]
    columns = {c for c in anatomy.classes() if v.anatomy_root in _reach(c, [g["up"]])}

    cells = {}
    for taxon in m.taxa:
        present, absent, said_present, said_absent = set(), set(), set(), set()
        for a in m.annotations_for(taxon.id):
            if a.quality == v.quality_absent:
                absent |= _reach(a.entity, down_graphs)
                said_absent.add(a.entity)
                continue
            present |= _reach(a.entity, up_graphs)
            if a.related_entity is not None:
                present |= _reach(a.related_entity, up_graphs)
            if a.quality == v.quality_present:
                said_present.add(a.entity)
        for e in columns:
            if e in present and e in absent:
                cells[(taxon.id, e)] = CellState.CONFLICT
            elif e in present:
                cells[(taxon.id, e)] = (CellState.ASSERTED_PRESENT if e in said_present
                                        else CellState.INFERRED_PRESENT)
            elif e in absent:
                cells[(taxon.id, e)] = (CellState.ASSERTED_ABSENT if e in said_absent
                                        else CellState.INFERRED_ABSENT)
    return OracleResult(cells=cells, columns=frozenset(columns))
