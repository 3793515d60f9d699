"""Consequence-based classification for EL with role hierarchies and chains.

The ontology is first rewritten into a small set of normal forms over
interned integer ids, then saturated with the usual completion rules
until nothing new can be derived. ``classify`` turns the saturated
subsumers into equivalence groups and a transitively reduced hierarchy
over the named classes.
"""
from __future__ import annotations

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field

from .model import (
    NOTHING, THING, AnnotationAssertion, Bottom, ClassExpression, Complement,
    Declaration, EquivalentClasses, HasValue, Intersection, InversePropertiesOf,
    Iri, Named, Ontology, SomeValues, SubClassOf, SubPropertyChainOf,
    SubPropertyOf, Top,
)

log = logging.getLogger(__name__)

FRESH_NS = "urn:presabs:fresh#"
NOMINAL_NS = "urn:presabs:nominal#"

TOP = 0
BOTTOM = 1


class ReasoningError(Exception):
    pass


class ComplementNotSupported(ReasoningError):
    """Raised when class negation reaches the EL engine."""

    def __init__(self, expression: ClassExpression, provenance=None):
        self.expression = expression
        self.provenance = provenance
        where = f" in {provenance.key}" if provenance is not None else ""
        super().__init__(f"class negation is outside EL: {expression.key}{where}")


class UnknownClassError(KeyError):
    pass


# -- normal forms ------------------------------------------------------------

@dataclass(frozen=True, slots=True, order=True)
class AtomicSub:
    a: int
    b: int


@dataclass(frozen=True, slots=True, order=True)
class ConjSub:
    a1: int
    a2: int
    b: int


@dataclass(frozen=True, slots=True, order=True)
class ExistRight:
    a: int
    r: int
    b: int


@dataclass(frozen=True, slots=True, order=True)
class ExistLeft:
    r: int
    a: int
    b: int


@dataclass(frozen=True, slots=True, order=True)
class PropSub:
    r: int
    s: int


@dataclass(frozen=True, slots=True, order=True)
class PropChain:
    r1: int
    r2: int
    s: int


class Interner:
    """Bijection between IRIs and dense integer ids."""

    def __init__(self, seed=()):
        self.ids: dict = {}
        self.names: list = []
        for iri in seed:
            self(iri)

    def __call__(self, iri: Iri) -> int:
        i = self.ids.get(iri)
        if i is None:
            i = len(self.names)
            self.ids[iri] = i
            self.names.append(iri)
        return i

    def __len__(self):
        return len(self.names)

    def __contains__(self, iri):
        return iri in self.ids

    def id_of(self, iri: Iri) -> int:
        try:
            return self.ids[iri]
        except KeyError:
            raise UnknownClassError(f"unknown IRI <{iri}>") from None


@dataclass
class Normalized:
    axioms: set
    classes: Interner
    props: Interner
    fresh: set
    warnings: list = field(default_factory=list)

    def is_fresh(self, i: int) -> bool:
        return i in self.fresh


def fresh_iri(expr: ClassExpression) -> Iri:
    return Iri(FRESH_NS + hashlib.sha1(expr.key.encode("utf-8")).hexdigest()[:20])


def nominal_iri(individual: Iri) -> Iri:
    return Iri(NOMINAL_NS + individual.value)


class _Normalizer:
    def __init__(self):
        self.classes = Interner([THING, NOTHING])
        self.props = Interner()
        self.out: set = set()
        self.fresh: set = set()
        self.fresh_keys: dict = {}
        self.defined_pos: set = set()
        self.defined_neg: set = set()
        self.warnings: list = []
        self.current = None

    def emit(self, ax):
        self.out.add(ax)

    def fresh_for(self, expr: ClassExpression) -> int:
        iri = fresh_iri(expr)
        prev = self.fresh_keys.get(iri)
        if prev is None:
            self.fresh_keys[iri] = expr.key
        elif prev != expr.key:
            raise ReasoningError(f"fresh-name collision between {prev} and {expr.key}")
        i = self.classes(iri)
        self.fresh.add(i)
        return i

    def simple_id(self, expr: ClassExpression):
        if isinstance(expr, Named):
            return self.classes(expr.iri)
        if expr == Top:
            return TOP
        if expr == Bottom:
            return BOTTOM
        return None

    def nominal(self, individual: Iri) -> int:
        i = self.classes(nominal_iri(individual))
        self.fresh.add(i)
        return i

    def reject(self, expr):
        raise ComplementNotSupported(expr, self.current)

    # id X with X ⊑ expr
    def pos(self, expr: ClassExpression) -> int:
        i = self.simple_id(expr)
        if i is not None:
            return i
        if isinstance(expr, Intersection):
            return self.define_conj(expr)
        if isinstance(expr, HasValue):
            x = self.fresh_for(expr)
            if x not in self.defined_pos:
                self.defined_pos.add(x)
                self.emit(ExistRight(x, self.props(expr.property), self.nominal(expr.individual)))
            return x
        if isinstance(expr, SomeValues):
            x = self.fresh_for(expr)
            if x not in self.defined_pos:
                self.defined_pos.add(x)
                self.emit(ExistRight(x, self.props(expr.property), self.pos(expr.filler)))
            return x
        self.reject(expr)

    # id X with expr ⊑ X
    def neg(self, expr: ClassExpression) -> int:
        i = self.simple_id(expr)
        if i is not None:
            return i
        if isinstance(expr, Intersection):
            return self.define_conj(expr)
        if isinstance(expr, HasValue):
            x = self.fresh_for(expr)
            if x not in self.defined_neg:
                self.defined_neg.add(x)
                self.emit(ExistLeft(self.props(expr.property), self.nominal(expr.individual), x))
            return x
        if isinstance(expr, SomeValues):
            x = self.fresh_for(expr)
            if x not in self.defined_neg:
                self.defined_neg.add(x)
                self.emit(ExistLeft(self.props(expr.property), self.neg(expr.filler), x))
            return x
        self.reject(expr)

    def define_conj(self, expr: Intersection) -> int:
        # named conjunctions are cheap to define in both directions
        x = self.fresh_for(expr)
        if x in self.defined_pos:
            return x
        self.defined_pos.add(x)
        self.defined_neg.add(x)
        for op in expr.operands:
            b = self.pos(op)
            if b != x:
                self.emit(AtomicSub(x, b))
        self.conj_into(expr.operands, x)
        return x

    def conj_into(self, operands, target: int):
        ids = []
        kept = []
        for op in operands:
            i = self.neg(op)
            if i not in ids:
                ids.append(i)
                kept.append(op)
        if TOP in ids and len(ids) > 1:
            k = ids.index(TOP)
            del ids[k], kept[k]
        if len(ids) == 1:
            if ids[0] != target:
                self.emit(AtomicSub(ids[0], target))
            return
        acc = ids[0]
        for k in range(1, len(ids) - 1):
            mid = self.fresh_for(Intersection(tuple(kept[: k + 1])))
            self.emit(ConjSub(min(acc, ids[k]), max(acc, ids[k]), mid))
            acc = mid
        last = ids[-1]
        self.emit(ConjSub(min(acc, last), max(acc, last), target))

    def sub_into_id(self, a: int, sup: ClassExpression):
        """a ⊑ sup"""
        if sup == Top:
            return
        b = self.simple_id(sup)
        if b is not None:
            if a != b:
                self.emit(AtomicSub(a, b))
        elif isinstance(sup, Intersection):
            for op in sup.operands:
                self.sub_into_id(a, op)
        elif isinstance(sup, SomeValues):
            self.emit(ExistRight(a, self.props(sup.property), self.pos(sup.filler)))
        elif isinstance(sup, HasValue):
            self.emit(ExistRight(a, self.props(sup.property), self.nominal(sup.individual)))
        else:
            self.reject(sup)

    def subclass(self, sub: ClassExpression, sup: ClassExpression):
        if sub == Bottom or sup == Top:
            return
        a = self.simple_id(sub)
        if a is not None:
            self.sub_into_id(a, sup)
            return
        if isinstance(sub, Complement):
            self.reject(sub)
        b = self.simple_id(sup)
        if b is None:
            if isinstance(sup, Complement):
                self.reject(sup)
            if isinstance(sup, Intersection):
                for op in sup.operands:
                    self.subclass(sub, op)
                return
            self.sub_into_id(self.neg(sub), sup)
            return
        if isinstance(sub, Intersection):
            self.conj_into(sub.operands, b)
        elif isinstance(sub, SomeValues):
            self.emit(ExistLeft(self.props(sub.property), self.neg(sub.filler), b))
        elif isinstance(sub, HasValue):
            self.emit(ExistLeft(self.props(sub.property), self.nominal(sub.individual), b))
        else:
            self.reject(sub)

    def axiom(self, ax):
        self.current = ax
        if isinstance(ax, SubClassOf):
            self.subclass(ax.sub, ax.sup)
        elif isinstance(ax, EquivalentClasses):
            self.subclass(ax.a, ax.b)
            self.subclass(ax.b, ax.a)
        elif isinstance(ax, SubPropertyOf):
            r, s = self.props(ax.sub), self.props(ax.sup)
            if r != s:
                self.emit(PropSub(r, s))
        elif isinstance(ax, SubPropertyChainOf):
            r1, r2 = (self.props(p) for p in ax.chain)
            self.emit(PropChain(r1, r2, self.props(ax.sup)))
        elif isinstance(ax, InversePropertiesOf):
            msg = f"inverse property axiom dropped: {ax.p} / {ax.q}"
            self.warnings.append(msg)
            log.debug(msg)
        elif isinstance(ax, Declaration):
            if ax.kind == "class":
                self.classes(ax.iri)
            elif ax.kind == "property":
                self.props(ax.iri)
        elif isinstance(ax, AnnotationAssertion):
            pass
        else:
            raise TypeError(f"unsupported axiom {ax!r}")


def normalize(o: Ontology) -> Normalized:
    n = _Normalizer()
    for iri in sorted(o.classes()):
        n.classes(iri)
    for ax in o.canonical_axioms():
        n.axiom(ax)
    return Normalized(n.out, n.classes, n.props, n.fresh, n.warnings)


# -- saturation --------------------------------------------------------------

class SubsumptionSet:
    """Saturated subsumers per class plus the derived existential links."""

    def __init__(self, normalized: Normalized, subsumers: list, links: list):
        self.normalized = normalized
        self.subsumers = subsumers
        self.links = links

    @property
    def classes(self) -> Interner:
        return self.normalized.classes

    def is_named(self, i: int) -> bool:
        return i not in self.normalized.fresh

    def is_unsatisfiable(self, iri: Iri) -> bool:
        return BOTTOM in self.subsumers[self.classes.id_of(iri)]

    def named_classes(self) -> list:
        fresh = self.normalized.fresh
        return [iri for i, iri in enumerate(self.classes.names) if i > BOTTOM and i not in fresh]

    def is_subsumed_by(self, sub: Iri, sup: Iri) -> bool:
        a = self.classes.id_of(sub)
        b = self.classes.id_of(sup)
        s = self.subsumers[a]
        return b in s or BOTTOM in s or a == BOTTOM

    def named_subsumers(self, iri: Iri) -> set:
        names = self.classes.names
        fresh = self.normalized.fresh
        return {names[j] for j in self.subsumers[self.classes.id_of(iri)] if j not in fresh}

    def named_pairs(self) -> set:
        """(A, B) for named A with A ⊑ B; B ranges over named classes, owl:Thing
        and owl:Nothing. Unsatisfiable A is subsumed by everything."""
        names = self.classes.names
        fresh = self.normalized.fresh
        targets = [i for i in range(len(names)) if i not in fresh]
        out = set()
        for i in targets:
            if i <= BOTTOM:
                continue
            s = self.subsumers[i]
            a = names[i]
            if BOTTOM in s:
                out.update((a, names[j]) for j in targets)
            else:
                out.update((a, names[j]) for j in s if j not in fresh)
        return out

    def count(self) -> int:
        """Number of subsumption pairs between named classes (owl:Thing excluded)."""
        fresh = self.normalized.fresh
        total = 0
        for i, s in enumerate(self.subsumers):
            if i <= BOTTOM or i in fresh:
                continue
            total += sum(1 for j in s if j > BOTTOM and j not in fresh)
        return total


def saturate(normalized: Normalized) -> SubsumptionSet:
    n = len(normalized.classes)
    told_sup = [[] for _ in range(n)]
    conj_idx = [[] for _ in range(n)]
    conj_pair: dict = {}
    ex_right = [[] for _ in range(n)]
    ex_left_by_filler = [[] for _ in range(n)]
    ex_left_rf: dict = {}
    ex_left_fillers: dict = {}
    prop_sub: dict = {}
    chain_first: dict = {}
    chain_second: dict = {}

    for ax in normalized.axioms:
        t = type(ax)
        if t is AtomicSub:
            told_sup[ax.a].append(ax.b)
        elif t is ConjSub:
            if ax.a1 == ax.a2:
                told_sup[ax.a1].append(ax.b)
            else:
                conj_idx[ax.a1].append((ax.a2, ax.b))
                conj_idx[ax.a2].append((ax.a1, ax.b))
                conj_pair.setdefault((ax.a1, ax.a2), []).append(ax.b)
                conj_pair.setdefault((ax.a2, ax.a1), []).append(ax.b)
        elif t is ExistRight:
            ex_right[ax.a].append((ax.r, ax.b))
        elif t is ExistLeft:
            ex_left_by_filler[ax.a].append((ax.r, ax.b))
            ex_left_rf.setdefault((ax.r, ax.a), []).append(ax.b)
            ex_left_fillers.setdefault(ax.r, set()).add(ax.a)
        elif t is PropSub:
            prop_sub.setdefault(ax.r, set()).add(ax.s)
        elif t is PropChain:
            chain_first.setdefault(ax.r1, []).append((ax.r2, ax.s))
            chain_second.setdefault(ax.r2, []).append((ax.r1, ax.s))

    # strict super-property closure
    psup: dict = {}
    for r in range(len(normalized.props)):
        seen = set()
        stack = list(prop_sub.get(r, ()))
        while stack:
            s = stack.pop()
            if s not in seen:
                seen.add(s)
                stack.extend(prop_sub.get(s, ()))
        seen.discard(r)
        if seen:
            psup[r] = sorted(seen)

    S = [set() for _ in range(n)]
    out_links = [None] * n
    in_links = [None] * n
    subs = []
    links = []
    for a in range(n):
        subs.append((a, a))
        subs.append((a, TOP))

    push_sub = subs.append
    push_link = links.append
    empty = ()

    while subs or links:
        while subs:
            a, b = subs.pop()
            sa = S[a]
            if b in sa:
                continue
            sa.add(b)
            for c in told_sup[b]:
                if c not in sa:
                    push_sub((a, c))
            ci = conj_idx[b]
            if len(ci) <= len(sa):
                for other, c in ci:
                    if other in sa and c not in sa:
                        push_sub((a, c))
            elif ci:
                # hub operand (shared by many conjunctions): walk sa instead
                for other in list(sa):
                    for c in conj_pair.get((b, other), empty):
                        if c not in sa:
                            push_sub((a, c))
            for r, c in ex_right[b]:
                push_link((a, r, c))
            inl = in_links[a]
            if inl is not None:
                for r, d in ex_left_by_filler[b]:
                    preds = inl.get(r)
                    if preds:
                        for x in preds:
                            if d not in S[x]:
                                push_sub((x, d))
                if b == BOTTOM:
                    for preds in inl.values():
                        for x in preds:
                            push_sub((x, BOTTOM))
        while links and not subs:
            a, r, b = links.pop()
            ol = out_links[a]
            if ol is None:
                ol = out_links[a] = {}
            targets = ol.get(r)
            if targets is None:
                targets = ol[r] = set()
            elif b in targets:
                continue
            targets.add(b)
            il = in_links[b]
            if il is None:
                il = in_links[b] = {}
            il.setdefault(r, set()).add(a)

            sb = S[b]
            sa = S[a]
            fillers = ex_left_fillers.get(r)
            if fillers:
                if len(sb) <= len(fillers):
                    for c in sb:
                        ds = ex_left_rf.get((r, c))
                        if ds:
                            for d in ds:
                                if d not in sa:
                                    push_sub((a, d))
                else:
                    for c in fillers:
                        if c in sb:
                            for d in ex_left_rf[(r, c)]:
                                if d not in sa:
                                    push_sub((a, d))
            if BOTTOM in sb:
                push_sub((a, BOTTOM))
            for s in psup.get(r, empty):
                if b not in ol.get(s, empty):
                    push_link((a, s, b))
            for r2, s in chain_first.get(r, empty):
                olb = out_links[b]
                if olb is not None:
                    have = ol.get(s, empty)
                    for c in olb.get(r2, empty):
                        if c not in have:
                            push_link((a, s, c))
            for r1, s in chain_second.get(r, empty):
                ila = in_links[a]
                if ila is not None:
                    for x in ila.get(r1, empty):
                        if b not in out_links[x].get(s, empty):
                            push_link((x, s, b))
    return SubsumptionSet(normalized, S, out_links)


# -- hierarchy ---------------------------------------------------------------

class ClassHierarchy:
    """Equivalence groups and direct (non-redundant) edges over named classes.

    owl:Thing and owl:Nothing are always present as the representatives of
    their own groups; unsatisfiable classes belong to the owl:Nothing group.
    """

    def __init__(self, groups: dict, parents: dict):
        self.groups = groups
        self.rep = {m: r for r, members in groups.items() for m in members}
        self.parents = parents
        children: dict = {r: set() for r in groups}
        for c, ps in parents.items():
            for p in ps:
                children[p].add(c)
        self.children = {r: frozenset(cs) for r, cs in children.items()}
        self._ancestors = None

    def __contains__(self, iri):
        return iri in self.rep

    def representative(self, iri: Iri) -> Iri:
        try:
            return self.rep[iri]
        except KeyError:
            raise UnknownClassError(f"unknown class <{iri}>") from None

    def equivalents(self, iri: Iri) -> frozenset:
        return self.groups[self.representative(iri)]

    def direct_superclasses(self, iri: Iri) -> frozenset:
        return self.parents.get(self.representative(iri), frozenset())

    def direct_subclasses(self, iri: Iri) -> frozenset:
        return self.children.get(self.representative(iri), frozenset())

    def is_unsatisfiable(self, iri: Iri) -> bool:
        return self.representative(iri) == NOTHING

    def _closure(self) -> dict:
        if self._ancestors is None:
            anc: dict = {}
            indeg = {r: len(self.parents.get(r, ())) for r in self.groups}
            queue = deque(r for r, d in indeg.items() if d == 0)
            while queue:
                r = queue.popleft()
                acc = {r}
                for p in self.parents.get(r, ()):
                    acc |= anc[p]
                anc[r] = frozenset(acc)
                for c in self.children.get(r, ()):
                    indeg[c] -= 1
                    if indeg[c] == 0:
                        queue.append(c)
            self._ancestors = anc
        return self._ancestors

    def ancestors(self, iri: Iri) -> frozenset:
        """Representatives of every class subsuming ``iri`` (itself included)."""
        return self._closure()[self.representative(iri)]

    def superclasses(self, iri: Iri) -> set:
        """Every named class subsuming ``iri``, expanded over equivalence groups."""
        if self.is_unsatisfiable(iri):
            return set(self.rep)
        out = set()
        for r in self.ancestors(iri):
            out |= self.groups[r]
        return out

    def is_subclass(self, sub: Iri, sup: Iri) -> bool:
        rs = self.representative(sub)
        if rs == NOTHING:
            return True
        return self.representative(sup) in self._closure()[rs]

    def subsumption_pairs(self, restrict=None) -> set:
        names = set(self.rep) if restrict is None else set(restrict) & set(self.rep)
        out = set()
        for a in names:
            out.update((a, b) for b in self.superclasses(a) & names)
        return out

    def edges(self):
        for c in sorted(self.parents):
            for p in sorted(self.parents[c]):
                yield c, p

    def to_axioms(self) -> list:
        def ce(iri):
            if iri == THING:
                return Top
            if iri == NOTHING:
                return Bottom
            return Named(iri)

        out = []
        for c, p in self.edges():
            if p != THING:
                out.append(SubClassOf(ce(c), ce(p)))
        for r, members in self.groups.items():
            for m in members:
                if m != r:
                    out.append(EquivalentClasses(ce(r), ce(m)))
        return out

    def __eq__(self, other):
        return (isinstance(other, ClassHierarchy) and self.groups == other.groups
                and self.parents == other.parents)


def build_hierarchy(ss: SubsumptionSet) -> ClassHierarchy:
    names = ss.classes.names
    fresh = ss.normalized.fresh
    S = ss.subsumers
    named = [i for i in range(len(names)) if i not in fresh]
    unsat = {i for i in named if BOTTOM in S[i]}
    unsat.add(BOTTOM)
    sat = [i for i in named if i not in unsat]

    up = {i: {j for j in S[i] if j not in fresh} for i in sat}
    rep: dict = {}
    groups: dict = {}
    for i in sat:
        if i in rep:
            continue
        members = [j for j in up[i] if i in up.get(j, ())]
        if TOP in members:
            r = TOP
        else:
            r = min(members, key=lambda j: names[j])
        for j in members:
            rep[j] = r
        groups[r] = members

    cands = {}
    for r in groups:
        cands[r] = {rep[j] for j in up[r]}
        cands[r].discard(r)
    parents = {}
    for r, cs in cands.items():
        strict = set()
        for c in cs:
            strict |= cands[c]
        direct = cs - strict
        if direct:
            parents[names[r]] = frozenset(names[p] for p in direct)

    iri_groups = {names[r]: frozenset(names[j] for j in ms) for r, ms in groups.items()}
    iri_groups[NOTHING] = frozenset(names[j] for j in unsat)
    return ClassHierarchy(iri_groups, parents)


@dataclass
class Classification:
    normalized: Normalized
    subsumptions: SubsumptionSet
    hierarchy: ClassHierarchy


def reason(o: Ontology) -> Classification:
    norm = normalize(o)
    ss = saturate(norm)
    return Classification(norm, ss, build_hierarchy(ss))


def classify(o: Ontology) -> ClassHierarchy:
    return reason(o).hierarchy


def is_subsumed_by(s: SubsumptionSet, sub: Iri, sup: Iri) -> bool:
    return s.is_subsumed_by(sub, sup)
