"""Core OWL data model: IRIs, class expressions, axioms and ontologies.

Only the fragment needed for presence/absence reasoning is modeled:
named classes, owl:Thing/owl:Nothing, intersections, existential and
hasValue restrictions, complements, and the handful of axiom types that
relate them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Union

OWL_NS = "http://www.w3.org/2002/07/owl#"


class OntologyError(Exception):
    """Base class for errors raised while building or combining ontologies."""


class PrefixConflictError(OntologyError):
    pass


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str) or not self.value:
            raise ValueError("IRI must be a non-empty string")

    def __str__(self) -> str:
        return self.value

    @property
    def local_name(self) -> str:
        v = self.value
        cut = max(v.rfind("#"), v.rfind("/"), v.rfind(":"))
        return v[cut + 1:] if cut + 1 < len(v) else v

    def split(self) -> tuple[str, str]:
        """Namespace/local decomposition at the last '#', '/' or ':'."""
        local = self.local_name
        return self.value[: len(self.value) - len(local)], local


THING = Iri(OWL_NS + "Thing")
NOTHING = Iri(OWL_NS + "Nothing")


# -- class expressions -------------------------------------------------------

class ClassExpression:
    """Marker base; concrete expressions are frozen dataclasses below."""

    @property
    def key(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError

    def __lt__(self, other: "ClassExpression") -> bool:
        return self.key < other.key


@dataclass(frozen=True, eq=True)
class Named(ClassExpression):
    iri: Iri

    @cached_property
    def key(self) -> str:
        return f"<{self.iri.value}>"


@dataclass(frozen=True, eq=True)
class _Top(ClassExpression):
    @property
    def key(self) -> str:
        return f"<{THING.value}>"


@dataclass(frozen=True, eq=True)
class _Bottom(ClassExpression):
    @property
    def key(self) -> str:
        return f"<{NOTHING.value}>"


Top = _Top()
Bottom = _Bottom()


@dataclass(frozen=True, eq=True)
class Intersection(ClassExpression):
    operands: tuple

    def __post_init__(self):
        ops = tuple(self.operands)
        if len(ops) < 2:
            raise ValueError("ObjectIntersectionOf needs at least two operands")
        object.__setattr__(self, "operands", tuple(sorted(ops, key=lambda e: e.key)))

    @cached_property
    def key(self) -> str:
        return "ObjectIntersectionOf(" + " ".join(o.key for o in self.operands) + ")"


@dataclass(frozen=True, eq=True)
class SomeValues(ClassExpression):
    property: Iri
    filler: ClassExpression

    @cached_property
    def key(self) -> str:
        return f"ObjectSomeValuesFrom(<{self.property.value}> {self.filler.key})"


@dataclass(frozen=True, eq=True)
class HasValue(ClassExpression):
    property: Iri
    individual: Iri

    @cached_property
    def key(self) -> str:
        return f"ObjectHasValue(<{self.property.value}> <{self.individual.value}>)"


@dataclass(frozen=True, eq=True)
class Complement(ClassExpression):
    operand: ClassExpression

    @cached_property
    def key(self) -> str:
        return f"ObjectComplementOf({self.operand.key})"


def named(iri: Union[Iri, str]) -> Named:
    return Named(iri if isinstance(iri, Iri) else Iri(iri))


def subexpressions(expr: ClassExpression) -> Iterator[ClassExpression]:
    """Yield ``expr`` and every nested expression, outermost first."""
    yield expr
    if isinstance(expr, Intersection):
        for op in expr.operands:
            yield from subexpressions(op)
    elif isinstance(expr, SomeValues):
        yield from subexpressions(expr.filler)
    elif isinstance(expr, Complement):
        yield from subexpressions(expr.operand)


def class_iris(expr: ClassExpression) -> Iterator[Iri]:
    for e in subexpressions(expr):
        if isinstance(e, Named):
            yield e.iri


# -- axioms ------------------------------------------------------------------

class Axiom:
    @property
    def key(self) -> str:  # pragma: no cover - overridden
        raise NotImplementedError


@dataclass(frozen=True)
class SubClassOf(Axiom):
    sub: ClassExpression
    sup: ClassExpression

    @cached_property
    def key(self) -> str:
        return f"SubClassOf({self.sub.key} {self.sup.key})"


@dataclass(frozen=True)
class EquivalentClasses(Axiom):
    a: ClassExpression
    b: ClassExpression

    def __post_init__(self):
        # operand order is not significant
        if self.b.key < self.a.key:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @cached_property
    def key(self) -> str:
        return f"EquivalentClasses({self.a.key} {self.b.key})"


@dataclass(frozen=True)
class SubPropertyOf(Axiom):
    sub: Iri
    sup: Iri

    @cached_property
    def key(self) -> str:
        return f"SubObjectPropertyOf(<{self.sub.value}> <{self.sup.value}>)"


@dataclass(frozen=True)
class SubPropertyChainOf(Axiom):
    chain: tuple
    sup: Iri

    def __post_init__(self):
        chain = tuple(self.chain)
        if len(chain) != 2:
            raise ValueError(f"property chains must have length 2, got {len(chain)}")
        object.__setattr__(self, "chain", chain)

    @cached_property
    def key(self) -> str:
        inner = " ".join(f"<{p.value}>" for p in self.chain)
        return f"SubObjectPropertyOf(ObjectPropertyChain({inner}) <{self.sup.value}>)"


@dataclass(frozen=True)
class InversePropertiesOf(Axiom):
    p: Iri
    q: Iri

    @cached_property
    def key(self) -> str:
        return f"InverseObjectProperties(<{self.p.value}> <{self.q.value}>)"


DECLARATION_KINDS = ("class", "property", "individual")


@dataclass(frozen=True)
class Declaration(Axiom):
    kind: str
    iri: Iri

    def __post_init__(self):
        if self.kind not in DECLARATION_KINDS:
            raise ValueError(f"unknown declaration kind {self.kind!r}")

    @cached_property
    def key(self) -> str:
        # declarations sort before logical axioms
        return f"!Declaration({self.kind} <{self.iri.value}>)"


@dataclass(frozen=True)
class AnnotationAssertion(Axiom):
    property: Iri
    subject: Iri
    target: Iri

    @cached_property
    def key(self) -> str:
        return (f"AnnotationAssertion(<{self.property.value}> "
                f"<{self.subject.value}> <{self.target.value}>)")


def axiom_class_expressions(ax: Axiom) -> tuple:
    if isinstance(ax, SubClassOf):
        return (ax.sub, ax.sup)
    if isinstance(ax, EquivalentClasses):
        return (ax.a, ax.b)
    return ()


# -- ontology ----------------------------------------------------------------

@dataclass(frozen=True)
class Ontology:
    axioms: tuple = ()
    prefixes: Mapping[str, str] = field(default_factory=dict)
    ontology_iri: Iri | None = None

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(self.axioms))
        object.__setattr__(self, "prefixes", dict(self.prefixes))

    def __len__(self) -> int:
        return len(self.axioms)

    def __iter__(self):
        return iter(self.axioms)

    def canonical_axioms(self) -> list:
        """Distinct axioms in canonical (sorted) order."""
        return sorted(set(self.axioms), key=lambda a: a.key)

    def axiom_set(self) -> frozenset:
        return frozenset(self.axioms)

    def structurally_equal(self, other: "Ontology") -> bool:
        return self.axiom_set() == other.axiom_set()

    def classes(self) -> set:
        """Every IRI used in class position or declared as a class."""
        out = set()
        for ax in self.axioms:
            if isinstance(ax, Declaration) and ax.kind == "class":
                out.add(ax.iri)
            for ce in axiom_class_expressions(ax):
                out.update(class_iris(ce))
        out.discard(THING)
        out.discard(NOTHING)
        return out

    def with_axioms(self, axioms: Iterable[Axiom]) -> "Ontology":
        return merge_ontologies([self, Ontology(tuple(axioms))])


def merge_prefixes(maps: Iterable[Mapping[str, str]]) -> dict:
    merged: dict = {}
    for m in maps:
        for p, ns in m.items():
            if p in merged and merged[p] != ns:
                raise PrefixConflictError(
                    f"prefix {p!r} bound to both <{merged[p]}> and <{ns}>")
            merged[p] = ns
    return merged


def merge_ontologies(ontologies: Iterable[Ontology]) -> Ontology:
    """Union of axioms (first occurrence order kept) with reconciled prefixes."""
    ontologies = list(ontologies)
    prefixes = merge_prefixes(o.prefixes for o in ontologies)
    seen = set()
    axioms = []
    for o in ontologies:
        for ax in o.axioms:
            if ax not in seen:
                seen.add(ax)
                axioms.append(ax)
    oid = next((o.ontology_iri for o in ontologies if o.ontology_iri is not None), None)
    return Ontology(tuple(axioms), prefixes, oid)
