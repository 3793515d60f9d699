"""Entity-Quality phenotype annotations rendered as OWL class expressions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .model import (
    EquivalentClasses, HasValue, Intersection, Iri, Named, SomeValues,
    SubPropertyChainOf, SubPropertyOf,
)
from .vocabulary import DEFAULT_GENERATED_BASE, Vocabulary


class AnnotationError(ValueError):
    pass


class NameCollisionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class EqAnnotation:
    entity: Iri
    quality: Iri
    related_entity: Iri | None = None


@dataclass(frozen=True)
class PhenotypeClass:
    iri: Iri
    expression: object
    kind: str  # "ordinary" | "absence"

    def axiom(self) -> EquivalentClasses:
        return EquivalentClasses(Named(self.iri), self.expression)


def mint(base: str, kind: str, *iris: Iri) -> Iri:
    """``<base>#<kind>+<local>[+<local>...]``"""
    return Iri(f"{base}#{kind}+" + "+".join(i.local_name for i in iris))


def translate_eq(a: EqAnnotation, v: Vocabulary, *, base: str = DEFAULT_GENERATED_BASE,
                 body: Iri | None = None) -> PhenotypeClass:
    """Build the phenotype class for one annotation.

    Absence annotations become ``lacks_all_parts_of_type and towards value E``
    (punning E as an individual); with ``body`` set, an ``inheres_in some body``
    conjunct is added as well.
    """
    if a.quality == v.quality_absent:
        if a.related_entity is not None:
            raise AnnotationError(
                f"absence of <{a.entity}> with related entity <{a.related_entity}> "
                "has no defined encoding")
        ops = [Named(v.lacks_all_parts_of_type), HasValue(v.towards, a.entity)]
        if body is not None:
            ops.append(SomeValues(v.inheres_in, Named(body)))
        return PhenotypeClass(mint(base, "phenotype", a.quality, a.entity),
                              Intersection(tuple(ops)), "absence")
    ops = [Named(a.quality), SomeValues(v.inheres_in, Named(a.entity))]
    names = [a.quality, a.entity]
    if a.related_entity is not None:
        ops.append(SomeValues(v.towards, Named(a.related_entity)))
        names.append(a.related_entity)
    return PhenotypeClass(mint(base, "phenotype", *names), Intersection(tuple(ops)), "ordinary")


def translate_all(annotations: Iterable[EqAnnotation], v: Vocabulary, **kw) -> dict:
    """Translate distinct annotations; two annotations minting one IRI is fatal."""
    out: dict = {}
    by_iri: dict = {}
    for a in sorted(set(annotations)):
        pc = translate_eq(a, v, **kw)
        other = by_iri.get(pc.iri)
        if other is not None and other != a:
            raise NameCollisionError(f"annotations {other} and {a} both mint <{pc.iri}>")
        by_iri[pc.iri] = a
        out[a] = pc
    return out


def core_property_axioms(v: Vocabulary) -> list:
    ipo = v.implies_presence_of
    return [
        SubPropertyOf(v.inheres_in, ipo),
        SubPropertyOf(v.towards, ipo),
        SubPropertyChainOf((ipo, v.part_of), ipo),
        SubPropertyChainOf((ipo, v.has_part), ipo),
        SubPropertyChainOf((ipo, v.develops_from), ipo),
        SubPropertyChainOf((v.has_part, v.develops_from), v.has_part),
    ]


def presence_class(entity: Iri, base: str = DEFAULT_GENERATED_BASE) -> Iri:
    return mint(base, "presence", entity)


def presence_query_classes(entities: Iterable[Iri], v: Vocabulary,
                           base: str = DEFAULT_GENERATED_BASE) -> list:
    return [EquivalentClasses(Named(presence_class(e, base)),
                              SomeValues(v.implies_presence_of, Named(e)))
            for e in sorted(set(entities))]
