"""Presence/absence scaffolding and the EL-compatible absence workflow.

The workflow, in order:

1. name the absence class of every anatomical entity E (two definitions:
   ``lacks_all_parts_of_type and towards value E`` and
   ``inheres_in some not_has_part(E)``);
2. name ``has_part some E`` and its complement ``not_has_part(E)``;
3. pair the two with a ``negates`` annotation;
4. classify with the EL engine (which cannot see negation);
5. invert the positive hierarchy onto the negated names;
6. classify again, now with the inverted edges as told axioms.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .el import Classification, ClassHierarchy, reason
from .eq import NameCollisionError, core_property_axioms, mint, presence_query_classes
from .model import (
    NOTHING, THING, AnnotationAssertion, Complement, EquivalentClasses, Iri,
    Named, Ontology, OntologyError, SomeValues, SubClassOf, HasValue,
    Intersection, merge_ontologies,
)
from .vocabulary import DEFAULT_GENERATED_BASE, Vocabulary

log = logging.getLogger(__name__)


class RootNotFoundError(OntologyError):
    pass


@dataclass(frozen=True)
class GeneratedNames:
    base: str
    absent: Mapping[Iri, Iri]
    has_part: Mapping[Iri, Iri]
    not_has_part: Mapping[Iri, Iri]
    presence: Mapping[Iri, Iri]

    @classmethod
    def for_entities(cls, entities: Iterable[Iri], base: str) -> "GeneratedNames":
        entities = sorted(set(entities))
        tables = {k: {} for k in ("absent", "has_part", "not_has_part", "presence")}
        owner: dict = {}
        for e in entities:
            for kind, table in tables.items():
                iri = mint(base, kind, e)
                if iri in owner:
                    raise NameCollisionError(
                        f"<{owner[iri]}> and <{e}> both mint <{iri}>")
                owner[iri] = e
                table[e] = iri
        return cls(base, **tables)

    @property
    def entities(self) -> list:
        return sorted(self.absent)

    @property
    def negates(self) -> dict:
        """not_has_part(E) -> has_part(E)"""
        return {self.not_has_part[e]: self.has_part[e] for e in self.absent}


@dataclass
class PipelineReport:
    entity_count: int = 0
    generated: dict = field(default_factory=dict)
    subsumptions_step4: int = 0
    subsumptions_step6: int = 0
    inversion_passes: int = 0
    unsatisfiable: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "entity_count": self.entity_count,
            "generated_axioms": dict(self.generated),
            "subsumptions_step4": self.subsumptions_step4,
            "subsumptions_step6": self.subsumptions_step6,
            "inversion_passes": self.inversion_passes,
            "unsatisfiable": [str(i) for i in self.unsatisfiable],
            "warnings": list(self.warnings),
        }


@dataclass
class PipelineResult:
    ontology: Ontology
    hierarchy: ClassHierarchy
    report: PipelineReport
    names: GeneratedNames
    inverted: list
    step4_ontology: Ontology
    step4: Classification
    final: Classification


def anatomy_classes(o: Ontology, v: Vocabulary, include_root: bool = True,
                    hierarchy: ClassHierarchy | None = None) -> set:
    """Named classes under the anatomy root, per a preliminary classification."""
    if v.anatomy_root not in o.classes():
        raise RootNotFoundError(f"anatomy root <{v.anatomy_root}> does not occur in the ontology")
    h = hierarchy if hierarchy is not None else reason(o).hierarchy
    root = v.anatomy_root
    out = {c for c in o.classes() if c in h and h.is_subclass(c, root)}
    if not include_root:
        out.discard(root)
    return out


def generate_absence_axioms(entities: Iterable[Iri], v: Vocabulary,
                            base: str = DEFAULT_GENERATED_BASE) -> tuple:
    """Five axioms per entity; returns ``(axioms, names)``."""
    names = GeneratedNames.for_entities(entities, base)
    out = []
    for e in names.entities:
        absent = Named(names.absent[e])
        hp = Named(names.has_part[e])
        nhp = names.not_has_part[e]
        out.append(EquivalentClasses(absent, Intersection((
            Named(v.lacks_all_parts_of_type), HasValue(v.towards, e)))))
        out.append(EquivalentClasses(absent, SomeValues(v.inheres_in, Named(nhp))))
        out.append(EquivalentClasses(hp, SomeValues(v.has_part, Named(e))))
        out.append(AnnotationAssertion(v.negates, nhp, hp.iri))
        out.append(SubClassOf(SomeValues(v.has_part, SomeValues(v.part_of, Named(e))), hp))
    return out, names


def complement_axioms(names: GeneratedNames, v: Vocabulary) -> list:
    """The true DL reading of the generated names, for export to a DL reasoner only."""
    out = []
    for e in names.entities:
        out.append(EquivalentClasses(Named(names.not_has_part[e]),
                                     Complement(Named(names.has_part[e]))))
        out.append(EquivalentClasses(Named(names.absent[e]), SomeValues(
            v.inheres_in, Complement(SomeValues(v.has_part, Named(e))))))
    return out


def negates_pairs(o: Ontology, v: Vocabulary) -> dict:
    return {ax.subject: ax.target for ax in o.axioms
            if isinstance(ax, AnnotationAssertion) and ax.property == v.negates}


def invert_negation_hierarchy(h: ClassHierarchy, names) -> list:
    """Copy the positive hierarchy onto the negated names, upside down.

    ``names`` is a GeneratedNames or a mapping ``negated -> positive``.
    For ``A negates B``: each direct superclass C of B (with counterpart C')
    yields ``C' ⊑ A``; each direct subclass D (with counterpart D') yields
    ``A ⊑ D'``. Equivalents of B are made equivalent on the negated side.
    """
    pairs = names.negates if isinstance(names, GeneratedNames) else dict(names)
    counter = {b: a for a, b in pairs.items()}
    out = set()

    def counterparts(rep):
        if rep in (THING, NOTHING):
            return []
        return [counter[m] for m in h.equivalents(rep) if m in counter]

    for a, b in pairs.items():
        if b not in h or h.is_unsatisfiable(b):
            continue
        for b2 in h.equivalents(b):
            a2 = counter.get(b2)
            if a2 is not None and a2 != a:
                out.add(SubClassOf(Named(a), Named(a2)))
        for c in h.direct_superclasses(b):
            for c2 in counterparts(c):
                out.add(SubClassOf(Named(c2), Named(a)))
        for d in h.direct_subclasses(b):
            for d2 in counterparts(d):
                out.add(SubClassOf(Named(a), Named(d2)))
    return sorted(out, key=lambda ax: ax.key)


def _generated_prefixes(anatomy: Ontology, base: str) -> dict:
    ns = base + "#"
    if ns in anatomy.prefixes.values():
        return {}
    if "gen" in anatomy.prefixes:
        return {}
    return {"gen": ns}


def run_pipeline(anatomy: Ontology, phenotypes: Iterable = (), v: Vocabulary | None = None,
                 fixpoint: bool = False, base: str | None = None,
                 include_root: bool = True) -> PipelineResult:
    v = v or Vocabulary.default()
    if base is None:
        base = anatomy.ontology_iri.value if anatomy.ontology_iri else DEFAULT_GENERATED_BASE
    report = PipelineReport()
    t0 = time.perf_counter()

    prelim = reason(anatomy)
    report.warnings.extend(prelim.normalized.warnings)
    entities = anatomy_classes(anatomy, v, include_root, prelim.hierarchy)
    report.entity_count = len(entities)

    generated, names = generate_absence_axioms(entities, v, base)
    core = core_property_axioms(v)
    presence = presence_query_classes(entities, v, base)
    n = len(entities)
    report.generated = {
        "step1_absence_classes": 2 * n,
        "step2_has_part_classes": n,
        "step3_negates": n,
        "part_of_workaround": n,
        "core_property_axioms": len(core),
        "presence_query_classes": len(presence),
    }
    step4_ontology = merge_ontologies([
        anatomy,
        Ontology(tuple(phenotypes)),
        Ontology(tuple(generated) + tuple(core) + tuple(presence),
                 _generated_prefixes(anatomy, base)),
    ])
    pairs = negates_pairs(step4_ontology, v)
    log.info("generated %d axioms for %d entities (%.2fs)", len(generated), n,
             time.perf_counter() - t0)

    step4 = reason(step4_ontology)
    report.subsumptions_step4 = step4.subsumptions.count()
    report.unsatisfiable = sorted(m for m in step4.hierarchy.groups[NOTHING] if m != NOTHING)
    for b in sorted(set(pairs.values())):
        if b in step4.hierarchy and step4.hierarchy.is_unsatisfiable(b):
            report.warnings.append(f"{b} is unsatisfiable; its negation was not inverted")
    log.info("step 4 classified (%.2fs)", time.perf_counter() - t0)

    inverted = set(invert_negation_hierarchy(step4.hierarchy, pairs))
    report.inversion_passes = 1
    final_ontology = step4_ontology.with_axioms(sorted(inverted, key=lambda a: a.key))
    final = reason(final_ontology)
    while fixpoint:
        more = set(invert_negation_hierarchy(final.hierarchy, pairs)) - inverted
        if not more:
            break
        inverted |= more
        report.inversion_passes += 1
        final_ontology = step4_ontology.with_axioms(sorted(inverted, key=lambda a: a.key))
        final = reason(final_ontology)
    report.generated["step5_inverted"] = len(inverted)
    report.subsumptions_step6 = final.subsumptions.count()
    log.info("step 6 classified (%.2fs)", time.perf_counter() - t0)

    return PipelineResult(
        ontology=final_ontology,
        hierarchy=final.hierarchy,
        report=report,
        names=names,
        inverted=sorted(inverted, key=lambda a: a.key),
        step4_ontology=step4_ontology,
        step4=step4,
        final=final,
    )
