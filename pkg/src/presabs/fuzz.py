"""Seeded generators for random ontologies and the engine-vs-oracle harness."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .el import reason
from .model import (
    Bottom, EquivalentClasses, HasValue, Intersection, Iri, Named, Ontology,
    SomeValues, SubClassOf, SubPropertyChainOf, SubPropertyOf,
)
from .oracle import Diff, diff, oracle_classify
from .pipeline import run_pipeline
from .vocabulary import Vocabulary

FUZZ_NS = "http://example.org/fuzz#"
ANATOMY_NS = "http://example.org/anatomy#"


def _cls(i: int, ns: str = FUZZ_NS) -> Named:
    return Named(Iri(f"{ns}C{i}"))


def random_el_ontology(seed: int, max_classes: int = 30, max_axioms: int = 60,
                       v: Vocabulary | None = None) -> Ontology:
    """A random ontology in the EL fragment with chains and hasValue.

    5..max_classes classes, at most three properties drawn from part_of,
    has_part and develops_from, at most max_axioms axioms.
    """
    v = v or Vocabulary.default()
    rng = random.Random(seed)
    n = rng.randint(5, max_classes)
    props = rng.sample([v.part_of, v.has_part, v.develops_from], rng.randint(1, 3))
    classes = [_cls(i) for i in range(n)]

    def atom():
        return rng.choice(classes)

    def filler(depth=0):
        r = rng.random()
        if depth < 1 and r < 0.15:
            return SomeValues(rng.choice(props), atom())
        if depth < 1 and r < 0.3:
            a, b = rng.sample(classes, 2)
            return Intersection((a, b))
        return atom()

    def expr():
        r = rng.random()
        if r < 0.45:
            return atom()
        if r < 0.75:
            return SomeValues(rng.choice(props), filler())
        if r < 0.9:
            a, b = rng.sample(classes, 2)
            ops = [a, b]
            if rng.random() < 0.3:
                ops.append(SomeValues(rng.choice(props), atom()))
            return Intersection(tuple(ops))
        return HasValue(rng.choice(props), atom().iri)

    axioms = []
    for _ in range(rng.randint(1, max_axioms)):
        r = rng.random()
        if r < 0.35:
            axioms.append(SubClassOf(atom(), atom()))
        elif r < 0.7:
            axioms.append(SubClassOf(expr(), expr()))
        elif r < 0.85:
            axioms.append(EquivalentClasses(atom(), expr()))
        elif r < 0.88:
            axioms.append(SubClassOf(expr(), Bottom))
        elif r < 0.94 and len(props) > 1:
            a, b = rng.sample(props, 2)
            axioms.append(SubPropertyOf(a, b))
        else:
            axioms.append(SubPropertyChainOf((rng.choice(props), rng.choice(props)),
                                             rng.choice(props)))
    return Ontology(tuple(axioms), {"": FUZZ_NS}, Iri("http://example.org/fuzz"))


def random_anatomy(seed: int, max_classes: int = 20, v: Vocabulary | None = None) -> Ontology:
    """A random anatomy of the restricted shape.

    Subclass tree under the root plus a few extra subclass edges, with told
    part_of and develops_from existentials. No bottom, no conjunctions.
    """
    v = v or Vocabulary.default()
    rng = random.Random(seed)
    n = rng.randint(3, max_classes)
    root = Named(v.anatomy_root)
    classes = [_cls(i, ANATOMY_NS) for i in range(n)]
    axioms = []
    for i, c in enumerate(classes):
        parent = root if i == 0 or rng.random() < 0.3 else classes[rng.randrange(i)]
        axioms.append(SubClassOf(c, parent))
        if i > 1 and rng.random() < 0.15:
            axioms.append(SubClassOf(c, classes[rng.randrange(i)]))
    for c in classes:
        if rng.random() < 0.35:
            axioms.append(SubClassOf(c, SomeValues(v.part_of, rng.choice(classes))))
        if rng.random() < 0.15:
            axioms.append(SubClassOf(c, SomeValues(v.develops_from, rng.choice(classes))))
    rng.shuffle(axioms)
    return Ontology(tuple(axioms), {"": ANATOMY_NS}, Iri("http://example.org/anatomy"))


def synthetic_anatomy(n: int = 10_000, seed: int = 0, part_of: float = 0.30,
                      develops_from: float = 0.10, v: Vocabulary | None = None) -> Ontology:
    """A large subclass tree with told part_of/develops_from existentials.

    The tree is a random recursive tree, so depth grows like log n.
    Existential targets are picked near the source (a sibling or cousin
    under a nearby ancestor), the way real partonomies are local; uniform
    targets would make every class reach most of the ontology.
    """
    v = v or Vocabulary.default()
    rng = random.Random(seed)
    root = Named(v.anatomy_root)
    classes = [_cls(i, ANATOMY_NS) for i in range(n)]
    parent = [-1] * n
    children: list = [[] for _ in range(n)]
    axioms = []
    for i in range(n):
        if i == 0:
            axioms.append(SubClassOf(classes[0], root))
            continue
        p = rng.randrange(i)  # random recursive tree, depth ~ log n
        parent[i] = p
        children[p].append(i)
        axioms.append(SubClassOf(classes[i], classes[p]))

    def nearby(i):
        a = i
        for _ in range(rng.randint(1, 2)):
            if parent[a] >= 0:
                a = parent[a]
        kids = children[a]
        t = rng.choice(kids) if kids else a
        return t if t != i else a

    for i in range(1, n):
        r = rng.random()
        if r < part_of:
            axioms.append(SubClassOf(classes[i], SomeValues(v.part_of, classes[nearby(i)])))
        elif r < part_of + develops_from:
            axioms.append(SubClassOf(classes[i],
                                     SomeValues(v.develops_from, classes[nearby(i)])))
    return Ontology(tuple(axioms), {"": ANATOMY_NS}, Iri("http://example.org/anatomy"))


def check_classify(o: Ontology) -> Diff:
    """Engine named-class subsumptions against the brute-force closure."""
    return diff(reason(o).subsumptions.named_pairs(), oracle_classify(o).pairs)


@dataclass
class InversionCheck:
    diff: Diff
    single_vs_fixpoint: Diff


def check_inversion(anatomy: Ontology, v: Vocabulary | None = None,
                    fixpoint: bool = False) -> InversionCheck:
    """Compare the pipeline's negated-name hierarchy with the oracle's inversion.

    Looks only at pairs among not_has_part and absent names. The single-pass
    result is compared unless ``fixpoint`` is set; either way the check also
    reports whether the two modes disagree.
    """
    v = v or Vocabulary.default()
    single = run_pipeline(anatomy, v=v)
    fix = run_pipeline(anatomy, v=v, fixpoint=True)
    names = single.names
    keep = set(names.not_has_part.values()) | set(names.absent.values())
    oracle = oracle_classify(single.step4_ontology, v).restrict(keep)

    def restricted(result):
        return {(a, b) for a, b in result.final.subsumptions.named_pairs()
                if a in keep and b in keep}

    one, many = restricted(single), restricted(fix)
    return InversionCheck(diff(many if fixpoint else one, oracle.pairs), diff(one, many))
