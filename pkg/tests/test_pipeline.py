import pytest
from hypothesis import given, settings, strategies as st

from conftest import d
from presabs.el import classify, normalize, reason
from presabs.eq import EqAnnotation, translate_eq
from presabs.fuzz import check_inversion, random_anatomy
from presabs.model import (
    AnnotationAssertion, EquivalentClasses, HasValue, Intersection, Iri, Named, Ontology,
    SomeValues, SubClassOf,
)
from presabs.oracle import oracle_classify
from presabs.pipeline import (
    GeneratedNames, RootNotFoundError, anatomy_classes, generate_absence_axioms,
    invert_negation_hierarchy, run_pipeline,
)
from presabs.vocabulary import Vocabulary

V = Vocabulary.default()
SEVEN = ["fin", "dorsal_fin", "pectoral_fin", "limb", "forelimb", "humerus", "limb_bud"]


def small_demo():
    root = Named(V.anatomy_root)
    axs = [SubClassOf(Named(d(x)), root) for x in ("fin", "limb", "limb_bud", "humerus")]
    axs += [SubClassOf(Named(d("dorsal_fin")), Named(d("fin"))),
            SubClassOf(Named(d("pectoral_fin")), Named(d("fin"))),
            SubClassOf(Named(d("forelimb")), Named(d("limb"))),
            SubClassOf(Named(d("limb")), SomeValues(V.develops_from, Named(d("limb_bud")))),
            SubClassOf(Named(d("humerus")), SomeValues(V.part_of, Named(d("forelimb")))),
            SubClassOf(Named(d("unrelated")), Named(d("other")))]
    return Ontology(tuple(axs))


def test_anatomy_classes_seven():
    o = small_demo()
    assert anatomy_classes(o, V, include_root=False) == {d(x) for x in SEVEN}
    assert anatomy_classes(o, V) == {d(x) for x in SEVEN} | {V.anatomy_root}


def test_anatomy_classes_missing_root():
    with pytest.raises(RootNotFoundError):
        anatomy_classes(Ontology((SubClassOf(Named(d("a")), Named(d("b"))),)), V)


def test_anatomy_classes_lonely_root():
    o = Ontology((SubClassOf(Named(V.anatomy_root), Named(d("thing"))),))
    assert anatomy_classes(o, V) == {V.anatomy_root}


def test_generate_for_dorsal_fin():
    axs, names = generate_absence_axioms({d("dorsal_fin")}, V)
    e = d("dorsal_fin")
    absent, hp, nhp = names.absent[e], names.has_part[e], names.not_has_part[e]
    assert absent.value.endswith("#absent+dorsal_fin")
    assert hp.value.endswith("#has_part+dorsal_fin")
    assert nhp.value.endswith("#not_has_part+dorsal_fin")
    assert axs == [
        EquivalentClasses(Named(absent), Intersection((Named(V.lacks_all_parts_of_type),
                                                       HasValue(V.towards, e)))),
        EquivalentClasses(Named(absent), SomeValues(V.inheres_in, Named(nhp))),
        EquivalentClasses(Named(hp), SomeValues(V.has_part, Named(e))),
        AnnotationAssertion(V.negates, nhp, hp),
        SubClassOf(SomeValues(V.has_part, SomeValues(V.part_of, Named(e))), Named(hp)),
    ]


def test_generate_seven_and_normalizable():
    axs, names = generate_absence_axioms({d(x) for x in SEVEN}, V)
    assert len(axs) == 35
    assert len(set(names.negates)) == 7 and len(set(names.negates.values())) == 7
    normalize(Ontology(tuple(axs)))  # must not raise


def test_generated_names_distinct():
    names = GeneratedNames.for_entities([d(x) for x in SEVEN], "http://g")
    minted = [t[e] for e in names.entities
              for t in (names.absent, names.has_part, names.not_has_part)]
    assert len(set(minted)) == len(minted)


def test_invert_single_edge():
    names = GeneratedNames.for_entities([d("fin"), d("dorsal_fin")], "http://g")
    o = Ontology((SubClassOf(Named(names.has_part[d("dorsal_fin")]),
                             Named(names.has_part[d("fin")])),
                  SubClassOf(Named(names.not_has_part[d("fin")]), Named(d("x")))))
    out = invert_negation_hierarchy(classify(o), names)
    assert out == [SubClassOf(Named(names.not_has_part[d("fin")]),
                              Named(names.not_has_part[d("dorsal_fin")]))]


def test_invert_no_neighbours():
    names = GeneratedNames.for_entities([d("fin"), d("limb")], "http://g")
    o = Ontology(tuple(SubClassOf(Named(names.has_part[e]), Named(d("x"))) for e in names.entities))
    assert invert_negation_hierarchy(classify(o), names) == []


def test_demo_inversion_matches_oracle(demo):
    r = run_pipeline(demo)
    keep = set(r.names.not_has_part.values())
    oracle = oracle_classify(r.step4_ontology).restrict(keep)
    mine = {(a, b) for a, b in r.final.subsumptions.named_pairs() if a in keep and b in keep}
    assert mine == set(oracle.pairs)
    assert r.report.inversion_passes == 1


@pytest.fixture(scope="module")
def demo_run(demo):
    return run_pipeline(demo)


def test_demo_absence_entailments(demo_run):
    h, a = demo_run.hierarchy, demo_run.names.absent
    assert h.is_subclass(a[d("limb_bud")], a[d("limb")])
    assert h.is_subclass(a[d("forelimb")], a[d("humerus")])
    assert h.is_subclass(a[d("fin")], a[d("dorsal_fin")])
    assert h.is_subclass(a[d("fin")], a[d("pectoral_fin")])
    assert not h.is_subclass(a[d("dorsal_fin")], a[d("fin")])


def test_demo_generated_base(demo_run):
    assert demo_run.names.absent[d("fin")] == Iri("http://purl.org/phenoscape/demo#absent+fin")


def test_report(demo_run):
    rep = demo_run.report
    assert rep.entity_count == 17
    assert rep.subsumptions_step6 >= rep.subsumptions_step4
    assert any("inverse" in w for w in rep.warnings)
    g = rep.as_dict()["generated_axioms"]
    assert g["step1_absence_classes"] + g["step2_has_part_classes"] + g["step3_negates"] \
        + g["part_of_workaround"] == 5 * rep.entity_count


def test_fixpoint_equals_single_on_demo(demo, demo_run):
    assert run_pipeline(demo, fixpoint=True).hierarchy == demo_run.hierarchy


def test_idempotence_on_demo(demo_run):
    again = run_pipeline(demo_run.ontology)
    assert again.hierarchy == demo_run.hierarchy


def test_step6_keeps_step4(demo_run):
    assert demo_run.step4.subsumptions.named_pairs() <= demo_run.final.subsumptions.named_pairs()


def test_unsatisfiable_reported():
    root = Named(V.anatomy_root)
    from presabs.model import Bottom
    o = Ontology((SubClassOf(Named(d("a")), root), SubClassOf(Named(d("a")), Bottom),
                  SubClassOf(Named(d("b")), root)))
    r = run_pipeline(o)
    assert d("a") in r.report.unsatisfiable
    assert any("unsatisfiable" in w for w in r.report.warnings)


# -- properties over random anatomies ---------------------------------------

def _run(seed):
    return run_pipeline(random_anatomy(seed, max_classes=12))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_antitone_inversion(seed):
    r = _run(seed)
    h, n = r.hierarchy, r.names
    for e1 in n.entities:
        for e2 in n.entities:
            pos = h.is_subclass(n.has_part[e1], n.has_part[e2])
            neg = h.is_subclass(n.not_has_part[e2], n.not_has_part[e1])
            assert pos == neg


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_told_edge_duality(seed):
    anatomy = random_anatomy(seed, max_classes=12)
    ents = anatomy_classes(anatomy, V)
    phen = {e: translate_eq(EqAnnotation(e, Iri("http://x#round")), V) for e in ents}
    r = run_pipeline(anatomy, [p.axiom() for p in phen.values()])
    h, n = r.hierarchy, r.names
    for ax in anatomy.axioms:
        if isinstance(ax.sup, SomeValues) and ax.sub.iri in ents and ax.sup.filler.iri in ents:
            e, target = ax.sub.iri, ax.sup.filler.iri
            # presence flows from a part (or child) to its whole (or precursor);
            # absence flows the other way
            assert h.is_subclass(phen[e].iri, n.presence[target])
            assert h.is_subclass(n.absent[target], n.absent[e])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 100_000))
def test_idempotence_property(seed):
    r = _run(seed)
    assert run_pipeline(r.ontology).hierarchy == r.hierarchy


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_no_cross_talk(seed):
    r = _run(seed)
    h, n = r.hierarchy, r.names
    for e in n.entities:
        if h.is_unsatisfiable(e):
            continue
        assert not h.is_subclass(n.absent[e], n.presence[e])
        assert not h.is_subclass(n.presence[e], n.absent[e])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_step6_monotone(seed):
    r = _run(seed)
    assert r.step4.subsumptions.named_pairs() <= r.final.subsumptions.named_pairs()
    assert r.report.subsumptions_step6 >= r.report.subsumptions_step4


@pytest.mark.parametrize("seed", range(0, 100, 10))
def test_inversion_oracle_sample(seed):
    c = check_inversion(random_anatomy(seed))
    assert c.diff.empty
    assert c.single_vs_fixpoint.empty
