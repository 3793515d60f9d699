import pytest
from hypothesis import given, settings, strategies as st

from presabs.model import (
    THING, Bottom, Declaration, EquivalentClasses, HasValue, Intersection, Iri,
    Named, Ontology, PrefixConflictError, SomeValues, SubClassOf, SubPropertyChainOf,
    Top, merge_ontologies,
)
from presabs.syntax import parse_ontology, serialize_ontology

NS = "http://example.org/t#"
A, B, C = (Named(Iri(NS + x)) for x in "ABC")
R = Iri(NS + "r")


def test_iri_basics():
    i = Iri(NS + "dorsal_fin")
    assert i == Iri(NS + "dorsal_fin")
    assert i.local_name == "dorsal_fin"
    assert i.split() == (NS, "dorsal_fin")
    with pytest.raises(ValueError):
        Iri("")


def test_intersection_needs_two_operands():
    with pytest.raises(ValueError):
        Intersection((A,))


def test_intersection_order_is_canonical():
    x = Intersection((A, B, C))
    y = Intersection((C, A, B))
    assert x == y and x.key == y.key
    o1 = Ontology((SubClassOf(x, A),), {"": NS})
    o2 = Ontology((SubClassOf(y, A),), {"": NS})
    assert serialize_ontology(o1) == serialize_ontology(o2)


def test_equivalence_operands_unordered():
    assert EquivalentClasses(A, B) == EquivalentClasses(B, A)


def test_chain_length_enforced():
    with pytest.raises(ValueError):
        SubPropertyChainOf((R, R, R), R)


def test_declaration_kind_checked():
    with pytest.raises(ValueError):
        Declaration("datatype", R)


def test_merge_identity_and_idempotence():
    o = Ontology((SubClassOf(A, B), SubClassOf(B, C)), {"": NS}, Iri(NS[:-1]))
    assert merge_ontologies([o, Ontology(())]).structurally_equal(o)
    assert merge_ontologies([o, o]).structurally_equal(o)
    assert len(merge_ontologies([o, o]).axioms) == 2


def test_merge_prefix_conflict():
    with pytest.raises(PrefixConflictError):
        merge_ontologies([Ontology((), {"x": NS}), Ontology((), {"x": "http://other/#"})])


def test_classes_include_nested_and_thing():
    o = Ontology((SubClassOf(A, SomeValues(R, Intersection((B, C)))),))
    assert o.classes() >= {A.iri, B.iri, C.iri}
    assert THING not in {A.iri}


# -- property tests ----------------------------------------------------------

names = st.sampled_from([Named(Iri(NS + f"C{i}")) for i in range(6)])
props = st.sampled_from([Iri(NS + p) for p in ("p", "q", "part_of")])


def _expr():
    leaves = names | st.just(Top) | st.just(Bottom) | st.builds(
        HasValue, props, st.sampled_from([Iri(NS + f"C{i}") for i in range(6)]))
    return st.recursive(
        leaves,
        lambda inner: st.builds(SomeValues, props, inner)
        | st.lists(inner, min_size=2, max_size=3).map(lambda xs: Intersection(tuple(xs))),
        max_leaves=6)


axioms = st.one_of(
    st.builds(SubClassOf, _expr(), _expr()),
    st.builds(EquivalentClasses, _expr(), _expr()),
    st.builds(lambda a, b, c: SubPropertyChainOf((a, b), c), props, props, props),
)


@settings(max_examples=150, deadline=None)
@given(st.lists(axioms, max_size=8))
def test_roundtrip_property(axs):
    o = Ontology(tuple(axs), {"": NS}, Iri("http://example.org/t"))
    again = parse_ontology(serialize_ontology(o))
    assert again.structurally_equal(o)
    assert serialize_ontology(again) == serialize_ontology(o)


@settings(max_examples=100, deadline=None)
@given(st.lists(names, min_size=2, max_size=5, unique=True), st.randoms())
def test_intersection_permutation_property(ops, rnd):
    shuffled = list(ops)
    rnd.shuffle(shuffled)
    assert Intersection(tuple(ops)) == Intersection(tuple(shuffled))
