import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmokb.errors import MalformedTermError, MalformedTripleError, UnknownPrefixError
from cmokb.model import Blank, Graph, Iri, Literal, PrefixMap, Triple
from cmokb.namespaces import CMO, RDF_TYPE, XSD_STRING
from cmokb.schema import PROFIL_APPRENANT, POSSEDE_COMPETENCE

from oracles import random_graph, scan_match


def test_iri_rejects_empty_and_whitespace():
    with pytest.raises(MalformedTermError):
        Iri("")
    with pytest.raises(MalformedTermError):
        Iri("http://example.org/a b")


def test_literal_defaults_to_string_datatype():
    assert Literal("x").datatype == XSD_STRING
    assert Literal("x", "").datatype == XSD_STRING


def test_terms_compare_by_lexical_identity():
    assert Literal("01") != Literal("1")
    assert Literal("a") != Literal("a", "urn:other")
    assert Iri("urn:a") == Iri("urn:a")
    assert Iri("urn:a") != Literal("urn:a")


def test_triple_rejects_literal_subject_and_non_iri_predicate():
    with pytest.raises(MalformedTripleError):
        Triple(Literal("x"), Iri("urn:p"), Iri("urn:o"))
    with pytest.raises(MalformedTripleError):
        Triple(Iri("urn:s"), Literal("p"), Iri("urn:o"))
    with pytest.raises(MalformedTripleError):
        Triple(Iri("urn:s"), Blank("b"), Iri("urn:o"))
    Triple(Blank("b"), Iri("urn:p"), Literal("ok"))  # blanks may be subjects


def test_insert_same_triple_twice_grows_once():
    t = Triple(Iri("urn:s"), Iri("urn:p"), Iri("urn:o"))
    g = Graph().add(t).add(t)
    assert len(g) == 1


def test_singleton_insert():
    t = Triple(Iri(CMO + "LouisLe"), Iri(CMO + "possedeCompetence"), Iri(CMO + "Python01"))
    g = Graph().add(t)
    assert len(g) == 1
    assert t in g


def test_fixture_has_four_learner_profiles(case_study):
    subjects = case_study.subjects(Iri(RDF_TYPE), PROFIL_APPRENANT)
    locals_ = sorted(s.value.rsplit("#", 1)[1] for s in subjects)
    assert locals_ == ["HenriLe", "LouisLe", "Marc", "Sophie"]


def test_match_single_possession_of_louis(case_study):
    louis = Iri(CMO + "LouisLe")
    matches = case_study.match(louis, POSSEDE_COMPETENCE, None)
    assert [t.object for t in matches] == [Iri(CMO + "Python01_LouisLe")]


def test_match_on_empty_graph_is_empty():
    assert Graph().match(None, None, None) == []


def test_match_full_wildcard_has_graph_cardinality(case_study):
    assert len(case_study.match(None, None, None)) == len(case_study)


def test_match_equals_linear_scan_on_random_graphs():
    rng = random.Random(4321)
    for _ in range(1000):
        g = random_graph(rng, max_triples=30)
        triples = list(g.triples)
        pool = [None] + [t.subject for t in triples[:3]]
        ppool = [None] + [t.predicate for t in triples[:3]]
        opool = [None] + [t.object for t in triples[:3]]
        s, p, o = rng.choice(pool or [None]), rng.choice(ppool or [None]), rng.choice(opool or [None])
        assert g.match(s, p, o) == scan_match(triples, s, p, o)


def test_index_agreement(case_study):
    via_spo = {(s, p, o) for s, ps in case_study._spo.items() for p, os_ in ps.items() for o in os_}
    via_pos = {(s, p, o) for p, os_ in case_study._pos.items() for o, ss in os_.items() for s in ss}
    via_osp = {(s, p, o) for o, ss in case_study._osp.items() for s, ps in ss.items() for p in ps}
    expected = {(t.subject, t.predicate, t.object) for t in case_study.triples}
    assert via_spo == via_pos == via_osp == expected


def test_insert_remove_round_trip():
    rng = random.Random(99)
    g = random_graph(rng, 20)
    extra = Triple(Iri("urn:new"), Iri("urn:p0"), Literal("fresh"))
    assert extra not in g
    assert g.add(extra).remove(extra) == g
    # removing an existing triple and re-adding it also restores the set
    if len(g):
        t = next(iter(g))
        assert g.remove(t).add(t) == g


def test_graph_iteration_is_sorted_and_deterministic():
    rng = random.Random(7)
    g = random_graph(rng, 25)
    listed = list(g)
    assert listed == sorted(listed, key=lambda t: (t.subject.n3(), t.predicate.n3(), t.object.n3()))
    assert listed == list(Graph(reversed(listed)))


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=10_000))
def test_union_is_idempotent_and_monotone(seed):
    rng = random.Random(seed)
    a, b = random_graph(rng, 10), random_graph(rng, 10)
    u = a.union(b)
    assert a.triples <= u.triples and b.triples <= u.triples
    assert u.union(b) == u


def test_prefix_expand():
    pm = PrefixMap({"cmo": CMO})
    assert pm.expand("cmo:M1405") == Iri(CMO + "M1405")
    assert pm.expand("cmo:") == Iri(CMO)
    with pytest.raises(UnknownPrefixError):
        pm.expand("xyz:foo")


def test_prefix_rebind_replaces():
    pm = PrefixMap({"cmo": CMO})
    pm.bind("cmo", "urn:elsewhere#")
    assert pm.expand("cmo:x") == Iri("urn:elsewhere#x")


def test_prefix_compact_round_trip():
    pm = PrefixMap.default()
    assert pm.compact(CMO + "M1405") == "cmo:M1405"
    assert pm.compact("urn:nothing") is None
    # locals that would not re-parse are left uncompacted
    assert pm.compact(CMO + "a/b") is None
