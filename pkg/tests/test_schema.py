import random
from itertools import product

import pytest

from cmokb.errors import SubCompetenceCycleError, UnknownLevelError
from cmokb.model import Graph, Iri, Literal, Triple
from cmokb.namespaces import CMO, RDF_TYPE, RDF_W3C, XSD_INTEGER
from cmokb.schema import (
    A_SCORE,
    A_SCORE_MAX,
    A_SOUS_COMPETENCE,
    CMO_VOCABULARY,
    COMPETENCE,
    COMPETENCE_TECHNIQUE,
    DEFAULT_LEVEL_SCALE,
    ENTITE_TEMPORELLE,
    FORMATION,
    NIVEAU_COMPETENCE,
    subcompetence_closure,
    validate_graph,
    vocabulary_graph,
)

from oracles import bfs_reachable


def c(local: str) -> Iri:
    return Iri(CMO + local)


RDF_TYPE_IRI = Iri(RDF_TYPE)


def test_every_property_has_domain_and_range():
    for spec in CMO_VOCABULARY.properties.values():
        assert spec.domain in CMO_VOCABULARY.classes
        if not spec.literal_range:
            assert spec.range in CMO_VOCABULARY.classes


def test_subclass_relation_is_acyclic():
    for cls in CMO_VOCABULARY.classes:
        supers = CMO_VOCABULARY.superclasses(cls)
        for parent in supers - {cls}:
            assert cls not in CMO_VOCABULARY.superclasses(parent) - {parent}


def test_temporal_entities_cover_training_certification_experience():
    for cls in ("Formation", "Certification", "ExperienceProfessionnelle"):
        assert CMO_VOCABULARY.is_subclass_of(c(cls), ENTITE_TEMPORELLE)


def test_fixture_is_schema_valid(case_study):
    report = validate_graph(case_study)
    assert report.errors == ()
    assert report.is_valid


def test_score_exceeding_max_is_an_error():
    x = c("X")
    g = Graph([
        Triple(x, rdf_type(), NIVEAU_COMPETENCE),
        Triple(x, A_SCORE, Literal("7", XSD_INTEGER)),
        Triple(x, A_SCORE_MAX, Literal("5", XSD_INTEGER)),
    ])
    report = validate_graph(g)
    assert any(issue.code == "score-exceeds-max" for issue in report.errors)


def rdf_type():
    return RDF_TYPE_IRI


def test_two_cycle_in_subcompetence_is_an_error():
    a, b = c("A"), c("B")
    g = Graph([
        Triple(a, rdf_type(), COMPETENCE),
        Triple(b, rdf_type(), COMPETENCE),
        Triple(a, A_SOUS_COMPETENCE, b),
        Triple(b, A_SOUS_COMPETENCE, a),
    ])
    report = validate_graph(g)
    assert any(issue.code == "cyclic-subcompetence" for issue in report.errors)


def test_domain_violation_reported():
    # an organisation does not possess competencies
    org = c("SomeOrg")
    g = Graph([
        Triple(org, rdf_type(), c("Organisation")),
        Triple(org, c("possedeCompetence"), c("Python01")),
    ])
    report = validate_graph(g)
    assert any(issue.code == "domain-violation" for issue in report.errors)


def test_date_order_violation_reported():
    f = c("F")
    g = Graph([
        Triple(f, rdf_type(), FORMATION),
        Triple(f, c("aDateDebut"), Literal("2025-06-01", CMO_VOCABULARY.properties[c("aDateDebut")].range)),
        Triple(f, c("aDateFin"), Literal("2025-01-01", CMO_VOCABULARY.properties[c("aDateFin")].range)),
    ])
    report = validate_graph(g)
    assert any(issue.code == "date-order" for issue in report.errors)


def test_unknown_cmo_predicate_is_warning_not_error():
    g = Graph([Triple(c("X"), c("proprieteInconnue"), c("Y"))])
    report = validate_graph(g)
    assert report.errors == ()
    assert any(issue.code == "unknown-property" for issue in report.warnings)


def test_w3c_type_spelling_is_flagged():
    g = Graph([Triple(c("X"), Iri(RDF_W3C + "type"), COMPETENCE)])
    report = validate_graph(g)
    assert any(issue.code == "rdf-namespace-variant" for issue in report.warnings)


def test_errors_are_monotone_under_added_violations():
    x = c("X")
    base = Graph([
        Triple(x, rdf_type(), NIVEAU_COMPETENCE),
        Triple(x, A_SCORE, Literal("7", XSD_INTEGER)),
        Triple(x, A_SCORE_MAX, Literal("5", XSD_INTEGER)),
    ])
    before = {(i.code, i.subject) for i in validate_graph(base).errors}
    worse = base.union([
        Triple(c("A"), A_SOUS_COMPETENCE, c("B")),
        Triple(c("B"), A_SOUS_COMPETENCE, c("A")),
    ])
    after = {(i.code, i.subject) for i in validate_graph(worse).errors}
    assert before <= after


# --- level scale -------------------------------------------------------


def test_level_compare_niveau01_below_niveau02():
    assert DEFAULT_LEVEL_SCALE.compare(c("Niveau01"), c("Niveau02")) == -1
    assert DEFAULT_LEVEL_SCALE.compare(c("Niveau01"), c("Niveau01")) == 0
    assert DEFAULT_LEVEL_SCALE.compare(c("Niveau04"), c("Niveau02")) == 1


def test_level_compare_accepts_label_synonyms():
    assert DEFAULT_LEVEL_SCALE.compare(Literal("Basique"), Literal("Avancé")) == -1
    assert DEFAULT_LEVEL_SCALE.rank(Literal("Débutant")) == DEFAULT_LEVEL_SCALE.rank(Literal("Basique"))


def test_level_compare_unknown_level_raises():
    with pytest.raises(UnknownLevelError):
        DEFAULT_LEVEL_SCALE.rank(c("Niveau99"))


def test_level_compare_antisymmetric_and_transitive():
    levels = [lvl.iri for lvl in DEFAULT_LEVEL_SCALE.levels]
    for a, b in product(levels, repeat=2):
        assert DEFAULT_LEVEL_SCALE.compare(a, b) == -DEFAULT_LEVEL_SCALE.compare(b, a)
    for a, b, d in product(levels, repeat=3):
        if DEFAULT_LEVEL_SCALE.compare(a, b) <= 0 and DEFAULT_LEVEL_SCALE.compare(b, d) <= 0:
            assert DEFAULT_LEVEL_SCALE.compare(a, d) <= 0


# --- sub-competence closure ---------------------------------------------


def test_leaf_closure_is_singleton():
    g = Graph([Triple(c("Solo"), rdf_type(), COMPETENCE)])
    assert subcompetence_closure(g, c("Solo")) == frozenset({c("Solo")})


def test_transitive_chain_closure():
    a, b, d, e = c("A"), c("B"), c("C"), c("D")
    g = Graph([
        Triple(a, A_SOUS_COMPETENCE, b),
        Triple(a, A_SOUS_COMPETENCE, d),
        Triple(b, A_SOUS_COMPETENCE, e),
    ])
    assert subcompetence_closure(g, a) == frozenset({a, b, d, e})


def test_closure_detects_cycles_defensively():
    a, b = c("A"), c("B")
    g = Graph([Triple(a, A_SOUS_COMPETENCE, b), Triple(b, A_SOUS_COMPETENCE, a)])
    with pytest.raises(SubCompetenceCycleError):
        subcompetence_closure(g, a)


def test_closure_matches_bfs_on_random_dags():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(1, 10)
        nodes = [c(f"N{i}") for i in range(n)]
        edges = []
        for i in range(n):
            for j in range(i + 1, n):  # i -> j only, guaranteeing acyclicity
                if rng.random() < 0.3:
                    edges.append((nodes[i], nodes[j]))
        g = Graph([Triple(a, A_SOUS_COMPETENCE, b) for a, b in edges])
        start = rng.choice(nodes)
        assert subcompetence_closure(g, start) == frozenset(bfs_reachable(edges, start))


def test_closure_contained_in_competence_nodes(case_study):
    ml02 = c("MachineLearning02")
    closure = subcompetence_closure(case_study, ml02)
    assert closure == frozenset({ml02, c("MachineLearning01")})
    competence_nodes = {
        s for cls in (COMPETENCE, COMPETENCE_TECHNIQUE)
        for s in case_study.subjects(rdf_type(), cls)
    }
    assert closure <= competence_nodes


def test_vocabulary_exports_as_graph():
    g = vocabulary_graph()
    assert len(g) > 40
    report = validate_graph(g)
    assert report.errors == ()
