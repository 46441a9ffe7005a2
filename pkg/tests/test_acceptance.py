"""Acceptance suite: one test per release criterion.

Each test prints a PASS line with its measured figures; run with
``pytest tests/test_acceptance.py -v -s`` to see them.  Tolerances and
runtime budgets are pinned in the assertions.
"""

import json
import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from datetime import date, timedelta

from click.testing import CliRunner
from dateutil.relativedelta import relativedelta
from fastapi.testclient import TestClient

from cmokb import bundled_path, load_case_study
from cmokb.analysis import GapEntry, GapReport, missing_competences, recommend_trainings
from cmokb.cli import main as cli_main
from cmokb.dates import Duration, add_duration
from cmokb.inference import DEFAULT_RULES, saturate
from cmokb.model import Graph, Iri, Literal, Triple
from cmokb.namespaces import CMO, RDF_TYPE, XSD_DURATION
from cmokb.privacy import PseudonymizationPolicy, pseudonym_for, pseudonymize
from cmokb.schema import A_DUREE, DEVELOPPE_COMPETENCE, FORMATION
from cmokb.service import create_app
from cmokb.sparql import evaluate, parse_query
from cmokb.turtle import parse_document, serialize_graph

from oracles import (
    exhaustive_min_cover,
    oracle_evaluate,
    random_cmo_graph,
    random_graph,
    random_query,
)
from test_turtle import random_literal_graph

FIXTURE = load_case_study()
FIXTURE_PATH = str(bundled_path("case_study.cmo.ttl"))
PROFILE_QUERY = bundled_path("queries/profile_competences.rq").read_text(encoding="utf-8")
GAP_QUERY = bundled_path("queries/missing_competences.rq").read_text(encoding="utf-8")


def c(local: str) -> Iri:
    return Iri(CMO + local)


def report(name: str, detail: str):
    print(f"PASS {name}: {detail}")


def test_gold_profile_competence_rows():
    started = time.monotonic()
    table = evaluate(FIXTURE, parse_query(PROFILE_QUERY))
    elapsed = time.monotonic() - started

    expected = (
        ("HenriLe", "BigData_HenriLe", None),
        ("HenriLe", "MachineLearning02_HenriLe", "Niveau02"),
        ("HenriLe", "Python01_HenriLe", "Niveau03"),
        ("LouisLe", "Python01_LouisLe", "Niveau01"),
        ("Marc", "Cybersecurite_Marc", "Niveau04"),
        ("Marc", "Python01_Marc", "Niveau01"),
        ("Marc", "ReseauInformatique_Marc", "Niveau02"),
        ("Sophie", "DeveloppementWeb_Sophie", "Niveau02"),
        ("Sophie", "Python_Sophie", None),
        ("Sophie", "UXUIDesign_Sophie", "Niveau03"),
    )
    assert table.rows == tuple(
        (c(pa), c(comp), c(niv) if niv else None) for pa, comp, niv in expected
    )
    nulls = {row[1] for row in table.rows if row[2] is None}
    assert nulls == {c("BigData_HenriLe"), c("Python_Sophie")}

    # byte-stability across evaluations
    rerun = evaluate(parse_document(serialize_graph(FIXTURE)), parse_query(PROFILE_QUERY))
    assert rerun.to_json_text() == table.to_json_text()
    assert rerun.to_text() == table.to_text()

    assert elapsed < 1.0, f"query took {elapsed:.3f}s"
    report("gold profile-competence rows", f"10 rows, 2 null levels, {elapsed * 1000:.0f} ms")


def test_gold_missing_competence_set():
    started = time.monotonic()
    table = evaluate(FIXTURE, parse_query(GAP_QUERY))
    elapsed = time.monotonic() - started
    expected = {"AnalyseDeDonnees01", "MachineLearning01", "Python_02"}
    query_set = {row[0].value.rsplit("#", 1)[1] for row in table.rows}
    assert query_set == expected

    runner = CliRunner()
    cli = runner.invoke(cli_main, [
        "gap", FIXTURE_PATH, "--profile", "LouisLe", "--occupation", "M1405",
        "--format", "json",
    ])
    assert cli.exit_code == 0
    cli_set = {m["competence"].rsplit("#", 1)[1] for m in json.loads(cli.output)["missing"]}

    with TestClient(create_app(FIXTURE)) as client:
        response = client.get("/gap", params={"profile": "LouisLe", "occupation": "M1405"})
        api_set = {m["competence"].rsplit("#", 1)[1] for m in response.json()["missing"]}

    assert query_set == cli_set == api_set
    assert elapsed < 1.0, f"query took {elapsed:.3f}s"
    report("gold missing-competence set",
           f"query == CLI == service == {sorted(expected)}, {elapsed * 1000:.0f} ms")


def test_query_oracle_equivalence_1000_cases():
    rng = random.Random(193939)
    started = time.monotonic()
    cases = 0
    with_optional = 0
    while cases < 1000:
        g = random_graph(rng, 30)
        query = random_query(rng)
        header, rows = oracle_evaluate(g, query)
        table = evaluate(g, query)
        assert table.header == header, f"case {cases}"
        assert table.rows == rows, f"case {cases}"
        if len(query.where.elements) != sum(
            1 for el in query.where.elements if hasattr(el, "variables")
        ):
            with_optional += 1
        cases += 1
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"oracle suite took {elapsed:.1f}s"
    report("query oracle equivalence",
           f"{cases} cases ({with_optional} with OPTIONAL/FNE) in {elapsed:.1f}s")


def test_saturation_properties_200_graphs_and_calendar_500_pairs():
    rng = random.Random(575757)
    for case in range(200):
        g = random_cmo_graph(rng)
        at = date(2021, 1, 1) + timedelta(days=rng.randint(0, 2500))
        result = saturate(g, reference_date=at)
        assert g.triples <= result.graph.triples, f"monotonicity, case {case}"
        again = saturate(result.graph, reference_date=at)
        assert again.derived_count == 0, f"idempotence, case {case}"
        rules = list(DEFAULT_RULES)
        rng.shuffle(rules)
        assert saturate(g, tuple(rules), reference_date=at).graph == result.graph, \
            f"rule-order independence, case {case}"

    for case in range(500):
        start = date(1990, 1, 1) + timedelta(days=rng.randint(0, 29200))
        dur = Duration(rng.randint(0, 3), rng.randint(0, 48), rng.randint(0, 8), rng.randint(0, 90))
        oracle = (start + relativedelta(years=dur.years, months=dur.months)
                  + timedelta(days=dur.weeks * 7 + dur.days))
        assert add_duration(start, dur) == oracle, f"calendar, case {case}"
    report("saturation properties", "200 graphs x 3 properties, 500 calendar pairs")


def test_recommendation_optimality():
    # exact optimum on the bundled case study
    gap = missing_competences(FIXTURE, c("LouisLe"), c("M1405"))
    plans = recommend_trainings(FIXTURE, gap)
    primary = plans[0]
    assert primary.trainings() == (c("FormationDS25"),)
    assert primary.total_duration_days == 180  # six months
    optimum = exhaustive_min_cover(
        frozenset(gap.missing_competences()),
        {c("FormationDS25"): frozenset(gap.missing_competences())},
        {c("FormationDS25"): 180.0},
    )
    assert primary.total_cost == optimum

    # harmonic bound on randomized instances within the stated size box
    rng = random.Random(99999)
    bound = math.log(6) + 1
    checked = 0
    for case in range(1000):
        n_comp = rng.randint(1, 6)
        universe = [f"u{i}" for i in range(n_comp)]
        sets = {
            f"t{j}": {x for x in universe if rng.random() < 0.5}
            for j in range(rng.randint(1, 4))
        }
        durations = {name: rng.randint(1, 12) for name in sets}
        triples = []
        for name in sets:
            training = c(name)
            triples.append(Triple(training, Iri(RDF_TYPE), FORMATION))
            triples.append(Triple(training, A_DUREE,
                                  Literal(f"P{durations[name]}D", XSD_DURATION)))
            for comp in sets[name]:
                triples.append(Triple(training, DEVELOPPE_COMPETENCE, c(comp)))
        g = Graph(triples)
        gap_report = GapReport(c("prof"), c("occ"),
                               tuple(GapEntry(c(u)) for u in sorted(universe)), (), ())
        primary = recommend_trainings(g, gap_report)[0]
        coverable = frozenset(c(x) for s in sets.values() for x in s if x in universe)
        if not coverable:
            continue
        optimum = exhaustive_min_cover(
            coverable,
            {c(n): frozenset(c(x) for x in s) for n, s in sets.items()},
            {c(n): float(durations[n]) for n in sets},
        )
        assert primary.total_cost <= bound * optimum + 1e-9, f"case {case}"
        checked += 1
    report("recommendation optimality",
           f"fixture exact-optimal; greedy within ln(6)+1 of optimum on {checked} instances")


def test_round_trip_and_pseudonymization():
    rng = random.Random(246810)
    for case in range(500):
        g = random_literal_graph(rng)
        assert parse_document(serialize_graph(g)) == g, f"round-trip case {case}"

    policy = PseudonymizationPolicy("acceptance-key")
    anonymized = pseudonymize(FIXTURE, policy)
    assert len(anonymized) == len(FIXTURE)
    rewritten = GAP_QUERY.replace(
        "cmo:LouisLe", f"<{pseudonym_for(policy, c('LouisLe')).value}>",
    )
    before = {row[0] for row in evaluate(FIXTURE, parse_query(GAP_QUERY)).rows}
    after = {row[0] for row in evaluate(anonymized, parse_query(rewritten)).rows}
    assert before == after
    report("round-trip and pseudonymization",
           "500 graphs round-tripped; triple count and gap preserved modulo renaming")


def test_service_cli_coherence_and_snapshot_atomicity(tmp_path):
    runner = CliRunner()
    with TestClient(create_app(FIXTURE)) as client:
        query_file = tmp_path / "profile.rq"
        query_file.write_text(PROFILE_QUERY, encoding="utf-8")
        cli_query = json.loads(runner.invoke(
            cli_main, ["query", FIXTURE_PATH, str(query_file), "--format", "json"],
        ).output)
        api_query = client.post("/query", json={"query": PROFILE_QUERY}).json()
        assert cli_query == api_query

        cli_gap = json.loads(runner.invoke(cli_main, [
            "gap", FIXTURE_PATH, "--profile", "LouisLe", "--occupation", "M1405",
            "--format", "json",
        ]).output)
        api_gap = client.get("/gap", params={"profile": "LouisLe", "occupation": "M1405"}).json()
        assert cli_gap == api_gap

        cli_rec = json.loads(runner.invoke(cli_main, [
            "recommend", FIXTURE_PATH, "--profile", "LouisLe", "--occupation", "M1405",
            "--format", "json",
        ]).output)
        api_rec = client.get("/recommendations",
                             params={"profile": "LouisLe", "occupation": "M1405"}).json()
        assert cli_rec == api_rec

    # snapshot swap atomicity under 16 concurrent readers
    fixture_text = bundled_path("case_study.cmo.ttl").read_text(encoding="utf-8")
    variant = fixture_text + "\ncmo:Extra rdf:type cmo:Metier .\n"
    count_query = ("PREFIX cmo: <http://gamaizer.ia/cmo#>\n"
                   "PREFIX rdf: <http://w3c.org/1999/02/22-rdf-syntax-ns#>\n"
                   "SELECT ?m WHERE { ?m rdf:type cmo:Metier }")
    with TestClient(create_app()) as client:
        client.post("/kb", content=fixture_text.encode("utf-8"))
        ref_a = client.post("/query", json={"query": count_query}).content
        client.post("/kb", content=variant.encode("utf-8"))
        ref_b = client.post("/query", json={"query": count_query}).content
        assert ref_a != ref_b

        stop = False

        def reader():
            seen = []
            while not stop:
                seen.append(client.post("/query", json={"query": count_query}).content)
            return seen

        def writer():
            for i in range(30):
                text = fixture_text if i % 2 == 0 else variant
                client.post("/kb", content=text.encode("utf-8"))

        with ThreadPoolExecutor(max_workers=17) as pool:
            readers = [pool.submit(reader) for _ in range(16)]
            pool.submit(writer).result()
            stop = True
            observed = [item for future in readers for item in future.result()]

    mixed = [o for o in observed if o not in {ref_a, ref_b}]
    assert observed and mixed == [], f"{len(mixed)} mixed-state responses"
    report("service/CLI coherence",
           f"query/gap/recommendations JSON identical; {len(observed)} concurrent reads, 0 mixed")
