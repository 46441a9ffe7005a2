"""Independent reference implementations the engine is checked against.

These deliberately avoid the production code paths: pattern matching by
linear scan, query answering by blind enumeration of assignments over
the graph's term universe, reachability by BFS over an edge list, and
set cover by exhaustive subset enumeration.
"""

from __future__ import annotations

import random
from itertools import chain, combinations, product

from cmokb.model import Blank, Graph, Iri, Literal, Term, Triple
from cmokb.sparql.ast import (
    FilterNotExists,
    GroupPattern,
    OptionalGroup,
    SelectQuery,
    TriplePattern,
    Variable,
    sort_rows,
)

# --- linear-scan pattern matching -------------------------------------


def scan_match(triples, s=None, p=None, o=None):
    out = [
        t for t in triples
        if (s is None or t.subject == s)
        and (p is None or t.predicate == p)
        and (o is None or t.object == o)
    ]
    out.sort(key=lambda t: (t.subject.n3(), t.predicate.n3(), t.object.n3()))
    return out


# --- enumeration-based query answering --------------------------------


def _universe(triples) -> list[Term]:
    terms = set()
    for t in triples:
        terms.update((t.subject, t.predicate, t.object))
    return sorted(terms, key=lambda term: term.n3())


def _ground(pattern: TriplePattern, assignment: dict):
    def value(pos):
        return assignment[pos.name] if isinstance(pos, Variable) else pos
    s, p, o = value(pattern.subject), value(pattern.predicate), value(pattern.object)
    if isinstance(s, Literal) or not isinstance(p, Iri):
        return None
    return Triple(s, p, o)


def _enum_pattern(triple_set, universe, pattern, solution):
    """Every total assignment of the pattern's unbound variables over the
    universe whose grounding is a graph triple."""
    unbound = [v for v in pattern.variables() if v not in solution]
    unbound = list(dict.fromkeys(unbound))
    out = []
    for values in product(universe, repeat=len(unbound)):
        candidate = dict(solution)
        candidate.update(zip(unbound, values))
        grounded = _ground(pattern, candidate)
        if grounded is not None and grounded in triple_set:
            out.append(candidate)
    return out


def oracle_eval_group(triples, group: GroupPattern, seed: dict) -> list[dict]:
    triple_set = set(triples)
    universe = _universe(triples)
    solutions = [seed]
    for element in group.elements:
        if isinstance(element, TriplePattern):
            solutions = [
                ext for sol in solutions
                for ext in _enum_pattern(triple_set, universe, element, sol)
            ]
        elif isinstance(element, OptionalGroup):
            joined = []
            for sol in solutions:
                extensions = oracle_eval_group(triples, element.group, sol)
                joined.extend(extensions if extensions else [sol])
            solutions = joined
        elif isinstance(element, FilterNotExists):
            solutions = [
                sol for sol in solutions
                if not oracle_eval_group(triples, element.group, sol)
            ]
    return solutions


def oracle_evaluate(graph: Graph, query: SelectQuery):
    header = query.header()
    solutions = oracle_eval_group(list(graph), query.where, {})
    rows = sort_rows(list({tuple(sol.get(v) for v in header) for sol in solutions}))
    return header, tuple(rows)


def oracle_bgp_total_assignment(graph: Graph, query: SelectQuery):
    """Literal reading for BGP-only queries: assign every query variable
    at once over the whole universe, then filter."""
    patterns = [el for el in query.where.elements if isinstance(el, TriplePattern)]
    assert len(patterns) == len(query.where.elements), "BGP-only oracle"
    variables = []
    for pattern in patterns:
        for v in pattern.variables():
            if v not in variables:
                variables.append(v)
    universe = _universe(list(graph))
    triple_set = set(graph)
    header = query.header()
    rows = set()
    if not patterns:
        return header, (tuple(None for _ in header),)
    for values in product(universe, repeat=len(variables)):
        assignment = dict(zip(variables, values))
        grounded = [_ground(p, assignment) for p in patterns]
        if all(g is not None and g in triple_set for g in grounded):
            rows.add(tuple(assignment.get(v) for v in header))
    return header, tuple(sort_rows(list(rows)))


# --- BFS reachability ---------------------------------------------------


def bfs_reachable(edges: list[tuple], start) -> set:
    adjacency: dict = {}
    for a, b in edges:
        adjacency.setdefault(a, []).append(b)
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


# --- exhaustive weighted set cover --------------------------------------


def exhaustive_min_cover(universe: frozenset, sets: dict, weights: dict):
    """Minimum total weight over every subset of trainings covering the
    universe; None when no subset covers it."""
    names = sorted(sets, key=str)
    best = None
    for r in range(len(names) + 1):
        for combo in combinations(names, r):
            covered = frozenset(chain.from_iterable(sets[n] for n in combo))
            if universe <= covered:
                w = sum(weights[n] for n in combo)
                if best is None or w < best:
                    best = w
    return best


# --- random generators ---------------------------------------------------


def random_graph(rng: random.Random, max_triples: int = 30) -> Graph:
    subjects = [Iri(f"urn:s{i}") for i in range(5)] + [Blank(f"b{i}") for i in range(2)]
    predicates = [Iri(f"urn:p{i}") for i in range(3)]
    leaves = [Literal(f"l{i}") for i in range(3)] + [Literal("5", "http://www.w3.org/2001/XMLSchema#integer")]
    objects = subjects + predicates + leaves
    n = rng.randint(0, max_triples)
    triples = {
        Triple(rng.choice(subjects), rng.choice(predicates), rng.choice(objects))
        for _ in range(n)
    }
    return Graph(triples)


def random_cmo_graph(rng: random.Random) -> Graph:
    """Small schema-valid competence graphs for saturation property
    tests: profiles with instance possessions, a sub-competence DAG,
    certifications and experiences with plausible dates."""
    from datetime import date, timedelta

    from cmokb.namespaces import CMO, RDF_TYPE, XSD_DATE, XSD_DURATION
    from cmokb.schema import (
        A_CERTIFICATION,
        A_DATE_EMISSION,
        A_DUREE_DE_VALIDITE,
        A_NIVEAU_COMPETENCE,
        A_SOUS_COMPETENCE,
        CERTIFICATION,
        COMPETENCE,
        COMPETENCE_TECHNIQUE,
        DEFAULT_LEVEL_SCALE,
        EST_INSTANCE_DE,
        EXPERIENCE_PRO,
        MAITRISE_COMPETENCE,
        POSSEDE_COMPETENCE,
        POSSEDE_EXPERIENCE,
        PROFIL_APPRENANT,
        VALIDE_COMPETENCE,
    )

    rdf_type = Iri(RDF_TYPE)
    triples: list[Triple] = []
    n_comp = rng.randint(2, 6)
    comps = [Iri(f"{CMO}c{i}") for i in range(n_comp)]
    for comp in comps:
        triples.append(Triple(comp, rdf_type, COMPETENCE_TECHNIQUE))
    for i in range(n_comp):
        for j in range(i + 1, n_comp):
            if rng.random() < 0.25:
                triples.append(Triple(comps[i], A_SOUS_COMPETENCE, comps[j]))

    levels = [lvl.iri for lvl in DEFAULT_LEVEL_SCALE.levels]
    profiles = [Iri(f"{CMO}prof{i}") for i in range(rng.randint(1, 3))]
    for p_idx, profile in enumerate(profiles):
        triples.append(Triple(profile, rdf_type, PROFIL_APPRENANT))
        for comp in rng.sample(comps, rng.randint(0, min(3, n_comp))):
            inst = Iri(f"{profile.value}_inst_{comp.value.rsplit('#', 1)[1]}")
            triples.append(Triple(profile, POSSEDE_COMPETENCE, inst))
            triples.append(Triple(inst, rdf_type, COMPETENCE))
            triples.append(Triple(inst, EST_INSTANCE_DE, comp))
            if rng.random() < 0.7:
                triples.append(Triple(inst, A_NIVEAU_COMPETENCE, rng.choice(levels)))
        if rng.random() < 0.6:
            cert = Iri(f"{CMO}cert{p_idx}")
            triples.append(Triple(cert, rdf_type, CERTIFICATION))
            triples.append(Triple(profile, A_CERTIFICATION, cert))
            triples.append(Triple(cert, VALIDE_COMPETENCE, rng.choice(comps)))
            emitted = date(2020, 1, 1) + timedelta(days=rng.randint(0, 2000))
            triples.append(Triple(cert, A_DATE_EMISSION, Literal(emitted.isoformat(), XSD_DATE)))
            if rng.random() < 0.7:
                months = rng.randint(1, 36)
                triples.append(Triple(cert, A_DUREE_DE_VALIDITE, Literal(f"P{months}M", XSD_DURATION)))
        if rng.random() < 0.4:
            exp = Iri(f"{CMO}exp{p_idx}")
            triples.append(Triple(exp, rdf_type, EXPERIENCE_PRO))
            triples.append(Triple(profile, POSSEDE_EXPERIENCE, exp))
            triples.append(Triple(exp, MAITRISE_COMPETENCE, rng.choice(comps)))
    return Graph(triples)


def random_query(rng: random.Random) -> SelectQuery:
    """1-3 triple patterns, sometimes wrapped OPTIONAL / FILTER NOT
    EXISTS bodies, over the same term alphabet as random_graph."""
    from cmokb.model import PrefixMap

    var_pool = ["a", "b", "c", "d"]
    subjects = [Iri(f"urn:s{i}") for i in range(5)]
    predicates = [Iri(f"urn:p{i}") for i in range(3)]
    leaves = [Literal(f"l{i}") for i in range(3)]

    def pattern() -> TriplePattern:
        def subject():
            return Variable(rng.choice(var_pool)) if rng.random() < 0.6 else rng.choice(subjects)

        def predicate():
            return Variable(rng.choice(var_pool)) if rng.random() < 0.2 else rng.choice(predicates)

        def obj():
            roll = rng.random()
            if roll < 0.55:
                return Variable(rng.choice(var_pool))
            if roll < 0.8:
                return rng.choice(subjects)
            return rng.choice(leaves)

        return TriplePattern(subject(), predicate(), obj())

    elements: list = [pattern() for _ in range(rng.randint(1, 2))]
    roll = rng.random()
    if roll < 0.35:
        inner = GroupPattern(tuple(pattern() for _ in range(rng.randint(1, 2))))
        elements.append(OptionalGroup(inner))
    elif roll < 0.6:
        inner = GroupPattern(tuple(pattern() for _ in range(rng.randint(1, 2))))
        elements.append(FilterNotExists(inner))
    if rng.random() < 0.2:
        elements.append(pattern())
    where = GroupPattern(tuple(elements))
    in_scope = where.in_scope_variables()
    if in_scope and rng.random() < 0.8:
        count = rng.randint(1, min(3, len(in_scope)))
        projection = tuple(rng.sample(in_scope, count))
    else:
        projection = None  # SELECT *
    return SelectQuery(PrefixMap.default(), projection, where)
