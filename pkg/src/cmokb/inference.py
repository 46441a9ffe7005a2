"""Forward-chaining saturation.

Built-in rules derive: supertype assertions from the vocabulary's
subclass edges, sub-competence possession (with the parent instance's
level), possession from certifications that are valid at the reference
date, and mastery from professional experience.  Derived competence
instances get deterministic content-hashed IRIs so repeated saturation
is idempotent and serializations are reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from datetime import date
from typing import Callable, Mapping, Optional, Sequence, Union

from .dates import add_duration, parse_date, parse_duration
from .errors import (
    DateParseError,
    DurationParseError,
    IterationCapError,
    MissingEmissionDateError,
)
from .model import Graph, Iri, Literal, Term, Triple, term_key
from .namespaces import CMO
from .schema import (
    A_CERTIFICATION,
    A_DATE_EMISSION,
    A_DUREE_DE_VALIDITE,
    A_NIVEAU_COMPETENCE,
    A_SOUS_COMPETENCE,
    CMO_VOCABULARY,
    COMPETENCE,
    EST_INSTANCE_DE,
    MAITRISE_COMPETENCE,
    POSSEDE_COMPETENCE,
    POSSEDE_EXPERIENCE,
    VALIDE_COMPETENCE,
    Vocabulary,
)
from .sparql.ast import TriplePattern, Variable

Guard = Callable[[Graph, Mapping[str, Term], date], bool]


@dataclass(frozen=True)
class SkolemRef:
    """Placeholder object in a conclusion, resolved to a deterministic
    IRI from the named premise bindings."""

    rule: str
    vars: tuple[str, ...]


ConclusionTerm = Union[Term, Variable, SkolemRef]


@dataclass(frozen=True)
class ConclusionPattern:
    subject: ConclusionTerm
    predicate: Iri
    object: ConclusionTerm


@dataclass(frozen=True)
class Rule:
    name: str
    premises: tuple[TriplePattern, ...]
    conclusions: tuple[ConclusionPattern, ...]
    guard: Optional[Guard] = None


def skolem_iri(rule: str, terms: Sequence[Term]) -> Iri:
    digest = hashlib.sha256(
        ("|".join(t.n3() for t in terms) + "|" + rule).encode("utf-8")
    ).hexdigest()[:16]
    return Iri(f"{CMO}inst-{digest}")


def certification_valid_at(graph: Graph, cert: Iri, at: date) -> bool:
    """A certification is valid from its emission date through the end of
    its validity window, inclusive; without a declared duration it stays
    valid indefinitely."""
    emissions = [o for o in graph.objects(cert, A_DATE_EMISSION) if isinstance(o, Literal)]
    if not emissions:
        raise MissingEmissionDateError(f"certification {cert.value} has no emission date")
    emitted = parse_date(emissions[0].lexical)
    durations = [o for o in graph.objects(cert, A_DUREE_DE_VALIDITE) if isinstance(o, Literal)]
    if not durations:
        return at >= emitted
    expiry = add_duration(emitted, parse_duration(durations[0].lexical))
    return emitted <= at <= expiry


def _certification_guard(graph: Graph, binding: Mapping[str, Term], at: date) -> bool:
    cert = binding["k"]
    if not isinstance(cert, Iri):
        return False
    try:
        return certification_valid_at(graph, cert, at)
    except (MissingEmissionDateError, DateParseError, DurationParseError):
        return False  # broken certification data never derives possession


def build_rules(
    vocab: Vocabulary = CMO_VOCABULARY,
    level_propagation: str = "propagate-level",
) -> tuple[Rule, ...]:
    """The built-in rule set.

    ``level_propagation`` controls whether a derived sub-competence
    instance inherits the parent instance's level
    (``propagate-level``, default) or stays unleveled
    (``propagate-unleveled``).
    """
    rtype = vocab.type_predicate
    rules: list[Rule] = []

    # R1: lift instances along every subclass edge (transitively).
    closure_edges = set()
    for child, _ in vocab.subclass_edges:
        for ancestor in vocab.superclasses(child):
            if ancestor != child:
                closure_edges.add((child, ancestor))
    for child, parent in sorted(closure_edges, key=lambda e: (e[0].value, e[1].value)):
        rules.append(Rule(
            name="R1 type-lift",
            premises=(TriplePattern(Variable("x"), rtype, child),),
            conclusions=(ConclusionPattern(Variable("x"), rtype, parent),),
        ))

    # R2: possessing an instance of a composite competence yields an
    # instance of each sub-competence, for the same profile.
    r2_skolem = SkolemRef("R2", ("p", "s"))
    r2_premises = (
        TriplePattern(Variable("p"), POSSEDE_COMPETENCE, Variable("i")),
        TriplePattern(Variable("i"), EST_INSTANCE_DE, Variable("c")),
        TriplePattern(Variable("c"), A_SOUS_COMPETENCE, Variable("s")),
    )
    rules.append(Rule(
        name="R2 subcompetence-possession",
        premises=r2_premises,
        conclusions=(
            ConclusionPattern(Variable("p"), POSSEDE_COMPETENCE, r2_skolem),
            ConclusionPattern(r2_skolem, EST_INSTANCE_DE, Variable("s")),
            ConclusionPattern(r2_skolem, rtype, COMPETENCE),
        ),
    ))
    if level_propagation == "propagate-level":
        rules.append(Rule(
            name="R2 subcompetence-possession",
            premises=r2_premises + (
                TriplePattern(Variable("i"), A_NIVEAU_COMPETENCE, Variable("l")),
            ),
            conclusions=(
                ConclusionPattern(r2_skolem, A_NIVEAU_COMPETENCE, Variable("l")),
            ),
        ))
    elif level_propagation != "propagate-unleveled":
        raise ValueError(f"unknown level propagation mode: {level_propagation!r}")

    # R3: a certification valid at the reference date proves possession
    # of the competence it validates.
    r3_skolem = SkolemRef("R3", ("p", "c"))
    rules.append(Rule(
        name="R3 certification-possession",
        premises=(
            TriplePattern(Variable("p"), A_CERTIFICATION, Variable("k")),
            TriplePattern(Variable("k"), VALIDE_COMPETENCE, Variable("c")),
        ),
        conclusions=(
            ConclusionPattern(Variable("p"), POSSEDE_COMPETENCE, r3_skolem),
            ConclusionPattern(r3_skolem, EST_INSTANCE_DE, Variable("c")),
            ConclusionPattern(r3_skolem, rtype, COMPETENCE),
        ),
        guard=_certification_guard,
    ))

    # R4: professional experience masters its competencies.
    r4_skolem = SkolemRef("R4", ("p", "c"))
    rules.append(Rule(
        name="R4 experience-mastery",
        premises=(
            TriplePattern(Variable("p"), POSSEDE_EXPERIENCE, Variable("e")),
            TriplePattern(Variable("e"), MAITRISE_COMPETENCE, Variable("c")),
        ),
        conclusions=(
            ConclusionPattern(Variable("p"), POSSEDE_COMPETENCE, r4_skolem),
            ConclusionPattern(r4_skolem, EST_INSTANCE_DE, Variable("c")),
            ConclusionPattern(r4_skolem, rtype, COMPETENCE),
        ),
    ))
    return tuple(rules)


DEFAULT_RULES = build_rules()


@dataclass(frozen=True)
class SaturationResult:
    graph: Graph
    derived_count: int
    iterations: int
    provenance: dict[Triple, str] = field(default_factory=dict)


def _resolve_pattern_term(term, binding: dict[str, Term]) -> Optional[Term]:
    if isinstance(term, Variable):
        return binding.get(term.name)
    return term


def _extend(pattern: TriplePattern, triple: Triple, binding: dict[str, Term]) -> Optional[dict[str, Term]]:
    out = dict(binding)
    for pos, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(pos, Variable):
            bound = out.get(pos.name)
            if bound is None:
                out[pos.name] = value
            elif bound != value:
                return None
        elif pos != value:
            return None
    return out


def _join_remaining(
    graph: Graph,
    premises: Sequence[TriplePattern],
    binding: dict[str, Term],
) -> list[dict[str, Term]]:
    if not premises:
        return [binding]
    head, rest = premises[0], premises[1:]
    s = _resolve_pattern_term(head.subject, binding)
    p = _resolve_pattern_term(head.predicate, binding)
    o = _resolve_pattern_term(head.object, binding)
    out: list[dict[str, Term]] = []
    for triple in graph.match(s, p, o):
        extended = _extend(head, triple, binding)
        if extended is not None:
            out.extend(_join_remaining(graph, rest, extended))
    return out


def _rule_bindings(
    rule: Rule,
    graph: Graph,
    delta: Optional[list[Triple]],
) -> list[dict[str, Term]]:
    """Premise bindings; with a delta, only matches seeded from a delta
    triple in some premise position (semi-naive evaluation)."""
    seen: set[frozenset] = set()
    out: list[dict[str, Term]] = []

    def record(binding: dict[str, Term]):
        key = frozenset(binding.items())
        if key not in seen:
            seen.add(key)
            out.append(binding)

    if delta is None:
        for binding in _join_remaining(graph, rule.premises, {}):
            record(binding)
        return out
    for seed_idx in range(len(rule.premises)):
        seed = rule.premises[seed_idx]
        rest = rule.premises[:seed_idx] + rule.premises[seed_idx + 1:]
        for triple in delta:
            start = _extend(seed, triple, {})
            if start is None:
                continue
            for binding in _join_remaining(graph, rest, start):
                record(binding)
    return out


def _instantiate(term: ConclusionTerm, binding: Mapping[str, Term]) -> Term:
    if isinstance(term, Variable):
        return binding[term.name]
    if isinstance(term, SkolemRef):
        return skolem_iri(term.rule, [binding[v] for v in term.vars])
    return term


def saturate(
    graph: Graph,
    rules: Sequence[Rule] = DEFAULT_RULES,
    reference_date: Optional[date] = None,
    max_iterations: int = 50,
) -> SaturationResult:
    """Least fixpoint of the rules over the graph.

    Monotone (only adds triples) and idempotent; terminates because
    derived instance nodes are content-addressed, bounding the
    reachable universe.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    at = reference_date if reference_date is not None else date.today()
    working = graph
    delta: Optional[list[Triple]] = None  # None = first round sees everything
    provenance: dict[Triple, str] = {}
    iterations = 0
    while iterations < max_iterations:
        iterations += 1
        fresh: set[Triple] = set()
        for rule in rules:
            for binding in _rule_bindings(rule, working, delta):
                if rule.guard is not None and not rule.guard(working, binding, at):
                    continue
                for pattern in rule.conclusions:
                    triple = Triple(
                        _instantiate(pattern.subject, binding),
                        _instantiate(pattern.predicate, binding),
                        _instantiate(pattern.object, binding),
                    )
                    if triple not in working and triple not in fresh:
                        fresh.add(triple)
                        provenance.setdefault(triple, rule.name)
        if not fresh:
            derived = {t: r for t, r in provenance.items() if t not in graph}
            return SaturationResult(working, len(working) - len(graph), iterations, derived)
        working = working.union(fresh)
        delta = sorted(fresh, key=lambda t: term_key(t.subject) + term_key(t.predicate) + term_key(t.object))
    raise IterationCapError(f"saturation did not settle within {max_iterations} iterations")
