"""Skill-gap analysis, training recommendation and what-if simulation.

Possession is compared at the canonical competence level: a profile's
competence-instance nodes map to their canonical competence through
estInstanceDe (nodes without that link count as canonical themselves).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

from .dates import duration_days, parse_any_duration
from .errors import (
    DurationParseError,
    EmptyCatalogError,
    PrerequisiteCycleError,
    PrerequisiteUnmetError,
    UnknownLevelError,
    UnknownOccupationError,
    UnknownProfileError,
    UnknownTrainingError,
)
from .model import Graph, Iri, Literal, Term, Triple, term_key
from .namespaces import CMO
from .schema import (
    A_CONDITION_PREALABLE,
    A_DUREE,
    A_NIVEAU_COMPETENCE,
    CMO_VOCABULARY,
    COMPETENCE,
    DEFAULT_LEVEL_SCALE,
    DELIVRE_NIVEAU,
    DEVELOPPE_COMPETENCE,
    EST_INSTANCE_DE,
    FORMATION,
    INCLUDE_COMPETENCE,
    INDIVIDU,
    LevelScale,
    POSSEDE_COMPETENCE,
    REQUIERT_NIVEAU,
    SUIT_FORMATION,
    Vocabulary,
)
from .sparql import SolutionTable, evaluate, parse_query

# The profile-competence report is defined by this query: learner
# profiles with their possessed competence instances and, when
# annotated, the instance's proficiency level.
PROFILE_COMPETENCES_QUERY = """\
PREFIX cmo:  <http://gamaizer.ia/cmo#>
PREFIX rdf: <http://w3c.org/1999/02/22-rdf-syntax-ns#>
SELECT ?pa ?competence ?niveau
WHERE {
 ?pa rdf:type cmo:ProfilApprenant;
 cmo:possedeCompetence ?competence .
 OPTIONAL {
  ?competence cmo:aNiveauCompetence ?niveau .
 }
}
"""


def require_profile(graph: Graph, profile: Iri, vocab: Vocabulary = CMO_VOCABULARY) -> None:
    """Raise unknown-profile unless the node is typed as an individual
    (or a subclass such as a learner profile)."""
    types = {o for o in graph.objects(profile, vocab.type_predicate) if isinstance(o, Iri)}
    individuals = vocab.descendants(INDIVIDU)
    if not types & individuals:
        raise UnknownProfileError(f"no such profile: {profile.value}")


def profile_competences(graph: Graph, profile: Optional[Iri] = None) -> SolutionTable:
    """Profiles with their competence instances and optional levels.

    With ``profile`` set, rows are restricted to that learner; a profile
    with no type assertion raises unknown-profile.
    """
    table = evaluate(graph, parse_query(PROFILE_COMPETENCES_QUERY))
    if profile is None:
        return table
    if not graph.match(profile, CMO_VOCABULARY.type_predicate, None):
        raise UnknownProfileError(f"no type assertion for profile: {profile.value}")
    idx = table.header.index("pa")
    rows = tuple(row for row in table.rows if row[idx] == profile)
    return SolutionTable(table.header, rows)


def canonical_competence(graph: Graph, instance: Term) -> list[Iri]:
    """Canonical competencies an instance node stands for (itself when
    it has no estInstanceDe link)."""
    canon = [o for o in graph.objects(instance, EST_INSTANCE_DE) if isinstance(o, Iri)]
    if canon:
        return canon
    return [instance] if isinstance(instance, Iri) else []


def possessed_competences(
    graph: Graph,
    profile: Iri,
    scale: LevelScale = DEFAULT_LEVEL_SCALE,
) -> dict[Iri, Optional[Term]]:
    """Canonical competence -> best (highest-ranked) possessed level."""
    best: dict[Iri, Optional[Term]] = {}
    for t in graph.match(profile, POSSEDE_COMPETENCE, None):
        levels = graph.objects(t.object, A_NIVEAU_COMPETENCE)
        for canon in canonical_competence(graph, t.object):
            current = best.get(canon)
            for level in levels:
                try:
                    rank = scale.rank(level)
                except UnknownLevelError:
                    continue  # levels outside the scale carry no ordering
                if current is None or rank > scale.rank(current):
                    current = level
            if canon not in best or current is not None:
                best[canon] = current
    return best


@dataclass(frozen=True)
class GapEntry:
    competence: Iri
    required_level: Optional[Iri] = None


@dataclass(frozen=True)
class UnderLeveled:
    competence: Iri
    possessed_level: Term
    required_level: Iri


@dataclass(frozen=True)
class GapReport:
    profile: Iri
    occupation: Iri
    missing: tuple[GapEntry, ...]
    under_leveled: tuple[UnderLeveled, ...]
    satisfied: tuple[Iri, ...]

    def missing_competences(self) -> tuple[Iri, ...]:
        return tuple(entry.competence for entry in self.missing)

    def to_json(self) -> dict:
        return {
            "profile": self.profile.value,
            "occupation": self.occupation.value,
            "missing": [
                {"competence": e.competence.value}
                | ({"requiredLevel": e.required_level.value} if e.required_level else {})
                for e in self.missing
            ],
            "underLeveled": [
                {
                    "competence": e.competence.value,
                    "possessedLevel": e.possessed_level.value
                    if isinstance(e.possessed_level, Iri) else e.possessed_level.lexical,
                    "requiredLevel": e.required_level.value,
                }
                for e in self.under_leveled
            ],
            "satisfied": [c.value for c in self.satisfied],
        }


def missing_competences(
    graph: Graph,
    profile: Iri,
    occupation: Iri,
    level_aware: bool = False,
    scale: LevelScale = DEFAULT_LEVEL_SCALE,
) -> GapReport:
    """Required-minus-possessed competencies for a target occupation.

    Level-blind mode is a canonical set difference.  Level-aware mode
    additionally compares possessed levels against requiertNiveau
    annotations; possession without a recorded level is given the
    benefit of the doubt and counts as satisfied.
    """
    required = [o for o in graph.objects(occupation, INCLUDE_COMPETENCE) if isinstance(o, Iri)]
    if not required:
        raise UnknownOccupationError(f"occupation has no required competencies: {occupation.value}")
    possessed = possessed_competences(graph, profile, scale)

    missing: list[GapEntry] = []
    under: list[UnderLeveled] = []
    satisfied: list[Iri] = []
    for comp in sorted(set(required), key=term_key):
        req_levels = [o for o in graph.objects(comp, REQUIERT_NIVEAU) if isinstance(o, Iri)]
        req_level = req_levels[0] if req_levels else None
        if comp not in possessed:
            missing.append(GapEntry(comp, req_level if level_aware else None))
            continue
        if level_aware and req_level is not None:
            have = possessed[comp]
            if have is not None:
                try:
                    if scale.rank(have) < scale.rank(req_level):
                        under.append(UnderLeveled(comp, have, req_level))
                        continue
                except UnknownLevelError:
                    pass
        satisfied.append(comp)
    return GapReport(profile, occupation, tuple(missing), tuple(under), tuple(satisfied))


# --- training recommendation -----------------------------------------


@dataclass(frozen=True)
class PlanStep:
    training: Iri
    covers: tuple[Iri, ...]
    start_offset_days: int


@dataclass(frozen=True)
class TrainingPlan:
    steps: tuple[PlanStep, ...]
    total_duration_days: int
    total_cost: float
    uncoverable: tuple[Iri, ...] = ()

    def trainings(self) -> tuple[Iri, ...]:
        return tuple(step.training for step in self.steps)

    def to_json(self) -> dict:
        return {
            "steps": [
                {
                    "training": s.training.value,
                    "covers": [c.value for c in s.covers],
                    "startOffsetDays": s.start_offset_days,
                }
                for s in self.steps
            ],
            "totalDurationDays": self.total_duration_days,
            "totalCost": self.total_cost,
            "uncoverable": [c.value for c in self.uncoverable],
        }


def training_duration_days(graph: Graph, training: Iri) -> int:
    for o in graph.objects(training, A_DUREE):
        if isinstance(o, Literal):
            try:
                return duration_days(parse_any_duration(o.lexical))
            except DurationParseError:
                continue
    return 0


def default_weight(graph: Graph) -> Callable[[Iri], float]:
    """Cost of a training: its duration in days (floor 1 so ratios stay
    defined for trainings without a declared duration)."""
    def weight(training: Iri) -> float:
        return float(max(1, training_duration_days(graph, training)))
    return weight


def _develops(graph: Graph, training: Iri) -> frozenset[Iri]:
    return frozenset(o for o in graph.objects(training, DEVELOPPE_COMPETENCE) if isinstance(o, Iri))


def _greedy_cover(
    universe: frozenset[Iri],
    develop: dict[Iri, frozenset[Iri]],
    weight: dict[Iri, float],
) -> list[Iri]:
    """Weighted greedy set cover: repeatedly take the training with the
    best newly-covered/weight ratio, ties broken by IRI."""
    uncovered = set(universe)
    chosen: list[Iri] = []
    candidates = sorted(develop, key=term_key)
    while uncovered:
        best: Optional[Iri] = None
        best_ratio = 0.0
        for training in candidates:
            if training in chosen:
                continue
            gain = len(develop[training] & uncovered)
            if gain == 0:
                continue
            ratio = gain / weight[training]
            if ratio > best_ratio + 1e-12:
                best = training
                best_ratio = ratio
        if best is None:
            break
        chosen.append(best)
        uncovered -= develop[best]
    return chosen


def _order_by_prerequisites(
    graph: Graph,
    chosen: Sequence[Iri],
    develop: dict[Iri, frozenset[Iri]],
    already_possessed: frozenset[Iri],
) -> list[tuple[Iri, int]]:
    """Topological order with start offsets: a training starts once every
    training developing one of its unmet prerequisites has finished."""
    providers: dict[Iri, list[Iri]] = {}
    for training in chosen:
        needs = [o for o in graph.objects(training, A_CONDITION_PREALABLE) if isinstance(o, Iri)]
        deps = []
        for comp in needs:
            if comp in already_possessed:
                continue
            deps.extend(u for u in chosen if u != training and comp in develop.get(u, frozenset()))
        providers[training] = sorted(set(deps), key=term_key)

    offsets: dict[Iri, int] = {}
    state: dict[Iri, int] = {}

    def visit(node: Iri) -> int:
        if state.get(node) == 1:
            raise PrerequisiteCycleError(f"prerequisite cycle through {node.value}")
        if node in offsets:
            return offsets[node]
        state[node] = 1
        start = 0
        for dep in providers[node]:
            start = max(start, visit(dep) + max(1, training_duration_days(graph, dep)))
        state[node] = 2
        offsets[node] = start
        return start

    for training in sorted(chosen, key=term_key):
        visit(training)
    return sorted(offsets.items(), key=lambda kv: (kv[1], term_key(kv[0])))


def _build_plan(
    graph: Graph,
    chosen: Sequence[Iri],
    universe: frozenset[Iri],
    develop: dict[Iri, frozenset[Iri]],
    weight: dict[Iri, float],
    already_possessed: frozenset[Iri],
    uncoverable: tuple[Iri, ...],
) -> TrainingPlan:
    ordered = _order_by_prerequisites(graph, chosen, develop, already_possessed)
    steps = tuple(
        PlanStep(training, tuple(sorted(develop[training] & universe, key=term_key)), offset)
        for training, offset in ordered
    )
    total = max(
        (offset + max(1, training_duration_days(graph, training)) for training, offset in ordered),
        default=0,
    )
    if not ordered:
        total = 0
    cost = sum(weight[t] for t in chosen)
    return TrainingPlan(steps, total, cost, uncoverable)


_ALTERNATIVE_ENUMERATION_LIMIT = 10


def recommend_trainings(
    graph: Graph,
    gap: GapReport,
    catalog: Optional[Sequence[Iri]] = None,
    weight: Optional[Callable[[Iri], float]] = None,
) -> list[TrainingPlan]:
    """Training plans covering the gap's missing competencies.

    The first plan is the greedy weighted cover, prerequisite-ordered.
    On small catalogs, alternative irredundant covers follow, ranked by
    (coverage desc, cost asc, duration asc, training IRIs).  Missing
    competencies no catalog training develops are reported as
    uncoverable on every plan.
    """
    if catalog is None:
        catalog = [s for s in graph.subjects(CMO_VOCABULARY.type_predicate, FORMATION)
                   if isinstance(s, Iri)]
    catalog = sorted(set(catalog), key=term_key)
    if not catalog:
        raise EmptyCatalogError("no trainings in catalog")
    weight_fn = weight if weight is not None else default_weight(graph)
    weights = {t: float(weight_fn(t)) for t in catalog}
    for training, w in weights.items():
        if w <= 0:
            raise ValueError(f"weights must be strictly positive: {training.value} -> {w}")

    missing = frozenset(gap.missing_competences())
    develop = {t: _develops(graph, t) for t in catalog}
    coverable = frozenset(c for c in missing if any(c in d for d in develop.values()))
    uncoverable = tuple(sorted(missing - coverable, key=term_key))
    possessed = frozenset(possessed_competences(graph, gap.profile))

    useful = {t: d & coverable for t, d in develop.items() if d & coverable}
    greedy = _greedy_cover(coverable, useful, weights) if coverable else []
    primary = _build_plan(graph, greedy, coverable, develop, weights, possessed, uncoverable)
    plans = [primary]

    if len(useful) <= _ALTERNATIVE_ENUMERATION_LIMIT and coverable:
        seen = {primary.trainings()}
        alternatives = []
        names = sorted(useful, key=term_key)
        for size in range(1, len(names) + 1):
            for combo in combinations(names, size):
                covered = frozenset().union(*(useful[t] for t in combo))
                if covered != coverable:
                    continue
                if any(covered == frozenset().union(
                        *(useful[t] for t in combo if t != skip), frozenset())
                       for skip in combo):
                    continue  # irredundant covers only
                plan = _build_plan(graph, list(combo), coverable, develop, weights,
                                   possessed, uncoverable)
                if plan.trainings() not in seen:
                    seen.add(plan.trainings())
                    alternatives.append(plan)
        alternatives.sort(key=lambda p: (
            -sum(len(s.covers) for s in p.steps),
            p.total_cost,
            p.total_duration_days,
            tuple(term_key(t) for t in p.trainings()),
        ))
        plans.extend(alternatives)
    return plans


# --- what-if simulation -----------------------------------------------


@dataclass(frozen=True)
class WhatIfState:
    """Hypothetical triples layered over an immutable base graph."""

    base: Graph
    overlay: frozenset[Triple] = frozenset()
    actions: tuple[tuple[str, str], ...] = ()  # (profile IRI, training IRI)

    def effective(self) -> Graph:
        return self.base.union(self.overlay)


def projected_instance(profile: Iri, training: Iri, competence: Iri) -> Iri:
    digest = hashlib.sha256(
        f"{profile.value}|{training.value}|{competence.value}|enroll".encode("utf-8")
    ).hexdigest()[:16]
    return Iri(f"{CMO}proj-{digest}")


def simulate_enrollment(state: WhatIfState, profile: Iri, training: Iri) -> WhatIfState:
    """Enroll a profile in a training, projecting the developed
    competencies into the overlay.  Prerequisites must be satisfied in
    the current effective graph; repeated enrollment is a no-op."""
    graph = state.effective()
    if not graph.match(training, CMO_VOCABULARY.type_predicate, FORMATION):
        raise UnknownTrainingError(f"unknown training: {training.value}")
    prerequisites = [o for o in graph.objects(training, A_CONDITION_PREALABLE) if isinstance(o, Iri)]
    possessed = frozenset(possessed_competences(graph, profile))
    unmet = sorted((c for c in prerequisites if c not in possessed), key=term_key)
    if unmet:
        raise PrerequisiteUnmetError(
            f"prerequisites not met for {training.value}",
            tuple(c.value for c in unmet),
        )
    additions: set[Triple] = {Triple(profile, SUIT_FORMATION, training)}
    output_levels = [o for o in graph.objects(training, DELIVRE_NIVEAU) if isinstance(o, Iri)]
    for competence in _develops(graph, training):
        node = projected_instance(profile, training, competence)
        additions.add(Triple(profile, POSSEDE_COMPETENCE, node))
        additions.add(Triple(node, EST_INSTANCE_DE, competence))
        additions.add(Triple(node, CMO_VOCABULARY.type_predicate, COMPETENCE))
        for level in output_levels:
            additions.add(Triple(node, A_NIVEAU_COMPETENCE, level))
    return WhatIfState(
        state.base,
        state.overlay | additions,
        state.actions + ((profile.value, training.value),),
    )
