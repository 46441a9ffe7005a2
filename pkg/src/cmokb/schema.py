"""CMO vocabulary: classes, properties, proficiency scale and structural
validation of graphs against them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dates import parse_date, parse_duration
from .errors import SubCompetenceCycleError, UnknownLevelError
from .model import Graph, Iri, Literal, Term, Triple, term_key
from .namespaces import (
    CMO,
    RDF_TYPE,
    RDF_W3C,
    RDFS_CLASS,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASS_OF,
    XSD_DATE,
    XSD_DURATION,
    XSD_INTEGER,
)


def cmo(local: str) -> Iri:
    return Iri(CMO + local)


# --- classes ----------------------------------------------------------

COMPETENCE = cmo("Competence")
COMPETENCE_SOCIALE = cmo("CompetenceSociale")
COMPETENCE_COGNITIVE = cmo("CompetenceCognitive")
COMPETENCE_TECHNIQUE = cmo("CompetenceTechnique")
COMPETENCE_LINGUISTIQUE = cmo("CompetenceLinguistique")
REFERENTIEL = cmo("ReferentielCompetence")
REFERENTIEL_NATIONAL = cmo("ReferentielNational")
REFERENTIEL_INTERNATIONAL = cmo("ReferentielInternational")
METIER = cmo("Metier")
SECTEUR_ACTIVITE = cmo("SecteurActivite")
CONTEXTE_TRAVAIL = cmo("ContexteTravail")
ENJEU_CLE = cmo("EnjeuCle")
THEME_CLE = cmo("ThemeCle")
INDIVIDU = cmo("Individu")
PROFIL_APPRENANT = cmo("ProfilApprenant")
NIVEAU_COMPETENCE = cmo("NiveauCompetence")
FORMATION = cmo("Formation")
ORGANISATION = cmo("Organisation")
CERTIFICATION = cmo("Certification")
EXPERIENCE_PRO = cmo("ExperienceProfessionnelle")
POSTE = cmo("Poste")
ENTITE_TEMPORELLE = cmo("EntiteTemporelle")

# --- properties -------------------------------------------------------

A_SOUS_COMPETENCE = cmo("aSousCompetence")
FAIT_PARTIE_DU_REFERENTIEL = cmo("faitPartieDuReferentiel")
A_SECTEUR_ACTIVITE = cmo("aSecteurActivite")
A_ENJEU_CLE = cmo("aEnjeuCle")
A_THEME_CLE = cmo("aThemeCle")
A_CONTEXTE_TRAVAIL = cmo("aContexteTravail")
POSSEDE_COMPETENCE = cmo("possedeCompetence")
POSSEDE_UNE_COMPETENCE = cmo("possedeUneCompetence")  # alias, normalized at ingestion
A_NIVEAU_COMPETENCE = cmo("aNiveauCompetence")
A_SCORE = cmo("aScore")
A_SCORE_MAX = cmo("aScoreMax")
INCLUDE_COMPETENCE = cmo("includeCompetence")
SUIT_FORMATION = cmo("suitFormation")
DISPENSEE_PAR = cmo("dispenseePar")
A_CONDITION_PREALABLE = cmo("aConditionPrealable")
VALIDE_COMPETENCE = cmo("valideCompetence")
EMISE_PAR_ORGANISATION = cmo("emiseParOrganisation")
A_DATE_EMISSION = cmo("aDateEmission")
A_DUREE_DE_VALIDITE = cmo("aDureeDeValidite")
POSSEDE_EXPERIENCE = cmo("possedeExperience")
A_POSTE_OCCUPE = cmo("aPosteOccupe")
MAITRISE_COMPETENCE = cmo("maitriseCompetence")
DEVELOPPE_COMPETENCE = cmo("developpeCompetence")
A_DATE_DEBUT = cmo("aDateDebut")
A_DATE_FIN = cmo("aDateFin")
A_DUREE = cmo("aDuree")
# Extensions required by inference, gap analysis and what-if projection.
EST_INSTANCE_DE = cmo("estInstanceDe")
A_CERTIFICATION = cmo("aCertification")
REQUIERT_NIVEAU = cmo("requiertNiveau")
DELIVRE_NIVEAU = cmo("delivreNiveau")


@dataclass(frozen=True)
class PropertySpec:
    iri: Iri
    domain: Iri
    range: Iri | str  # class IRI, or datatype IRI string for literal-valued properties

    @property
    def literal_range(self) -> bool:
        return isinstance(self.range, str)


@dataclass(frozen=True)
class Vocabulary:
    classes: frozenset[Iri]
    properties: dict[Iri, PropertySpec]
    subclass_edges: frozenset[tuple[Iri, Iri]]
    type_predicate: Iri = Iri(RDF_TYPE)

    def superclasses(self, cls: Iri) -> frozenset[Iri]:
        """All ancestors of ``cls`` including itself."""
        out = {cls}
        frontier = [cls]
        while frontier:
            current = frontier.pop()
            for child, parent in self.subclass_edges:
                if child == current and parent not in out:
                    out.add(parent)
                    frontier.append(parent)
        return frozenset(out)

    def descendants(self, cls: Iri) -> frozenset[Iri]:
        out = {cls}
        frontier = [cls]
        while frontier:
            current = frontier.pop()
            for child, parent in self.subclass_edges:
                if parent == current and child not in out:
                    out.add(child)
                    frontier.append(child)
        return frozenset(out)

    def is_subclass_of(self, cls: Iri, ancestor: Iri) -> bool:
        return ancestor in self.superclasses(cls)


def _build_cmo_vocabulary() -> Vocabulary:
    classes = frozenset({
        COMPETENCE, COMPETENCE_SOCIALE, COMPETENCE_COGNITIVE, COMPETENCE_TECHNIQUE,
        COMPETENCE_LINGUISTIQUE, REFERENTIEL, REFERENTIEL_NATIONAL,
        REFERENTIEL_INTERNATIONAL, METIER, SECTEUR_ACTIVITE, CONTEXTE_TRAVAIL,
        ENJEU_CLE, THEME_CLE, INDIVIDU, PROFIL_APPRENANT, NIVEAU_COMPETENCE,
        FORMATION, ORGANISATION, CERTIFICATION, EXPERIENCE_PRO, POSTE,
        ENTITE_TEMPORELLE,
    })
    subclass = frozenset({
        (COMPETENCE_SOCIALE, COMPETENCE),
        (COMPETENCE_COGNITIVE, COMPETENCE),
        (COMPETENCE_TECHNIQUE, COMPETENCE),
        (COMPETENCE_LINGUISTIQUE, COMPETENCE),
        (REFERENTIEL_NATIONAL, REFERENTIEL),
        (REFERENTIEL_INTERNATIONAL, REFERENTIEL),
        (PROFIL_APPRENANT, INDIVIDU),
        (FORMATION, ENTITE_TEMPORELLE),
        (CERTIFICATION, ENTITE_TEMPORELLE),
        (EXPERIENCE_PRO, ENTITE_TEMPORELLE),
    })
    props = [
        PropertySpec(A_SOUS_COMPETENCE, COMPETENCE, COMPETENCE),
        PropertySpec(FAIT_PARTIE_DU_REFERENTIEL, COMPETENCE, REFERENTIEL),
        PropertySpec(A_SECTEUR_ACTIVITE, METIER, SECTEUR_ACTIVITE),
        PropertySpec(A_ENJEU_CLE, METIER, ENJEU_CLE),
        PropertySpec(A_THEME_CLE, METIER, THEME_CLE),
        PropertySpec(A_CONTEXTE_TRAVAIL, METIER, CONTEXTE_TRAVAIL),
        PropertySpec(POSSEDE_COMPETENCE, INDIVIDU, COMPETENCE),
        PropertySpec(A_NIVEAU_COMPETENCE, COMPETENCE, NIVEAU_COMPETENCE),
        PropertySpec(A_SCORE, NIVEAU_COMPETENCE, XSD_INTEGER),
        PropertySpec(A_SCORE_MAX, NIVEAU_COMPETENCE, XSD_INTEGER),
        PropertySpec(INCLUDE_COMPETENCE, METIER, COMPETENCE),
        PropertySpec(SUIT_FORMATION, INDIVIDU, FORMATION),
        PropertySpec(DISPENSEE_PAR, FORMATION, ORGANISATION),
        PropertySpec(A_CONDITION_PREALABLE, FORMATION, COMPETENCE),
        PropertySpec(VALIDE_COMPETENCE, CERTIFICATION, COMPETENCE),
        PropertySpec(EMISE_PAR_ORGANISATION, CERTIFICATION, ORGANISATION),
        PropertySpec(A_DATE_EMISSION, CERTIFICATION, XSD_DATE),
        PropertySpec(A_DUREE_DE_VALIDITE, CERTIFICATION, XSD_DURATION),
        PropertySpec(POSSEDE_EXPERIENCE, INDIVIDU, EXPERIENCE_PRO),
        PropertySpec(A_POSTE_OCCUPE, EXPERIENCE_PRO, POSTE),
        PropertySpec(MAITRISE_COMPETENCE, EXPERIENCE_PRO, COMPETENCE),
        PropertySpec(DEVELOPPE_COMPETENCE, FORMATION, COMPETENCE),
        PropertySpec(A_DATE_DEBUT, ENTITE_TEMPORELLE, XSD_DATE),
        PropertySpec(A_DATE_FIN, ENTITE_TEMPORELLE, XSD_DATE),
        PropertySpec(A_DUREE, ENTITE_TEMPORELLE, XSD_DURATION),
        PropertySpec(EST_INSTANCE_DE, COMPETENCE, COMPETENCE),
        PropertySpec(A_CERTIFICATION, INDIVIDU, CERTIFICATION),
        PropertySpec(REQUIERT_NIVEAU, COMPETENCE, NIVEAU_COMPETENCE),
        PropertySpec(DELIVRE_NIVEAU, FORMATION, NIVEAU_COMPETENCE),
    ]
    return Vocabulary(classes, {p.iri: p for p in props}, subclass)


CMO_VOCABULARY = _build_cmo_vocabulary()


# --- proficiency scale ------------------------------------------------


@dataclass(frozen=True)
class Level:
    iri: Iri
    labels: tuple[str, ...] = ()
    score: Optional[int] = None
    score_max: Optional[int] = None

    def __post_init__(self):
        if self.score is not None and self.score_max is not None:
            if not 0 <= self.score <= self.score_max:
                raise UnknownLevelError(
                    f"level {self.iri.value}: score {self.score} outside [0, {self.score_max}]"
                )


@dataclass(frozen=True)
class LevelScale:
    """Strict total order over proficiency levels.

    ``rank`` accepts a level IRI or any of its label synonyms, so graphs
    may annotate either way.
    """

    levels: tuple[Level, ...]

    def __post_init__(self):
        iris = [lvl.iri for lvl in self.levels]
        if len(set(iris)) != len(iris):
            raise UnknownLevelError("duplicate level in scale")

    def rank(self, term: Term) -> int:
        for idx, lvl in enumerate(self.levels):
            if isinstance(term, Iri) and term == lvl.iri:
                return idx
            if isinstance(term, Literal) and term.lexical in lvl.labels:
                return idx
        raise UnknownLevelError(f"level not declared in scale: {term.n3()}")

    def compare(self, a: Term, b: Term) -> int:
        """-1, 0 or 1 as a is below, at or above b."""
        ra, rb = self.rank(a), self.rank(b)
        return (ra > rb) - (ra < rb)


DEFAULT_LEVEL_SCALE = LevelScale((
    Level(cmo("Niveau01"), ("Débutant", "Basique"), 1, 4),
    Level(cmo("Niveau02"), ("Intermédiaire",), 2, 4),
    Level(cmo("Niveau03"), ("Avancé",), 3, 4),
    Level(cmo("Niveau04"), ("Expert",), 4, 4),
))


def level_scale_from_json(data: dict) -> LevelScale:
    levels = []
    for entry in data["levels"]:
        levels.append(Level(
            Iri(entry["iri"]),
            tuple(entry.get("labels", ())),
            entry.get("score"),
            entry.get("scoreMax"),
        ))
    return LevelScale(tuple(levels))


# --- validation -------------------------------------------------------


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    subject: str
    detail: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.subject}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[ValidationIssue, ...]
    warnings: tuple[ValidationIssue, ...]

    @property
    def is_valid(self) -> bool:
        return not self.errors


def _asserted_types(graph: Graph, vocab: Vocabulary, node: Term) -> set[Iri]:
    if isinstance(node, Literal):
        return set()
    return {o for o in graph.objects(node, vocab.type_predicate) if isinstance(o, Iri)}


def _check_literal(spec: PropertySpec, obj: Literal) -> Optional[str]:
    if spec.range == XSD_INTEGER:
        try:
            int(obj.lexical)
        except ValueError:
            return f"expected integer, got {obj.lexical!r}"
    elif spec.range == XSD_DATE:
        try:
            parse_date(obj.lexical)
        except Exception:
            return f"expected ISO date, got {obj.lexical!r}"
    elif spec.range == XSD_DURATION:
        if obj.lexical.lstrip().startswith("-"):
            return f"negative duration {obj.lexical!r}"
        try:
            parse_duration(obj.lexical)
        except Exception:
            return f"expected ISO duration, got {obj.lexical!r}"
    return None


def validate_graph(graph: Graph, vocab: Vocabulary = CMO_VOCABULARY) -> ValidationReport:
    errors: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    def err(code: str, subject: Term, detail: str):
        errors.append(ValidationIssue(code, subject.n3(), detail))

    def warn(code: str, subject: Term, detail: str):
        warnings.append(ValidationIssue(code, subject.n3(), detail))

    for t in graph:
        pred = t.predicate
        if pred.value == RDF_W3C + "type":
            warn("rdf-namespace-variant", t.subject,
                 "rdf:type under the W3C namespace will not join with this knowledge base")
            continue
        if pred == POSSEDE_UNE_COMPETENCE:
            warn("alias-predicate", t.subject,
                 "possedeUneCompetence should be normalized to possedeCompetence")
            continue
        if pred == vocab.type_predicate:
            continue
        spec = vocab.properties.get(pred)
        if spec is None:
            if pred.value.startswith(CMO):
                warn("unknown-property", t.subject, f"predicate {pred.value} is not in the catalog")
            continue
        subject_types = _asserted_types(graph, vocab, t.subject)
        if subject_types and not any(vocab.is_subclass_of(st, spec.domain) for st in subject_types):
            err("domain-violation", t.subject,
                f"{pred.value} expects subject of class {spec.domain.value}")
        if spec.literal_range:
            if not isinstance(t.object, Literal):
                err("range-violation", t.subject, f"{pred.value} expects a literal value")
            else:
                problem = _check_literal(spec, t.object)
                if problem:
                    code = "negative-duration" if "negative" in problem else "invalid-literal"
                    err(code, t.subject, f"{pred.value}: {problem}")
        else:
            if isinstance(t.object, Literal):
                err("range-violation", t.subject, f"{pred.value} expects a resource, got a literal")
            else:
                object_types = _asserted_types(graph, vocab, t.object)
                if object_types and not any(
                    vocab.is_subclass_of(ot, spec.range) for ot in object_types
                ):
                    err("range-violation", t.object,
                        f"object of {pred.value} should be a {spec.range.value}")

    # score within bounds, per subject carrying both values
    for subject in {t.subject for t in graph.match(None, A_SCORE, None)}:
        scores = [o for o in graph.objects(subject, A_SCORE) if isinstance(o, Literal)]
        maxima = [o for o in graph.objects(subject, A_SCORE_MAX) if isinstance(o, Literal)]
        for s in scores:
            for m in maxima:
                try:
                    if int(s.lexical) > int(m.lexical):
                        err("score-exceeds-max", subject, f"score {s.lexical} > max {m.lexical}")
                except ValueError:
                    pass  # already flagged as invalid-literal

    # start date must not be after end date
    for subject in {t.subject for t in graph.match(None, A_DATE_DEBUT, None)}:
        starts = [o for o in graph.objects(subject, A_DATE_DEBUT) if isinstance(o, Literal)]
        ends = [o for o in graph.objects(subject, A_DATE_FIN) if isinstance(o, Literal)]
        for s in starts:
            for e in ends:
                try:
                    if parse_date(s.lexical) > parse_date(e.lexical):
                        err("date-order", subject, f"start {s.lexical} after end {e.lexical}")
                except Exception:
                    pass

    for cycle in _subcompetence_cycles(graph):
        errors.append(ValidationIssue(
            "cyclic-subcompetence",
            cycle[0].n3(),
            "cycle: " + " -> ".join(c.n3() for c in cycle),
        ))

    return ValidationReport(tuple(errors), tuple(warnings))


def _subcompetence_edges(graph: Graph) -> dict[Term, list[Term]]:
    edges: dict[Term, list[Term]] = {}
    for t in graph.match(None, A_SOUS_COMPETENCE, None):
        edges.setdefault(t.subject, []).append(t.object)
    for children in edges.values():
        children.sort(key=term_key)
    return edges


def _subcompetence_cycles(graph: Graph) -> list[list[Term]]:
    edges = _subcompetence_edges(graph)
    cycles: list[list[Term]] = []
    color: dict[Term, int] = {}  # 0 unseen / 1 in-stack / 2 done
    stack: list[Term] = []

    def visit(node: Term):
        color[node] = 1
        stack.append(node)
        for child in edges.get(node, ()):
            state = color.get(child, 0)
            if state == 1:
                idx = stack.index(child)
                cycles.append(stack[idx:] + [child])
            elif state == 0:
                visit(child)
        stack.pop()
        color[node] = 2

    for node in sorted(edges, key=term_key):
        if color.get(node, 0) == 0:
            visit(node)
    return cycles


def subcompetence_closure(graph: Graph, competence: Iri) -> frozenset[Iri]:
    """The competence plus every descendant via aSousCompetence."""
    edges = _subcompetence_edges(graph)
    out: set[Iri] = set()
    stack: list[Term] = [competence]
    in_path: set[Term] = set()

    def visit(node: Term, path: set[Term]):
        if node in path:
            raise SubCompetenceCycleError(f"aSousCompetence cycle through {node.n3()}")
        if isinstance(node, Iri):
            out.add(node)
        for child in edges.get(node, ()):
            visit(child, path | {node})

    visit(competence, set())
    return frozenset(out)


def vocabulary_graph(vocab: Vocabulary = CMO_VOCABULARY) -> Graph:
    """The vocabulary itself as triples, for export alongside instance data."""
    triples: list[Triple] = []
    rdfs_class = Iri(RDFS_CLASS)
    for cls in vocab.classes:
        triples.append(Triple(cls, vocab.type_predicate, rdfs_class))
    for child, parent in vocab.subclass_edges:
        triples.append(Triple(child, Iri(RDFS_SUBCLASS_OF), parent))
    for spec in vocab.properties.values():
        triples.append(Triple(spec.iri, Iri(RDFS_DOMAIN), spec.domain))
        rng = Iri(spec.range) if isinstance(spec.range, str) else spec.range
        triples.append(Triple(spec.iri, Iri(RDFS_RANGE), rng))
    return Graph(triples)
