"""Competence-management knowledge base.

A typed graph of competencies, occupations, trainings, certifications
and learner profiles, with a SPARQL-subset query engine, rule-based
inference, skill-gap analysis and training planning.
"""

from importlib import resources

from .analysis import (
    GapReport,
    TrainingPlan,
    WhatIfState,
    missing_competences,
    profile_competences,
    recommend_trainings,
    simulate_enrollment,
)
from .inference import SaturationResult, certification_valid_at, saturate
from .model import Blank, Graph, Iri, Literal, PrefixMap, Term, Triple
from .privacy import PseudonymizationPolicy, pseudonymize
from .referential import import_referential_csv
from .schema import (
    CMO_VOCABULARY,
    DEFAULT_LEVEL_SCALE,
    LevelScale,
    ValidationReport,
    Vocabulary,
    subcompetence_closure,
    validate_graph,
)
from .sparql import SolutionTable, evaluate, parse_query
from .turtle import parse_document, serialize_graph

__version__ = "0.1.0"


def bundled_path(name: str):
    """Path to a bundled data file (fixture, sample queries, sample CSV)."""
    return resources.files("cmokb.data") / name


def load_case_study() -> Graph:
    """The bundled case-study knowledge base."""
    return parse_document(bundled_path("case_study.cmo.ttl").read_text(encoding="utf-8"))


__all__ = [
    "Blank", "CMO_VOCABULARY", "DEFAULT_LEVEL_SCALE", "GapReport", "Graph",
    "Iri", "LevelScale", "Literal", "PrefixMap", "PseudonymizationPolicy",
    "SaturationResult", "SolutionTable", "Term", "TrainingPlan", "Triple",
    "ValidationReport", "Vocabulary", "WhatIfState", "bundled_path",
    "certification_valid_at", "evaluate", "import_referential_csv",
    "load_case_study", "missing_competences", "parse_document", "parse_query",
    "profile_competences", "pseudonymize", "recommend_trainings", "saturate",
    "serialize_graph", "simulate_enrollment", "subcompetence_closure",
    "validate_graph",
]
