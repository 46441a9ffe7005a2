"""CSV import of occupational referentials (ROME/ESCO-style extracts).

Expected header:

    occupation_code,occupation_label,sector,competence_id,
    competence_label,competence_category,required_level

Each row links one occupation to one required competence; repeated
codes merge, and re-importing the same file adds nothing.
"""

from __future__ import annotations

import csv
import io
import unicodedata

from .errors import MalformedRowError
from .model import Graph, Iri, Literal, Triple
from .namespaces import CMO, RDFS_LABEL
from .schema import (
    A_SECTEUR_ACTIVITE,
    CMO_VOCABULARY,
    COMPETENCE,
    COMPETENCE_COGNITIVE,
    COMPETENCE_LINGUISTIQUE,
    COMPETENCE_SOCIALE,
    COMPETENCE_TECHNIQUE,
    DEFAULT_LEVEL_SCALE,
    INCLUDE_COMPETENCE,
    LevelScale,
    METIER,
    REQUIERT_NIVEAU,
    SECTEUR_ACTIVITE,
)

COLUMNS = (
    "occupation_code",
    "occupation_label",
    "sector",
    "competence_id",
    "competence_label",
    "competence_category",
    "required_level",
)

_CATEGORY_CLASSES = {
    "sociale": COMPETENCE_SOCIALE,
    "cognitive": COMPETENCE_COGNITIVE,
    "technique": COMPETENCE_TECHNIQUE,
    "linguistique": COMPETENCE_LINGUISTIQUE,
}


def _slug(label: str) -> str:
    decomposed = unicodedata.normalize("NFKD", label)
    return "".join(ch for ch in decomposed if ch.isalnum())


def _code_iri(code: str, line: int, column: str) -> Iri:
    if not code or any(ch.isspace() for ch in code):
        raise MalformedRowError(line, f"{column} must be non-empty without spaces: {code!r}")
    return Iri(CMO + code)


def _resolve_level(value: str, scale: LevelScale, line: int) -> Iri:
    for level in scale.levels:
        if value == level.iri.value or value in level.labels:
            return level.iri
        if level.iri.value.endswith("#" + value):
            return level.iri
    raise MalformedRowError(line, f"unknown level: {value!r}")


def import_referential_csv(
    text: str,
    scale: LevelScale = DEFAULT_LEVEL_SCALE,
) -> Graph:
    """Build a graph from referential rows.

    Per row: occupation typing and label, sector link with sector
    typing, the occupation->competence requirement, competence typing
    per category plus label, and an optional requiertNiveau annotation.
    """
    reader = csv.reader(io.StringIO(text.lstrip("﻿")))
    rows = list(reader)
    if not rows:
        raise MalformedRowError(1, "empty document, expected a header row")
    header = tuple(cell.strip() for cell in rows[0])
    if header != COLUMNS:
        raise MalformedRowError(1, f"header must be {','.join(COLUMNS)}")

    rdf_type = CMO_VOCABULARY.type_predicate
    triples: list[Triple] = []
    for idx, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(COLUMNS):
            raise MalformedRowError(idx, f"expected {len(COLUMNS)} columns, got {len(row)}")
        code, occ_label, sector, comp_id, comp_label, category, level = (c.strip() for c in row)
        occupation = _code_iri(code, idx, "occupation_code")
        competence = _code_iri(comp_id, idx, "competence_id")
        triples.append(Triple(occupation, rdf_type, METIER))
        if occ_label:
            triples.append(Triple(occupation, Iri(RDFS_LABEL), Literal(occ_label)))
        if sector:
            sector_iri = Iri(CMO + _slug(sector))
            triples.append(Triple(sector_iri, rdf_type, SECTEUR_ACTIVITE))
            triples.append(Triple(occupation, A_SECTEUR_ACTIVITE, sector_iri))
        triples.append(Triple(occupation, INCLUDE_COMPETENCE, competence))
        if category:
            cls = _CATEGORY_CLASSES.get(category.lower())
            if cls is None:
                raise MalformedRowError(idx, f"unknown category: {category!r}")
        else:
            cls = COMPETENCE
        triples.append(Triple(competence, rdf_type, cls))
        if comp_label:
            triples.append(Triple(competence, Iri(RDFS_LABEL), Literal(comp_label)))
        if level:
            triples.append(Triple(competence, REQUIERT_NIVEAU, _resolve_level(level, scale, idx)))
    return Graph(triples)
