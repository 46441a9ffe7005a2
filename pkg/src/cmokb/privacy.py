"""Deterministic pseudonymization of personal instances.

Instances of the personal classes are renamed to keyed-digest IRIs and
their name-bearing literals are replaced by a fixed token.  The same
key always yields the same output, so pseudonymized snapshots stay
byte-stable; structure and all non-personal terms are untouched.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

from .errors import EmptyKeyError
from .model import Graph, Iri, Literal, Term, Triple
from .namespaces import CMO, RDFS_LABEL
from .schema import CMO_VOCABULARY, EXPERIENCE_PRO, INDIVIDU, PROFIL_APPRENANT, Vocabulary

REDACTED = "[REDACTED]"

DEFAULT_PERSONAL_CLASSES = frozenset({INDIVIDU, PROFIL_APPRENANT, EXPERIENCE_PRO})
DEFAULT_REDACTED_PROPERTIES = frozenset({Iri(RDFS_LABEL)})


@dataclass(frozen=True)
class PseudonymizationPolicy:
    key: str
    personal_classes: frozenset[Iri] = DEFAULT_PERSONAL_CLASSES
    redacted_properties: frozenset[Iri] = DEFAULT_REDACTED_PROPERTIES

    def __post_init__(self):
        if not self.key:
            raise EmptyKeyError("pseudonymization key must be non-empty")


def _pseudonym(key: str, iri: Iri) -> Iri:
    digest = hmac.new(key.encode("utf-8"), iri.value.encode("utf-8"), hashlib.sha256)
    return Iri(f"{CMO}anon-{digest.hexdigest()[:20]}")


def personal_instances(
    graph: Graph,
    policy: PseudonymizationPolicy,
    vocab: Vocabulary = CMO_VOCABULARY,
) -> frozenset[Iri]:
    """Instances typed (directly or via a subclass) as a personal class."""
    classes: set[Iri] = set()
    for cls in policy.personal_classes:
        classes.update(vocab.descendants(cls))
    found: set[Iri] = set()
    for cls in classes:
        for subject in graph.subjects(vocab.type_predicate, cls):
            if isinstance(subject, Iri):
                found.add(subject)
    return frozenset(found)


def pseudonymize(
    graph: Graph,
    policy: PseudonymizationPolicy,
    vocab: Vocabulary = CMO_VOCABULARY,
) -> Graph:
    personal = personal_instances(graph, policy, vocab)
    mapping = {iri: _pseudonym(policy.key, iri) for iri in personal}

    def rename(term: Term) -> Term:
        if isinstance(term, Iri) and term in mapping:
            return mapping[term]
        return term

    out: list[Triple] = []
    for t in graph:
        subject = rename(t.subject)
        obj = rename(t.object)
        if (
            t.subject in mapping
            and t.predicate in policy.redacted_properties
            and isinstance(obj, Literal)
        ):
            obj = Literal(REDACTED)
        out.append(Triple(subject, t.predicate, obj))
    return Graph(out)


def pseudonym_for(policy: PseudonymizationPolicy, iri: Iri) -> Iri:
    """The rewritten IRI a personal instance would get (for re-running
    queries that mention it by name)."""
    return _pseudonym(policy.key, iri)
