"""Immutable terms, triples and an indexed in-memory graph.

The graph keeps three orderings (subject-first, predicate-first,
object-first) so pattern matching can start from whichever position is
bound.  Graphs are values: every mutation returns a new graph and any
number of readers may share one safely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .errors import MalformedTermError, MalformedTripleError, UnknownPrefixError
from .namespaces import DEFAULT_PREFIXES, XSD_STRING


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value:
            raise MalformedTermError("IRI must be non-empty")
        if any(ch.isspace() for ch in self.value):
            raise MalformedTermError(f"IRI contains whitespace: {self.value!r}")

    def n3(self) -> str:
        return f"<{self.value}>"


_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: Optional[str] = None

    def __post_init__(self):
        if not self.datatype:
            object.__setattr__(self, "datatype", XSD_STRING)

    def n3(self) -> str:
        quoted = f'"{_escape(self.lexical)}"'
        if self.lang:
            return f"{quoted}@{self.lang}"
        if self.datatype != XSD_STRING:
            return f"{quoted}^^<{self.datatype}>"
        return quoted


@dataclass(frozen=True, slots=True)
class Blank:
    node_id: str

    def __post_init__(self):
        if not self.node_id or any(ch.isspace() for ch in self.node_id):
            raise MalformedTermError(f"invalid blank node id: {self.node_id!r}")

    def n3(self) -> str:
        return f"_:{self.node_id}"


Term = Iri | Literal | Blank


def term_key(term: Optional[Term]) -> str:
    """Deterministic sort key; unbound cells sort first."""
    return term.n3() if term is not None else ""


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise MalformedTripleError("triple subject cannot be a literal")
        if not isinstance(self.predicate, Iri):
            raise MalformedTripleError("triple predicate must be an IRI")

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


def _triple_key(t: Triple) -> tuple[str, str, str]:
    return (t.subject.n3(), t.predicate.n3(), t.object.n3())


class Graph:
    """Immutable set of triples with subject/predicate/object-first indexes."""

    __slots__ = ("_triples", "_sorted", "_spo", "_pos", "_osp")

    def __init__(self, triples: Iterable[Triple] = ()):
        tset = frozenset(triples)
        self._triples = tset
        self._sorted = tuple(sorted(tset, key=_triple_key))
        spo: dict = {}
        pos: dict = {}
        osp: dict = {}
        for t in tset:
            spo.setdefault(t.subject, {}).setdefault(t.predicate, set()).add(t.object)
            pos.setdefault(t.predicate, {}).setdefault(t.object, set()).add(t.subject)
            osp.setdefault(t.object, {}).setdefault(t.subject, set()).add(t.predicate)
        self._spo = spo
        self._pos = pos
        self._osp = osp

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._sorted)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"Graph({len(self._triples)} triples)"

    def add(self, t: Triple) -> "Graph":
        if t in self._triples:
            return self
        return Graph(self._triples | {t})

    def remove(self, t: Triple) -> "Graph":
        if t not in self._triples:
            return self
        return Graph(self._triples - {t})

    def union(self, other: "Graph | Iterable[Triple]") -> "Graph":
        extra = other.triples if isinstance(other, Graph) else frozenset(other)
        if extra <= self._triples:
            return self
        return Graph(self._triples | extra)

    def match(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        object: Optional[Term] = None,
    ) -> list[Triple]:
        """Triples matching the bound positions; ``None`` is a wildcard.

        Starts from the index keyed on a bound position and returns the
        matches in lexicographic term order.
        """
        s, p, o = subject, predicate, object
        if s is not None and p is not None and o is not None:
            if o in self._spo.get(s, {}).get(p, ()):
                return [Triple(s, p, o)]
            return []
        out: list[Triple] = []
        if s is not None:
            for pp, objs in self._spo.get(s, {}).items():
                if p is not None and pp != p:
                    continue
                for oo in objs:
                    if o is None or oo == o:
                        out.append(Triple(s, pp, oo))
        elif o is not None:
            for ss, preds in self._osp.get(o, {}).items():
                for pp in preds:
                    if p is None or pp == p:
                        out.append(Triple(ss, pp, o))
        elif p is not None:
            for oo, subs in self._pos.get(p, {}).items():
                for ss in subs:
                    out.append(Triple(ss, p, oo))
        else:
            return list(self._sorted)
        out.sort(key=_triple_key)
        return out

    def subjects(self, predicate: Optional[Term] = None, object: Optional[Term] = None) -> list[Term]:
        seen = {t.subject for t in self.match(None, predicate, object)}
        return sorted(seen, key=term_key)

    def objects(self, subject: Optional[Term] = None, predicate: Optional[Term] = None) -> list[Term]:
        seen = {t.object for t in self.match(subject, predicate, None)}
        return sorted(seen, key=term_key)


@dataclass
class PrefixMap:
    """Prefix-label to namespace bindings; rebinding replaces."""

    bindings: dict[str, str] = field(default_factory=dict)

    @classmethod
    def default(cls) -> "PrefixMap":
        return cls(dict(DEFAULT_PREFIXES))

    def bind(self, prefix: str, namespace: str) -> None:
        self.bindings[prefix] = namespace

    def expand(self, qname: str) -> Iri:
        if ":" not in qname:
            raise UnknownPrefixError(f"not a prefixed name: {qname!r}")
        prefix, local = qname.split(":", 1)
        if prefix not in self.bindings:
            raise UnknownPrefixError(f"unknown prefix: {prefix!r}")
        return Iri(self.bindings[prefix] + local)

    def compact(self, iri: str) -> Optional[str]:
        """Shortest qname for an IRI under the current bindings, if any."""
        best: Optional[str] = None
        for prefix, ns in self.bindings.items():
            if iri.startswith(ns) and len(ns) < len(iri) + 1:
                local = iri[len(ns):]
                if not _valid_local(local):
                    continue
                candidate = f"{prefix}:{local}"
                if best is None or len(candidate) < len(best):
                    best = candidate
        return best


def _valid_local(local: str) -> bool:
    if local == "":
        return True
    if not (local[0].isalnum() or local[0] == "_"):
        return False
    if local.endswith("."):
        return False
    return all(ch.isalnum() or ch in "_.-" for ch in local)
