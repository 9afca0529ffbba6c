"""RDF term model and in-memory triple graph.

Everything downstream (ontology views, the rule engine, the service)
operates on :class:`RdfGraph`, an immutable ordered set of triples with
a prefix table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"

WELL_KNOWN_PREFIXES = {
    "rdf": RDF,
    "rdfs": RDFS,
    "owl": OWL,
    "xsd": XSD,
}


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("empty IRI")
        if any(c.isspace() for c in self.value):
            raise ValueError(f"IRI contains whitespace: {self.value!r}")
        if ":" not in self.value:
            raise ValueError(f"IRI has no scheme: {self.value!r}")

    def local_name(self) -> str:
        v = self.value
        for sep in ("#", "/", ":"):
            idx = v.rfind(sep)
            if idx != -1 and idx < len(v) - 1:
                return v[idx + 1 :]
        return v

    def namespace(self) -> str:
        v = self.value
        for sep in ("#", "/", ":"):
            idx = v.rfind(sep)
            if idx != -1 and idx < len(v) - 1:
                return v[: idx + 1]
        return v

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class BlankNode:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Optional[Iri] = None
    lang: Optional[str] = None

    def __post_init__(self) -> None:
        if self.datatype is not None and self.lang is not None:
            raise ValueError("literal cannot carry both datatype and language tag")

    def sort_key(self) -> tuple:
        return (
            self.lexical,
            self.datatype.value if self.datatype else "",
            self.lang or "",
        )

    def __lt__(self, other: "Literal") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.lang:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype:
            return f'"{self.lexical}"^^<{self.datatype}>'
        return f'"{self.lexical}"'


Term = Union[Iri, BlankNode, Literal]
SubjectTerm = Union[Iri, BlankNode]


def term_sort_key(t: Term) -> tuple:
    # Order term categories IRI < blank < literal, then within category.
    if isinstance(t, Iri):
        return (0, t.value, "", "")
    if isinstance(t, BlankNode):
        return (1, t.label, "", "")
    return (2,) + t.sort_key()


@dataclass(frozen=True)
class Triple:
    subject: SubjectTerm
    predicate: Iri
    object: Term

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise ValueError("literal cannot be a triple subject")
        if not isinstance(self.predicate, Iri):
            raise ValueError("triple predicate must be an IRI")

    def sort_key(self) -> tuple:
        return (
            term_sort_key(self.subject),
            self.predicate.value,
            term_sort_key(self.object),
        )


class RdfGraph:
    """Ordered, duplicate-free triple set. Immutable after construction."""

    def __init__(
        self,
        triples: Iterable[Triple] = (),
        prefixes: Optional[dict[str, str]] = None,
        base: Optional[Iri] = None,
    ) -> None:
        seen: set[Triple] = set()
        ordered: list[Triple] = []
        for t in triples:
            if t not in seen:
                seen.add(t)
                ordered.append(t)
        self._triples: tuple[Triple, ...] = tuple(ordered)
        self._set = frozenset(seen)
        self.prefixes: dict[str, str] = dict(prefixes or {})
        self.base = base

    @property
    def triples(self) -> tuple[Triple, ...]:
        return self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RdfGraph):
            return NotImplemented
        return self._set == other._set

    def __hash__(self) -> int:
        return hash(self._set)

    def query(
        self,
        s: Optional[Term] = None,
        p: Optional[Iri] = None,
        o: Optional[Term] = None,
    ) -> list[Triple]:
        """All triples matching the bound positions, in graph order."""
        return [
            t
            for t in self._triples
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        ]

    def subjects(self, p: Optional[Iri] = None, o: Optional[Term] = None) -> list[SubjectTerm]:
        out, seen = [], set()
        for t in self.query(None, p, o):
            if t.subject not in seen:
                seen.add(t.subject)
                out.append(t.subject)
        return out

    def objects(self, s: Optional[Term] = None, p: Optional[Iri] = None) -> list[Term]:
        out, seen = [], set()
        for t in self.query(s, p, None):
            if t.object not in seen:
                seen.add(t.object)
                out.append(t.object)
        return out


def iri(value: str) -> Iri:
    return Iri(value)


# Common vocabulary terms used across modules.
RDF_TYPE = Iri(RDF + "type")
RDF_PROPERTY = Iri(RDF + "Property")
RDF_FIRST = Iri(RDF + "first")
RDF_REST = Iri(RDF + "rest")
RDF_NIL = Iri(RDF + "nil")
RDFS_CLASS = Iri(RDFS + "Class")
RDFS_LABEL = Iri(RDFS + "label")
RDFS_COMMENT = Iri(RDFS + "comment")
RDFS_DOMAIN = Iri(RDFS + "domain")
RDFS_RANGE = Iri(RDFS + "range")
RDFS_SUBCLASSOF = Iri(RDFS + "subClassOf")
RDFS_SEEALSO = Iri(RDFS + "seeAlso")
RDFS_ISDEFINEDBY = Iri(RDFS + "isDefinedBy")
OWL_CLASS = Iri(OWL + "Class")
OWL_ONTOLOGY = Iri(OWL + "Ontology")
OWL_OBJECT_PROPERTY = Iri(OWL + "ObjectProperty")
OWL_DATATYPE_PROPERTY = Iri(OWL + "DatatypeProperty")
OWL_SYMMETRIC_PROPERTY = Iri(OWL + "SymmetricProperty")
OWL_ANNOTATION_PROPERTY = Iri(OWL + "AnnotationProperty")
OWL_NAMED_INDIVIDUAL = Iri(OWL + "NamedIndividual")
OWL_DISJOINT_WITH = Iri(OWL + "disjointWith")
OWL_EQUIVALENT_CLASS = Iri(OWL + "equivalentClass")
OWL_INVERSE_OF = Iri(OWL + "inverseOf")
OWL_VERSION_INFO = Iri(OWL + "versionInfo")
XSD_STRING = Iri(XSD + "string")
XSD_INTEGER = Iri(XSD + "integer")
XSD_DECIMAL = Iri(XSD + "decimal")
XSD_DOUBLE = Iri(XSD + "double")
XSD_BOOLEAN = Iri(XSD + "boolean")
