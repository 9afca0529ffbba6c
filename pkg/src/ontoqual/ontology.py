"""OWL-level projection of an RDF graph: the element model that rule
subjects range over, plus enrichment flagging (base-vs-enriched diff or
an explicit manifest of enriched IRIs)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .rdf import (
    OWL_ANNOTATION_PROPERTY,
    OWL_CLASS,
    OWL_DATATYPE_PROPERTY,
    OWL_DISJOINT_WITH,
    OWL_EQUIVALENT_CLASS,
    OWL_INVERSE_OF,
    OWL_NAMED_INDIVIDUAL,
    OWL_OBJECT_PROPERTY,
    OWL_ONTOLOGY,
    OWL_SYMMETRIC_PROPERTY,
    OWL_VERSION_INFO,
    RDF_PROPERTY,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_COMMENT,
    RDFS_DOMAIN,
    RDFS_ISDEFINEDBY,
    RDFS_LABEL,
    RDFS_RANGE,
    RDFS_SEEALSO,
    RDFS_SUBCLASSOF,
    Iri,
    Literal,
    RdfGraph,
    Term,
)


class UnknownElementError(Exception):
    def __init__(self, iris: list[Iri]) -> None:
        super().__init__("manifest IRIs not in ontology: " + ", ".join(i.value for i in iris))
        self.iris = iris


class ElementKind(enum.Enum):
    ONTOLOGY_METADATA = "OntologyMetadata"
    CLASS = "Class"
    INSTANCE = "Instance"
    PROPERTY = "Property"
    OBJECT_PROPERTY = "ObjectProperty"
    DATATYPE_PROPERTY = "DatatypeProperty"
    SYMMETRIC_PROPERTY = "SymmetricProperty"
    ONTOLOGICAL_ELEMENT = "OntologicalElement"


class Relation(enum.Enum):
    DOMAIN = "Domain"
    RANGE = "Range"
    SUBCLASS = "Subclass"
    SUPERCLASS = "Superclass"
    DISJOINT_CLASS = "DisjointClass"
    EQUIVALENT_CLASS = "EquivalentClass"
    INVERSE_PROPERTY = "InverseProperty"


_CLASS_TYPES = {OWL_CLASS, RDFS_CLASS}
_PROPERTY_TYPES = {
    OWL_OBJECT_PROPERTY: ElementKind.OBJECT_PROPERTY,
    OWL_DATATYPE_PROPERTY: ElementKind.DATATYPE_PROPERTY,
    OWL_SYMMETRIC_PROPERTY: ElementKind.SYMMETRIC_PROPERTY,
    RDF_PROPERTY: ElementKind.PROPERTY,
}
# rdf:type objects that never make the subject an individual
_META_TYPES = _CLASS_TYPES | set(_PROPERTY_TYPES) | {
    OWL_ONTOLOGY,
    OWL_ANNOTATION_PROPERTY,
    OWL_NAMED_INDIVIDUAL,
}

# Annotation predicates (label/comment plus the common OWL/RDFS ones)
ANNOTATION_PREDICATES = {
    RDFS_LABEL,
    RDFS_COMMENT,
    RDFS_SEEALSO,
    RDFS_ISDEFINEDBY,
    OWL_VERSION_INFO,
}

_RELATION_PREDICATES = {
    Relation.DOMAIN: RDFS_DOMAIN,
    Relation.RANGE: RDFS_RANGE,
    Relation.SUPERCLASS: RDFS_SUBCLASSOF,
    Relation.SUBCLASS: RDFS_SUBCLASSOF,  # reversed direction
    Relation.DISJOINT_CLASS: OWL_DISJOINT_WITH,
    Relation.EQUIVALENT_CLASS: OWL_EQUIVALENT_CLASS,
    Relation.INVERSE_PROPERTY: OWL_INVERSE_OF,
}


@dataclass
class OntologyElement:
    iri: Iri
    kind: ElementKind
    labels: list[Literal] = field(default_factory=list)
    comments: list[Literal] = field(default_factory=list)
    annotations: list[tuple[Iri, Literal]] = field(default_factory=list)
    enriched: bool = False


class OntologyView:
    """Immutable OWL projection of a graph: typed elements, relation
    indexes, and enrichment flags."""

    def __init__(self, graph: RdfGraph) -> None:
        self.graph = graph
        self.elements: dict[Iri, OntologyElement] = {}
        self._kinds: dict[ElementKind, set[Iri]] = {k: set() for k in ElementKind}
        self.enriched_relations: set[tuple[str, str, str]] = set()
        self._build()

    def _build(self) -> None:
        declared_classes: set[Iri] = set()
        for t in self.graph.query(None, RDF_TYPE, None):
            if isinstance(t.subject, Iri) and isinstance(t.object, Iri) and t.object in _CLASS_TYPES:
                declared_classes.add(t.subject)

        for t in self.graph.query(None, RDF_TYPE, None):
            s, o = t.subject, t.object
            if not isinstance(s, Iri) or not isinstance(o, Iri):
                continue
            if o in _CLASS_TYPES:
                self._add(s, ElementKind.CLASS)
            elif o in _PROPERTY_TYPES:
                kind = _PROPERTY_TYPES[o]
                self._add(s, kind)
                self._kinds[ElementKind.PROPERTY].add(s)
            elif o == OWL_ONTOLOGY:
                self._add(s, ElementKind.ONTOLOGY_METADATA)
            elif o == OWL_NAMED_INDIVIDUAL or o not in _META_TYPES:
                # Typed by a class (declared or external): an individual.
                if s not in self._kinds[ElementKind.CLASS]:
                    self._add(s, ElementKind.INSTANCE)

        for el in self.elements.values():
            for t in self.graph.query(el.iri, None, None):
                if isinstance(t.object, Literal) and t.predicate in ANNOTATION_PREDICATES:
                    el.annotations.append((t.predicate, t.object))
                    if t.predicate == RDFS_LABEL:
                        el.labels.append(t.object)
                    elif t.predicate == RDFS_COMMENT:
                        el.comments.append(t.object)

    def _add(self, iri: Iri, kind: ElementKind) -> None:
        if iri not in self.elements:
            self.elements[iri] = OntologyElement(iri, kind)
        self._kinds[kind].add(iri)
        self._kinds[ElementKind.ONTOLOGICAL_ELEMENT].add(iri)

    def subject_elements(self, kind: ElementKind) -> list[OntologyElement]:
        """Elements matched by a rule subject keyword, in insertion order.
        Property covers the object/datatype/symmetric subkinds;
        OntologicalElement covers everything."""
        if kind == ElementKind.PROPERTY:
            wanted = (
                self._kinds[ElementKind.PROPERTY]
                | self._kinds[ElementKind.OBJECT_PROPERTY]
                | self._kinds[ElementKind.DATATYPE_PROPERTY]
                | self._kinds[ElementKind.SYMMETRIC_PROPERTY]
            )
        else:
            wanted = self._kinds[kind]
        return [el for iri, el in self.elements.items() if iri in wanted]

    def related(self, iri: Iri, relation: Relation) -> list[Term]:
        """Relation neighbors of an element, graph order. Subclass is the
        incoming direction of rdfs:subClassOf; all others follow the
        triple direction."""
        pred = _RELATION_PREDICATES[relation]
        if relation == Relation.SUBCLASS:
            return list(self.graph.subjects(pred, iri))
        return self.graph.objects(iri, pred)

    def relation_edges(self) -> list[tuple[Iri, Iri, Term]]:
        """All (subject, predicate, object) relation triples in the view."""
        preds = set(_RELATION_PREDICATES.values())
        return [
            (t.subject, t.predicate, t.object)
            for t in self.graph
            if t.predicate in preds and isinstance(t.subject, Iri)
        ]

    def enriched_elements(self) -> list[OntologyElement]:
        return [el for el in self.elements.values() if el.enriched]


def build_view(graph: RdfGraph) -> OntologyView:
    """Project a graph into its OWL element view. All enrichment flags
    start false; untyped IRIs are absent from the element map."""
    return OntologyView(graph)


def _relation_key(edge: tuple) -> tuple[str, str, str]:
    s, p, o = edge
    return (str(s), str(p), str(o))


def enrichment_diff(base: OntologyView, enriched: OntologyView) -> OntologyView:
    """Flag as enriched every element of `enriched` absent from `base`,
    and every relation edge present only in `enriched`. Returns a fresh
    view over the enriched graph."""
    out = OntologyView(enriched.graph)
    base_iris = set(base.elements)
    for iri, el in out.elements.items():
        el.enriched = iri not in base_iris
    base_edges = {_relation_key(e) for e in base.relation_edges()}
    for edge in out.relation_edges():
        key = _relation_key(edge)
        if key not in base_edges:
            out.enriched_relations.add(key)
    return out


def apply_manifest(view: OntologyView, manifest: Iterable[Iri]) -> OntologyView:
    """Flag exactly the manifest IRIs as enriched. Raises
    UnknownElementError if any manifest IRI is absent from the view."""
    manifest = list(manifest)
    missing = [i for i in manifest if i not in view.elements]
    if missing:
        raise UnknownElementError(missing)
    out = OntologyView(view.graph)
    flag = set(manifest)
    for iri, el in out.elements.items():
        el.enriched = iri in flag
    return out
