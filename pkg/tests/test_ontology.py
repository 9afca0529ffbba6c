import re

import pytest

from ontoqual.ontology import (
    ElementKind,
    Relation,
    UnknownElementError,
    apply_manifest,
    build_view,
    enrichment_diff,
)
from ontoqual.rdf import Iri, RdfGraph
from ontoqual.turtle import parse_turtle

from conftest import read_fixture

PIZZA = "http://example.org/pizza#"
SMALL = "http://example.org/small#"


def view_of(name: str):
    return build_view(parse_turtle(read_fixture(name)))


class TestBuildView:
    def test_empty_graph(self):
        assert build_view(RdfGraph()).elements == {}

    def test_fig1_property_with_domain_no_range(self):
        view = view_of("fig1.ttl")
        prop = Iri(PIZZA + "hasTopping")
        assert view.elements[prop].kind == ElementKind.OBJECT_PROPERTY
        assert view.related(prop, Relation.DOMAIN) == [Iri(PIZZA + "Pizza")]
        assert view.related(prop, Relation.RANGE) == []

    def test_counts_match_triple_scan_oracle(self):
        src = read_fixture("pizza_small.ttl")
        view = build_view(parse_turtle(src))
        classes = len(re.findall(r"a owl:Class", src))
        props = len(re.findall(r"a owl:ObjectProperty", src))
        instances = len(re.findall(r"a :\w+", src))
        assert len(view.subject_elements(ElementKind.CLASS)) == classes
        assert len(view.subject_elements(ElementKind.PROPERTY)) == props
        assert len(view.subject_elements(ElementKind.INSTANCE)) == instances

    def test_instance_of_external_class_counts(self):
        g = parse_turtle("@prefix ex: <http://e/> . ex:x a <http://other/C> .")
        view = build_view(g)
        assert view.elements[Iri("http://e/x")].kind == ElementKind.INSTANCE

    def test_ontology_metadata_node(self):
        view = view_of("pizza_base.ttl")
        metas = view.subject_elements(ElementKind.ONTOLOGY_METADATA)
        assert [m.iri for m in metas] == [Iri(PIZZA)]

    def test_missing_metadata_matches_nothing(self):
        view = view_of("pizza_small.ttl")
        assert view.subject_elements(ElementKind.ONTOLOGY_METADATA) == []

    def test_labels_and_comments_collected(self):
        view = view_of("pizza_base.ttl")
        pizza = view.elements[Iri(PIZZA + "Pizza")]
        assert [l.lexical for l in pizza.labels] == ["Pizza"]
        assert len(pizza.comments) == 1
        assert len(pizza.annotations) == 2

    def test_kind_monotonicity(self):
        view = view_of("security.ttl")
        obj = {e.iri for e in view.subject_elements(ElementKind.OBJECT_PROPERTY)}
        prop = {e.iri for e in view.subject_elements(ElementKind.PROPERTY)}
        every = {e.iri for e in view.subject_elements(ElementKind.ONTOLOGICAL_ELEMENT)}
        assert obj <= prop <= every

    def test_relation_edges_agree_with_graph(self):
        view = view_of("security.ttl")
        for s, p, o in view.relation_edges():
            assert len(view.graph.query(s, p, o)) == 1


class TestEnrichmentDiff:
    def test_identity_diff(self):
        base = view_of("pizza_base.ttl")
        diffed = enrichment_diff(base, view_of("pizza_base.ttl"))
        assert diffed.enriched_elements() == []
        assert diffed.enriched_relations == set()

    def test_five_new_subjects_flagged(self):
        diffed = enrichment_diff(view_of("pizza_base.ttl"), view_of("pizza_enriched.ttl"))
        flagged = {el.iri.local_name() for el in diffed.enriched_elements()}
        assert flagged == {
            "TandooriPizza",
            "PaneerTopping",
            "WoodFiredBase",
            "NaanBase",
            "tandooriSpecial",
        }

    def test_diff_matches_set_difference_oracle(self):
        base, enriched = view_of("pizza_base.ttl"), view_of("pizza_enriched.ttl")
        oracle = set(enriched.elements) - set(base.elements)
        diffed = enrichment_diff(base, enriched)
        assert {el.iri for el in diffed.enriched_elements()} == oracle

    def test_idempotent_flag_set(self):
        base, enriched = view_of("pizza_base.ttl"), view_of("pizza_enriched.ttl")
        first = enrichment_diff(base, enriched)
        second = enrichment_diff(base, enriched)
        assert {e.iri for e in first.enriched_elements()} == {
            e.iri for e in second.enriched_elements()
        }
        assert first.enriched_relations == second.enriched_relations

    def test_new_relation_edge_flagged(self):
        base_src = read_fixture("pizza_base.ttl")
        enriched = build_view(
            parse_turtle(base_src + "\n:Margherita rdfs:subClassOf :Capricciosa .")
        )
        diffed = enrichment_diff(build_view(parse_turtle(base_src)), enriched)
        assert len(diffed.enriched_relations) == 1
        assert diffed.enriched_elements() == []


class TestManifest:
    def test_empty_manifest(self):
        view = apply_manifest(view_of("pizza_base.ttl"), [])
        assert view.enriched_elements() == []

    def test_single_element_flagged(self):
        view = apply_manifest(
            view_of("pizza_enriched.ttl"), [Iri(PIZZA + "TandooriPizza")]
        )
        assert [e.iri.local_name() for e in view.enriched_elements()] == ["TandooriPizza"]

    def test_unknown_iri_rejected(self):
        with pytest.raises(UnknownElementError) as exc_info:
            apply_manifest(view_of("pizza_base.ttl"), [Iri("http://nope/x")])
        assert exc_info.value.iris == [Iri("http://nope/x")]
