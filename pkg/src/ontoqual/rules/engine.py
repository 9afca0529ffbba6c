"""Evaluate rules and rule packs against an ontology view.

Per subject element, each clause sequence transforms {element} through
its clauses; a sequence succeeds iff the final value is a non-empty
element set, or a boolean that is true after the function's violation
polarity is applied. Sequence outcomes combine left to right through
the rule's operator expressions; elements whose combined outcome is
false are reported as violations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from ..lexicon import (
    EmbeddingProvider,
    SenseLexicon,
    TrigramHashEmbedder,
    contains_conjunctions,
    contains_polysemes,
    cosine,
    id_consistency,
    text_validity,
)
from ..ontology import ElementKind, OntologyView, Relation
from ..rdf import OWL_INVERSE_OF, Iri, Literal, Term
from .lang import (
    Clause,
    ClauseSequence,
    ExtractiveClause,
    FunctionalClause,
    Priority,
    Rule,
    RulePack,
    print_rule,
)


class EvalError(Exception):
    pass


class TypeMismatchError(EvalError):
    def __init__(self, clause: str, got: str) -> None:
        super().__init__(f"clause {clause} cannot be applied to {got}")


# Functions whose TRUE result marks the violation (detecting the
# phenomenon is the defect); all others violate on FALSE.
_NEGATIVE_POLARITY = {"ContainsPolysemes", "ContainsConjunctions"}

_RELATED = {
    "Domain": Relation.DOMAIN,
    "Range": Relation.RANGE,
    "Subclass": Relation.SUBCLASS,
    "Superclass": Relation.SUPERCLASS,
    "DisjointClass": Relation.DISJOINT_CLASS,
    "EquivalentClass": Relation.EQUIVALENT_CLASS,
    "InverseProperty": Relation.INVERSE_PROPERTY,
}


@dataclass
class EngineContext:
    """Tunables and pluggable providers for rule evaluation."""

    embedder: EmbeddingProvider = field(default_factory=TrigramHashEmbedder)
    lexicon: Optional[SenseLexicon] = None
    synonymy_threshold: float = 0.8
    dissimilarity_threshold: float = 0.8
    polysemy_threshold: int = 1

    def get_lexicon(self) -> SenseLexicon:
        if self.lexicon is None:
            self.lexicon = SenseLexicon.bundled()
        return self.lexicon


@dataclass(frozen=True)
class EvalResult:
    """Either an element set (extractive output) or a boolean
    (functional output, polarity already applied)."""

    elements: Optional[frozenset[Term]] = None
    boolean: Optional[bool] = None

    @property
    def success(self) -> bool:
        if self.boolean is not None:
            return self.boolean
        return bool(self.elements)


@dataclass(frozen=True)
class Violation:
    rule_id: str
    element: Iri
    detail: str


@dataclass
class RuleReport:
    rule_id: str
    priority: Priority
    violations: list[Violation] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def count(self) -> int:
        return len(self.violations)


@dataclass
class ViolationReport:
    ontology: str
    rules: list[RuleReport] = field(default_factory=list)

    @property
    def totals(self) -> dict[str, int]:
        out = {p.value: 0 for p in Priority}
        for report in self.rules:
            out[report.priority.value] += report.count
        return out

    @property
    def total_violations(self) -> int:
        return sum(r.count for r in self.rules)

    def to_dict(self) -> dict:
        return {
            "ontology": self.ontology,
            "rules": [
                {
                    "id": r.rule_id,
                    "priority": r.priority.value,
                    "count": r.count,
                    **({"error": r.error} if r.error else {}),
                    "violations": [
                        {"element": v.element.value, "detail": v.detail} for v in r.violations
                    ],
                }
                for r in self.rules
            ],
            "totals": self.totals,
        }


def _as_strings(terms: frozenset[Term], clause_name: str, attribute: str) -> list[str]:
    out = []
    for t in terms:
        if attribute == "ID":
            if isinstance(t, Iri):
                out.append(t.local_name())
            elif isinstance(t, Literal):
                out.append(t.lexical)
            else:
                raise TypeMismatchError(clause_name, "blank node")
        elif attribute == "Language":
            if not isinstance(t, Literal):
                raise TypeMismatchError(clause_name, "non-literal")
            if t.lang:
                out.append(t.lang)
        elif attribute == "Namespace":
            if not isinstance(t, Iri):
                raise TypeMismatchError(clause_name, "non-IRI")
            out.append(t.namespace())
    return out


def _texts_of(terms: frozenset[Term]) -> list[str]:
    out = []
    for t in terms:
        if isinstance(t, Literal):
            out.append(t.lexical)
        elif isinstance(t, Iri):
            out.append(t.local_name())
    return out


def eval_clause(
    clause: Clause,
    input_terms: frozenset[Term],
    view: OntologyView,
    ctx: EngineContext,
) -> EvalResult:
    """Apply one clause to the current element set."""
    if isinstance(clause, ExtractiveClause):
        if clause.predicate == "hasRelatedElement":
            relation = _RELATED.get(clause.object)
            out: set[Term] = set()
            for term in input_terms:
                if not isinstance(term, Iri):
                    continue
                if relation is not None:
                    out.update(view.related(term, relation))
                elif clause.object == "Label":
                    el = view.elements.get(term)
                    out.update(el.labels if el else ())
                elif clause.object == "Comment":
                    el = view.elements.get(term)
                    out.update(el.comments if el else ())
                elif clause.object == "Annotation":
                    el = view.elements.get(term)
                    if el:
                        out.update(lit for _, lit in el.annotations)
            return EvalResult(elements=frozenset(out))
        # hasAttribute: produce attribute strings as plain literals
        strings = _as_strings(input_terms, f"hasAttribute {clause.object}", clause.object)
        return EvalResult(elements=frozenset(Literal(s) for s in strings))

    # Functional clause. Empty input means the element lacks the
    # material to check: treated as sequence failure by the caller.
    if not input_terms:
        return EvalResult(boolean=False)
    fn = clause.function
    if fn == "Uniqueness":
        value = len(input_terms) == 1
    elif fn == "TextValidity":
        value = all(text_validity(s) for s in _texts_of(input_terms))
    elif fn == "IDConsistency":
        ids = [
            t.local_name() if isinstance(t, Iri) else t.lexical
            for t in input_terms
            if isinstance(t, (Iri, Literal))
        ]
        ids = [i for i in ids if i]
        value = id_consistency(ids) if ids else False
    elif fn == "ContainsConjunctions":
        value = any(contains_conjunctions(s) for s in _texts_of(input_terms))
    elif fn == "ContainsPolysemes":
        lex = ctx.get_lexicon()
        value = any(
            contains_polysemes(s, lex, ctx.polysemy_threshold) for s in _texts_of(input_terms)
        )
    else:  # pragma: no cover - keyword tables prevent this
        raise EvalError(f"unknown function {fn}")
    if fn in _NEGATIVE_POLARITY:
        return EvalResult(boolean=not value)
    return EvalResult(boolean=value)


def eval_sequence(
    seq: ClauseSequence,
    element: Iri,
    view: OntologyView,
    ctx: EngineContext,
) -> EvalResult:
    current: frozenset[Term] = frozenset({element})
    result = EvalResult(elements=current)
    for clause in seq.clauses:
        result = eval_clause(clause, current, view, ctx)
        if result.elements is not None:
            current = result.elements
    return result


def _normalize_term(t: Term) -> object:
    # Literals compare by lexical form + language; IRIs stay exact.
    if isinstance(t, Literal):
        return ("lit", t.lexical, t.lang or "")
    return t


def _compare(
    operator: str,
    left: frozenset[Term],
    right: frozenset[Term],
    view: OntologyView,
    ctx: EngineContext,
) -> bool:
    if operator == "Equality":
        return {_normalize_term(t) for t in left} == {_normalize_term(t) for t in right}
    if operator == "Inverse":
        # Declared-inverse check: some cross pair linked by owl:inverseOf.
        for a in left:
            if not isinstance(a, Iri):
                continue
            inverses = set(view.graph.objects(a, OWL_INVERSE_OF)) | set(
                view.graph.subjects(OWL_INVERSE_OF, a)
            )
            if any(b in inverses for b in right):
                return True
        return False
    embed = ctx.embedder.embed
    left_texts = _texts_of(left)
    right_texts = _texts_of(right)
    if operator == "Synonymy":
        return any(
            cosine(embed(a), embed(b)) >= ctx.synonymy_threshold
            for a in left_texts
            for b in right_texts
        )
    if operator == "Dissimilarity":
        return all(
            cosine(embed(a), embed(b)) < ctx.dissimilarity_threshold
            for a in left_texts
            for b in right_texts
        )
    raise EvalError(f"unknown comparative operator {operator}")  # pragma: no cover


def _element_outcome(rule: Rule, element: Iri, view: OntologyView, ctx: EngineContext) -> bool:
    if rule.tail and rule.tail[0][0].comparative:
        op, right_seq = rule.tail[0]
        left = eval_sequence(rule.head, element, view, ctx).elements or frozenset()
        right = eval_sequence(right_seq, element, view, ctx).elements or frozenset()
        return _compare(op.operator, left, right, view, ctx)
    outcome = eval_sequence(rule.head, element, view, ctx).success
    for op, seq in rule.tail:
        branch = eval_sequence(seq, element, view, ctx).success
        if op.operator == "And":
            outcome = outcome and branch
        elif op.operator == "Or":
            outcome = outcome or branch
        else:  # Not: negate the following sequence, join conjunctively
            outcome = outcome and not branch
    return outcome


def eval_rule(rule: Rule, view: OntologyView, ctx: Optional[EngineContext] = None) -> list[Violation]:
    """Violations of one rule: subject elements whose combined clause
    outcome is false, in element insertion order."""
    ctx = ctx or EngineContext()
    violations = []
    for el in view.subject_elements(rule.subject):
        try:
            ok = _element_outcome(rule, el.iri, view, ctx)
        except EvalError as exc:
            raise EvalError(f"{exc} (element {el.iri})") from exc
        if not ok:
            violations.append(Violation(rule.id, el.iri, f"failed: {print_rule(rule)}"))
    return violations


def eval_pack(
    pack: RulePack,
    view: OntologyView,
    ctx: Optional[EngineContext] = None,
    ontology_id: str = "",
) -> ViolationReport:
    """Evaluate every rule of a pack; per-rule errors are recorded in
    the report and do not stop other rules."""
    ctx = ctx or EngineContext()
    report = ViolationReport(ontology=ontology_id)
    for rule in pack.rules:
        entry = RuleReport(rule_id=rule.id, priority=rule.priority)
        try:
            entry.violations = sorted(
                eval_rule(rule, view, ctx), key=lambda v: v.element.value
            )
        except EvalError as exc:
            entry.error = str(exc)
        report.rules.append(entry)
    return report
