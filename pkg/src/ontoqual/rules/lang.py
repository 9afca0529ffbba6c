"""The rule DSL: one rule per line, built from a Subject keyword,
clause sequences, and operator expressions.

Grammar (whitespace-separated tokens, keywords case-insensitive):

    rule        := SUBJECT clause_seq ( operator_expr clause_seq )*
    clause_seq  := extractive* ( extractive | functional )
    extractive  := ("hasRelatedElement" | "hasAttribute") OBJECT
    functional  := ("hasOntologicalProperty" | "hasLinguisticProperty") FUNCTION
    operator_expr := "usesLogicalOperator" ("And"|"Or"|"Not")
                   | "usesComparativeOperator"
                     ("Equality"|"Inverse"|"Synonymy"|"Dissimilarity")

Operator chains associate left to right with no precedence. `Not`
negates the sequence that follows it and joins conjunctively. A
comparative operator must be the only operator of its rule and must
join two extractive-only sequences.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Union

from ..ontology import ElementKind


class RuleParseError(Exception):
    pass


class UnknownKeywordError(RuleParseError):
    def __init__(self, position: int, token: str, expected: str) -> None:
        super().__init__(f"unknown keyword {token!r} at token {position} (expected {expected})")
        self.position = position
        self.token = token


class InvalidPairError(RuleParseError):
    def __init__(self, predicate: str, argument: str) -> None:
        super().__init__(f"{argument!r} is not a valid argument for predicate {predicate!r}")
        self.predicate = predicate
        self.argument = argument


class NonTerminalFunctionalClauseError(RuleParseError):
    def __init__(self) -> None:
        super().__init__("a functional clause must be the last clause of its sequence")


class DanglingOperatorError(RuleParseError):
    def __init__(self, operator: str) -> None:
        super().__init__(f"operator {operator!r} is not followed by a clause sequence")
        self.operator = operator


class InvalidComparativeRuleError(RuleParseError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class DuplicateRuleIdError(RuleParseError):
    def __init__(self, rule_id: str) -> None:
        super().__init__(f"duplicate rule id {rule_id!r}")
        self.rule_id = rule_id


class Priority(enum.Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


SUBJECT_KEYWORDS = {
    "OntologyMetadata": ElementKind.ONTOLOGY_METADATA,
    "OntologicalElement": ElementKind.ONTOLOGICAL_ELEMENT,
    "Class": ElementKind.CLASS,
    "Instance": ElementKind.INSTANCE,
    "Property": ElementKind.PROPERTY,
    "ObjectProperty": ElementKind.OBJECT_PROPERTY,
    "DatatypeProperty": ElementKind.DATATYPE_PROPERTY,
    "SymmetricProperty": ElementKind.SYMMETRIC_PROPERTY,
}

EXTRACTIVE_PAIRS = {
    "hasRelatedElement": (
        "Domain",
        "Range",
        "Subclass",
        "Superclass",
        "DisjointClass",
        "EquivalentClass",
        "InverseProperty",
        "Label",
        "Comment",
        "Annotation",
    ),
    "hasAttribute": ("ID", "Language", "Namespace"),
}

FUNCTIONAL_PAIRS = {
    "hasOntologicalProperty": ("IDConsistency", "Uniqueness", "TextValidity"),
    "hasLinguisticProperty": ("ContainsPolysemes", "ContainsConjunctions"),
}

OPERATOR_PAIRS = {
    "usesLogicalOperator": ("And", "Or", "Not"),
    "usesComparativeOperator": ("Equality", "Inverse", "Synonymy", "Dissimilarity"),
}

LOGICAL_PREDICATE = "usesLogicalOperator"
COMPARATIVE_PREDICATE = "usesComparativeOperator"

_CLAUSE_PREDICATES = set(EXTRACTIVE_PAIRS) | set(FUNCTIONAL_PAIRS)
_OPERATOR_PREDICATES = set(OPERATOR_PAIRS)


def _canon_table(*tables: dict) -> dict[str, str]:
    out: dict[str, str] = {}
    for table in tables:
        for pred, args in table.items():
            out[pred.lower()] = pred
            for arg in args:
                out[arg.lower()] = arg
    for subject in SUBJECT_KEYWORDS:
        out[subject.lower()] = subject
    return out


_CANON = _canon_table(EXTRACTIVE_PAIRS, FUNCTIONAL_PAIRS, OPERATOR_PAIRS)


@dataclass(frozen=True)
class ExtractiveClause:
    predicate: str
    object: str

    def __post_init__(self) -> None:
        if self.object not in EXTRACTIVE_PAIRS.get(self.predicate, ()):
            raise InvalidPairError(self.predicate, self.object)


@dataclass(frozen=True)
class FunctionalClause:
    predicate: str
    function: str

    def __post_init__(self) -> None:
        if self.function not in FUNCTIONAL_PAIRS.get(self.predicate, ()):
            raise InvalidPairError(self.predicate, self.function)


Clause = Union[ExtractiveClause, FunctionalClause]


@dataclass(frozen=True)
class OperatorExpression:
    predicate: str
    operator: str

    def __post_init__(self) -> None:
        if self.operator not in OPERATOR_PAIRS.get(self.predicate, ()):
            raise InvalidPairError(self.predicate, self.operator)

    @property
    def comparative(self) -> bool:
        return self.predicate == COMPARATIVE_PREDICATE


@dataclass(frozen=True)
class ClauseSequence:
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if not self.clauses:
            raise RuleParseError("empty clause sequence")
        for clause in self.clauses[:-1]:
            if isinstance(clause, FunctionalClause):
                raise NonTerminalFunctionalClauseError()

    @property
    def extractive_only(self) -> bool:
        return not isinstance(self.clauses[-1], FunctionalClause)


@dataclass(frozen=True)
class Rule:
    subject: ElementKind
    head: ClauseSequence
    tail: tuple[tuple[OperatorExpression, ClauseSequence], ...] = ()
    id: str = ""
    priority: Priority = Priority.MEDIUM

    def __post_init__(self) -> None:
        comparatives = [op for op, _ in self.tail if op.comparative]
        if comparatives:
            if len(self.tail) != 1:
                raise InvalidComparativeRuleError(
                    "a comparative operator must be the only operator of its rule"
                )
            if not (self.head.extractive_only and self.tail[0][1].extractive_only):
                raise InvalidComparativeRuleError(
                    "a comparative operator must join two extractive-only clause sequences"
                )

    def sequences(self) -> list[ClauseSequence]:
        return [self.head] + [seq for _, seq in self.tail]


@dataclass
class RulePack:
    name: str
    rules: list[Rule] = field(default_factory=list)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for rule in self.rules:
            if rule.id in seen:
                raise DuplicateRuleIdError(rule.id)
            seen.add(rule.id)


class _Tokens:
    def __init__(self, text: str) -> None:
        self.tokens = text.split()
        self.pos = 0

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str) -> str:
        tok = self.peek()
        if tok is None:
            raise RuleParseError(f"unexpected end of rule (expected {expected})")
        canon = _CANON.get(tok.lower())
        if canon is None:
            raise UnknownKeywordError(self.pos, tok, expected)
        self.pos += 1
        return canon


def _parse_clause_sequence(toks: _Tokens) -> ClauseSequence:
    clauses: list[Clause] = []
    while True:
        tok = toks.peek()
        canon = _CANON.get(tok.lower()) if tok else None
        if canon not in _CLAUSE_PREDICATES:
            break
        predicate = toks.take("clause predicate")
        argument = toks.take(f"argument for {predicate}")
        if predicate in EXTRACTIVE_PAIRS:
            clauses.append(ExtractiveClause(predicate, argument))
        else:
            clauses.append(FunctionalClause(predicate, argument))
            break  # functional clauses terminate the sequence
    if not clauses:
        tok = toks.peek()
        if tok is None:
            raise RuleParseError("expected a clause sequence")
        raise UnknownKeywordError(toks.pos, tok, "clause predicate")
    return ClauseSequence(tuple(clauses))


def parse_rule(
    text: str,
    rule_id: str = "",
    priority: Priority = Priority.MEDIUM,
) -> Rule:
    """Parse one rule line into its AST. Keywords are matched
    case-insensitively against the canonical camelCase token set."""
    if not text.strip():
        raise RuleParseError("empty rule text")
    toks = _Tokens(text)
    subject_tok = toks.take("subject keyword")
    if subject_tok not in SUBJECT_KEYWORDS:
        raise UnknownKeywordError(0, subject_tok, "subject keyword")
    subject = SUBJECT_KEYWORDS[subject_tok]

    head = _parse_clause_sequence(toks)
    tail: list[tuple[OperatorExpression, ClauseSequence]] = []
    while toks.peek() is not None:
        predicate = toks.take("operator predicate")
        if predicate not in _OPERATOR_PREDICATES:
            raise UnknownKeywordError(toks.pos - 1, predicate, "operator predicate")
        operator = toks.take(f"operator for {predicate}")
        op = OperatorExpression(predicate, operator)
        if toks.peek() is None:
            raise DanglingOperatorError(operator)
        tail.append((op, _parse_clause_sequence(toks)))
    return Rule(subject=subject, head=head, tail=tuple(tail), id=rule_id, priority=priority)


def _subject_token(kind: ElementKind) -> str:
    for token, k in SUBJECT_KEYWORDS.items():
        if k == kind:
            return token
    raise ValueError(kind)


def print_rule(rule: Rule) -> str:
    """Canonical single-line text; parse_rule(print_rule(r)) == r."""
    parts = [_subject_token(rule.subject)]

    def emit_seq(seq: ClauseSequence) -> None:
        for clause in seq.clauses:
            if isinstance(clause, ExtractiveClause):
                parts.extend([clause.predicate, clause.object])
            else:
                parts.extend([clause.predicate, clause.function])

    emit_seq(rule.head)
    for op, seq in rule.tail:
        parts.extend([op.predicate, op.operator])
        emit_seq(seq)
    return " ".join(parts)


def load_rule_pack(source: str, name: str = "pack") -> RulePack:
    """Parse a rule-pack file: lines of the form

        rule <id> [priority <Low|Medium|High>]: <rule text>

    `#` comments and blank lines are ignored."""
    rules: list[Rule] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header, sep, body = line.partition(":")
        if not sep:
            raise RuleParseError(f"line {lineno}: missing ':' separator")
        fields = header.split()
        if len(fields) < 2 or fields[0] != "rule":
            raise RuleParseError(f"line {lineno}: expected 'rule <id> [priority <P>]:'")
        rule_id = fields[1]
        priority = Priority.MEDIUM
        if len(fields) == 4 and fields[2] == "priority":
            try:
                priority = Priority(fields[3].capitalize())
            except ValueError:
                raise RuleParseError(f"line {lineno}: unknown priority {fields[3]!r}")
        elif len(fields) != 2:
            raise RuleParseError(f"line {lineno}: malformed rule header")
        try:
            rules.append(parse_rule(body, rule_id=rule_id, priority=priority))
        except RuleParseError as exc:
            raise RuleParseError(f"rule {rule_id!r} (line {lineno}): {exc}") from exc
    return RulePack(name=name, rules=rules)
