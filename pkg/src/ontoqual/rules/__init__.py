from .lang import (
    ClauseSequence,
    DanglingOperatorError,
    DuplicateRuleIdError,
    ExtractiveClause,
    FunctionalClause,
    InvalidComparativeRuleError,
    InvalidPairError,
    NonTerminalFunctionalClauseError,
    OperatorExpression,
    Priority,
    Rule,
    RulePack,
    RuleParseError,
    UnknownKeywordError,
    load_rule_pack,
    parse_rule,
    print_rule,
)
from .engine import (
    EngineContext,
    EvalError,
    EvalResult,
    RuleReport,
    TypeMismatchError,
    Violation,
    ViolationReport,
    eval_clause,
    eval_pack,
    eval_rule,
    eval_sequence,
)

__all__ = [
    "ClauseSequence",
    "DanglingOperatorError",
    "DuplicateRuleIdError",
    "EngineContext",
    "EvalError",
    "EvalResult",
    "RuleReport",
    "ExtractiveClause",
    "FunctionalClause",
    "InvalidComparativeRuleError",
    "InvalidPairError",
    "NonTerminalFunctionalClauseError",
    "OperatorExpression",
    "Priority",
    "Rule",
    "RulePack",
    "RuleParseError",
    "TypeMismatchError",
    "UnknownKeywordError",
    "Violation",
    "ViolationReport",
    "eval_clause",
    "eval_pack",
    "eval_rule",
    "eval_sequence",
    "load_rule_pack",
    "parse_rule",
    "print_rule",
]
