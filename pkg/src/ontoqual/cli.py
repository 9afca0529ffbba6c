"""Command-line front door for the pipeline: syntactic reports,
enrichment diffs, expertise scoring, finalization, and the cross
validation harness."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .expertise import (
    ExpertiseConfig,
    ProfileArchive,
    UnknownHandleError,
    tweet_expert_scores,
)
from .ontology import build_view, enrichment_diff
from .regress import (
    Decision,
    DecisionMatrix,
    FoldPlan,
    MajorityBaseline,
    cv_evaluate,
    load_examples,
    load_gold,
    make_regressor,
    weighted_vote,
)
from .rules import EngineContext, RuleParseError, eval_pack, load_rule_pack
from .rules.engine import ViolationReport
from .turtle import TurtleSyntaxError, parse_turtle

EXIT_OK = 0
EXIT_HIGH_VIOLATIONS = 1
EXIT_ERROR = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(str(exc))


@click.group()
def main() -> None:
    """Ontology quality evaluation: rule checks and crowdsourced
    validation aggregation."""


def _render_table(report: ViolationReport) -> str:
    lines = [f"{'rule':<28} {'priority':<8} {'count':>5}"]
    lines.append("-" * 44)
    for r in report.rules:
        lines.append(f"{r.rule_id:<28} {r.priority.value:<8} {r.count:>5}")
        for v in r.violations:
            lines.append(f"    {v.element.value}")
        if r.error:
            lines.append(f"    ERROR: {r.error}")
    totals = report.totals
    lines.append("-" * 44)
    lines.append(f"totals: High={totals['High']} Medium={totals['Medium']} Low={totals['Low']}")
    return "\n".join(lines)


@main.command("syn")
@click.argument("ontology", type=click.Path(exists=True, dir_okay=False))
@click.option("--rules", "rules_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
def syn(ontology: str, rules_path: str, fmt: str) -> None:
    """Evaluate a rule pack against an ontology. Exit 1 when
    High-priority violations exist, 2 on errors."""
    try:
        view = build_view(parse_turtle(_read(ontology)))
        pack = load_rule_pack(_read(rules_path), name=rules_path)
    except (TurtleSyntaxError, RuleParseError) as exc:
        _fail(str(exc))
    report = eval_pack(pack, view, EngineContext(), ontology_id=ontology)
    if fmt == "json":
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        click.echo(_render_table(report))
    if any(r.error for r in report.rules):
        sys.exit(EXIT_ERROR)
    sys.exit(EXIT_HIGH_VIOLATIONS if report.totals["High"] > 0 else EXIT_OK)


@main.command("diff")
@click.argument("base", type=click.Path(exists=True, dir_okay=False))
@click.argument("enriched", type=click.Path(exists=True, dir_okay=False))
def diff(base: str, enriched: str) -> None:
    """Print the manifest (JSON array of IRIs) of elements present only
    in the enriched ontology."""
    try:
        base_view = build_view(parse_turtle(_read(base)))
        enriched_view = build_view(parse_turtle(_read(enriched)))
    except TurtleSyntaxError as exc:
        _fail(str(exc))
    diffed = enrichment_diff(base_view, enriched_view)
    iris = sorted(el.iri.value for el in diffed.enriched_elements())
    click.echo(json.dumps(iris, indent=2))


@main.command("expertise")
@click.option("--archive", "archive_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--keywords", required=True, help="comma-separated domain keywords")
@click.option("--handles", required=True, help="comma-separated validator handles")
@click.option("--model", "model_spec", default="majority", help="regressor spec, e.g. svr or knn:3")
@click.option("--train", "train_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--top-k", default=20, show_default=True)
@click.option("--top-k-friends", default=5, show_default=True)
def expertise_cmd(
    archive_path: str,
    keywords: str,
    handles: str,
    model_spec: str,
    train_path: str | None,
    top_k: int,
    top_k_friends: int,
) -> None:
    """Compute expertise records for validators from a profile archive."""
    archive = ProfileArchive.from_file(archive_path)
    config = ExpertiseConfig(
        top_k=top_k,
        top_k_friends=top_k_friends,
        domain_keywords=[k.strip() for k in keywords.split(",") if k.strip()],
    )
    try:
        model = make_regressor(model_spec)
    except ValueError as exc:
        _fail(str(exc))
    if train_path and not isinstance(model, MajorityBaseline):
        model.fit(load_examples(train_path))
    handle_list = [h.strip() for h in handles.split(",") if h.strip()]
    try:
        records = tweet_expert_scores(handle_list, archive, config, model=model)
    except UnknownHandleError as exc:
        _fail(str(exc))
    click.echo(json.dumps([r.to_dict() for r in records], indent=2, sort_keys=True))


def _latest_decision_matrix(log_path: str) -> DecisionMatrix:
    latest: dict[tuple[str, str], str] = {}
    items: list[str] = []
    validators: list[str] = []
    for line in Path(log_path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        entry = json.loads(line)
        v, k = entry["validator_handle"], entry["item_key"]
        latest[(v, k)] = entry["decision"]
        if k not in items:
            items.append(k)
        if v not in validators:
            validators.append(v)
    matrix = DecisionMatrix(items=items, validators=validators)
    for (v, k), d in latest.items():
        matrix.decisions[(v, k)] = Decision(d)
    return matrix


@main.command("finalize")
@click.option("--decisions", "log_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--archive", "archive_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--keywords", default="Pizza", show_default=True)
@click.option("--regressor", "model_spec", default="svr", show_default=True)
@click.option("--train", "train_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", default=0, show_default=True)
def finalize(
    log_path: str,
    archive_path: str,
    keywords: str,
    model_spec: str,
    train_path: str | None,
    seed: int,
) -> None:
    """Aggregate a decision log into final accept/reject decisions with
    expertise weights."""
    archive = ProfileArchive.from_file(archive_path)
    matrix = _latest_decision_matrix(log_path)
    config = ExpertiseConfig(
        domain_keywords=[k.strip() for k in keywords.split(",") if k.strip()]
    )
    try:
        model = make_regressor(model_spec)
    except ValueError as exc:
        _fail(str(exc))
    if train_path and not isinstance(model, MajorityBaseline):
        model.fit(load_examples(train_path))

    known = [v for v in matrix.validators if v in archive]
    warnings = [
        f"validator {v!r} not in archive; decisions discarded"
        for v in matrix.validators
        if v not in archive
    ]
    records = tweet_expert_scores(known, archive, config, model=model)
    weights = {r.handle: r.score for r in records}
    restricted = matrix.restricted(known)
    voted = weighted_vote(restricted, weights)
    result = {
        "items": {item: d.value for item, d in sorted(voted.items())},
        "validators": [r.to_dict() for r in records],
        "warnings": warnings,
    }
    click.echo(json.dumps(result, indent=2, sort_keys=True))


@main.command("cv")
@click.option("--examples", "examples_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--decisions", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--regressor", "model_spec", default="svr", show_default=True)
@click.option("--folds", default=7, show_default=True)
@click.option("--seed", default=0, show_default=True)
def cv(
    examples_path: str,
    matrix_path: str,
    gold_path: str,
    model_spec: str,
    folds: int,
    seed: int,
) -> None:
    """Cross-validated voting accuracy for a regressor."""
    examples = load_examples(examples_path)
    matrix = DecisionMatrix.from_file(matrix_path)
    gold = load_gold(gold_path)
    plan = FoldPlan.build(len(examples), folds)
    result = cv_evaluate(examples, matrix, gold, lambda: make_regressor(model_spec), plan=plan)
    click.echo(json.dumps(result.to_dict(), indent=2, sort_keys=True))


@main.command("serve")
@click.option("--data-dir", required=True, type=click.Path(file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--admin-token", default=None)
@click.option("--rules", "rules_path", default=None, type=click.Path(exists=True, dir_okay=False))
def serve(data_dir: str, host: str, port: int, admin_token: str | None, rules_path: str | None) -> None:
    """Run the validation service."""
    import uvicorn

    from .service import create_app

    app = create_app(data_dir, admin_token=admin_token, default_rule_pack=rules_path)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
