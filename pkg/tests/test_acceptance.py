"""Acceptance suite: one test per release criterion, each emitting a
single PASS/FAIL line. Run with `pytest tests/test_acceptance.py -s`.
"""

import json
import random
import time
from contextlib import contextmanager

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from ontoqual.expertise import ExpertiseConfig, Profile, ProfileArchive, friend_sim, tweet_sim
from ontoqual.lexicon import SenseLexicon, TrigramHashEmbedder, cosine
from ontoqual.ontology import ElementKind, build_view
from ontoqual.regress import (
    Decision,
    DecisionMatrix,
    FoldPlan,
    KNNRegressor,
    LinearRegressor,
    MajorityBaseline,
    SVRRegressor,
    TrainingExample,
    cv_evaluate,
    weighted_vote,
)
from ontoqual.rules import EngineContext, eval_rule, eval_sequence, load_rule_pack, parse_rule, print_rule
from ontoqual.rules.lang import (
    COMPARATIVE_PREDICATE,
    EXTRACTIVE_PAIRS,
    FUNCTIONAL_PAIRS,
    LOGICAL_PREDICATE,
    OPERATOR_PAIRS,
    SUBJECT_KEYWORDS,
    ClauseSequence,
    ExtractiveClause,
    FunctionalClause,
    OperatorExpression,
    Rule,
)
from ontoqual.service import create_app
from ontoqual.synthetic import make_archive, make_crowd
from ontoqual.turtle import TurtleSyntaxError, parse_turtle, serialize_turtle

from conftest import ONTOLOGY_FIXTURES, read_data, read_fixture
from test_rdf import MALFORMED


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"FAIL: {name}")
        raise
    print(f"PASS: {name}")


@contextmanager
def deadline(seconds: float):
    start = time.monotonic()
    yield
    elapsed = time.monotonic() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, limit {seconds}s"


CTX = EngineContext(lexicon=SenseLexicon.bundled())


def test_turtle_round_trip():
    with criterion("turtle round-trip on all fixtures + positioned errors on malformed corpus"):
        with deadline(5):
            assert len(ONTOLOGY_FIXTURES) >= 5
            for name in ONTOLOGY_FIXTURES:
                g1 = parse_turtle(read_fixture(name))
                g2 = parse_turtle(serialize_turtle(g1))
                assert g2 == g1, name
            assert len(MALFORMED) >= 10
            for source in MALFORMED:
                with pytest.raises(TurtleSyntaxError) as exc_info:
                    parse_turtle(source)
                assert exc_info.value.line >= 1 and exc_info.value.column >= 1


def _random_rule(rng: random.Random) -> Rule:
    extractives = [
        ExtractiveClause(p, o) for p, objs in EXTRACTIVE_PAIRS.items() for o in objs
    ]
    functionals = [
        FunctionalClause(p, f) for p, fns in FUNCTIONAL_PAIRS.items() for f in fns
    ]

    def seq(extractive_only: bool) -> ClauseSequence:
        clauses = [rng.choice(extractives) for _ in range(rng.randint(0, 3))]
        pool = extractives if extractive_only else extractives + functionals
        clauses.append(rng.choice(pool))
        return ClauseSequence(tuple(clauses))

    subject = rng.choice(sorted(SUBJECT_KEYWORDS.values(), key=lambda k: k.name))
    if rng.random() < 0.3:
        op = OperatorExpression(
            COMPARATIVE_PREDICATE, rng.choice(OPERATOR_PAIRS[COMPARATIVE_PREDICATE])
        )
        return Rule(subject=subject, head=seq(True), tail=((op, seq(True)),))
    tail = tuple(
        (
            OperatorExpression(
                LOGICAL_PREDICATE, rng.choice(OPERATOR_PAIRS[LOGICAL_PREDICATE])
            ),
            seq(False),
        )
        for _ in range(rng.randint(0, 3))
    )
    return Rule(subject=subject, head=seq(False), tail=tail)


def test_rule_pack_coverage_and_ast_round_trip():
    with criterion("default pack parses with guideline coverage; 1000 AST round-trips"):
        with deadline(10):
            pack = load_rule_pack(read_data("default.rules"), name="default")
            texts = {print_rule(r) for r in pack.rules}
            required = {
                # structural: conjunction of related-element checks
                "Property hasRelatedElement Domain usesLogicalOperator And hasRelatedElement Range",
                # structural: chained extraction into a boolean check
                "Property hasRelatedElement Domain hasOntologicalProperty Uniqueness",
                # annotation presence
                "Class hasRelatedElement Annotation",
                # comparative over two extraction chains
                "Class hasRelatedElement EquivalentClass hasRelatedElement Label usesComparativeOperator Dissimilarity hasRelatedElement Label",
                # linguistic checks
                "Class hasRelatedElement Label hasLinguisticProperty ContainsConjunctions",
                "Class hasRelatedElement Label hasLinguisticProperty ContainsPolysemes",
            }
            assert required <= texts
            rng = random.Random(99)
            for _ in range(1000):
                rule = _random_rule(rng)
                assert parse_rule(print_rule(rule)) == rule


def test_domain_range_rule_on_rangeless_property():
    with criterion("range-less property yields exactly 1 violation; completed fixture 0"):
        rule = parse_rule(
            "Property hasRelatedElement Domain usesLogicalOperator And hasRelatedElement Range",
            rule_id="domain-and-range",
        )
        view = build_view(parse_turtle(read_fixture("fig1.ttl")))
        violations = eval_rule(rule, view, CTX)
        assert [v.element.local_name() for v in violations] == ["hasTopping"]
        completed = build_view(parse_turtle(read_fixture("fig1_completed.ttl")))
        assert eval_rule(rule, completed, CTX) == []


def _random_small_ontology(rng: random.Random) -> str:
    lines = [
        "@prefix : <http://example.org/r#> .",
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .",
        "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .",
    ]
    labels = ["Alpha", "Cheese and Tomato", "Spring Roll", "Beta", "Plain Crust"]
    for i in range(rng.randint(2, 10)):
        lines.append(f":C{i} a owl:Class .")
        if rng.random() < 0.7:
            lines.append(f':C{i} rdfs:label "{rng.choice(labels)}" .')
        if rng.random() < 0.4:
            lines.append(f':C{i} rdfs:comment "about C{i}" .')
        if i and rng.random() < 0.5:
            lines.append(f":C{i} rdfs:subClassOf :C{rng.randrange(i)} .")
    return "\n".join(lines)


ALGEBRA_SEQS = [
    ClauseSequence((ExtractiveClause("hasRelatedElement", "Label"),)),
    ClauseSequence((ExtractiveClause("hasRelatedElement", "Comment"),)),
    ClauseSequence((ExtractiveClause("hasRelatedElement", "Superclass"),)),
    ClauseSequence(
        (
            ExtractiveClause("hasRelatedElement", "Label"),
            FunctionalClause("hasLinguisticProperty", "ContainsConjunctions"),
        )
    ),
]
ALWAYS_TRUE = ClauseSequence((ExtractiveClause("hasAttribute", "ID"),))


def test_logical_operator_algebra():
    with criterion("And=union / Or=intersection / Not=complement on 100 random ontologies"):
        with deadline(30):
            rng = random.Random(41)

            def viols(head, tail=()):
                rule = Rule(subject=ElementKind.CLASS, head=head, tail=tail, id="t")
                return {v.element for v in eval_rule(rule, view, CTX)}

            def joined(op, a, b):
                return viols(a, ((OperatorExpression(LOGICAL_PREDICATE, op), b),))

            for _ in range(100):
                view = build_view(parse_turtle(_random_small_ontology(rng)))
                a, b = rng.choice(ALGEBRA_SEQS), rng.choice(ALGEBRA_SEQS)
                va, vb = viols(a), viols(b)
                universe = {el.iri for el in view.subject_elements(ElementKind.CLASS)}
                assert joined("And", a, b) == va | vb
                assert joined("Or", a, b) == va & vb
                # Not under an always-true head: complement of b's violations
                assert joined("Not", ALWAYS_TRUE, b) == universe - vb
                # brute-force per-element truth evaluator
                for el in universe:
                    sa = eval_sequence(a, el, view, CTX).success
                    sb = eval_sequence(b, el, view, CTX).success
                    assert (el in joined("And", a, b)) == (not (sa and sb))
                    assert (el in joined("Or", a, b)) == (not (sa or sb))
                    assert (el in joined("Not", a, b)) == (not (sa and not sb))


def test_seeded_defect_detection():
    with criterion("seeded fixture yields exactly the 5 planted violations; clean twin 0"):
        from ontoqual.rules import eval_pack

        pack = load_rule_pack(read_fixture("seeded.rules"), name="seeded")
        seeded = build_view(parse_turtle(read_fixture("pizza_seeded.ttl")))
        report = eval_pack(pack, seeded, CTX)
        by_rule = {
            r.rule_id: [v.element.local_name() for v in r.violations] for r in report.rules
        }
        assert by_rule == {
            "missing-range": ["hasTopping"],
            "missing-annotation": ["hasSpiciness"],
            "conjunction-label": ["CheeseAndTomato"],
            "polyseme-label": ["SpringSpecial"],
            "synonym-equivalent": ["TomatoPie"],
        }
        clean = build_view(parse_turtle(read_fixture("pizza_clean.ttl")))
        assert eval_pack(pack, clean, CTX).total_violations == 0


POST_POOL = [
    "pizza margherita with fresh basil",
    "wood fired pizza oven tonight",
    "tomato sauce simmering all afternoon",
    "stock market closed lower today",
    "my cat sleeps eighteen hours a day",
    "new firewall rules deployed to prod",
    "pizza dough rising on the counter",
    "weekend football scores roundup",
]


def test_tweet_expert_matches_oracle():
    with criterion("tweet/friend similarity match brute-force oracle (28 validators, K=20, K'=5)"):
        emb = TrigramHashEmbedder()
        config = ExpertiseConfig()  # n=200, m=50, K=20, K'=5
        archive, handles, _ = make_archive()
        assert len(handles) == 28

        def oracle_ts(profile: Profile) -> float:
            posts = profile.tweets[: config.n]
            if not posts:
                return 0.0
            kvs = [emb.embed(k) for k in config.domain_keywords]
            sims = sorted(
                (max(cosine(emb.embed(p), kv) for kv in kvs) for p in posts),
                reverse=True,
            )
            head = sims[: config.top_k]
            return sum(head) / len(head)

        for h in handles:
            want_ts = oracle_ts(archive.get(h))
            assert abs(tweet_sim(h, archive, config, emb) - want_ts) < 1e-9
            friends = [f for f in archive.get(h).friends if f in archive][: config.m]
            if friends:
                scores = sorted((oracle_ts(archive.get(f)) for f in friends), reverse=True)
                head = scores[: config.top_k_friends]
                want_fs = sum(head) / len(head)
            else:
                want_fs = 0.0
            assert abs(friend_sim(h, archive, config, emb) - want_fs) < 1e-9


def test_top_k_properties_over_random_profiles():
    with criterion("top-K stability and order invariance over 1000 random profiles"):
        emb = TrigramHashEmbedder()
        rng = random.Random(5)
        k = 4
        config = ExpertiseConfig(n=50, m=5, top_k=k, top_k_friends=1)
        for _ in range(1000):
            posts = [rng.choice(POST_POOL) for _ in range(rng.randint(1, 12))]
            arch = ProfileArchive({"u": Profile(tweets=posts)})
            score = tweet_sim("u", arch, config, emb)
            # order invariance: any permutation within the window
            shuffled = list(posts)
            rng.shuffle(shuffled)
            alt = tweet_sim(
                "u", ProfileArchive({"u": Profile(tweets=shuffled)}), config, emb
            )
            assert abs(alt - score) < 1e-12
            # stability: appending a copy of the worst post leaves the
            # top-K average unchanged once K posts exist
            if len(posts) >= k:
                sims = [cosine(emb.embed(p), emb.embed("Pizza")) for p in posts]
                worst = posts[sims.index(min(sims))]
                extended = tweet_sim(
                    "u",
                    ProfileArchive({"u": Profile(tweets=posts + [worst])}),
                    config,
                    emb,
                )
                assert abs(extended - score) < 1e-12


LINEAR_ROWS = [
    (0.0, 0.0, 0.10),
    (0.2, 0.1, 0.25),
    (0.5, 0.5, 0.60),
    (0.8, 0.3, 0.65),
    (1.0, 1.0, 1.10),
    (0.3, 0.7, 0.60),
]


def test_regression_exactness():
    with criterion("linear exact on noiseless plane; KNN k=1 exact; SVR within 1e-4 of QP oracle"):
        import numpy as np

        examples = [TrainingExample(*row) for row in LINEAR_ROWS]
        linear = LinearRegressor().fit(examples)
        for ts, fs, y in LINEAR_ROWS:
            assert abs(linear.predict((ts, fs)) - y) < 1e-9

        knn = KNNRegressor(k=1).fit(examples)
        for ex in examples:
            assert knn.predict(ex.features) == ex.label

        cvxpy = pytest.importorskip("cvxpy")
        svr = SVRRegressor().fit(examples)
        X = np.array([e.features for e in examples])
        y = np.array([e.label for e in examples])
        K = X @ X.T + 1.0
        b = cvxpy.Variable(len(y))
        problem = cvxpy.Problem(
            cvxpy.Minimize(
                0.5 * cvxpy.quad_form(b, cvxpy.psd_wrap(K))
                - y @ b
                + svr.epsilon * cvxpy.norm1(b)
            ),
            [b >= -svr.C, b <= svr.C],
        )
        problem.solve()
        assert abs(svr.dual_objective() - problem.value) < 1e-4


def _random_matrix(rng: random.Random):
    validators = [f"v{j}" for j in range(rng.randint(1, 7))]
    items = [f"i{j}" for j in range(rng.randint(1, 5))]
    decisions = {
        v: {
            i: rng.choice(["accept", "reject", "abstain"])
            for i in items
            if rng.random() < 0.9
        }
        for v in validators
    }
    matrix = DecisionMatrix.from_dict({"items": items, "decisions": decisions})
    return matrix, validators, items, decisions


def test_voting_properties():
    with criterion("uniform-weight majority reduction, scaling invariance, zero-weight neutrality x1000"):
        rng = random.Random(61)
        for _ in range(1000):
            matrix, validators, items, decisions = _random_matrix(rng)
            # uniform weights reduce to naive counting majority
            uniform = weighted_vote(matrix, {v: 1.0 for v in validators})
            for item in items:
                acc = sum(1 for v in validators if decisions[v].get(item) == "accept")
                rej = sum(1 for v in validators if decisions[v].get(item) == "reject")
                want = Decision.ACCEPT if acc > rej else Decision.REJECT
                assert uniform[item] == want
            # positive scaling leaves every outcome unchanged
            weights = {v: rng.random() + 0.05 for v in validators}
            scale = rng.random() * 10 + 0.1
            assert weighted_vote(matrix, weights) == weighted_vote(
                matrix, {v: w * scale for v, w in weights.items()}
            )
            # a zero-weight validator is equivalent to an absent one
            if len(validators) > 1:
                dropped = validators[0]
                zeroed = dict(weights, **{dropped: 0.0})
                rest = [v for v in validators if v != dropped]
                assert weighted_vote(matrix, zeroed) == weighted_vote(
                    matrix.restricted(rest), weights
                )


def test_end_to_end_expertise_advantage():
    with criterion("weighted pipeline beats naive majority for all regressors; 7 folds of 4 with rotating validation"):
        with deadline(60):
            crowd = make_crowd()
            assert len(crowd.examples) == 28
            plan = FoldPlan.build(28, 7)
            assert [len(f) for f in plan.folds] == [4] * 7
            for t, train, val, test in plan.splits():
                assert val == plan.folds[(t + 1) % 7]

            majority = cv_evaluate(
                crowd.examples, crowd.matrix, crowd.gold, MajorityBaseline, plan=plan
            )
            for factory in (LinearRegressor, lambda: KNNRegressor(k=3), SVRRegressor):
                weighted = cv_evaluate(
                    crowd.examples, crowd.matrix, crowd.gold, factory, plan=plan
                )
                assert weighted.test_accuracy > majority.test_accuracy
                assert weighted.val_accuracy > majority.val_accuracy


def test_service_contract(tmp_path):
    with criterion("upload→list→decide→finalize flow, restart persistence, missing-handle warnings"):
        data_dir = tmp_path / "data"
        archive, handles, experts = make_archive()
        archive_path = tmp_path / "archive.json"
        archive_path.write_text(
            json.dumps(
                {
                    "profiles": {
                        h: {"tweets": p.tweets, "friends": p.friends}
                        for h, p in archive.profiles.items()
                    }
                }
            )
        )
        with TestClient(create_app(data_dir)) as client:
            resp = client.post(
                "/ontologies",
                data={"name": "pizza"},
                files={
                    "enriched": ("enriched.ttl", read_fixture("pizza_enriched.ttl")),
                    "base": ("base.ttl", read_fixture("pizza_base.ttl")),
                },
            )
            assert resp.status_code == 201
            oid = resp.json()["id"]
            items = client.get(f"/ontologies/{oid}/elements").json()
            assert len(items) == 5
            item = items[0]["item_key"]
            for handle, decision in (
                (sorted(experts)[0], "accept"),
                ("stranger", "reject"),
            ):
                assert (
                    client.post(
                        f"/ontologies/{oid}/decisions",
                        json={
                            "validator_handle": handle,
                            "item_key": item,
                            "decision": decision,
                        },
                    ).status_code
                    == 204
                )

        # restart: a fresh process over the same directory replays state
        with TestClient(create_app(data_dir)) as client:
            assert [o["id"] for o in client.get("/ontologies").json()] == [oid]
            assert len(client.get(f"/ontologies/{oid}/decisions").json()) == 2
            result = client.post(
                f"/ontologies/{oid}/finalize",
                json={"archive_path": str(archive_path)},
            ).json()
            assert len(result["warnings"]) == 1 and "stranger" in result["warnings"][0]
            assert result["items"][item]["decision"] == "accept"
            assert result["items"][item]["reject_weight"] == 0
