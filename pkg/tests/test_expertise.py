import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ontoqual.expertise import (
    ExpertiseConfig,
    IdentityBaseline,
    Profile,
    ProfileArchive,
    UnknownHandleError,
    friend_sim,
    tweet_expert_scores,
    tweet_sim,
)
from ontoqual.lexicon import TrigramHashEmbedder, cosine

EMB = TrigramHashEmbedder()

POST_POOL = [
    "pizza margherita with fresh basil",
    "wood fired pizza oven tonight",
    "tomato sauce recipe",
    "stock market update",
    "my cat sleeps all day",
    "new firewall rules deployed",
    "pizza base dough rising",
    "weekend football scores",
]


def oracle_tweet_sim(profile: Profile, config: ExpertiseConfig) -> float:
    """Independent re-statement: truncate, score each post by the max
    keyword cosine, sort descending, average the head."""
    posts = profile.tweets[: config.n]
    if not posts:
        return 0.0
    kvs = [EMB.embed(k) for k in config.domain_keywords]
    sims = sorted(
        (max(cosine(EMB.embed(p), kv) for kv in kvs) for p in posts), reverse=True
    )
    head = sims[: config.top_k]
    return sum(head) / len(head)


def oracle_friend_sim(handle: str, archive: ProfileArchive, config: ExpertiseConfig) -> float:
    friends = [f for f in archive.get(handle).friends if f in archive][: config.m]
    if not friends:
        return 0.0
    scores = sorted(
        (oracle_tweet_sim(archive.get(f), config) for f in friends), reverse=True
    )
    head = scores[: config.top_k_friends]
    return sum(head) / len(head)


def random_archive(rng: random.Random, n_profiles: int = 8) -> ProfileArchive:
    handles = [f"u{i}" for i in range(n_profiles)]
    profiles = {}
    for h in handles:
        tweets = [rng.choice(POST_POOL) for _ in range(rng.randint(0, 12))]
        friends = rng.sample(handles, rng.randint(0, n_profiles - 1))
        if rng.random() < 0.3:
            friends.append("ghost")  # unresolvable
        profiles[h] = Profile(tweets=tweets, friends=friends)
    return ProfileArchive(profiles)


SMALL = ExpertiseConfig(n=10, m=5, top_k=3, top_k_friends=2)


class TestConfig:
    def test_defaults(self):
        cfg = ExpertiseConfig()
        assert (cfg.n, cfg.m, cfg.top_k, cfg.top_k_friends) == (200, 50, 20, 5)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"top_k": 11, "n": 10},
            {"top_k_friends": 6, "m": 5},
            {"domain_keywords": ()},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ExpertiseConfig(**kwargs)


class TestArchive:
    def test_round_trip_via_dict(self):
        data = {"profiles": {"a": {"tweets": ["t"], "friends": ["b"]}, "b": {}}}
        arch = ProfileArchive.from_dict(data)
        assert arch.get("a").tweets == ["t"]
        assert arch.get("b").friends == []
        assert "a" in arch and "c" not in arch

    def test_unknown_handle(self):
        with pytest.raises(UnknownHandleError):
            ProfileArchive({}).get("nobody")

    def test_from_file(self, tmp_path):
        p = tmp_path / "arch.json"
        p.write_text('{"profiles": {"x": {"tweets": ["hi"]}}}')
        assert ProfileArchive.from_file(p).get("x").tweets == ["hi"]


class TestTweetSim:
    def test_matches_oracle_on_random_archives(self):
        rng = random.Random(11)
        for _ in range(60):
            arch = random_archive(rng)
            for h in arch.profiles:
                got = tweet_sim(h, arch, SMALL, EMB)
                want = oracle_tweet_sim(arch.get(h), SMALL)
                assert got == pytest.approx(want, abs=1e-12)

    def test_empty_profile_scores_zero(self):
        arch = ProfileArchive({"a": Profile()})
        assert tweet_sim("a", arch, SMALL, EMB) == 0.0

    def test_truncates_to_first_n(self):
        relevant, junk = POST_POOL[0], POST_POOL[3]
        cfg = ExpertiseConfig(n=2, m=5, top_k=2, top_k_friends=1)
        arch = ProfileArchive({"a": Profile(tweets=[junk, junk, relevant])})
        # relevant post is outside the first-n window: must be ignored
        assert tweet_sim("a", arch, cfg, EMB) == pytest.approx(
            cosine(EMB.embed(junk), EMB.embed("Pizza"))
        )

    def test_multi_keyword_takes_max(self):
        cfg = ExpertiseConfig(
            n=5, m=5, top_k=1, top_k_friends=1, domain_keywords=("Pizza", "firewall")
        )
        arch = ProfileArchive({"a": Profile(tweets=["new firewall rules deployed"])})
        assert tweet_sim("a", arch, cfg, EMB) == pytest.approx(
            cosine(EMB.embed("new firewall rules deployed"), EMB.embed("firewall"))
        )

    def test_order_of_equal_window_posts_irrelevant(self):
        tweets = POST_POOL[:4]
        a = ProfileArchive({"u": Profile(tweets=tweets)})
        b = ProfileArchive({"u": Profile(tweets=list(reversed(tweets)))})
        cfg = ExpertiseConfig(n=4, m=5, top_k=2, top_k_friends=1)
        assert tweet_sim("u", a, cfg, EMB) == pytest.approx(tweet_sim("u", b, cfg, EMB))

    def test_adding_relevant_post_cannot_lower_score(self):
        cfg = ExpertiseConfig(n=10, m=5, top_k=3, top_k_friends=1)
        base_tweets = [POST_POOL[3], POST_POOL[4]]
        before = tweet_sim(
            "u", ProfileArchive({"u": Profile(tweets=base_tweets)}), cfg, EMB
        )
        after = tweet_sim(
            "u",
            ProfileArchive({"u": Profile(tweets=["pizza pizza pizza"] + base_tweets)}),
            cfg,
            EMB,
        )
        assert after >= before


class TestFriendSim:
    def test_matches_oracle_on_random_archives(self):
        rng = random.Random(13)
        for _ in range(60):
            arch = random_archive(rng)
            for h in arch.profiles:
                got = friend_sim(h, arch, SMALL, EMB)
                want = oracle_friend_sim(h, arch, SMALL)
                assert got == pytest.approx(want, abs=1e-12)

    def test_no_resolvable_friends_scores_zero(self):
        arch = ProfileArchive({"a": Profile(friends=["ghost1", "ghost2"])})
        assert friend_sim("a", arch, SMALL, EMB) == 0.0

    def test_unresolvable_friends_skipped_not_counted(self):
        expert = Profile(tweets=["pizza margherita with fresh basil"] * 3)
        cfg = ExpertiseConfig(n=5, m=1, top_k=1, top_k_friends=1)
        arch = ProfileArchive(
            {"a": Profile(friends=["ghost", "e"]), "e": expert}
        )
        # the unresolvable first friend must not consume the m=1 slot
        assert friend_sim("a", arch, cfg, EMB) == pytest.approx(
            tweet_sim("e", arch, cfg, EMB)
        )


class TestScores:
    def test_records_in_input_order_and_clamped(self):
        rng = random.Random(17)
        arch = random_archive(rng)
        handles = sorted(arch.profiles)
        records = tweet_expert_scores(handles, arch, SMALL, EMB)
        assert [r.handle for r in records] == handles
        for r in records:
            assert 0.0 <= r.score <= 1.0
            assert r.tweet_sim == pytest.approx(tweet_sim(r.handle, arch, SMALL, EMB))
            assert r.friend_sim == pytest.approx(friend_sim(r.handle, arch, SMALL, EMB))

    def test_identity_baseline_is_clamped_mean(self):
        assert IdentityBaseline().predict((0.2, 0.4)) == pytest.approx(0.3)
        assert IdentityBaseline().predict((2.0, 2.0)) == 1.0
        assert IdentityBaseline().predict((-1.0, -1.0)) == 0.0

    def test_custom_model_applied(self):
        class Half:
            def predict(self, features):
                return 0.5

        arch = ProfileArchive({"a": Profile(tweets=["pizza"])})
        rec = tweet_expert_scores(["a"], arch, SMALL, EMB, model=Half())[0]
        assert rec.score == 0.5

    def test_record_dict_shape(self):
        arch = ProfileArchive({"a": Profile()})
        d = tweet_expert_scores(["a"], arch, SMALL, EMB)[0].to_dict()
        assert set(d) == {"handle", "tweet_sim", "friend_sim", "score"}


posts_strategy = st.lists(st.sampled_from(POST_POOL), max_size=15)


class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(posts_strategy, st.integers(1, 5))
    def test_top_k_average_bounded_by_best_post(self, tweets, k):
        cfg = ExpertiseConfig(n=15, m=5, top_k=k, top_k_friends=1)
        arch = ProfileArchive({"u": Profile(tweets=tweets)})
        score = tweet_sim("u", arch, cfg, EMB)
        if not tweets:
            assert score == 0.0
        else:
            best = max(
                cosine(EMB.embed(t), EMB.embed("Pizza")) for t in tweets
            )
            assert score <= best + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(posts_strategy.filter(bool), st.integers(1, 5), st.integers(1, 5))
    def test_smaller_k_never_scores_lower(self, tweets, k1, k2):
        lo, hi = sorted((k1, k2))
        arch = ProfileArchive({"u": Profile(tweets=tweets)})
        cfg_lo = ExpertiseConfig(n=15, m=5, top_k=lo, top_k_friends=1)
        cfg_hi = ExpertiseConfig(n=15, m=5, top_k=hi, top_k_friends=1)
        assert tweet_sim("u", arch, cfg_lo, EMB) >= tweet_sim("u", arch, cfg_hi, EMB) - 1e-12
