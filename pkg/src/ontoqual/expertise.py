"""Validator expertise features from offline profile archives.

For each validator: the similarity of their most recent posts to the
ontology's domain keyword(s) is computed with an embedding provider,
the top-K similarities are averaged into a post-similarity feature, and
the same statistic over their most recent friends' features gives a
friend-similarity feature. A pluggable regressor maps the two features
to the final expertise score used as a vote weight.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol, Sequence

from .lexicon import EmbeddingProvider, TrigramHashEmbedder, cosine


class UnknownHandleError(Exception):
    def __init__(self, handle: str) -> None:
        super().__init__(f"handle {handle!r} not in archive")
        self.handle = handle


class UntrainedModelError(Exception):
    pass


@dataclass
class Profile:
    tweets: list[str] = field(default_factory=list)  # most recent first
    friends: list[str] = field(default_factory=list)  # most recent first


class ProfileArchive:
    """Offline stand-in for live profile fetching: handle → profile.
    Friend handles that do not resolve within the archive are treated
    as unresolvable and skipped."""

    def __init__(self, profiles: dict[str, Profile]) -> None:
        self.profiles = profiles

    @classmethod
    def from_dict(cls, data: dict) -> "ProfileArchive":
        profiles = {
            handle: Profile(
                tweets=list(p.get("tweets", ())),
                friends=list(p.get("friends", ())),
            )
            for handle, p in data.get("profiles", {}).items()
        }
        return cls(profiles)

    @classmethod
    def from_file(cls, path: str | Path) -> "ProfileArchive":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def __contains__(self, handle: str) -> bool:
        return handle in self.profiles

    def get(self, handle: str) -> Profile:
        try:
            return self.profiles[handle]
        except KeyError:
            raise UnknownHandleError(handle) from None


@dataclass
class ExpertiseConfig:
    n: int = 200  # max posts considered
    m: int = 50  # max friends considered
    top_k: int = 20  # averaged best post similarities
    top_k_friends: int = 5  # averaged best friend features
    domain_keywords: Sequence[str] = ("Pizza",)

    def __post_init__(self) -> None:
        if self.top_k > self.n:
            raise ValueError("top_k must not exceed n")
        if self.top_k_friends > self.m:
            raise ValueError("top_k_friends must not exceed m")
        if not self.domain_keywords:
            raise ValueError("at least one domain keyword required")


@dataclass(frozen=True)
class ExpertiseRecord:
    handle: str
    tweet_sim: float
    friend_sim: float
    score: float

    def to_dict(self) -> dict:
        return {
            "handle": self.handle,
            "tweet_sim": self.tweet_sim,
            "friend_sim": self.friend_sim,
            "score": self.score,
        }


class ScoreModel(Protocol):
    def predict(self, features: Sequence[float]) -> float: ...


class IdentityBaseline:
    """Untrained fallback: the mean of the two features, clamped."""

    def predict(self, features: Sequence[float]) -> float:
        return max(0.0, min(1.0, sum(features) / len(features)))


def _keyword_vectors(config: ExpertiseConfig, embedder: EmbeddingProvider):
    return [embedder.embed(k) for k in config.domain_keywords]


def tweet_sim(
    handle: str,
    archive: ProfileArchive,
    config: ExpertiseConfig,
    embedder: Optional[EmbeddingProvider] = None,
) -> float:
    """Average of the top-K post-to-keyword similarities over the first
    n posts; multi-keyword similarity is the max over keywords. 0.0 for
    a profile with no posts."""
    embedder = embedder or TrigramHashEmbedder()
    profile = archive.get(handle)
    posts = profile.tweets[: config.n]
    if not posts:
        return 0.0
    keywords = _keyword_vectors(config, embedder)
    sims = [max(cosine(embedder.embed(post), kv) for kv in keywords) for post in posts]
    sims.sort(reverse=True)
    best = sims[: min(config.top_k, len(sims))]
    return sum(best) / len(best)


def friend_sim(
    handle: str,
    archive: ProfileArchive,
    config: ExpertiseConfig,
    embedder: Optional[EmbeddingProvider] = None,
) -> float:
    """Average of the top-K' tweet_sim values over the first m
    resolvable friends; 0.0 when no friend resolves."""
    embedder = embedder or TrigramHashEmbedder()
    profile = archive.get(handle)
    resolvable = [f for f in profile.friends if f in archive][: config.m]
    if not resolvable:
        return 0.0
    scores = sorted(
        (tweet_sim(f, archive, config, embedder) for f in resolvable), reverse=True
    )
    best = scores[: min(config.top_k_friends, len(scores))]
    return sum(best) / len(best)


def tweet_expert_scores(
    handles: Sequence[str],
    archive: ProfileArchive,
    config: ExpertiseConfig,
    embedder: Optional[EmbeddingProvider] = None,
    model: Optional[ScoreModel] = None,
) -> list[ExpertiseRecord]:
    """Full expertise records in input-handle order. Scores are clamped
    to [0, 1] so they can serve directly as vote weights."""
    embedder = embedder or TrigramHashEmbedder()
    model = model or IdentityBaseline()
    records = []
    for handle in handles:
        ts = tweet_sim(handle, archive, config, embedder)
        fs = friend_sim(handle, archive, config, embedder)
        raw = model.predict((ts, fs))
        records.append(
            ExpertiseRecord(handle, ts, fs, max(0.0, min(1.0, float(raw))))
        )
    return records
