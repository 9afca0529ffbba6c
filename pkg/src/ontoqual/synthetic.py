"""Deterministic synthetic crowdsourcing data for desk-scale
evaluation: a validator archive whose expert profiles are keyword
aligned, plus an adversarial decision matrix where the lay majority is
wrong on every niche item, so naive majority voting fails while
expertise weighting succeeds."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .expertise import (
    ExpertiseConfig,
    Profile,
    ProfileArchive,
    friend_sim,
    tweet_sim,
)
from .lexicon import EmbeddingProvider, TrigramHashEmbedder
from .regress import Decision, DecisionMatrix, TrainingExample

_EXPERT_TEXTS = [
    "pizza margherita fresh from the wood fired oven",
    "tried a new pizza dough hydration tonight",
    "pizza napoletana needs a blistered cornicione",
    "best pizza toppings ranked by my kitchen",
    "sourdough pizza base experiment day three",
    "my pizza stone finally cracked after years",
    "pizza sauce from san marzano tomatoes only",
    "cold ferment makes the pizza crust better",
]

_LAYMAN_TEXTS = [
    "traffic on the highway again this morning",
    "great football match tonight with friends",
    "finally finished reading that mystery novel",
    "the weather has been gloomy all week",
    "new phone battery lasts two whole days",
    "planted tulips in the garden yesterday",
    "caught the early train for once today",
    "weekend hike up the northern ridge trail",
]


@dataclass
class SyntheticCrowd:
    archive: ProfileArchive
    handles: list[str]  # fold order: experts spread round-robin
    expert_handles: set[str]
    examples: list[TrainingExample]
    matrix: DecisionMatrix
    gold: dict[str, Decision]


def make_archive(
    n_experts: int = 11,
    n_laymen: int = 17,
    tweets_per: int = 30,
    friends_per: int = 6,
    seed: int = 0,
) -> tuple[ProfileArchive, list[str], set[str]]:
    """Archive of expert and lay profiles. Experts post keyword-aligned
    texts and follow other experts; laymen do neither. Handles are
    returned with experts spread round-robin so contiguous folds mix
    both groups."""
    rng = random.Random(seed)
    experts = [f"expert{i:02d}" for i in range(n_experts)]
    laymen = [f"layman{i:02d}" for i in range(n_laymen)]

    def tweets(pool: Sequence[str]) -> list[str]:
        return [
            f"{rng.choice(pool)} #{rng.randrange(1000)}" for _ in range(tweets_per)
        ]

    profiles: dict[str, Profile] = {}
    for i, h in enumerate(experts):
        friends = [experts[(i + 1 + j) % n_experts] for j in range(min(friends_per, n_experts - 1))]
        profiles[h] = Profile(tweets=tweets(_EXPERT_TEXTS), friends=friends)
    for i, h in enumerate(laymen):
        friends = [laymen[(i + 1 + j) % n_laymen] for j in range(min(friends_per, n_laymen - 1))]
        profiles[h] = Profile(tweets=tweets(_LAYMAN_TEXTS), friends=friends)

    # Interleave so every fold of 4 contains at least one expert.
    ordered: list[str] = []
    e_iter, l_iter = iter(experts), iter(laymen)
    pattern = [True, False, False, True, False, False, False]  # ~40% experts
    i = 0
    while len(ordered) < n_experts + n_laymen:
        want_expert = pattern[i % len(pattern)]
        i += 1
        pick = next(e_iter, None) if want_expert else next(l_iter, None)
        if pick is None:
            pick = next(l_iter, None) or next(e_iter, None)
        ordered.append(pick)
    return ProfileArchive(profiles), ordered, set(experts)


def make_crowd(
    n_items: int = 20,
    config: Optional[ExpertiseConfig] = None,
    embedder: Optional[EmbeddingProvider] = None,
    seed: int = 0,
) -> SyntheticCrowd:
    """Full synthetic evaluation dataset: features from the archive,
    labels as correct-answer ratios, and an adversarial accept/reject
    matrix where every layman answers every item wrong."""
    config = config or ExpertiseConfig(domain_keywords=("pizza",))
    embedder = embedder or TrigramHashEmbedder()
    archive, handles, expert_handles = make_archive(seed=seed)

    items = [f"item{i:02d}" for i in range(n_items)]
    gold = {
        item: Decision.ACCEPT if i % 2 == 0 else Decision.REJECT
        for i, item in enumerate(items)
    }
    matrix = DecisionMatrix(items=items, validators=list(handles))
    examples: list[TrainingExample] = []
    for handle in handles:
        is_expert = handle in expert_handles
        correct = 0
        for item in items:
            answer = gold[item] if is_expert else _flip(gold[item])
            matrix.decisions[(handle, item)] = answer
            correct += answer == gold[item]
        ts = tweet_sim(handle, archive, config, embedder)
        fs = friend_sim(handle, archive, config, embedder)
        examples.append(TrainingExample(ts, fs, correct / len(items)))
    return SyntheticCrowd(
        archive=archive,
        handles=handles,
        expert_handles=expert_handles,
        examples=examples,
        matrix=matrix,
        gold=gold,
    )


def _flip(d: Decision) -> Decision:
    return Decision.REJECT if d == Decision.ACCEPT else Decision.ACCEPT
