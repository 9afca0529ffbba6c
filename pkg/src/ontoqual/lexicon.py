"""Text utilities behind the functional clauses and comparative
operators: identifier tokenization, conjunction/polysemy checks, naming
convention classification, cosine similarity, and embedding providers.

Two embedding providers ship: a deterministic character-trigram hashing
embedder (the default) and a fixture-file provider that returns
precomputed vectors, so real sentence-encoder vectors can be dropped in
without a model dependency.
"""

from __future__ import annotations

import json
import math
import re
import zlib
from pathlib import Path
from typing import Protocol, Sequence

Vector = tuple[float, ...]

CONJUNCTIONS = frozenset({"and", "or", "nor"})
CONJUNCTION_CHARS = frozenset({"&", "/"})

_WORD_PIECE_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+")


class DimensionMismatchError(Exception):
    pass


class MissingLexiconError(Exception):
    pass


class UnknownTextError(KeyError):
    """Fixture embedding provider has no vector for the text."""


def tokenize_identifier(identifier: str) -> list[str]:
    """Split an identifier or label on camelCase boundaries, underscores,
    hyphens, digits and whitespace; lowercase the pieces."""
    return [m.group(0).lower() for m in _WORD_PIECE_RE.finditer(identifier)]


def contains_conjunctions(text: str) -> bool:
    """True iff the text merges concepts with a conjunction token
    (and/or/nor) or a joining character (& or /)."""
    if any(c in CONJUNCTION_CHARS for c in text):
        return True
    return any(tok in CONJUNCTIONS for tok in tokenize_identifier(text))


class SenseLexicon:
    """Word → sense-count table. Unknown words count as monosemous."""

    def __init__(self, senses: dict[str, int]) -> None:
        for word, count in senses.items():
            if count < 1:
                raise ValueError(f"sense count for {word!r} must be >= 1")
        self._senses = {w.lower(): c for w, c in senses.items()}

    @classmethod
    def from_file(cls, path: str | Path) -> "SenseLexicon":
        path = Path(path)
        if not path.exists():
            raise MissingLexiconError(str(path))
        return cls(json.loads(path.read_text(encoding="utf-8")))

    @classmethod
    def bundled(cls) -> "SenseLexicon":
        return cls.from_file(Path(__file__).parent / "data" / "senses.json")

    def sense_count(self, word: str) -> int:
        return self._senses.get(word.lower(), 1)

    def __len__(self) -> int:
        return len(self._senses)


def contains_polysemes(text: str, lexicon: SenseLexicon, threshold: int = 1) -> bool:
    """True iff any token of the text has more than `threshold` senses."""
    return any(lexicon.sense_count(tok) > threshold for tok in tokenize_identifier(text))


_PCT_ENCODED_RE = re.compile(r"%[0-9A-Fa-f]{2}")


def text_validity(text: str) -> bool:
    """A text is valid iff non-empty, contains a letter, and is free of
    control characters and percent-encoded fragments."""
    if not text or not any(c.isalpha() for c in text):
        return False
    if any(ord(c) < 32 or ord(c) == 127 for c in text):
        return False
    return not _PCT_ENCODED_RE.search(text)


_PASCAL_RE = re.compile(r"[A-Z][a-z0-9]*(?:[A-Z][a-z0-9]*)*")
_CAMEL_RE = re.compile(r"[a-z][a-z0-9]*(?:[A-Z][a-z0-9]*)+")
_SNAKE_RE = re.compile(r"[a-z][a-z0-9]*(?:_[a-z0-9]+)+")


def naming_convention(identifier: str) -> str:
    """Classify an identifier as pascal / camel / snake / other.
    Single lowercase words count as camel (they are valid in both
    camelCase and snake_case; camel wins for determinism)."""
    if _PASCAL_RE.fullmatch(identifier):
        return "pascal"
    if _CAMEL_RE.fullmatch(identifier) or re.fullmatch(r"[a-z][a-z0-9]*", identifier):
        return "camel"
    if _SNAKE_RE.fullmatch(identifier):
        return "snake"
    return "other"


def id_consistency(ids: Sequence[str]) -> bool:
    """True iff every id follows the single dominant naming convention
    of the set. Permutation-invariant."""
    if not ids:
        raise ValueError("id_consistency requires at least one id")
    return len({naming_convention(i) for i in ids}) == 1


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    """Cosine similarity; 0.0 when either vector has zero norm."""
    if len(a) != len(b):
        raise DimensionMismatchError(f"{len(a)} != {len(b)}")
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(y * y for y in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return dot / (na * nb)


class EmbeddingProvider(Protocol):
    dim: int

    def embed(self, text: str) -> Vector: ...


class TrigramHashEmbedder:
    """Deterministic signed character-trigram hashing into a fixed
    number of buckets, L2-normalized. Empty text maps to the zero
    vector by convention."""

    def __init__(self, dim: int = 256) -> None:
        self.dim = dim
        self._cache: dict[str, Vector] = {}

    def _trigrams(self, text: str) -> list[str]:
        norm = " ".join(tokenize_identifier(text))
        if not norm:
            return []
        padded = f"  {norm} "
        return [padded[i : i + 3] for i in range(len(padded) - 2)]

    def embed(self, text: str) -> Vector:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        vec = [0.0] * self.dim
        for gram in self._trigrams(text):
            h = zlib.crc32(gram.encode("utf-8"))
            sign = 1.0 if (h >> 16) & 1 else -1.0
            vec[h % self.dim] += sign
        norm = math.sqrt(sum(v * v for v in vec))
        if norm > 0.0:
            vec = [v / norm for v in vec]
        out = tuple(vec)
        self._cache[text] = out
        return out


class FixtureEmbedder:
    """Embedding provider reading a precomputed text → vector map from
    a JSON fixture: {"dim": d, "vectors": {"<text>": [...d floats...]}}."""

    def __init__(self, dim: int, vectors: dict[str, Sequence[float]]) -> None:
        self.dim = dim
        self._vectors: dict[str, Vector] = {}
        for text, vec in vectors.items():
            if len(vec) != dim:
                raise DimensionMismatchError(f"vector for {text!r} has length {len(vec)}, expected {dim}")
            self._vectors[text] = tuple(float(v) for v in vec)

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureEmbedder":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(int(data["dim"]), data["vectors"])

    def embed(self, text: str) -> Vector:
        try:
            return self._vectors[text]
        except KeyError:
            raise UnknownTextError(text) from None
