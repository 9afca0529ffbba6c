"""Regression models for expertise prediction, the 7-fold cross
validation harness, and expertise-weighted majority voting."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np


class InsufficientDataError(Exception):
    pass


class DegenerateDataError(Exception):
    pass


class MissingWeightError(Exception):
    def __init__(self, handle: str) -> None:
        super().__init__(f"no weight for validator {handle!r}")
        self.handle = handle


class FoldMisalignmentError(Exception):
    pass


class EmptySubsetError(Exception):
    pass


class Decision(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    ABSTAIN = "abstain"


@dataclass(frozen=True)
class TrainingExample:
    tweet_sim: float
    friend_sim: float
    label: float  # ratio of correct answers in [0, 1]

    @property
    def features(self) -> tuple[float, float]:
        return (self.tweet_sim, self.friend_sim)


class Regressor:
    """Strategy interface: fit on (feature, label) examples, then
    predict deterministically."""

    name = "base"

    def fit(self, examples: Sequence[TrainingExample]) -> "Regressor":
        raise NotImplementedError

    def predict(self, features: Sequence[float]) -> float:
        raise NotImplementedError

    def _require_fitted(self, attr: str) -> None:
        if getattr(self, attr, None) is None:
            from .expertise import UntrainedModelError

            raise UntrainedModelError(f"{self.name} regressor is not fitted")


def _check_examples(examples: Sequence[TrainingExample], minimum: int) -> np.ndarray:
    if len(examples) < minimum:
        raise InsufficientDataError(f"need at least {minimum} examples, got {len(examples)}")
    return np.array([e.features for e in examples], dtype=float)


class LinearRegressor(Regressor):
    """Ordinary least squares with intercept."""

    name = "linear"

    def __init__(self) -> None:
        self.coef: Optional[np.ndarray] = None

    def fit(self, examples: Sequence[TrainingExample]) -> "LinearRegressor":
        X = _check_examples(examples, 2)
        if np.allclose(X, X[0]):
            raise DegenerateDataError("all feature vectors identical")
        y = np.array([e.label for e in examples], dtype=float)
        A = np.hstack([X, np.ones((len(X), 1))])
        self.coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        return self

    def predict(self, features: Sequence[float]) -> float:
        self._require_fitted("coef")
        x = np.append(np.asarray(features, dtype=float), 1.0)
        return float(x @ self.coef)


class KNNRegressor(Regressor):
    """Mean label of the k nearest training points (Euclidean
    distance, ties broken by training order)."""

    name = "knn"

    def __init__(self, k: int = 3) -> None:
        self.k = k
        self.X: Optional[np.ndarray] = None
        self.y: Optional[np.ndarray] = None

    def fit(self, examples: Sequence[TrainingExample]) -> "KNNRegressor":
        self.X = _check_examples(examples, self.k)
        self.y = np.array([e.label for e in examples], dtype=float)
        return self

    def predict(self, features: Sequence[float]) -> float:
        self._require_fitted("X")
        d = np.linalg.norm(self.X - np.asarray(features, dtype=float), axis=1)
        nearest = np.argsort(d, kind="stable")[: self.k]
        return float(self.y[nearest].mean())


class SVRRegressor(Regressor):
    """Epsilon-insensitive support vector regression, linear kernel,
    trained by dual coordinate descent. The bias is absorbed into the
    kernel (K + 1), which drops the equality constraint and gives each
    coordinate a closed-form soft-threshold update."""

    name = "svr"

    def __init__(
        self,
        C: float = 10.0,
        epsilon: float = 0.01,
        tol: float = 1e-6,
        max_iter: int = 10_000,
    ) -> None:
        self.C = C
        self.epsilon = epsilon
        self.tol = tol
        self.max_iter = max_iter
        self.beta: Optional[np.ndarray] = None
        self.X: Optional[np.ndarray] = None

    def fit(self, examples: Sequence[TrainingExample]) -> "SVRRegressor":
        X = _check_examples(examples, 2)
        if np.allclose(X, X[0]):
            raise DegenerateDataError("all feature vectors identical")
        y = np.array([e.label for e in examples], dtype=float)
        self._y = y
        K = X @ X.T + 1.0
        n = len(y)
        beta = np.zeros(n)
        f = K @ beta  # current decision values
        for _ in range(self.max_iter):
            max_delta = 0.0
            for i in range(n):
                # minimize over beta_i: 1/2 Kii b^2 + b (f_i - Kii beta_i - y_i) + eps|b|
                g = f[i] - K[i, i] * beta[i] - y[i]
                if g + self.epsilon < 0:
                    b_new = -(g + self.epsilon) / K[i, i]
                elif g - self.epsilon > 0:
                    b_new = -(g - self.epsilon) / K[i, i]
                else:
                    b_new = 0.0
                b_new = float(np.clip(b_new, -self.C, self.C))
                delta = b_new - beta[i]
                if delta != 0.0:
                    f += delta * K[i]
                    beta[i] = b_new
                    max_delta = max(max_delta, abs(delta))
            if max_delta < self.tol:
                break
        self.beta = beta
        self.X = X
        return self

    def dual_objective(self) -> float:
        """0.5 b'Kb - y'b + eps*||b||_1 for the trained coefficients."""
        self._require_fitted("beta")
        K = self.X @ self.X.T + 1.0
        y = self._y
        return float(0.5 * self.beta @ K @ self.beta - y @ self.beta + self.epsilon * np.abs(self.beta).sum())

    def weights(self) -> tuple[np.ndarray, float]:
        """Primal (w, b) recovered from the dual coefficients."""
        self._require_fitted("beta")
        w = self.X.T @ self.beta
        b = float(self.beta.sum())
        return w, b

    def predict(self, features: Sequence[float]) -> float:
        self._require_fitted("beta")
        x = np.asarray(features, dtype=float)
        return float(self.beta @ (self.X @ x + 1.0))


class MajorityBaseline(Regressor):
    """Naive baseline: every validator gets weight 1."""

    name = "majority"

    def fit(self, examples: Sequence[TrainingExample]) -> "MajorityBaseline":
        return self

    def predict(self, features: Sequence[float]) -> float:
        return 1.0


REGRESSORS: dict[str, Callable[[], Regressor]] = {
    "linear": LinearRegressor,
    "knn": KNNRegressor,
    "svr": SVRRegressor,
    "majority": MajorityBaseline,
}


def make_regressor(spec: str) -> Regressor:
    """Build a regressor from a spec string like 'svr', 'knn:5' or
    'svr:C=5,epsilon=0.1'."""
    name, _, args = spec.partition(":")
    try:
        factory = REGRESSORS[name]
    except KeyError:
        raise ValueError(f"unknown regressor {name!r} (choose from {sorted(REGRESSORS)})")
    if not args:
        return factory()
    kwargs = {}
    for part in args.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            if name == "knn":
                kwargs["k"] = int(part)
                continue
            raise ValueError(f"malformed regressor argument {part!r}")
        kwargs[key] = float(value) if key != "k" else int(value)
    if "k" in kwargs:
        kwargs["k"] = int(kwargs["k"])
    return factory(**kwargs)


@dataclass
class DecisionMatrix:
    items: list[str]
    validators: list[str]
    decisions: dict[tuple[str, str], Decision] = field(default_factory=dict)

    def decision(self, validator: str, item: str) -> Decision:
        return self.decisions.get((validator, item), Decision.ABSTAIN)

    def restricted(self, validators: Sequence[str]) -> "DecisionMatrix":
        keep = set(validators)
        return DecisionMatrix(
            items=list(self.items),
            validators=[v for v in self.validators if v in keep],
            decisions={
                (v, i): d for (v, i), d in self.decisions.items() if v in keep
            },
        )

    @classmethod
    def from_dict(cls, data: dict) -> "DecisionMatrix":
        items = list(data["items"])
        decisions = {}
        validators = []
        for handle, per_item in data.get("decisions", {}).items():
            validators.append(handle)
            for item, decision in per_item.items():
                decisions[(handle, item)] = Decision(decision)
        return cls(items=items, validators=validators, decisions=decisions)

    @classmethod
    def from_file(cls, path: str | Path) -> "DecisionMatrix":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def weighted_vote(
    matrix: DecisionMatrix, weights: dict[str, float]
) -> dict[str, Decision]:
    """Per item: Accept iff the accepters' summed weight strictly
    exceeds the rejecters'; abstentions contribute nothing; ties go to
    Reject."""
    for v in matrix.validators:
        if v not in weights:
            raise MissingWeightError(v)
    out: dict[str, Decision] = {}
    for item in matrix.items:
        accept = reject = 0.0
        for v in matrix.validators:
            d = matrix.decision(v, item)
            if d == Decision.ACCEPT:
                accept += weights[v]
            elif d == Decision.REJECT:
                reject += weights[v]
        out[item] = Decision.ACCEPT if accept > reject else Decision.REJECT
    return out


@dataclass
class FoldPlan:
    """Partition into contiguous folds of near-equal size; for test
    fold t the validation fold is (t+1) mod n_folds and the rest train."""

    folds: list[list[int]]

    @classmethod
    def build(cls, n_examples: int, n_folds: int = 7) -> "FoldPlan":
        if n_folds < 3:
            raise ValueError("need at least 3 folds (train/val/test roles)")
        if n_examples < n_folds:
            raise InsufficientDataError(f"{n_examples} examples cannot fill {n_folds} folds")
        base, extra = divmod(n_examples, n_folds)
        folds, start = [], 0
        for i in range(n_folds):
            size = base + (1 if i < extra else 0)
            folds.append(list(range(start, start + size)))
            start += size
        return cls(folds)

    @property
    def n_folds(self) -> int:
        return len(self.folds)

    def splits(self):
        """Yield (test_fold_idx, train_idx, val_idx, test_idx)."""
        for t in range(self.n_folds):
            v = (t + 1) % self.n_folds
            train = [
                i for f in range(self.n_folds) if f not in (t, v) for i in self.folds[f]
            ]
            yield t, train, list(self.folds[v]), list(self.folds[t])


def _vote_accuracy(
    matrix: DecisionMatrix,
    gold: dict[str, Decision],
    weights: dict[str, float],
) -> float:
    voted = weighted_vote(matrix, weights)
    correct = sum(1 for item, d in voted.items() if gold.get(item) == d)
    return correct / len(voted) if voted else 0.0


@dataclass
class CvResult:
    val_accuracy: float
    test_accuracy: float
    fold_results: list[dict]

    def to_dict(self) -> dict:
        return {
            "val_accuracy": self.val_accuracy,
            "test_accuracy": self.test_accuracy,
            "folds": self.fold_results,
        }


def cv_evaluate(
    examples: Sequence[TrainingExample],
    matrix: DecisionMatrix,
    gold: dict[str, Decision],
    regressor_factory: Callable[[], Regressor],
    plan: Optional[FoldPlan] = None,
    n_folds: int = 7,
) -> CvResult:
    """Cross-validated voting accuracy. Examples align one-to-one with
    matrix.validators; per fold the regressor is fitted on the train
    folds and the val/test folds' validators vote with their predicted
    weights."""
    if len(examples) != len(matrix.validators):
        raise FoldMisalignmentError(
            f"{len(examples)} examples vs {len(matrix.validators)} validators"
        )
    missing = [i for i in matrix.items if i not in gold]
    if missing:
        raise FoldMisalignmentError(f"gold is missing items: {missing}")
    plan = plan or FoldPlan.build(len(examples), n_folds)
    covered = sorted(i for fold in plan.folds for i in fold)
    if covered != list(range(len(examples))):
        raise FoldMisalignmentError("fold plan does not partition the examples")

    validators = matrix.validators
    val_accs, test_accs, fold_results = [], [], []
    for t, train_idx, val_idx, test_idx in plan.splits():
        model = regressor_factory().fit([examples[i] for i in train_idx])

        def fold_accuracy(idx: list[int]) -> float:
            handles = [validators[i] for i in idx]
            weights = {
                validators[i]: max(0.0, min(1.0, model.predict(examples[i].features)))
                for i in idx
            }
            return _vote_accuracy(matrix.restricted(handles), gold, weights)

        va, ta = fold_accuracy(val_idx), fold_accuracy(test_idx)
        val_accs.append(va)
        test_accs.append(ta)
        fold_results.append(
            {"test_fold": t, "val_fold": (t + 1) % plan.n_folds, "val_accuracy": va, "test_accuracy": ta}
        )
    return CvResult(
        val_accuracy=sum(val_accs) / len(val_accs),
        test_accuracy=sum(test_accs) / len(test_accs),
        fold_results=fold_results,
    )


@dataclass
class EvalDataset:
    """A held-out evaluation side: validators' features, their decision
    matrix, and the gold answers."""

    examples: list[TrainingExample]
    matrix: DecisionMatrix
    gold: dict[str, Decision]


def evaluate_weighted(
    model: Regressor, dataset: EvalDataset
) -> float:
    weights = {
        v: max(0.0, min(1.0, model.predict(dataset.examples[i].features)))
        for i, v in enumerate(dataset.matrix.validators)
    }
    return _vote_accuracy(dataset.matrix, dataset.gold, weights)


def training_curve(
    examples_train: Sequence[TrainingExample],
    eval_set: EvalDataset,
    fractions: Sequence[float],
    trials: int,
    regressor_factory: Callable[[], Regressor],
    seed: int = 0,
) -> list[tuple[float, float]]:
    """Mean eval accuracy as a function of the training-set fraction:
    per fraction, `trials` shuffles each train on the first x% of the
    shuffled examples."""
    results = []
    for fraction in fractions:
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"fraction {fraction} outside (0, 1]")
        count = max(1, int(round(fraction * len(examples_train))))
        if count < 2:
            raise EmptySubsetError(f"fraction {fraction} yields {count} example(s)")
        accs = []
        for trial in range(trials):
            rng = random.Random((seed, fraction, trial).__hash__())
            shuffled = list(examples_train)
            rng.shuffle(shuffled)
            model = regressor_factory().fit(shuffled[:count])
            accs.append(evaluate_weighted(model, eval_set))
        results.append((fraction, sum(accs) / len(accs)))
    return results


def load_examples(path: str | Path) -> list[TrainingExample]:
    """Training examples JSON: [{"tweet_sim": .., "friend_sim": ..,
    "label": ..}, ...]."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        TrainingExample(float(e["tweet_sim"]), float(e["friend_sim"]), float(e["label"]))
        for e in data
    ]


def load_gold(path: str | Path) -> dict[str, Decision]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {item: Decision(d) for item, d in data.items()}
