#!/usr/bin/env python3
"""Compare naive-majority voting with the expertise-weighted pipeline
on the synthetic adversarial crowd, and trace accuracy against the
training-set size.

Usage: python3 scripts/crowd_experiment.py [--seed N] [--items N]
"""

import argparse

from ontoqual.regress import (
    EvalDataset,
    FoldPlan,
    KNNRegressor,
    LinearRegressor,
    MajorityBaseline,
    SVRRegressor,
    cv_evaluate,
    training_curve,
)
from ontoqual.synthetic import make_crowd

REGRESSORS = {
    "majority": MajorityBaseline,
    "linear": LinearRegressor,
    "knn:3": lambda: KNNRegressor(k=3),
    "svr": SVRRegressor,
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--items", type=int, default=20)
    parser.add_argument("--trials", type=int, default=5, help="shuffles per curve point")
    args = parser.parse_args()

    crowd = make_crowd(n_items=args.items, seed=args.seed)
    plan = FoldPlan.build(len(crowd.examples), 7)
    print(
        f"crowd: {len(crowd.examples)} validators "
        f"({len(crowd.expert_handles)} experts), {args.items} items, "
        f"{plan.n_folds} folds of {len(plan.folds[0])}"
    )

    print(f"\n{'regressor':<10} {'val acc':>8} {'test acc':>9}")
    print("-" * 30)
    for name, factory in REGRESSORS.items():
        result = cv_evaluate(crowd.examples, crowd.matrix, crowd.gold, factory, plan=plan)
        print(f"{name:<10} {result.val_accuracy:>8.3f} {result.test_accuracy:>9.3f}")

    eval_set = EvalDataset(crowd.examples, crowd.matrix, crowd.gold)
    print("\ntraining-size curve (linear regressor, mean over shuffles):")
    curve = training_curve(
        crowd.examples,
        eval_set,
        fractions=[0.25, 0.5, 0.75, 1.0],
        trials=args.trials,
        regressor_factory=LinearRegressor,
        seed=args.seed,
    )
    for fraction, accuracy in curve:
        print(f"  {fraction:>5.0%} of examples -> accuracy {accuracy:.3f}")


if __name__ == "__main__":
    main()
