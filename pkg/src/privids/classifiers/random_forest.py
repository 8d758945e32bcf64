"""Bagged forest of CART trees with per-split feature subsampling.

Each tree sees a seeded bootstrap of the rows and, at every split attempt,
ceil(sqrt(m)) candidate features drawn without replacement. Tree seeds are
spawned from the forest seed, so results do not depend on fit order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decision_tree import TreeState, build_tree


@dataclass(frozen=True)
class ForestState:
    trees: tuple[TreeState, ...]

    def predict(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros(X.shape[0], dtype=np.int64)
        for tree in self.trees:
            votes += tree.predict(X)
        return (2 * votes > len(self.trees)).astype(np.int64)


def train(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> ForestState:
    n, m = X.shape
    n_candidates = min(math.ceil(math.sqrt(m)), m)
    trees = []
    for child_seed in np.random.SeedSequence(seed).spawn(hp["n_trees"]):
        rng = np.random.default_rng(child_seed)
        bootstrap = rng.integers(0, n, size=n)

        def sampler():
            return np.sort(rng.choice(m, size=n_candidates, replace=False))

        trees.append(
            build_tree(
                X[bootstrap],
                y[bootstrap],
                hp["max_depth"],
                hp["min_samples_split"],
                feature_sampler=sampler,
            )
        )
    return ForestState(trees=tuple(trees))
