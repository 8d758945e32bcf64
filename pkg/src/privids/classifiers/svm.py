"""Linear SVM trained by seeded stochastic subgradient descent.

Minimizes the L2-regularized hinge loss over shuffled mini-batches with the
1/(lambda * t) step schedule. Features are standardized internally with
training-set mean and variance; the standardization exists only to make the
optimization behave and is folded into prediction. The bias is carried as a
regularized constant feature. The decision threshold is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SvmState:
    weights: np.ndarray
    bias: float
    mean: np.ndarray
    scale: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = ((X - self.mean) / self.scale) @ self.weights + self.bias
        return (scores > 0.0).astype(np.int64)


def train(X: np.ndarray, y: np.ndarray, hp: dict, seed: int) -> SvmState:
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale < 1e-12] = 1.0
    Z = np.column_stack([(X - mean) / scale, np.ones(X.shape[0])])
    targets = 2.0 * y.astype(float) - 1.0

    lam = float(hp["lambda"])
    batch = min(hp["batch_size"], X.shape[0])
    rng = np.random.default_rng(seed)
    w = np.zeros(Z.shape[1])
    step = 0
    for _ in range(hp["epochs"]):
        order = rng.permutation(X.shape[0])
        for lo in range(0, X.shape[0], batch):
            rows = order[lo : lo + batch]
            step += 1
            eta = 1.0 / (lam * step)
            margins = targets[rows] * (Z[rows] @ w)
            violators = margins < 1.0
            w *= 1.0 - eta * lam
            if violators.any():
                subgrad = targets[rows][violators] @ Z[rows][violators]
                w += eta / rows.size * subgrad
    return SvmState(weights=w[:-1], bias=float(w[-1]), mean=mean, scale=scale)
