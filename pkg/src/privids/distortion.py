"""Least-squares data distortion.

Fits the linear model y = b0 + b1*x1 + ... + bm*xm by a numerically stable
least-squares solve, then rewrites every matrix entry as
TX[i][j] = beta[j] * X[i][j] + (intercept + residual), where the residual is
the mean squared error of the fit. Each column is scaled by its own
coefficient and every element is shifted by the same scalar.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dataset import FeatureMatrix, LabelVector
from .errors import DataValidationError, SingularMatrixError


@dataclass(frozen=True)
class DistortionModel:
    """Solution vector, intercept, and mean-squared residual of the fit."""

    beta: np.ndarray
    intercept: float
    residual: float
    fitted_on: tuple[str, ...]

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.shape != (len(self.fitted_on),):
            raise DataValidationError(
                f"beta has shape {beta.shape} for {len(self.fitted_on)} columns"
            )
        if self.residual < 0:
            raise DataValidationError(f"residual must be >= 0, got {self.residual}")
        beta = beta.copy()
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "fitted_on", tuple(self.fitted_on))

    @property
    def shift(self) -> float:
        """The scalar (intercept + residual) added to every element."""
        return self.intercept + self.residual


class DistortedMatrix(FeatureMatrix):
    """Distorted counterpart of a FeatureMatrix; same shape and column names."""


def _as_target(y) -> np.ndarray:
    values = y.values if isinstance(y, LabelVector) else y
    return np.asarray(values, dtype=float)


def fit_lsm(X: FeatureMatrix, y) -> DistortionModel:
    """Least-squares fit of the target against X with an intercept column.

    Uses an SVD-based solve rather than explicit normal equations. A
    rank-deficient design matrix raises SingularMatrixError with the computed
    rank and smallest singular value; no minimum-norm fallback is applied.
    """
    target = _as_target(y)
    if target.ndim != 1 or target.size != X.n:
        raise DataValidationError(
            f"target has shape {target.shape}, expected ({X.n},)"
        )
    design = np.column_stack([np.ones(X.n), X.values])
    # Equilibrate columns to unit norm so the rank test measures genuine
    # collinearity rather than disparate feature scales; coefficients are
    # unscaled afterwards.
    norms = np.sqrt(np.einsum("ij,ij->j", design, design))
    if np.any(norms == 0.0):
        dead = X.column_names[int(np.argmax(norms[1:] == 0.0))]
        raise SingularMatrixError(f"column '{dead}' is identically zero")
    scaled_solution, _, rank, singular_values = np.linalg.lstsq(
        design / norms, target, rcond=None
    )
    needed = X.m + 1
    if rank < needed:
        smallest = float(singular_values[-1]) if singular_values.size else 0.0
        raise SingularMatrixError(
            f"design matrix of shape {design.shape} has rank {rank} < {needed} "
            f"(smallest equilibrated singular value {smallest:.3e}); "
            "remove collinear or constant columns before fitting"
        )
    solution = scaled_solution / norms
    predicted = design @ solution
    residual = float(np.mean((target - predicted) ** 2))
    return DistortionModel(
        beta=solution[1:],
        intercept=float(solution[0]),
        residual=residual,
        fitted_on=tuple(X.column_names),
    )


def transform(X: FeatureMatrix, model: DistortionModel) -> DistortedMatrix:
    """Apply the per-column affine rewrite to every element of X."""
    if tuple(X.column_names) != model.fitted_on:
        raise DataValidationError(
            f"matrix columns {X.column_names} do not match fitted columns {model.fitted_on}"
        )
    distorted = X.values * model.beta[np.newaxis, :] + model.shift
    return DistortedMatrix(distorted, X.column_names)


def distort(X: FeatureMatrix, y) -> tuple[DistortedMatrix, DistortionModel, float]:
    """Fit and transform in one step; returns the wall time around both."""
    start = time.perf_counter()
    model = fit_lsm(X, y)
    distorted = transform(X, model)
    elapsed = time.perf_counter() - start
    return distorted, model, elapsed
