"""Flat Euclidean space R^D."""

import numpy as np

from .base import AmbientSpace


class EuclideanSpace(AmbientSpace):
    @property
    def kind(self) -> str:
        return "euclidean"

    @property
    def sectional_constant(self) -> float:
        return 0.0

    def describe(self) -> str:
        return f"euclidean R^{self.dim}"

    def metric_at(self, x: np.ndarray) -> np.ndarray:
        self.check_point(x)
        return np.eye(self.dim)

    def christoffels_at(self, x: np.ndarray) -> np.ndarray:
        self.check_point(x)
        return np.zeros((self.dim, self.dim, self.dim))

    def frame_curvature(self, x: np.ndarray, frame: np.ndarray) -> np.ndarray:
        self.check_point(x)
        k = np.asarray(frame).shape[0]
        return np.zeros((k, k, k, k))
