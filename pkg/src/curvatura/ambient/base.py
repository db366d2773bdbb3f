"""Common machinery for chart-based model ambient spaces."""

import logging
from abc import ABC, abstractmethod
from typing import NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DomainError, NumericError, UnsupportedOperationError

logger = logging.getLogger(__name__)


class Jet(NamedTuple):
    """Value, first and second derivatives of a map u ↦ y(u).

    ``first`` has shape (k, D) and ``second`` shape (k, k, D) where k is the
    number of parameters and D the target dimension.
    """

    value: np.ndarray
    first: np.ndarray
    second: np.ndarray


class AmbientSpace(BaseModel, ABC):
    """A model Riemannian manifold described in a single chart."""

    dim: int = Field(gt=0)
    fd_step: float = Field(default=1e-5, gt=0)
    chart_scale: float = Field(default=1.0, gt=0)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    @abstractmethod
    def kind(self) -> str:
        ...

    @property
    def model_dim(self) -> int:
        """Dimension of the coordinates immersions are described in."""
        return self.dim

    @property
    def sectional_constant(self) -> Optional[float]:
        """Constant sectional curvature, or None when it is not constant."""
        return None

    @property
    def is_complex(self) -> bool:
        return False

    def describe(self) -> str:
        return self.kind

    def contains(self, x: np.ndarray) -> bool:
        x = np.asarray(x, dtype=float)
        return x.shape == (self.dim,) and bool(np.all(np.isfinite(x)))

    def check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise DomainError(f"Point {x.tolist()!r} is outside the {self.kind} chart domain")
        return x

    @abstractmethod
    def metric_at(self, x: np.ndarray) -> np.ndarray:
        """Symmetric positive-definite metric matrix at chart point x."""
        ...

    @abstractmethod
    def frame_curvature(self, x: np.ndarray, frame: np.ndarray) -> np.ndarray:
        """Closed-form R[A, B, C, D] = R(e_A, e_B, e_C, e_D) for the rows e_A of frame."""
        ...

    def curvature_at(
        self,
        x: np.ndarray,
        X: np.ndarray,
        Y: np.ndarray,
        Z: np.ndarray,
        T: np.ndarray,
    ) -> float:
        """R(X, Y, Z, T) = ⟨R(X, Y)T, Z⟩ with R(X, Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]."""
        frame = np.vstack([X, Y, Z, T]).astype(float)
        return float(self.frame_curvature(x, frame)[0, 1, 2, 3])

    def complex_structure_at(self, x: np.ndarray, X: np.ndarray) -> np.ndarray:
        raise UnsupportedOperationError(
            f"{self.kind} ambient has no complex structure"
        )

    def christoffels_at(self, x: np.ndarray) -> np.ndarray:
        """Γ[C, A, B] from central differences of the metric."""
        x = self.check_point(x)
        h = self.fd_step * self.chart_scale
        if h <= np.finfo(float).eps * max(1.0, float(np.max(np.abs(x)))):
            raise NumericError(
                f"Differentiation step {h!r} underflows at point {x.tolist()!r}"
            )
        dg = np.empty((self.dim, self.dim, self.dim))
        for k in range(self.dim):
            step = np.zeros(self.dim)
            step[k] = h
            if not (self.contains(x + step) and self.contains(x - step)):
                raise DomainError(
                    f"Point {x.tolist()!r} is within one differentiation step of the chart boundary"
                )
            dg[k] = (self.metric_at(x + step) - self.metric_at(x - step)) / (2.0 * h)
        if not np.all(np.isfinite(dg)):
            raise NumericError(f"Non-finite metric derivatives at {x.tolist()!r}")
        ginv = np.linalg.inv(self.metric_at(x))
        lowered = (
            np.einsum("adb->dab", dg) + np.einsum("bda->dab", dg) - dg
        )
        return 0.5 * np.einsum("cd,dab->cab", ginv, lowered)

    def curvature_from_christoffels(
        self,
        x: np.ndarray,
        X: np.ndarray,
        Y: np.ndarray,
        Z: np.ndarray,
        T: np.ndarray,
        step: Optional[float] = None,
    ) -> float:
        """Curvature by differentiating Christoffel symbols; used as an oracle only."""
        x = self.check_point(x)
        h = step if step is not None else 1e-3 * self.chart_scale
        gam = self.christoffels_at(x)
        dgam = np.empty((self.dim,) + gam.shape)
        for k in range(self.dim):
            shift = np.zeros(self.dim)
            shift[k] = h
            dgam[k] = (self.christoffels_at(x + shift) - self.christoffels_at(x - shift)) / (2.0 * h)
        riemann = (
            np.einsum("cedb->ebcd", dgam)
            - np.einsum("decb->ebcd", dgam)
            + np.einsum("ecf,fdb->ebcd", gam, gam)
            - np.einsum("edf,fcb->ebcd", gam, gam)
        )
        g = self.metric_at(x)
        return float(np.einsum("ae,ebcd,a,b,c,d->", g, riemann, Z, T, X, Y))

    # Model-coordinate plumbing. Flat and complex ambients use the chart itself.

    def chart_jet(self, jet: Jet) -> Jet:
        """Map a 2-jet in model coordinates to chart coordinates."""
        return jet

    def retract_jet(self, jet: Jet) -> Jet:
        """Pull a 2-jet of model coordinates back onto the model."""
        return jet

    def project_to_model_tangent(self, base: Jet, field: Jet) -> Jet:
        """Project a model-space vector field along ``base`` onto the model's tangent spaces."""
        return field
