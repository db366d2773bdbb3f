"""Constant-curvature space forms in a conformal chart.

For c > 0 the chart is stereographic projection of the sphere of radius
ρ = 1/√c in R^{D+1} from the pole (0, …, 0, −ρ); for c < 0 it is the
Poincaré ball of the hyperboloid ⟨y, y⟩ = −ρ² (last coordinate timelike,
y_last > 0). In both cases the chart metric is δ / (1 + c|x|²/4)². With
c = 0 the model is R^D itself and every map is the identity.
"""

import logging

import numpy as np
from pydantic import Field

from ..errors import DomainError
from .base import AmbientSpace, Jet

logger = logging.getLogger(__name__)


class SpaceForm(AmbientSpace):
    c: float = Field(default=1.0)

    @property
    def kind(self) -> str:
        return "space-form"

    @property
    def sectional_constant(self) -> float:
        return float(self.c)

    @property
    def model_radius(self) -> float:
        return 1.0 / np.sqrt(abs(self.c))

    @property
    def model_dim(self) -> int:
        return self.dim if self.c == 0 else self.dim + 1

    @property
    def _sign(self) -> float:
        return 1.0 if self.c > 0 else -1.0

    @property
    def _eta(self) -> np.ndarray:
        eta = np.ones(self.model_dim)
        if self.c < 0:
            eta[-1] = -1.0
        return eta

    def describe(self) -> str:
        return f"space-form c={self.c:g} dim {self.dim}"

    def contains(self, x: np.ndarray) -> bool:
        if not super().contains(x):
            return False
        return self.c >= 0 or 1.0 + 0.25 * self.c * float(np.dot(x, x)) > 0.0

    def metric_at(self, x: np.ndarray) -> np.ndarray:
        x = self.check_point(x)
        if self.c == 0:
            return np.eye(self.dim)
        factor = 1.0 / (1.0 + 0.25 * self.c * float(np.dot(x, x)))
        return factor**2 * np.eye(self.dim)

    def frame_curvature(self, x: np.ndarray, frame: np.ndarray) -> np.ndarray:
        frame = np.asarray(frame, dtype=float)
        gram = frame @ self.metric_at(x) @ frame.T
        return self.c * (
            np.einsum("ac,bd->abcd", gram, gram) - np.einsum("bc,ad->abcd", gram, gram)
        )

    def chart_jet(self, jet: Jet) -> Jet:
        if self.c == 0:
            return jet
        rho = self.model_radius
        y, dy, d2y = (np.asarray(a, dtype=float) for a in jet)
        s = rho + y[-1]
        if s <= 0.0:
            raise DomainError(
                f"Model point {y.tolist()!r} sits on the projection pole of the chart"
            )
        ya, dya, d2ya = y[:-1], dy[:, :-1], d2y[:, :, :-1]
        dyl, d2yl = dy[:, -1], d2y[:, :, -1]
        value = 2.0 * rho * ya / s
        first = 2.0 * rho * (dya / s - np.outer(dyl, ya) / s**2)
        second = 2.0 * rho * (
            d2ya / s
            - (np.einsum("ia,j->ija", dya, dyl) + np.einsum("ja,i->ija", dya, dyl)) / s**2
            - np.einsum("ij,a->ija", d2yl, ya) / s**2
            + 2.0 * np.einsum("i,j,a->ija", dyl, dyl, ya) / s**3
        )
        return Jet(value, first, second)

    def retract_jet(self, jet: Jet) -> Jet:
        if self.c == 0:
            return jet
        rho, sigma, eta = self.model_radius, self._sign, self._eta
        z, dz, d2z = (np.asarray(a, dtype=float) for a in jet)
        q = float(np.dot(eta * z, z))
        if sigma * q <= 0.0:
            raise DomainError(f"Model point {z.tolist()!r} cannot be retracted onto the model")
        q1 = 2.0 * dz @ (eta * z)
        q2 = 2.0 * np.einsum("id,jd->ij", dz * eta, dz) + 2.0 * d2z @ (eta * z)
        s = (sigma * q) ** -0.5
        s1 = -0.5 * sigma * s**3 * q1
        s2 = 0.75 * s**5 * np.outer(q1, q1) - 0.5 * sigma * s**3 * q2
        value = rho * s * z
        first = rho * (np.outer(s1, z) + s * dz)
        second = rho * (
            np.einsum("ij,d->ijd", s2, z)
            + np.einsum("i,jd->ijd", s1, dz)
            + np.einsum("j,id->ijd", s1, dz)
            + s * d2z
        )
        return Jet(value, first, second)

    def project_to_model_tangent(self, base: Jet, field: Jet) -> Jet:
        if self.c == 0:
            return field
        eta = self._eta
        kappa = self._sign / self.model_radius**2
        y, dy, d2y = base
        w, dw, d2w = field
        a = float(np.dot(eta * w, y))
        a1 = dw @ (eta * y) + dy @ (eta * w)
        a2 = (
            d2w @ (eta * y)
            + np.einsum("id,jd->ij", dw * eta, dy)
            + np.einsum("jd,id->ij", dw * eta, dy)
            + d2y @ (eta * w)
        )
        value = w - kappa * a * y
        first = dw - kappa * (np.outer(a1, y) + a * dy)
        second = d2w - kappa * (
            np.einsum("ij,d->ijd", a2, y)
            + np.einsum("i,jd->ijd", a1, dy)
            + np.einsum("j,id->ijd", a1, dy)
            + a * d2y
        )
        return Jet(value, first, second)
