"""Complex projective space with the Fubini–Study metric in an affine chart.

Real chart coordinates interleave real and imaginary parts,
x = (Re w₁, Im w₁, …, Re w_N, Im w_N), and J is multiplication by i.
The metric is scaled so that the holomorphic sectional curvature equals c.
"""

from functools import cached_property

import numpy as np
from pydantic import Field, model_validator

from .base import AmbientSpace


def to_real(w: np.ndarray) -> np.ndarray:
    """Interleave the real and imaginary parts along the last axis."""
    w = np.asarray(w, dtype=complex)
    return np.stack([w.real, w.imag], axis=-1).reshape(w.shape[:-1] + (2 * w.shape[-1],))


def to_complex(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


class FubiniStudySpace(AmbientSpace):
    c: float = Field(default=4.0, gt=0)

    @property
    def kind(self) -> str:
        return "fubini-study"

    @property
    def is_complex(self) -> bool:
        return True

    @property
    def complex_dim(self) -> int:
        return self.dim // 2

    def describe(self) -> str:
        return f"fubini-study CP^{self.complex_dim} c={self.c:g}"

    @model_validator(mode="after")
    def _even_dimension(self) -> "FubiniStudySpace":
        if self.dim % 2:
            raise ValueError(f"Fubini-Study chart needs an even real dimension, got {self.dim}")
        return self

    @cached_property
    def j_matrix(self) -> np.ndarray:
        return np.kron(np.eye(self.complex_dim), np.array([[0.0, -1.0], [1.0, 0.0]]))

    @cached_property
    def _complex_basis(self) -> np.ndarray:
        # Row k is the complex vector of the real chart direction e_k.
        return to_complex(np.eye(self.dim))

    def metric_at(self, x: np.ndarray) -> np.ndarray:
        w = to_complex(self.check_point(x))
        r2 = float(np.vdot(w, w).real)
        basis = self._complex_basis
        wx = basis @ np.conj(w)
        inner = basis @ basis.conj().T
        hermitian = ((1.0 + r2) * inner - np.outer(wx, np.conj(wx))) / (1.0 + r2) ** 2
        return (4.0 / self.c) * hermitian.real

    def complex_structure_at(self, x: np.ndarray, X: np.ndarray) -> np.ndarray:
        self.check_point(x)
        return self.j_matrix @ np.asarray(X, dtype=float)

    def frame_curvature(self, x: np.ndarray, frame: np.ndarray) -> np.ndarray:
        frame = np.asarray(frame, dtype=float)
        g = self.metric_at(x)
        gram = frame @ g @ frame.T
        jgram = frame @ self.j_matrix.T @ g @ frame.T
        return 0.25 * self.c * (
            np.einsum("ac,bd->abcd", gram, gram)
            - np.einsum("bc,ad->abcd", gram, gram)
            + np.einsum("ac,bd->abcd", jgram, jgram)
            - np.einsum("bc,ad->abcd", jgram, jgram)
            + 2.0 * np.einsum("ab,cd->abcd", jgram, jgram)
        )
