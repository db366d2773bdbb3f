"""Model ambient spaces: Euclidean, constant curvature and complex projective."""

from .base import AmbientSpace, Jet
from .euclidean import EuclideanSpace
from .fubini_study import FubiniStudySpace, to_complex, to_real
from .space_form import SpaceForm

__all__ = [
    "AmbientSpace",
    "EuclideanSpace",
    "FubiniStudySpace",
    "Jet",
    "SpaceForm",
    "to_complex",
    "to_real",
]
