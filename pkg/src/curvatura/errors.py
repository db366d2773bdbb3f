"""Exception hierarchy shared by every curvatura module."""

from typing import Optional, Sequence, Tuple


class CurvaturaError(Exception):
    """Root of all errors raised by curvatura."""


class DomainError(CurvaturaError, ValueError):
    """A point lies outside the chart or parameter domain."""


class StencilError(DomainError):
    """A finite-difference stencil leaves a non-periodic parameter box."""


class FocalRadiusError(DomainError):
    """Tube radius lies outside the focal validity window."""

    def __init__(self, radius: float, max_radius: float) -> None:
        self.radius = radius
        self.max_radius = max_radius
        super().__init__(
            f"Tube radius {radius!r} is not below the focal bound; "
            f"max admissible radius is {max_radius!r}"
        )


class NumericError(CurvaturaError, ArithmeticError):
    """Loss of significance, non-finite values or an unexpected complex residue."""


class ImmersionDegeneracyError(NumericError):
    """The differential of an immersion lost rank."""

    def __init__(self, message: str, point: Optional[Sequence[float]] = None) -> None:
        self.point: Optional[Tuple[float, ...]] = (
            tuple(float(v) for v in point) if point is not None else None
        )
        super().__init__(message)


class FrameDegeneracyError(NumericError):
    """Normal completion ran out of usable seed vectors."""

    def __init__(self, message: str, seeds_tried: Sequence[int] = ()) -> None:
        self.seeds_tried = tuple(seeds_tried)
        super().__init__(message)


class PreconditionError(CurvaturaError, ValueError):
    """An operation was called outside its documented preconditions."""


class UnsupportedOperationError(CurvaturaError, NotImplementedError):
    """The operation does not exist for this kind of object."""


class UsageError(CurvaturaError):
    """Invalid user input: unknown manifold, command or setting."""
