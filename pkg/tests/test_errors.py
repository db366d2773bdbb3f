"""Tests for the curvatura exception hierarchy."""

import pytest
from curvatura.errors import (
    CurvaturaError,
    DomainError,
    FocalRadiusError,
    FrameDegeneracyError,
    ImmersionDegeneracyError,
    NumericError,
    PreconditionError,
    StencilError,
    UnsupportedOperationError,
    UsageError,
)


@pytest.mark.parametrize(
    "error_class",
    [DomainError, StencilError, NumericError, PreconditionError, UnsupportedOperationError, UsageError],
)
def test_every_error_is_a_curvatura_error(error_class):
    assert issubclass(error_class, CurvaturaError)


def test_builtin_bases_are_kept():
    assert issubclass(DomainError, ValueError)
    assert issubclass(StencilError, DomainError)
    assert issubclass(NumericError, ArithmeticError)
    assert issubclass(UnsupportedOperationError, NotImplementedError)


def test_focal_radius_error_carries_bound():
    err = FocalRadiusError(2.0, 1.5)
    assert err.radius == 2.0
    assert err.max_radius == 1.5
    assert "1.5" in str(err)
    assert isinstance(err, DomainError)


def test_degeneracy_errors_carry_context():
    err = ImmersionDegeneracyError("rank lost", point=[0.5, 1])
    assert err.point == (0.5, 1.0)
    assert ImmersionDegeneracyError("rank lost").point is None

    frame_err = FrameDegeneracyError("no seeds left", seeds_tried=[0, 2])
    assert frame_err.seeds_tried == (0, 2)
    with pytest.raises(NumericError, match="no seeds left"):
        raise frame_err
