"""Tests for patches, jets, quadrature meshes and deformations."""

from math import pi

import numpy as np
import pytest

from curvatura.ambient import EuclideanSpace
from curvatura.errors import ImmersionDegeneracyError, NumericError, PreconditionError
from curvatura.immersion import (
    ImmersionPatch,
    ParameterDomain,
    build_mesh,
    deform,
    effective_deformation,
    field_jet_at,
    integrate,
    jet_at,
    patch_extent,
    product_jet,
    random_deformation_field,
    remesh,
)
from curvatura.zoo import zoo


def paraboloid() -> ImmersionPatch:
    return ImmersionPatch(
        name="paraboloid",
        ambient=EuclideanSpace(dim=3),
        n=2,
        domain=ParameterDomain(lower=(-1.0, -1.0), upper=(1.0, 1.0), periodic=(False, False)),
        model_map=lambda u: np.array([u[0], u[1], u[0] ** 2 + u[1] ** 2]),
    )


def test_parameter_domain_wraps_periodic_axes_only():
    domain = ParameterDomain(lower=(0.0, 0.0), upper=(1.0, 2 * pi), periodic=(False, True))
    wrapped = domain.wrap(np.array([0.5, 2 * pi + 1.0]))
    assert wrapped == pytest.approx([0.5, 1.0])
    assert domain.contains(np.array([0.5, 100.0]))
    assert not domain.contains(np.array([1.5, 0.0]))


def test_parameter_domain_rejects_bad_axes():
    with pytest.raises(ValueError, match="same length"):
        ParameterDomain(lower=(0.0,), upper=(1.0, 1.0), periodic=(False,))
    with pytest.raises(ValueError, match="Empty parameter interval"):
        ParameterDomain(lower=(1.0,), upper=(0.0,), periodic=(False,))


def test_patch_dimension_must_fit_ambient():
    with pytest.raises(ValueError, match="must be below ambient dimension"):
        ImmersionPatch(
            name="too-big",
            ambient=EuclideanSpace(dim=2),
            n=2,
            domain=ParameterDomain(lower=(0.0, 0.0), upper=(1.0, 1.0), periodic=(False, False)),
            model_map=lambda u: u,
        )


def test_product_jet_matches_hand_derivatives():
    # y = (sin u0 · cos u1, u0 · 1)
    u0, u1 = 0.4, -0.7
    jet = product_jet(
        [[np.sin(u0), np.cos(u1)], [u0, 1.0]],
        [[np.cos(u0), -np.sin(u1)], [1.0, 0.0]],
        [[-np.sin(u0), -np.cos(u1)], [0.0, 0.0]],
    )
    assert jet.value == pytest.approx([np.sin(u0) * np.cos(u1), u0])
    assert jet.first[0] == pytest.approx([np.cos(u0) * np.cos(u1), 1.0])
    assert jet.first[1] == pytest.approx([-np.sin(u0) * np.sin(u1), 0.0])
    assert jet.second[0, 1] == pytest.approx([-np.cos(u0) * np.sin(u1), 0.0])
    assert np.allclose(jet.second[0, 1], jet.second[1, 0])


def test_central_difference_jet_on_quadratic_map():
    jet = jet_at(paraboloid(), np.array([0.3, -0.2]))
    assert jet.value == pytest.approx([0.3, -0.2, 0.13])
    assert jet.first[0] == pytest.approx([1.0, 0.0, 0.6], abs=1e-6)
    assert jet.first[1] == pytest.approx([0.0, 1.0, -0.4], abs=1e-6)
    assert jet.second[0, 0] == pytest.approx([0.0, 0.0, 2.0], abs=1e-6)
    assert jet.second[0, 1] == pytest.approx([0.0, 0.0, 0.0], abs=1e-6)


def test_constant_map_is_degenerate():
    patch = paraboloid().model_copy(update={"model_map": lambda u: np.zeros(3)})
    with pytest.raises(ImmersionDegeneracyError, match="degenerate") as info:
        jet_at(patch, np.array([0.1, 0.2]))
    assert info.value.point == pytest.approx((0.1, 0.2))


def test_sphere_mesh_integrates_area():
    patch = zoo.build("sphere", r=2.0)
    mesh = build_mesh(patch, 8)
    assert mesh.size == 64
    assert mesh.shape == (8, 8)
    assert integrate(mesh, np.ones(mesh.size)) == pytest.approx(16 * pi, rel=1e-8)


def test_torus_mesh_is_exact_for_trigonometric_area():
    patch = zoo.build("torus-of-revolution", R=2.0, a=0.5)
    mesh = build_mesh(patch, [6, 8])
    assert mesh.shape == (6, 8)
    assert integrate(mesh, np.ones(mesh.size)) == pytest.approx(4 * pi**2 * 2.0 * 0.5, rel=1e-12)


def test_mesh_needs_four_nodes_per_axis():
    with pytest.raises(PreconditionError, match="at least 4"):
        build_mesh(zoo.build("sphere"), 3)
    with pytest.raises(PreconditionError, match="Expected 2 resolutions"):
        build_mesh(zoo.build("sphere"), [8])


def test_integrate_checks_its_input():
    mesh = build_mesh(zoo.build("sphere"), 4)
    with pytest.raises(PreconditionError, match="16 nodes"):
        integrate(mesh, np.ones(5))
    values = np.ones(mesh.size)
    values[3] = np.nan
    with pytest.raises(NumericError, match="node 3"):
        integrate(mesh, values)


def test_integrate_vector_fields_per_component():
    mesh = build_mesh(zoo.build("sphere"), 6)
    values = np.stack([np.ones(mesh.size), 2.0 * np.ones(mesh.size)], axis=1)
    totals = integrate(mesh, values)
    assert totals.shape == (2,)
    assert totals[1] == pytest.approx(2.0 * totals[0])


def test_deform_at_zero_returns_the_patch():
    patch = zoo.build("sphere")
    field = random_deformation_field(patch, seed=3)
    assert deform(patch, field, 0.0) is patch


def test_deformed_patch_moves_along_the_field():
    patch = zoo.build("sphere")
    field = random_deformation_field(patch, seed=1)
    u = np.array([0.8, 1.3])
    nu = field_jet_at(patch, field, u).value
    moved = deform(patch, field, 1e-2)
    assert jet_at(moved, u).value == pytest.approx(jet_at(patch, u).value + 1e-2 * nu)
    assert effective_deformation(patch, field, u) == pytest.approx(nu)


def test_remesh_follows_the_deformed_volume():
    patch = zoo.build("sphere")
    mesh = build_mesh(patch, 6)
    field = random_deformation_field(patch, seed=2)
    moved = remesh(mesh, deform(patch, field, 0.1))
    assert np.array_equal(moved.nodes, mesh.nodes)
    assert not np.allclose(moved.volume_element, mesh.volume_element)


def test_random_field_is_seeded():
    patch = zoo.build("sphere")
    u = np.array([1.0, 2.0])
    first = field_jet_at(patch, random_deformation_field(patch, seed=7), u).value
    again = field_jet_at(patch, random_deformation_field(patch, seed=7), u).value
    other = field_jet_at(patch, random_deformation_field(patch, seed=8), u).value
    assert np.array_equal(first, again)
    assert not np.allclose(first, other)


def test_random_field_vanishes_on_box_boundary():
    patch = paraboloid()
    field = random_deformation_field(patch, seed=0)
    assert field.compact_support
    jet = field_jet_at(patch, field, np.array([-1.0, 0.3]))
    assert np.allclose(jet.value, 0.0)
    assert np.allclose(jet.first, 0.0)


def test_closed_patch_fields_have_no_bump():
    assert not random_deformation_field(zoo.build("sphere"), seed=0).compact_support


def test_patch_extent_measures_the_image_not_the_scale():
    patch = zoo.build("torus-of-revolution")
    center, extent = patch_extent(patch)
    assert patch.scale == pytest.approx(0.5)
    assert np.allclose(center[:2], 0.0, atol=0.6)
    assert 2.0 <= extent <= 3.5
