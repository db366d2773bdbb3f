"""Tests for the Euler-Lagrange operator, its closed forms and the first-variation check."""

from math import pi

import numpy as np
import pytest

from curvatura.ambient import FubiniStudySpace
from curvatura.errors import PreconditionError, StencilError
from curvatura.frames import SffTensor, frame_curvature_of, local_geometry, relative_curvature
from curvatura.immersion import DeformationField, build_mesh, random_deformation_field
from curvatura.variational import (
    cpn_checks,
    el_complex_cp_at,
    el_operator_at,
    el_samples_at,
    el_spaceform_at,
    first_variation_check,
    q_tensor_at,
    q_tensor_reference,
    qtilde_at,
    total_mean_curvature,
    total_mean_curvatures,
    variation_gap,
    variation_resolution,
    w_vector_at,
    w_vector_reference,
)
from curvatura.zoo import zoo


def random_inputs(seed: int, n: int, m: int):
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(m, n, n))
    sff = SffTensor(h=0.5 * (h + np.swapaxes(h, 1, 2)))
    dim = n + m
    space = FubiniStudySpace(dim=dim if dim % 2 == 0 else dim + 1)
    frame = rng.normal(size=(dim, space.dim))
    curvature = space.frame_curvature(0.1 * rng.normal(size=space.dim), frame)
    return relative_curvature(sff), sff, curvature


@pytest.mark.parametrize("n, m", [(2, 2), (3, 1), (4, 2), (5, 1)])
def test_fast_w_and_q_match_literal_sums(n, m):
    relcurv, sff, curvature = random_inputs(n * 10 + m, n, m)
    for p in range(n // 2 + 1):
        w = w_vector_at(relcurv, sff, curvature, p)
        q = q_tensor_at(relcurv, sff, curvature, p)
        scale = max(1.0, float(np.max(np.abs(w_vector_reference(relcurv, sff, curvature, p)))))
        assert np.allclose(w, w_vector_reference(relcurv, sff, curvature, p), rtol=1e-11, atol=1e-11 * scale)
        scale = max(1.0, float(np.max(np.abs(q_tensor_reference(relcurv, sff, curvature, p)))))
        assert np.allclose(q, q_tensor_reference(relcurv, sff, curvature, p), rtol=1e-11, atol=1e-11 * scale)


def test_p_zero_terms_vanish():
    relcurv, sff, curvature = random_inputs(0, 4, 2)
    assert not w_vector_at(relcurv, sff, curvature, 0).any()
    assert not q_tensor_at(relcurv, sff, curvature, 0).any()
    with pytest.raises(PreconditionError, match="outside"):
        w_vector_at(relcurv, sff, curvature, 3)


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_volume_operator_of_a_round_sphere(r):
    sample = el_operator_at(zoo.build("sphere", r=r), np.array([1.2, 0.4]), 0)
    assert sample.p == 0
    assert not sample.w.any()
    assert sample.norm == pytest.approx(2.0 / r)
    assert np.allclose(sample.coefficients[:2], 0.0)


def test_euclidean_sphere_is_critical_for_total_curvature():
    samples = el_samples_at(zoo.build("sphere"), np.array([1.2, 0.4]), [1])
    assert samples[1].norm < 1e-6


@pytest.mark.parametrize("u", [(0.3, 1.2), (2.0, 5.0)])
def test_general_operator_matches_space_form_closed_form(u):
    patch = zoo.build("product-torus-s3", r1=0.6)
    geometry = local_geometry(patch, np.array(u))
    samples = el_samples_at(patch, np.array(u), [0, 1], geometry=geometry)
    for p, sample in samples.items():
        closed = el_spaceform_at(geometry.relcurv, geometry.sff, patch.ambient, p)
        assert np.max(np.abs(sample.coefficients[2:] - closed)) < 1e-6
        assert np.max(np.abs(sample.coefficients[:2])) < 1e-6
        assert np.max(np.abs(sample.qtilde)) < 1e-6


def test_clifford_torus_is_critical_for_every_order():
    samples = el_samples_at(zoo.build("clifford-torus-s3"), np.array([0.9, 2.2]), [0, 1])
    assert samples[0].norm < 1e-6
    assert samples[1].norm < 1e-6


def test_space_form_closed_form_needs_constant_curvature():
    patch = zoo.build("quadric-cp2")
    geometry = local_geometry(patch, np.array([0.1, 0.1]))
    with pytest.raises(PreconditionError, match="no constant sectional curvature"):
        el_spaceform_at(geometry.relcurv, geometry.sff, patch.ambient, 1)
    sphere = zoo.build("sphere")
    sphere_geometry = local_geometry(sphere, np.array([1.0, 1.0]))
    with pytest.raises(PreconditionError, match="not a complex projective space"):
        el_complex_cp_at(sphere_geometry.relcurv, sphere_geometry.sff, sphere.ambient, 1)


def test_qtilde_stencil_must_stay_in_the_box():
    patch = zoo.build("linear-cp1-cp2")
    assert not qtilde_at(patch, np.array([0.2, 0.1]), 0).any()
    with pytest.raises(StencilError, match="leaves the parameter domain"):
        qtilde_at(patch, np.array([1.0, 0.0]), 1)


def test_qtilde_stencil_shrinks_near_a_face():
    patch = zoo.build("linear-cp1-cp2")
    qtilde = qtilde_at(patch, np.array([1.0 - 5e-4, 0.0]), 1)
    assert np.all(np.isfinite(qtilde))
    assert np.max(np.abs(qtilde)) < 1e-6
    with pytest.raises(StencilError, match="leaves the parameter domain"):
        qtilde_at(patch, np.array([1.0 - 1e-9, 0.0]), 1)


def test_el_samples_next_to_the_sphere_pole():
    # Gauss-Legendre puts nodes this close to θ = 0 at high resolution.
    sample = el_samples_at(zoo.build("sphere"), np.array([5e-4, 0.3]), [1])[1]
    assert np.allclose(sample.chart, 0.0, atol=1e-8)


@pytest.mark.parametrize("name", ["linear-cp1-cp2", "quadric-cp2"])
@pytest.mark.parametrize("p", [0, 1])
def test_complex_curves_satisfy_kahler_identities(name, p):
    report = cpn_checks(zoo.build(name), np.array([0.1, 0.15]), p, require_complex=True)
    assert report.frame == "j-adapted"
    assert report.passed, report
    assert report.el_norm < 1e-5


def test_complex_closed_form_matches_general_operator():
    patch = zoo.build("quadric-cp2")
    u = np.array([0.2, -0.1])
    geometry = local_geometry(patch, u, j_adapted=True)
    sample = el_samples_at(patch, u, [1], j_adapted=True, geometry=geometry)[1]
    closed = el_complex_cp_at(geometry.relcurv, geometry.sff, patch.ambient, 1)
    assert np.max(np.abs(sample.coefficients[2:] - closed)) < 1e-5


def test_non_complex_surface_fails_kahler_identities():
    report = cpn_checks(zoo.build("perturbed-cp1-cp2"), np.array([0.3, 0.2]), 0)
    assert not report.passed
    assert report.sff_j_residual > 1e-2


def test_cpn_checks_preconditions():
    with pytest.raises(PreconditionError, match="complex projective space"):
        cpn_checks(zoo.build("sphere"), np.array([1.0, 1.0]), 0)
    with pytest.raises(PreconditionError, match="not a complex submanifold"):
        cpn_checks(zoo.build("perturbed-cp1-cp2"), np.array([0.1, 0.1]), 0, require_complex=True)


def test_total_mean_curvatures_of_a_sphere():
    patch = zoo.build("sphere", r=2.0)
    mesh = build_mesh(patch, 10)
    totals = total_mean_curvatures(patch, mesh, [0, 1])
    assert totals[0] == pytest.approx(16 * pi, rel=1e-8)
    assert totals[1] == pytest.approx(4 * pi, rel=1e-8)
    assert total_mean_curvature(patch, mesh, 1) == pytest.approx(totals[1])


def test_first_variation_of_sphere_area():
    patch = zoo.build("sphere")
    mesh = build_mesh(patch, 20)
    field = random_deformation_field(patch, seed=0)
    report = first_variation_check(patch, field, 0, mesh)
    assert report.passed, report
    assert report.rel_gap < 1e-3
    assert report.field == "fourier-0"


def test_variation_gap_only_forgives_small_gaps_when_rhs_vanishes():
    _, rel_gap, passed = variation_gap(1e-4 + 5e-7, 1e-4, 1e-3, 1e-6)
    assert rel_gap > 1e-3
    assert not passed
    assert variation_gap(5e-7, 0.0, 1e-3, 1e-6)[2]
    assert not variation_gap(5e-6, 0.0, 1e-3, 1e-6)[2]
    assert variation_gap(1.0005, 1.0, 1e-3, 1e-6)[2]


def test_variation_resolution_floors():
    assert variation_resolution(2) == 32
    assert variation_resolution(2, 48) == 48
    assert variation_resolution(3, 6) == 16
    assert variation_resolution(1) == 96


@pytest.mark.slow
@pytest.mark.parametrize(
    "name, parameters, p",
    [
        ("torus-of-revolution", {}, 0),
        ("torus-of-revolution", {}, 1),
        ("sphere", {}, 1),
        ("ellipsoid", {}, 1),
        ("product-torus-s3", {}, 1),
        ("sphere", {"n": 3}, 1),
    ],
)
def test_first_variation_over_seeded_fields(name, parameters, p):
    patch = zoo.build(name, **parameters)
    mesh = build_mesh(patch, variation_resolution(patch.n))
    for seed in range(5):
        report = first_variation_check(patch, random_deformation_field(patch, seed=seed), p, mesh)
        assert report.passed, report


def test_first_variation_needs_closed_patch_or_compact_field():
    patch = zoo.build("linear-cp1-cp2")
    rigid = DeformationField(name="rigid", evaluator=lambda u, base: base)
    mesh = build_mesh(patch, 4)
    with pytest.raises(PreconditionError, match="compactly supported"):
        first_variation_check(patch, rigid, 0, mesh)


def test_frame_curvature_of_flat_patch_is_zero():
    patch = zoo.build("flat-torus-r4")
    geometry = local_geometry(patch, np.array([1.0, 2.0]))
    assert not frame_curvature_of(patch, geometry).any()


@pytest.mark.parametrize("p", [0, 1, 2])
def test_complex_surface_in_cp3_satisfies_kahler_identities(p):
    u = np.array([0.1, 0.15, -0.05, 0.12])
    report = cpn_checks(zoo.build("quadric-cp3"), u, p, require_complex=True)
    assert report.frame == "j-adapted"
    assert report.passed, report
    assert report.el_norm < 1e-5
