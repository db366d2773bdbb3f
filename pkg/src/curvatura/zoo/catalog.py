"""Built-in manifold catalog with analytic 2-jets."""

import logging
from math import pi
from typing import Callable

import numpy as np

from ..ambient import EuclideanSpace, FubiniStudySpace, Jet, SpaceForm, to_complex, to_real
from ..errors import UsageError
from ..immersion import ImmersionPatch, ParameterDomain, product_jet
from ..invariants import sphere_volume
from .registry import ManifoldZoo

logger = logging.getLogger(__name__)

zoo = ManifoldZoo()

TWO_PI = 2.0 * pi


def _patch(name: str, ambient, n: int, domain: ParameterDomain, jet: Callable[[np.ndarray], Jet], **kwargs) -> ImmersionPatch:
    return ImmersionPatch(
        name=name,
        ambient=ambient,
        n=n,
        domain=domain,
        model_map=lambda u: jet(u).value,
        model_jet=jet,
        **kwargs,
    )


def _torus_domain() -> ParameterDomain:
    return ParameterDomain(lower=(0.0, 0.0), upper=(TWO_PI, TWO_PI), periodic=(True, True))


def _box(n: int, half_width: float) -> ParameterDomain:
    return ParameterDomain(lower=(-half_width,) * n, upper=(half_width,) * n, periodic=(False,) * n)


# Per-axis factor tables for product_jet: value, first and second derivative.
def _sin(t: float):
    return np.sin(t), np.cos(t), -np.sin(t)


def _cos(t: float):
    return np.cos(t), -np.sin(t), -np.cos(t)


_ONE = (1.0, 0.0, 0.0)
_ZERO = (0.0, 0.0, 0.0)


def _table(rows) -> Jet:
    arr = np.array(rows, dtype=float)
    return product_jet(arr[..., 0], arr[..., 1], arr[..., 2])


def _scaled(factor, scale: float):
    return tuple(scale * v for v in factor)


def _round_sphere_jet(u: np.ndarray, n: int, radius: float) -> Jet:
    """y = radius·(cos u0, sin u0 cos u1, …, sin u0⋯sin u_{n−1}) by hyperspherical coordinates."""
    rows = []
    for a in range(n + 1):
        row = []
        for b in range(n):
            if b < a:
                factor = _sin(u[b])
            elif b == a:
                factor = _cos(u[b])
            else:
                factor = _ONE
            row.append(_scaled(factor, radius) if b == 0 else factor)
        rows.append(row)
    return _table(rows)


def _sphere_domain(n: int) -> ParameterDomain:
    return ParameterDomain(
        lower=(0.0,) * n,
        upper=(pi,) * (n - 1) + (TWO_PI,),
        periodic=(False,) * (n - 1) + (True,),
    )


def _holomorphic_jet(values: np.ndarray, d1: np.ndarray, d2: np.ndarray) -> Jet:
    """Real 2-jet of a holomorphic map from its complex derivatives, in interleaved coordinates."""
    target, nc = d1.shape
    first = np.empty((2 * nc, target), dtype=complex)
    second = np.empty((2 * nc, 2 * nc, target), dtype=complex)
    for k in range(nc):
        for e in range(2):
            first[2 * k + e] = 1j**e * d1[:, k]
            for l in range(nc):
                for d in range(2):
                    second[2 * k + e, 2 * l + d] = 1j ** (e + d) * d2[:, k, l]
    return Jet(to_real(values), to_real(first), to_real(second))


def _sphere_reference(n: int, r: float):
    return {"volume": sphere_volume(n) * r**n, "k2": r**-2.0 if n >= 2 else 0.0}


@zoo.manifold("sphere", reference=_sphere_reference, tags=("closed", "euclidean"), default_resolution=10)
def sphere(n: int = 2, r: float = 1.0) -> ImmersionPatch:
    """Round n-sphere of radius r in R^{n+1}."""
    if n < 1 or r <= 0:
        raise UsageError(f"sphere needs n >= 1 and r > 0, got n={n}, r={r}")
    return _patch(
        f"sphere(n={n}, r={r:g})",
        EuclideanSpace(dim=n + 1, chart_scale=r),
        n,
        _sphere_domain(n),
        lambda u: _round_sphere_jet(u, n, r),
        closed=True,
        scale=r,
    )


@zoo.manifold(
    "ellipsoid",
    reference=lambda a, b, c: {"total_k2": 4.0 * pi},
    tags=("closed", "euclidean"),
    default_resolution=16,
)
def ellipsoid(a: float = 1.0, b: float = 1.2, c: float = 0.8) -> ImmersionPatch:
    """Ellipsoid with semi-axes a, b, c in latitude-longitude coordinates."""
    if min(a, b, c) <= 0:
        raise UsageError(f"ellipsoid semi-axes must be positive, got {(a, b, c)}")

    def jet(u: np.ndarray) -> Jet:
        theta, phi = u
        return _table(
            [
                [_scaled(_sin(theta), a), _cos(phi)],
                [_scaled(_sin(theta), b), _sin(phi)],
                [_scaled(_cos(theta), c), _ONE],
            ]
        )

    return _patch(
        f"ellipsoid(a={a:g}, b={b:g}, c={c:g})",
        EuclideanSpace(dim=3),
        2,
        _sphere_domain(2),
        jet,
        closed=True,
        scale=max(a, b, c),
    )


@zoo.manifold(
    "torus-of-revolution",
    reference=lambda R, a: {"area": 4.0 * pi**2 * R * a, "total_k2": 0.0},
    tags=("closed", "euclidean"),
)
def torus_of_revolution(R: float = 2.0, a: float = 0.5) -> ImmersionPatch:
    """Torus of revolution with core radius R and tube radius a in R³."""
    if not R > a > 0:
        raise UsageError(f"torus-of-revolution needs R > a > 0, got R={R}, a={a}")

    def jet(u: np.ndarray) -> Jet:
        phi, theta = u
        ring = (R + a * np.cos(theta), -a * np.sin(theta), -a * np.cos(theta))
        return _table(
            [
                [_cos(phi), ring],
                [_sin(phi), ring],
                [_ONE, _scaled(_sin(theta), a)],
            ]
        )

    return _patch(
        f"torus-of-revolution(R={R:g}, a={a:g})",
        EuclideanSpace(dim=3, chart_scale=R),
        2,
        _torus_domain(),
        jet,
        closed=True,
        scale=a,
    )


def _product_torus_jet(r1: float, r2: float) -> Callable[[np.ndarray], Jet]:
    def jet(u: np.ndarray) -> Jet:
        phi, theta = u
        return _table(
            [
                [_scaled(_cos(phi), r1), _ONE],
                [_scaled(_sin(phi), r1), _ONE],
                [_ONE, _scaled(_cos(theta), r2)],
                [_ONE, _scaled(_sin(theta), r2)],
            ]
        )

    return jet


@zoo.manifold(
    "flat-torus-r4",
    reference=lambda r1, r2: {"area": 4.0 * pi**2 * r1 * r2, "k2": 0.0, "total_k2": 0.0},
    tags=("closed", "euclidean"),
)
def flat_torus_r4(r1: float = 1.0, r2: float = 1.0) -> ImmersionPatch:
    """Product of circles of radii r1 and r2 in R⁴."""
    if min(r1, r2) <= 0:
        raise UsageError(f"flat-torus-r4 radii must be positive, got {(r1, r2)}")
    return _patch(
        f"flat-torus-r4(r1={r1:g}, r2={r2:g})",
        EuclideanSpace(dim=4),
        2,
        _torus_domain(),
        _product_torus_jet(r1, r2),
        closed=True,
        scale=min(r1, r2),
    )


def _product_torus_reference(r1: float, c: float):
    r2 = np.sqrt(1.0 / c - r1**2)
    return {"area": 4.0 * pi**2 * r1 * r2, "k2": -c, "k2_intrinsic": 0.0}


@zoo.manifold("product-torus-s3", reference=_product_torus_reference, tags=("closed", "space-form"))
def product_torus_s3(r1: float = 0.6, c: float = 1.0) -> ImmersionPatch:
    """Torus S¹(r1) × S¹(r2) on the 3-sphere of curvature c, r1² + r2² = 1/c."""
    if c <= 0 or not 0 < r1 < 1.0 / np.sqrt(c):
        raise UsageError(f"product-torus-s3 needs c > 0 and 0 < r1 < 1/sqrt(c), got r1={r1}, c={c}")
    r2 = float(np.sqrt(1.0 / c - r1**2))
    return _patch(
        f"product-torus-s3(r1={r1:g}, c={c:g})",
        SpaceForm(dim=3, c=c),
        2,
        _torus_domain(),
        _product_torus_jet(r1, r2),
        closed=True,
        scale=min(r1, r2),
    )


@zoo.manifold(
    "clifford-torus-s3",
    reference=lambda: {"area": 2.0 * pi**2, "k2": -1.0, "k2_intrinsic": 0.0, "h1": 0.0},
    tags=("closed", "space-form", "austere", "relatively-minimal"),
)
def clifford_torus_s3() -> ImmersionPatch:
    """Minimal Clifford torus in the unit 3-sphere."""
    patch = product_torus_s3(r1=1.0 / np.sqrt(2.0), c=1.0)
    return patch.model_copy(update={"name": "clifford-torus-s3"})


@zoo.manifold(
    "great-sphere-s3",
    reference=lambda c: {"area": 4.0 * pi / c, "k2": 0.0, "k2_intrinsic": c, "h1": 0.0},
    tags=("closed", "space-form", "totally-geodesic"),
)
def great_sphere_s3(c: float = 1.0) -> ImmersionPatch:
    """Totally geodesic great 2-sphere in the 3-sphere of curvature c."""
    if c <= 0:
        raise UsageError(f"great-sphere-s3 needs c > 0, got {c}")
    rho = 1.0 / np.sqrt(c)

    def jet(u: np.ndarray) -> Jet:
        theta, phi = u
        return _table(
            [
                [_scaled(_sin(theta), rho), _cos(phi)],
                [_scaled(_sin(theta), rho), _sin(phi)],
                [_scaled(_cos(theta), rho), _ONE],
                [_ZERO, _ONE],
            ]
        )

    return _patch(
        f"great-sphere-s3(c={c:g})",
        SpaceForm(dim=3, c=c),
        2,
        _sphere_domain(2),
        jet,
        closed=True,
        scale=rho,
    )


def _geodesic_sphere_reference(radius: float, c: float):
    rho = 1.0 / np.sqrt(-c)
    s = radius / rho
    return {
        "area": 4.0 * pi * rho**2 * np.sinh(s) ** 2,
        "k2": 1.0 / (rho**2 * np.tanh(s) ** 2),
        "k2_intrinsic": 1.0 / (rho**2 * np.sinh(s) ** 2),
        "total_k2_intrinsic": 4.0 * pi,
    }


@zoo.manifold("geodesic-sphere-h3", reference=_geodesic_sphere_reference, tags=("closed", "space-form"))
def geodesic_sphere_h3(radius: float = 1.0, c: float = -1.0) -> ImmersionPatch:
    """Geodesic sphere of the given radius in hyperbolic 3-space of curvature c < 0."""
    if c >= 0 or radius <= 0:
        raise UsageError(f"geodesic-sphere-h3 needs c < 0 and radius > 0, got radius={radius}, c={c}")
    rho = 1.0 / np.sqrt(-c)
    s = radius / rho
    lateral = rho * np.sinh(s)

    def jet(u: np.ndarray) -> Jet:
        theta, phi = u
        return _table(
            [
                [_scaled(_sin(theta), lateral), _cos(phi)],
                [_scaled(_sin(theta), lateral), _sin(phi)],
                [_scaled(_cos(theta), lateral), _ONE],
                [_scaled(_ONE, rho * np.cosh(s)), _ONE],
            ]
        )

    return _patch(
        f"geodesic-sphere-h3(radius={radius:g}, c={c:g})",
        SpaceForm(dim=3, c=c),
        2,
        _sphere_domain(2),
        jet,
        closed=True,
        scale=min(lateral, rho),
    )


@zoo.manifold("fourier-perturbed-torus", tags=("closed", "euclidean"), default_resolution=16)
def fourier_perturbed_torus(seed: int = 0, amplitude: float = 0.05, ambient_dim: int = 4) -> ImmersionPatch:
    """Flat torus in R⁴ (or a torus of revolution in R³) plus a seeded trigonometric perturbation."""
    if ambient_dim not in (3, 4):
        raise UsageError(f"fourier-perturbed-torus supports ambient_dim 3 or 4, got {ambient_dim}")
    rng = np.random.default_rng(seed)
    modes = 3
    freq = rng.integers(-2, 3, size=(modes, 2)).astype(float)
    cos_coef = rng.normal(size=(modes, ambient_dim))
    sin_coef = rng.normal(size=(modes, ambient_dim))
    if ambient_dim == 4:
        base_jet = _product_torus_jet(1.0, 1.0)
    else:
        base_jet = torus_of_revolution(R=2.0, a=0.7).model_jet

    def jet(u: np.ndarray) -> Jet:
        value, first, second = base_jet(u)
        theta = freq @ u
        c, s = np.cos(theta), np.sin(theta)
        value = value + amplitude * (c @ cos_coef + s @ sin_coef)
        slope = -s[:, None] * cos_coef + c[:, None] * sin_coef
        first = first + amplitude * np.einsum("ki,kd->id", freq, slope)
        bend = -c[:, None] * cos_coef - s[:, None] * sin_coef
        second = second + amplitude * np.einsum("ki,kj,kd->ijd", freq, freq, bend)
        return Jet(value, first, second)

    return _patch(
        f"fourier-perturbed-torus(seed={seed}, amplitude={amplitude:g}, ambient_dim={ambient_dim})",
        EuclideanSpace(dim=ambient_dim),
        2,
        _torus_domain(),
        jet,
        closed=True,
        scale=0.7 if ambient_dim == 3 else 1.0,
    )


@zoo.manifold("torus-knot", tags=("closed", "euclidean", "curve"), default_resolution=64)
def torus_knot(p: int = 2, q: int = 3, R: float = 2.0, a: float = 0.5) -> ImmersionPatch:
    """(p, q) torus knot on the torus of revolution with radii R > a, as a curve in R³."""
    if not R > a > 0 or p == 0:
        raise UsageError(f"torus-knot needs R > a > 0 and p != 0, got p={p}, R={R}, a={a}")

    def jet(u: np.ndarray) -> Jet:
        t = u[0]
        rho = R + a * np.cos(q * t)
        rho1 = -a * q * np.sin(q * t)
        rho2 = -a * q**2 * np.cos(q * t)
        cp, sp = np.cos(p * t), np.sin(p * t)
        value = np.array([rho * cp, rho * sp, a * np.sin(q * t)])
        first = np.array([rho1 * cp - p * rho * sp, rho1 * sp + p * rho * cp, a * q * np.cos(q * t)])
        second = np.array(
            [
                rho2 * cp - 2 * p * rho1 * sp - p**2 * rho * cp,
                rho2 * sp + 2 * p * rho1 * cp - p**2 * rho * sp,
                -a * q**2 * np.sin(q * t),
            ]
        )
        return Jet(value, first[None, :], second[None, None, :])

    return _patch(
        f"torus-knot(p={p}, q={q}, R={R:g}, a={a:g})",
        EuclideanSpace(dim=3, chart_scale=R),
        1,
        ParameterDomain(lower=(0.0,), upper=(TWO_PI,), periodic=(True,)),
        jet,
        closed=True,
        scale=a,
    )


def _complex_patch(name: str, ambient, nc: int, half_width: float, fn) -> ImmersionPatch:
    def jet(u: np.ndarray) -> Jet:
        return _holomorphic_jet(*fn(to_complex(u)))

    return _patch(name, ambient, 2 * nc, _box(2 * nc, half_width), jet, holomorphic=True)


@zoo.manifold(
    "linear-cp1-cp2",
    reference=lambda c: {"k2": 0.0, "k2_intrinsic": c, "h1": 0.0},
    tags=("complex", "fubini-study", "totally-geodesic"),
    default_resolution=8,
)
def linear_cp1_cp2(c: float = 4.0) -> ImmersionPatch:
    """Linear line w ↦ (w, 0) in CP²."""

    def fn(z: np.ndarray):
        return (
            np.array([z[0], 0.0]),
            np.array([[1.0], [0.0]], dtype=complex),
            np.zeros((2, 1, 1), dtype=complex),
        )

    return _complex_patch("linear-cp1-cp2", FubiniStudySpace(dim=4, c=c), 1, 1.0, fn)


@zoo.manifold(
    "quadric-cp2",
    reference=lambda c: {"h1": 0.0},
    tags=("complex", "fubini-study"),
    default_resolution=8,
)
def quadric_cp2(c: float = 4.0) -> ImmersionPatch:
    """Conic w₁² + w₂² + 1 = 0 in CP², as w ↦ (w, i√(1+w²))."""

    def fn(z: np.ndarray):
        w = z[0]
        s = np.sqrt(1.0 + w * w)
        return (
            np.array([w, 1j * s]),
            np.array([[1.0], [1j * w / s]]),
            np.array([[[0.0]], [[1j / s**3]]]),
        )

    return _complex_patch("quadric-cp2", FubiniStudySpace(dim=4, c=c), 1, 0.5, fn)


@zoo.manifold(
    "quadric-cp3",
    reference=lambda c: {"h1": 0.0, "h3": 0.0},
    tags=("complex", "fubini-study"),
    default_resolution=4,
)
def quadric_cp3(c: float = 4.0) -> ImmersionPatch:
    """Quadric surface w₁² + w₂² + w₃² + 1 = 0 in CP³."""

    def fn(z: np.ndarray):
        s = np.sqrt(1.0 + z[0] ** 2 + z[1] ** 2)
        d1 = np.zeros((3, 2), dtype=complex)
        d1[0, 0] = d1[1, 1] = 1.0
        d1[2] = 1j * z / s
        d2 = np.zeros((3, 2, 2), dtype=complex)
        d2[2] = 1j * (np.eye(2) * s**2 - np.outer(z, z)) / s**3
        return np.array([z[0], z[1], 1j * s]), d1, d2

    return _complex_patch("quadric-cp3", FubiniStudySpace(dim=6, c=c), 2, 0.4, fn)


@zoo.manifold(
    "holomorphic-graph-c3",
    reference=lambda a, b: {"h1": 0.0, "h3": 0.0},
    tags=("complex", "euclidean", "austere"),
    default_resolution=4,
)
def holomorphic_graph_c3(a: float = 1.0, b: float = 0.5) -> ImmersionPatch:
    """Graph of g(z₁, z₂) = a z₁z₂ + b z₁³ in C³ = R⁶."""

    def fn(z: np.ndarray):
        z1, z2 = z
        d1 = np.zeros((3, 2), dtype=complex)
        d1[0, 0] = d1[1, 1] = 1.0
        d1[2] = [a * z2 + 3.0 * b * z1**2, a * z1]
        d2 = np.zeros((3, 2, 2), dtype=complex)
        d2[2] = [[6.0 * b * z1, a], [a, 0.0]]
        return np.array([z1, z2, a * z1 * z2 + b * z1**3]), d1, d2

    return _complex_patch("holomorphic-graph-c3", EuclideanSpace(dim=6), 2, 0.4, fn)


@zoo.manifold("perturbed-cp1-cp2", tags=("fubini-study", "non-complex"), default_resolution=8)
def perturbed_cp1_cp2(epsilon: float = 0.2, c: float = 4.0) -> ImmersionPatch:
    """Real surface (x, y, ε(x²−y²), −2εxy) in CP²; anti-holomorphic in the second slot."""

    def jet(u: np.ndarray) -> Jet:
        x, y = u
        value = np.array([x, y, epsilon * (x * x - y * y), -2.0 * epsilon * x * y])
        first = np.array(
            [
                [1.0, 0.0, 2.0 * epsilon * x, -2.0 * epsilon * y],
                [0.0, 1.0, -2.0 * epsilon * y, -2.0 * epsilon * x],
            ]
        )
        second = np.zeros((2, 2, 4))
        second[0, 0, 2] = 2.0 * epsilon
        second[1, 1, 2] = -2.0 * epsilon
        second[0, 1, 3] = second[1, 0, 3] = -2.0 * epsilon
        return Jet(value, first, second)

    return _patch(f"perturbed-cp1-cp2(epsilon={epsilon:g})", FubiniStudySpace(dim=4, c=c), 2, _box(2, 0.5), jet)
