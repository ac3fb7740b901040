"""Half-open parabolic mirror: mode structure, decay-rate modification and
two-ray semiclassical field maps.

Geometry convention used throughout this module: Cartesian coordinates with
the mirror vertex P at the origin, the symmetry axis along +z, the focus at
(0, 0, f) and the directrix plane at z = -f.  The mirror surface is
z = rho^2 / (4 f); in parabolic coordinates (xi, eta, phi) centered on the
focus the surface is eta = f and the interior is eta < f.

The decay-rate interference phase is k * n . r with r measured from the
vertex, so the standing-wave field vanishes at P and the on-axis rate
correction depends on k * z (z = height above the vertex).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import atan, log, pi, sqrt

import numpy as np
from scipy.special import j0

from .free_space import RadiationZoneWarning, TwoLevelAtom, decay_rate
from .numerics import QuadratureSpec, QuadResult, integrate_1d, integrate_2d

__all__ = [
    "ParabolicGeometry",
    "ParabolicPoint",
    "RateProfile",
    "TwoRayField",
    "ParabolicFieldMap",
    "mode_angular_function",
    "discretized_mu",
    "discrete_mode",
    "free_space_rate_integral",
    "eta_quadrature",
    "modified_rate",
    "on_axis_eta",
    "rate_profile",
    "angular_cutoff_correction",
    "semiclassical_field",
    "field_map",
]

_BOUNDARY_FLAG_FRACTION = 0.95
_SERIES_CROSSOVER = 1e-2


@dataclass(frozen=True)
class ParabolicGeometry:
    """Parabolic mirror z = rho^2/(4f) with resonant wave number k."""

    focal_length: float
    wavenumber: float

    def __post_init__(self):
        if self.focal_length <= 0:
            raise ValueError("focal length must be positive")
        if self.wavenumber <= 0:
            raise ValueError("wave number must be positive")

    @property
    def kf(self) -> float:
        return self.wavenumber * self.focal_length

    @property
    def theta0(self) -> float:
        """Minimum polar angle of the discretized modes: tan(theta0/2) = 1/(2kf)."""
        return 2.0 * atan(1.0 / (2.0 * self.kf))


@dataclass(frozen=True)
class ParabolicPoint:
    """Point (z, rho) in the meridional plane, vertex-based coordinates."""

    z: float
    rho: float

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be >= 0")

    def focus_distance(self, geometry: ParabolicGeometry) -> float:
        return sqrt((self.z - geometry.focal_length) ** 2 + self.rho**2)

    def parabolic_eta(self, geometry: ParabolicGeometry) -> float:
        """Parabolic coordinate eta (focus-centered); the mirror is at eta = f."""
        r = self.focus_distance(geometry)
        return 0.5 * (r - (self.z - geometry.focal_length))

    def parabolic_xi(self, geometry: ParabolicGeometry) -> float:
        r = self.focus_distance(geometry)
        return 0.5 * (r + (self.z - geometry.focal_length))

    def inside(self, geometry: ParabolicGeometry) -> bool:
        return self.parabolic_eta(geometry) < geometry.focal_length


@dataclass(frozen=True)
class RateProfile:
    """Axial samples of the decay-rate ratio eta together with the reference rate."""

    positions: np.ndarray  # z above the vertex
    eta: np.ndarray
    reference_rate: float

    def __post_init__(self):
        if np.any(self.eta < -1e-12):
            raise ValueError("rate ratio must be non-negative")


def mode_angular_function(ell: int, mu: float, theta, phi):
    """Angular factor chi_mu(theta) exp(i ell phi) / sqrt(2 pi) of the
    half-space mode expansion; singular at the poles."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(theta <= 0) or np.any(theta >= pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    chi = np.exp(-1j * mu * np.log(np.tan(theta / 2.0))) / (
        sqrt(2.0 * pi) * np.sin(theta)
    )
    out = chi * np.exp(1j * ell * phi) / sqrt(2.0 * pi)
    if out.ndim == 0:
        return complex(out)
    return out


def discretized_mu(geometry: ParabolicGeometry, m: int) -> float:
    """Discrete mode index mu_m = m pi / ln(2 k f) selected by the mirror."""
    if m < 1:
        raise ValueError("mode number m must be >= 1")
    if geometry.kf <= 1.0:
        raise ValueError("discretization requires kf > 1")
    return m * pi / log(2.0 * geometry.kf)


def discrete_mode(geometry: ParabolicGeometry, m: int, theta):
    """Standing-wave angular mode of the mirror; vanishes outside
    [theta0, pi - theta0] and at the cutoff angles themselves."""
    if m < 1:
        raise ValueError("mode number m must be >= 1")
    log2kf = log(2.0 * geometry.kf)
    if log2kf <= 0:
        raise ValueError("discretization requires kf > 1")
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0) or np.any(theta >= pi):
        raise ValueError("theta must lie strictly inside (0, pi)")
    t0 = geometry.theta0
    inside = (theta >= t0) & (theta <= pi - t0)
    val = np.sin(m * pi * np.log(np.tan(theta / 2.0)) / log2kf) / (
        np.sqrt(2.0 * pi * log2kf) * np.sin(theta)
    )
    out = np.where(inside, val, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def free_space_rate_integral(
    atom: TwoLevelAtom, spec: QuadratureSpec | None = None
) -> float:
    """Golden-rule rate from the half-space mode sum with |f_k| = 1.

    Quadrature of (d^2 k^3 / (2)) (1/(2 pi)^2) sin^3(theta) over the sphere;
    must reproduce the closed-form free-space Gamma.
    """
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14)
    k = atom.omega_eg
    pref = atom.dipole**2 * k**3 / 2.0 / (2.0 * pi) ** 2
    value, _ = integrate_2d(
        lambda theta, phi: np.sin(theta) ** 3, ((0.0, pi), (0.0, 2.0 * pi)), spec
    )
    return pref * value


def _theta_spec(a: float, spec: QuadratureSpec | None) -> QuadratureSpec:
    # subdivision budget scaled with the oscillation count ~ 2a / pi
    base = spec or QuadratureSpec(rel_tol=1e-10, abs_tol=1e-13)
    need = int(8 * abs(a)) + 100
    if base.max_subdivisions >= need:
        return base
    return QuadratureSpec(base.rel_tol, base.abs_tol, need)


def eta_quadrature(
    geometry: ParabolicGeometry,
    point: tuple[float, float, float],
    spec: QuadratureSpec | None = None,
    method: str = "auto",
) -> QuadResult:
    """Decay-rate ratio eta at a vertex-based point (x, y, z) by quadrature.

    method="auto" performs the azimuthal integral exactly (Bessel J0 kernel)
    and integrates the polar angle adaptively; method="quad2d" evaluates the
    raw iterated 2-D integral of sin^3(theta) sin^2(k n . r) (slow, kept as a
    cross-check of the reduction).
    """
    x, y, z = (float(c) for c in point)
    rho = sqrt(x * x + y * y)
    pt = ParabolicPoint(z=z, rho=rho)
    # closed region: the mirror surface itself (eta = f, e.g. the vertex P)
    # is a legal evaluation point where the field vanishes
    if z < 0 or pt.parabolic_eta(geometry) > geometry.focal_length * (1.0 + 1e-12):
        raise ValueError("point lies outside the parabolic cavity")
    k = geometry.wavenumber
    if method == "quad2d":
        qspec = _theta_spec(k * (abs(z) + rho), spec)
        value, err = integrate_2d(
            lambda theta, phi: np.sin(theta) ** 3
            * np.sin(
                k
                * (
                    (x * np.cos(phi) + y * np.sin(phi)) * np.sin(theta)
                    + z * np.cos(theta)
                )
            )
            ** 2,
            ((0.0, pi), (0.0, 2.0 * pi)),
            qspec,
        )
        return QuadResult(3.0 / (4.0 * pi) * value, 3.0 / (4.0 * pi) * err)
    if method != "auto":
        raise ValueError("method must be 'auto' or 'quad2d'")
    # sin^2 -> (1 - cos)/2; the phi integral of cos(A cos(phi - phi0) + B)
    # is 2 pi J0(A) cos(B)
    qspec = _theta_spec(k * (abs(z) + rho), spec)
    value, err = integrate_1d(
        lambda theta: np.sin(theta) ** 3
        * j0(2.0 * k * rho * np.sin(theta))
        * np.cos(2.0 * k * z * np.cos(theta)),
        (0.0, pi),
        qspec,
    )
    return QuadResult(1.0 - 0.75 * value, 0.75 * err)


def modified_rate(
    geometry: ParabolicGeometry,
    atom: TwoLevelAtom,
    point: tuple[float, float, float],
    spec: QuadratureSpec | None = None,
) -> float:
    """Spontaneous decay rate at a point inside the mirror, dipole along z."""
    if not np.isclose(geometry.wavenumber, atom.omega_eg, rtol=1e-9):
        raise ValueError(
            "geometry wave number must match the atomic transition (k = omega_eg / c)"
        )
    eta, _ = eta_quadrature(geometry, point, spec)
    return eta * decay_rate(atom)


def on_axis_eta(geometry: ParabolicGeometry, z: float) -> float:
    """Closed-form on-axis rate ratio; z is the height above the mirror vertex.

    eta(a) = 1 + 3 cos(2a)/(4a^2) - 3 sin(2a)/(8a^3) with a = k z; the
    removable singularity at a = 0 is handled by the Taylor series
    (2/5) a^2 - (2/35) a^4 + (4/945) a^6.
    """
    if z < 0:
        raise ValueError("axial position must be above the vertex (z >= 0)")
    a = geometry.wavenumber * z
    if a < _SERIES_CROSSOVER:
        a2 = a * a
        return a2 * (2.0 / 5.0 + a2 * (-2.0 / 35.0 + a2 * (4.0 / 945.0)))
    return (
        1.0
        + 3.0 * np.cos(2.0 * a) / (4.0 * a * a)
        - 3.0 * np.sin(2.0 * a) / (8.0 * a**3)
    )


def rate_profile(
    geometry: ParabolicGeometry,
    z_range: tuple[float, float],
    samples: int,
    reference_rate: float = 1.0,
) -> RateProfile:
    """Sample the on-axis rate ratio eta(z) over [z_min, z_max] above the vertex."""
    if samples < 2:
        raise ValueError("at least 2 samples required")
    z = np.linspace(float(z_range[0]), float(z_range[1]), samples)
    eta = np.array([on_axis_eta(geometry, zi) for zi in z])
    return RateProfile(positions=z, eta=eta, reference_rate=reference_rate)


def angular_cutoff_correction(
    geometry: ParabolicGeometry, spec: QuadratureSpec | None = None
) -> float:
    """Relative rate reduction from restricting emission to [theta0, pi - theta0].

    Scales as (kf)^-4 for large kf and is negligible in the regimes of
    practical interest.
    """
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-16)
    t0 = geometry.theta0
    value, _ = integrate_1d(lambda theta: np.sin(theta) ** 3, (0.0, t0), spec)
    return 1.5 * value


@dataclass(frozen=True)
class TwoRayField:
    """Two-ray semiclassical electric energy-density amplitude at one point.

    `spherical` multiplies the e_theta1 polarization of the direct ray,
    `plane` the e_rho polarization of the mirror-reflected ray family.
    """

    spherical: complex
    plane: complex
    cos_theta1: float  # e_theta1 . e_rho, needed for the interference term
    near_boundary: bool

    @property
    def energy_density(self) -> float:
        cross = 2.0 * (self.spherical * np.conj(self.plane)).real * self.cos_theta1
        return abs(self.spherical) ** 2 + abs(self.plane) ** 2 + cross


@dataclass(frozen=True)
class ParabolicFieldMap:
    """Grid of two-ray field samples restricted to the cavity interior."""

    points: np.ndarray  # shape (n, 2): (z, rho)
    spherical: np.ndarray
    plane: np.ndarray
    energy_density: np.ndarray
    flags: np.ndarray  # True where the point is semiclassically unreliable
    time: float


def _ray_amplitude(atom: TwoLevelAtom, sin_t: float, path: float, dist: float, t: float) -> complex:
    """One ray-family term of the energy-density amplitude: causal front at
    |t| = path/c, geometric factor sin(theta)/dist."""
    gamma = atom.gamma
    u = abs(t) - path
    if u < 0:
        return 0.0 + 0j
    return (
        -1j
        * sqrt(3.0 * gamma * atom.omega_eg / (16.0 * pi))
        * np.exp(1j * np.sign(t) * atom.omega_eg * u)
        * np.exp(-gamma * u / 2.0)
        * sin_t
        / dist
    )


def semiclassical_field(
    geometry: ParabolicGeometry,
    atom: TwoLevelAtom,
    point: tuple[float, float],
    t: float,
) -> TwoRayField:
    """Two-ray field at (z, rho) inside the cavity at time t.

    Direct rays form a spherical wave centered on the focus (distance r1,
    polarization e_theta1); reflected rays form a plane wave along +z whose
    eikonal z + f is the distance from the directrix plane (polarization
    e_rho).  For |t| < f/c only the direct term is active and the field
    coincides with the free-space wave packet.
    """
    f = geometry.focal_length
    if atom.omega_eg * f < 50.0:
        raise ValueError(
            "semiclassical two-ray construction requires omega_eg f / c >= 50"
        )
    if not np.isclose(geometry.wavenumber, atom.omega_eg, rtol=1e-9):
        raise ValueError(
            "geometry wave number must match the atomic transition (k = omega_eg / c)"
        )
    z, rho = float(point[0]), float(point[1])
    pt = ParabolicPoint(z=z, rho=rho)
    eta_coord = pt.parabolic_eta(geometry)
    if eta_coord >= f:
        raise ValueError("point lies outside the parabolic cavity")
    r1 = pt.focus_distance(geometry)
    if r1 == 0.0:
        raise ValueError("field amplitude is singular at the focus")
    if r1 * atom.omega_eg < 10.0:
        warnings.warn(
            "point below the radiation zone of the emitter; semiclassical "
            "amplitudes are unreliable there",
            RadiationZoneWarning,
            stacklevel=2,
        )
    sin_t1 = rho / r1
    cos_t1 = (z - f) / r1
    r2 = f + rho**2 / (4.0 * f)
    sin_t2 = rho / r2
    spherical = _ray_amplitude(atom, sin_t1, r1, r1, t)
    plane = _ray_amplitude(atom, sin_t2, z + f, r2, t)
    return TwoRayField(
        spherical=complex(spherical),
        plane=complex(plane),
        cos_theta1=cos_t1,
        near_boundary=eta_coord >= _BOUNDARY_FLAG_FRACTION * f,
    )


def field_map(
    geometry: ParabolicGeometry,
    atom: TwoLevelAtom,
    z_values,
    rho_values,
    t: float,
) -> ParabolicFieldMap:
    """Evaluate the two-ray field on the part of a (z, rho) grid inside the cavity."""
    z_values = np.asarray(z_values, dtype=float)
    rho_values = np.asarray(rho_values, dtype=float)
    pts = []
    sph = []
    pln = []
    dens = []
    flags = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RadiationZoneWarning)
        for z in z_values:
            for rho in rho_values:
                pt = ParabolicPoint(z=float(z), rho=float(rho))
                if pt.focus_distance(geometry) == 0.0 or not pt.inside(geometry):
                    continue
                fld = semiclassical_field(geometry, atom, (z, rho), t)
                pts.append((z, rho))
                sph.append(fld.spherical)
                pln.append(fld.plane)
                dens.append(fld.energy_density)
                flags.append(fld.near_boundary)
    return ParabolicFieldMap(
        points=np.array(pts, dtype=float).reshape(-1, 2),
        spherical=np.array(sph, dtype=complex),
        plane=np.array(pln, dtype=complex),
        energy_density=np.array(dens, dtype=float),
        flags=np.array(flags, dtype=bool),
        time=t,
    )
