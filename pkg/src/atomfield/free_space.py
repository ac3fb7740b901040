"""Spontaneous emission in free space and the emitted one-photon wave packet.

Natural units hbar = c = epsilon_0 = 1 throughout; the decay rate Gamma sets
the time scale and the transition frequency omega_eg is typically a large
multiple of Gamma (pole-approximation regime).

The atom sits at the origin with its dipole along +z; theta is the polar
angle between the dipole and the observation direction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import pi, sqrt
from typing import NamedTuple

import numpy as np

from .multimode import AmplitudeTrace, integrate_atom_modes
from .numerics import QuadratureSpec, integrate_2d

__all__ = [
    "TwoLevelAtom",
    "FieldMap",
    "FieldEnergy",
    "RadiationZoneWarning",
    "decay_rate",
    "excited_amplitude",
    "absorbing_state_amplitude",
    "energy_density",
    "electric_amplitude",
    "field_energy",
    "field_map",
    "wigner_weisskopf_ode",
]

_RADIATION_ZONE_FACTOR = 10.0


class RadiationZoneWarning(UserWarning):
    """Evaluation point violates an asymptotic validity guard."""


@dataclass(frozen=True)
class TwoLevelAtom:
    """Two-level emitter with transition frequency and dipole magnitude.

    The free-space decay rate Gamma = omega_eg^3 d^2 / (3 pi) follows from
    the golden rule in these units.
    """

    omega_eg: float
    dipole: float
    orientation: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if self.omega_eg <= 0:
            raise ValueError("transition frequency must be positive")
        if self.dipole < 0:
            raise ValueError("dipole magnitude must be >= 0")
        norm = sqrt(sum(c * c for c in self.orientation))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError("dipole orientation must be a unit vector")
        if self.dipole > 0 and self.omega_eg / self.gamma < 10.0:
            raise ValueError(
                "omega_eg / Gamma < 10: outside the validity of the pole approximation"
            )

    @property
    def gamma(self) -> float:
        return self.omega_eg**3 * self.dipole**2 / (3.0 * pi)

    @classmethod
    def from_linewidth(cls, gamma: float = 1.0, omega_over_gamma: float = 1e3) -> "TwoLevelAtom":
        """Atom with the requested decay rate; omega_eg = omega_over_gamma * gamma."""
        omega = omega_over_gamma * gamma
        d = sqrt(3.0 * pi * gamma / omega**3)
        return cls(omega_eg=omega, dipole=d)


class FieldEnergy(NamedTuple):
    """Quadrature result for the wave-packet field energy."""

    value: float  # quadrature over the radiation zone + analytic inner part
    inner_correction: float  # analytic contribution of r < r_min (reported)
    quadrature_error: float


@dataclass(frozen=True)
class FieldMap:
    """Field samples on a grid of points at one instant.

    `points` holds the grid coordinates, one row per point; the meaning of
    the two columns ((r, theta) or (z, rho)) is up to the producer.
    """

    points: np.ndarray  # shape (n, 2)
    amplitude: np.ndarray  # complex, shape (n,)
    energy_density: np.ndarray  # real >= 0, shape (n,)
    time: float
    flags: np.ndarray | None = None  # optional per-point reliability flags

    def __post_init__(self):
        if np.any(self.energy_density < -1e-30):
            raise ValueError("energy density must be non-negative")


def decay_rate(atom: TwoLevelAtom) -> float:
    """Free-space spontaneous decay rate Gamma."""
    return atom.gamma


def excited_amplitude(atom: TwoLevelAtom, t: float) -> complex:
    """Excited-state amplitude exp(-i omega_eg t) exp(-Gamma t / 2) for t >= 0.

    Convention E_g = 0, so E_e = omega_eg.
    """
    if t < 0:
        raise ValueError("retarded branch requires t >= 0")
    return np.exp(-1j * atom.omega_eg * t) * np.exp(-atom.gamma * t / 2.0)


def absorbing_state_amplitude(atom: TwoLevelAtom, t: float) -> complex:
    """Excited amplitude of the perfectly absorbed (advanced) solution, t <= 0.

    Magnitude exp(+Gamma t / 2) grows toward t = 0 where the atom is fully
    excited; for t > 0 the retarded branch `excited_amplitude` applies.
    """
    if t > 0:
        raise ValueError("advanced branch requires t <= 0; use excited_amplitude")
    return np.exp(-1j * atom.omega_eg * t) * np.exp(atom.gamma * t / 2.0)


def _check_radiation_zone(atom: TwoLevelAtom, r: np.ndarray) -> None:
    bad = r * atom.omega_eg < _RADIATION_ZONE_FACTOR
    if np.any(bad):
        warnings.warn(
            "evaluation point below the radiation zone (r * omega_eg < "
            f"{_RADIATION_ZONE_FACTOR:g}); asymptotic field formulas are unreliable there",
            RadiationZoneWarning,
            stacklevel=3,
        )


def energy_density(atom: TwoLevelAtom, r, theta, t: float):
    """Mean (normally ordered) field energy density of the one-photon packet.

    (3 Gamma omega_eg / 8 pi) sin^2(theta) / r^2 * exp(-Gamma(|t| - r)) inside
    the causal shell r <= |t|, zero outside; symmetric under t -> -t.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radius must be positive")
    _check_radiation_zone(atom, r)
    gamma = atom.gamma
    inside = np.abs(t) - r >= 0.0
    out = np.where(
        inside,
        (3.0 * gamma * atom.omega_eg / (8.0 * pi))
        * np.sin(theta) ** 2
        / r**2
        * np.exp(-gamma * np.clip(np.abs(t) - r, 0.0, None)),
        0.0,
    )
    if out.ndim == 0:
        return float(out)
    return out


def electric_amplitude(atom: TwoLevelAtom, r, theta, t: float):
    """Complex electric energy-density amplitude (polarization e_theta).

    Squared magnitude gives the electric half of the energy density; the
    magnetic amplitude has the same value with polarization e_phi.
    """
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radius must be positive")
    _check_radiation_zone(atom, r)
    gamma = atom.gamma
    u = np.abs(t) - r
    inside = u >= 0.0
    u = np.clip(u, 0.0, None)
    amp = (
        -1j
        * sqrt(3.0 * gamma * atom.omega_eg / (16.0 * pi))
        * np.exp(1j * np.sign(t) * atom.omega_eg * u)
        * np.exp(-gamma * u / 2.0)
        * np.sin(theta)
        / r
    )
    out = np.where(inside, amp, 0.0 + 0j)
    if out.ndim == 0:
        return complex(out)
    return out


def field_energy(
    atom: TwoLevelAtom,
    t: float,
    part: str = "total",
    spec: QuadratureSpec | None = None,
) -> FieldEnergy:
    """Spatial integral of the wave-packet energy density at time t.

    Quadrature runs over the radiation zone r in [10/omega_eg, |t|]; the
    analytically known inner-region contribution is added and reported
    separately.  `part` is "total" (electric + magnetic) or "electric".
    """
    if part not in ("total", "electric"):
        raise ValueError("part must be 'total' or 'electric'")
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12, max_subdivisions=400)
    gamma = atom.gamma
    t_abs = abs(t)
    r_min = _RADIATION_ZONE_FACTOR / atom.omega_eg
    prefactor = 3.0 * gamma * atom.omega_eg / (8.0 * pi)
    if part == "electric":
        prefactor /= 2.0
    if t_abs <= r_min:
        # causal shell entirely inside the near zone: analytic value only
        inner = prefactor * (8.0 * pi / 3.0) * (1.0 - np.exp(-gamma * t_abs)) / gamma
        return FieldEnergy(inner, inner, 0.0)

    def integrand(r: float, theta: float) -> float:
        return (
            prefactor
            * np.sin(theta) ** 2
            / r**2
            * np.exp(-gamma * (t_abs - r))
            * 2.0
            * pi
            * r**2
            * np.sin(theta)
        )

    value, err = integrate_2d(integrand, ((r_min, t_abs), (0.0, pi)), spec)
    # analytic r < r_min contribution of the same (asymptotic) energy density
    inner = (
        prefactor
        * (8.0 * pi / 3.0)
        * np.exp(-gamma * t_abs)
        * (np.exp(gamma * r_min) - 1.0)
        / gamma
    )
    return FieldEnergy(value + inner, inner, err)


def field_map(atom: TwoLevelAtom, r_values, theta_values, t: float) -> FieldMap:
    """Sample the electric amplitude and full energy density on an (r, theta) grid."""
    r_values = np.asarray(r_values, dtype=float)
    theta_values = np.asarray(theta_values, dtype=float)
    rr, tt = np.meshgrid(r_values, theta_values, indexing="ij")
    pts = np.column_stack((rr.ravel(), tt.ravel()))
    amp = electric_amplitude(atom, pts[:, 0], pts[:, 1], t)
    dens = energy_density(atom, pts[:, 0], pts[:, 1], t)
    return FieldMap(points=pts, amplitude=np.atleast_1d(amp), energy_density=np.atleast_1d(dens), time=t)


def wigner_weisskopf_ode(
    atom: TwoLevelAtom,
    t_end: float,
    band_width: float | None = None,
    mode_spacing: float | None = None,
    times: np.ndarray | None = None,
    rtol: float = 1e-9,
) -> AmplitudeTrace:
    """Brute-force decay of the atom into a discretized continuum band.

    Flat per-mode coupling |g|^2 = Gamma * spacing / (2 pi) reproduces the
    golden-rule rate by construction.  Valid until the Poincare recurrence
    time 2 pi / spacing of the discretization.
    """
    gamma = atom.gamma
    if band_width is None:
        band_width = 40.0 * gamma
    if mode_spacing is None:
        mode_spacing = gamma / 50.0
    if band_width < 20.0 * gamma:
        raise ValueError("band width must be at least 20 Gamma")
    if mode_spacing > gamma / 20.0:
        raise ValueError("mode spacing must be at most Gamma / 20")
    recurrence = 2.0 * pi / mode_spacing
    if t_end >= recurrence:
        raise ValueError(
            f"t_end={t_end:g} exceeds the discretization recurrence time {recurrence:g}; "
            "decrease the mode spacing"
        )
    half = int(np.ceil(band_width / 2.0 / mode_spacing))
    detunings = mode_spacing * np.arange(-half, half + 1)
    couplings = np.full(detunings.size, sqrt(gamma * mode_spacing / (2.0 * pi)))
    if times is None:
        times = np.linspace(0.0, t_end, 301)
    return integrate_atom_modes(detunings, couplings, np.asarray(times, float), rtol=rtol)
