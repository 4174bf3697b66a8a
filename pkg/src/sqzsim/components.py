"""Physical models of cavities, the squeezer, and in-line loss elements.

Cavities are two-mirror linear resonators seen from the coupling-mirror
side.  Recycling cavities formed by a recycling mirror and the two
interferometer end mirrors behind a balanced beamsplitter are described
by the same model with the end mirrors acting as one compound end mirror.

Sign conventions, fixed once: the promptly reflected field carries -r1,
and the carrier detuning delta enters the round-trip phase as
phi = 4 pi L (omega - delta) / c, so a cavity is resonant for the sideband
at omega = delta.  A positive detuning means the cavity is locked to the
upper sideband.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.constants import c as _C

from .twophoton import QuadratureTransfer, SpectralCovariance, sideband_to_quadrature

__all__ = [
    "CavitySpec",
    "OpaSpec",
    "LossSpec",
    "cavity_fsr",
    "detuning_from_sideband_lock",
    "cavity_finesse",
    "cavity_reflection",
    "cavity_transmission",
    "cavity_rotation_angle",
    "cavity_quadrature_transfer",
    "opa_output_covariance",
]


def _check_fraction(value: float, name: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class CavitySpec:
    """Two-mirror linear cavity.

    r_in and r_end are power reflectivities of the coupling and end
    mirrors; round_trip_loss is the intracavity power loss per round trip
    (lumped at the end mirror).  detuning is the signed carrier offset of
    the locked resonance in Hz.
    """

    length: float
    r_in: float
    r_end: float
    round_trip_loss: float = 0.0
    detuning: float = 0.0

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")
        _check_fraction(self.r_in, "r_in")
        _check_fraction(self.r_end, "r_end")
        _check_fraction(self.round_trip_loss, "round_trip_loss")
        if not math.isfinite(self.detuning):
            raise ValueError("detuning must be finite")

    @property
    def r1(self) -> float:
        """Amplitude reflectivity of the coupling mirror."""
        return math.sqrt(self.r_in)

    @property
    def r2(self) -> float:
        """Amplitude reflectivity of the end mirror including round-trip loss."""
        return math.sqrt(self.r_end * (1.0 - self.round_trip_loss))


@dataclass(frozen=True)
class OpaSpec:
    """Below-threshold parametric squeezer.

    pump_x is the pump amplitude normalized to threshold, bandwidth the
    cavity half width at half maximum in Hz, escape_efficiency the
    fraction of intracavity squeezing that leaves through the output
    coupler.
    """

    pump_x: float
    bandwidth: float
    escape_efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.pump_x < 1.0:
            raise ValueError(
                f"pump_x must be in [0, 1) (below threshold), got {self.pump_x}"
            )
        if self.bandwidth <= 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        _check_fraction(self.escape_efficiency, "escape_efficiency")


@dataclass(frozen=True)
class LossSpec:
    """Scalar in-line loss; eta is the transmitted power fraction."""

    eta: float
    label: str = ""

    def __post_init__(self):
        _check_fraction(self.eta, "eta")


def cavity_fsr(length: float) -> float:
    """Free spectral range c / 2L of a linear cavity, in Hz."""
    if length <= 0:
        raise ValueError(f"length must be positive, got {length}")
    return _C / (2.0 * length)


def detuning_from_sideband_lock(fsr: float, lock_frequency: float) -> float:
    """Carrier detuning obtained by locking the cavity to a modulation
    sideband at lock_frequency.

    Returns the signed residue of lock_frequency modulo the FSR, mapped
    into (-fsr/2, fsr/2].  Locking to +-134 MHz with a 124 MHz FSR detunes
    by +-10 MHz.
    """
    if fsr <= 0:
        raise ValueError(f"fsr must be positive, got {fsr}")
    residue = math.remainder(lock_frequency, fsr)
    if residue <= -0.5 * fsr:
        residue += fsr
    return residue


def cavity_finesse(spec: CavitySpec) -> float:
    """Finesse pi sqrt(rho) / (1 - rho) with rho the round-trip amplitude
    factor sqrt(r_in) sqrt(r_end) sqrt(1 - round_trip_loss)."""
    rho = spec.r1 * spec.r2
    if rho >= 1.0:
        raise ValueError(f"round-trip amplitude factor must be < 1, got {rho}")
    return math.pi * math.sqrt(rho) / (1.0 - rho)


def _round_trip_phase(spec: CavitySpec, omega: float) -> float:
    return 4.0 * math.pi * spec.length * (omega - spec.detuning) / _C


def cavity_reflection(spec: CavitySpec, omega: float) -> complex:
    """Amplitude reflection coefficient at sideband frequency omega.

    r(omega) = (-r1 + r2 e^{i phi}) / (1 - r1 r2 e^{i phi}) with the
    round-trip phase phi = 4 pi L (omega - detuning) / c; |r| <= 1.
    """
    phase = cmath.exp(1j * _round_trip_phase(spec, omega))
    return (-spec.r1 + spec.r2 * phase) / (1.0 - spec.r1 * spec.r2 * phase)


def cavity_transmission(spec: CavitySpec, omega: float) -> complex:
    """Amplitude transmission coefficient at sideband frequency omega.

    t(omega) = t1 t2 e^{i phi/2} / (1 - r1 r2 e^{i phi}) where t1, t2 are
    the bare mirror amplitude transmissions sqrt(1 - r_in), sqrt(1 - r_end)
    while the resonant denominator keeps the loss-adjusted r2.  This makes
    |r|^2 + |t|^2 = 1 exactly for a lossless cavity and < 1 otherwise.
    """
    t1 = math.sqrt(1.0 - spec.r_in)
    t2 = math.sqrt(1.0 - spec.r_end)
    phi = _round_trip_phase(spec, omega)
    return (
        t1 * t2 * cmath.exp(0.5j * phi)
        / (1.0 - spec.r1 * spec.r2 * cmath.exp(1j * phi))
    )


def cavity_rotation_angle(spec: CavitySpec, omega: float) -> float:
    """Quadrature rotation angle on reflection: mean phase of the two
    sideband responses, (arg r(omega) + arg r(-omega)) / 2."""
    return 0.5 * (
        cmath.phase(cavity_reflection(spec, omega))
        + cmath.phase(cavity_reflection(spec, -omega))
    )


def cavity_quadrature_transfer(spec: CavitySpec, omega: float) -> QuadratureTransfer:
    """Quadrature-basis reflection of the cavity at sideband omega.

    The matrix part combines the upper- and lower-sideband reflection
    coefficients; whatever power is not reflected at either sideband comes
    back as uncorrelated vacuum, keeping the element passive.
    """
    r_plus = cavity_reflection(spec, omega)
    r_minus = cavity_reflection(spec, -omega)
    t = sideband_to_quadrature(r_plus, r_minus)
    # real diag entries pass through sideband_to_quadrature unconjugated
    admixture = sideband_to_quadrature(
        1.0 - abs(r_plus) ** 2, 1.0 - abs(r_minus) ** 2
    )
    return QuadratureTransfer(t, admixture)


def opa_output_covariance(spec: OpaSpec, omega: float) -> SpectralCovariance:
    """Squeezed output of the below-threshold parametric amplifier.

    Amplitude quadrature is squeezed, phase antisqueezed, with Lorentzian
    frequency dependence set by the cavity bandwidth:

        S-(omega) = 1 - eta_esc 4x / ((1 + x)^2 + (omega / gamma)^2)
        S+(omega) = 1 + eta_esc 4x / ((1 - x)^2 + (omega / gamma)^2)

    The escape_efficiency = 1 state is pure (determinant 1) at every
    frequency.
    """
    x = spec.pump_x
    y2 = (omega / spec.bandwidth) ** 2
    squeezed = 1.0 - spec.escape_efficiency * 4.0 * x / ((1.0 + x) ** 2 + y2)
    antisqueezed = 1.0 + spec.escape_efficiency * 4.0 * x / ((1.0 - x) ** 2 + y2)
    return SpectralCovariance(squeezed, antisqueezed, 0j)
