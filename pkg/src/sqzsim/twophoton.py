"""Quadrature algebra for Gaussian sideband noise.

Fields at carrier +/- omega are described by the pair of quadrature
operators (a1, a2), where a1 is the amplitude quadrature and a2 the phase
quadrature.  A Gaussian state at one sideband frequency is summarized by
the 2x2 Hermitian covariance matrix of that pair, normalized so that the
vacuum (shot-noise) covariance is the identity.  All noise figures are
therefore powers relative to shot noise; 0 dB is the vacuum level.

The sideband <-> quadrature basis change is fixed once and for all as

    (a1, a2) = A (a_plus, a_minus_dagger),   A = [[1, 1], [-i, i]] / sqrt(2)

so an element that multiplies the upper sideband by r_plus and the lower
sideband by r_minus acts on quadratures as A diag(r_plus, conj(r_minus)) A+.
Every covariance produced under these conventions is Hermitian positive
semidefinite with determinant >= 1 for physical states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_SQRT2 = math.sqrt(2.0)

#: Fixed basis change from (upper sideband, lower-sideband dagger) to
#: (amplitude, phase) quadratures.  Unitary.
SIDEBAND_BASIS = np.array([[1.0, 1.0], [-1.0j, 1.0j]]) / _SQRT2

_IDENTITY = np.eye(2, dtype=complex)

#: Default tolerance for Hermiticity / passivity checks.
HERMITICITY_TOL = 1e-9


def _as_matrix2(value, name: str) -> np.ndarray:
    m = np.asarray(value, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"{name} must be a 2x2 matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class SpectralCovariance:
    """Quadrature noise covariance at one sideband frequency.

    s11 and s22 are the amplitude- and phase-quadrature variances, s12 the
    cross term (s21 is its conjugate).  Vacuum is s11 = s22 = 1, s12 = 0.
    """

    s11: float
    s22: float
    s12: complex = 0j

    def __post_init__(self):
        if not (math.isfinite(self.s11) and math.isfinite(self.s22)):
            raise ValueError("covariance diagonal must be finite")
        if self.s11 < 0 or self.s22 < 0:
            raise ValueError(
                f"covariance diagonal must be non-negative, got ({self.s11}, {self.s22})"
            )

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.s11, self.s12], [np.conj(self.s12), self.s22]], dtype=complex
        )

    @classmethod
    def from_matrix(cls, m, tol: float = HERMITICITY_TOL) -> "SpectralCovariance":
        m = _as_matrix2(m, "covariance")
        if np.abs(m - m.conj().T).max() > tol:
            raise ValueError("covariance matrix is not Hermitian")
        # symmetrize to remove float drift from repeated conjugations
        h = 0.5 * (m + m.conj().T)
        return cls(h[0, 0].real, h[1, 1].real, complex(h[0, 1]))

    @classmethod
    def vacuum(cls) -> "SpectralCovariance":
        return cls(1.0, 1.0, 0j)

    def determinant(self) -> float:
        return self.s11 * self.s22 - abs(self.s12) ** 2

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class HomodyneSpec:
    """Homodyne readout: local-oscillator angle and detector efficiency.

    angle = 0 measures the amplitude quadrature.  quantum_efficiency is a
    power fraction folded in as a scalar loss before projection.
    """

    angle: float = 0.0
    quantum_efficiency: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.quantum_efficiency <= 1.0:
            raise ValueError(
                f"quantum_efficiency must be in [0, 1], got {self.quantum_efficiency}"
            )


@dataclass(frozen=True, eq=False)
class QuadratureTransfer:
    """Linear element acting on quadrature pairs at one sideband frequency.

    Applies S -> t S t+ + vacuum_admixture.  For a passive element
    t t+ + vacuum_admixture = 1, so vacuum maps to vacuum.
    """

    t: np.ndarray
    vacuum_admixture: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))

    def __post_init__(self):
        object.__setattr__(self, "t", _as_matrix2(self.t, "transfer matrix"))
        object.__setattr__(
            self,
            "vacuum_admixture",
            _as_matrix2(self.vacuum_admixture, "vacuum admixture"),
        )

    @classmethod
    def identity(cls) -> "QuadratureTransfer":
        return cls(_IDENTITY.copy())

    @classmethod
    def rotation(cls, angle: float) -> "QuadratureTransfer":
        c, s = math.cos(angle), math.sin(angle)
        return cls(np.array([[c, -s], [s, c]], dtype=complex))

    @classmethod
    def scalar_loss(cls, eta: float) -> "QuadratureTransfer":
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"eta must be in [0, 1], got {eta}")
        return cls(math.sqrt(eta) * _IDENTITY, (1.0 - eta) * np.eye(2))

    def passivity_defect(self) -> float:
        """Max deviation of t t+ + vacuum_admixture from the identity."""
        return float(
            np.abs(self.t @ self.t.conj().T + self.vacuum_admixture - _IDENTITY).max()
        )


def sideband_to_quadrature(r_plus: complex, r_minus: complex) -> np.ndarray:
    """Quadrature transfer matrix of an element with sideband responses
    r_plus at +omega and r_minus at -omega.

    Returns A diag(r_plus, conj(r_minus)) A+.  Equal phases at both
    sidebands rotate the quadratures; conjugate-symmetric responses
    (r_minus = conj(r_plus), the tuned-cavity case) give a covariance-
    invariant global phase.
    """
    a = SIDEBAND_BASIS
    return a @ np.diag([complex(r_plus), np.conj(complex(r_minus))]) @ a.conj().T


def apply_transfer(s: SpectralCovariance, x: QuadratureTransfer) -> SpectralCovariance:
    """Propagate a covariance through one element: t S t+ + admixture."""
    m = x.t @ s.matrix @ x.t.conj().T + x.vacuum_admixture
    return SpectralCovariance.from_matrix(0.5 * (m + m.conj().T))


def apply_scalar_loss(s: SpectralCovariance, eta: float) -> SpectralCovariance:
    """Mix a fraction (1 - eta) of vacuum into the state: eta S + (1 - eta) 1."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    return SpectralCovariance(
        eta * s.s11 + (1.0 - eta),
        eta * s.s22 + (1.0 - eta),
        eta * s.s12,
    )


def homodyne_noise(s: SpectralCovariance, h: HomodyneSpec) -> float:
    """Noise power relative to shot noise seen by a homodyne detector.

    Projects the covariance (after detector-efficiency vacuum mixing) onto
    the readout quadrature (cos angle, sin angle).  Written in double-angle
    form so vacuum input returns exactly 1 for any angle and efficiency.
    """
    lossy = apply_scalar_loss(s, h.quantum_efficiency)
    value = (
        0.5 * (lossy.s11 + lossy.s22)
        + 0.5 * (lossy.s11 - lossy.s22) * math.cos(2.0 * h.angle)
        + lossy.s12.real * math.sin(2.0 * h.angle)
    )
    return float(value)


def to_decibel(ratio: float) -> float:
    """Power ratio to dB: 10 log10(ratio).  Requires ratio > 0."""
    if ratio <= 0.0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    return 10.0 * math.log10(ratio)
