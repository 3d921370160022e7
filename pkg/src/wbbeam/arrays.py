"""Uniform linear array geometry and frequency-dependent steering vectors.

Conventions: sensor 0 is the phase reference, angles are measured from
broadside, and the steering phase uses a negative exponent. Any consistent
choice leaves the gain magnitudes |w^H a| unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 2.99792458e8
"""Default propagation speed in m/s."""

__all__ = [
    "SPEED_OF_LIGHT",
    "ArrayGeometry",
    "SteeringVector",
    "steering_vector",
    "steering_matrix",
    "half_wavelength_spacing",
]


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array of ``num_sensors`` elements, ``spacing_m`` apart."""

    num_sensors: int
    spacing_m: float
    propagation_speed_mps: float = SPEED_OF_LIGHT

    def __post_init__(self):
        if not isinstance(self.num_sensors, (int, np.integer)):
            raise ValueError(f"num_sensors: expected an integer, got {self.num_sensors!r}")
        if self.num_sensors < 2:
            raise ValueError(f"num_sensors: need at least 2 sensors, got {self.num_sensors}")
        if not self.spacing_m > 0:
            raise ValueError(f"spacing_m: must be positive, got {self.spacing_m!r}")
        if not self.propagation_speed_mps > 0:
            raise ValueError(
                f"propagation_speed_mps: must be positive, got {self.propagation_speed_mps!r}"
            )


@dataclass(frozen=True)
class SteeringVector:
    """Array response to a unit plane wave from ``theta_rad`` at ``freq_hz``.

    Entries have unit modulus and the sensor-0 entry is exactly 1 + 0j.
    """

    entries: np.ndarray
    theta_rad: float
    freq_hz: float

    def __post_init__(self):
        entries = np.ascontiguousarray(self.entries, dtype=complex)
        if entries.ndim != 1 or entries.size < 2:
            raise ValueError(f"entries: expected a vector of length >= 2, got shape {entries.shape}")
        if not self.freq_hz > 0:
            raise ValueError(f"freq_hz: must be positive, got {self.freq_hz!r}")
        if entries[0] != 1.0 + 0.0j:
            raise ValueError(f"entries: phase-reference entry must be exactly 1+0j, got {entries[0]}")
        if np.max(np.abs(np.abs(entries) - 1.0)) > 1e-12:
            raise ValueError("entries: steering-vector entries must have unit modulus")
        entries.flags.writeable = False
        object.__setattr__(self, "entries", entries)

    @property
    def num_sensors(self) -> int:
        return self.entries.size


def steering_vector(geom: ArrayGeometry, theta_rad: float, freq_hz: float) -> SteeringVector:
    """Steering vector of a plane wave from direction ``theta_rad`` at ``freq_hz``.

    Entry n is exp(-i 2 pi f n d sin(theta) / c) for n = 0 .. N-1.

    Parameters
    ----------
    geom : ArrayGeometry
        Sensor layout.
    theta_rad : float
        Direction of arrival in radians from broadside, in [-pi/2, pi/2].
    freq_hz : float
        Plane-wave frequency in Hz, > 0.
    """
    entries = steering_matrix(geom, theta_rad, freq_hz)[:, 0]
    return SteeringVector(entries=entries, theta_rad=float(theta_rad), freq_hz=float(freq_hz))


def steering_matrix(geom: ArrayGeometry, theta_rad, freq_hz) -> np.ndarray:
    """Stack steering vectors column-wise over a grid of (theta, freq) points.

    ``theta_rad`` and ``freq_hz`` broadcast against each other; the result has
    one column per broadcast point and ``geom.num_sensors`` rows. Useful for
    beam-pattern grids (theta array, fixed freq) and band sweeps (fixed theta,
    freq array).
    """
    theta = np.asarray(theta_rad, dtype=float)
    freq = np.asarray(freq_hz, dtype=float)
    if np.any(freq <= 0):
        raise ValueError(f"freq_hz: must be positive, got {freq_hz!r}")
    spatial = np.atleast_1d(freq * np.sin(theta)).ravel()
    sensor_idx = np.arange(geom.num_sensors)
    rate = -2.0 * np.pi * geom.spacing_m / geom.propagation_speed_mps
    return np.exp(1j * rate * np.outer(sensor_idx, spatial))


def half_wavelength_spacing(freq_hz: float, propagation_speed_mps: float = SPEED_OF_LIGHT) -> float:
    """Half of the wavelength at ``freq_hz``, the classic ULA design spacing."""
    if not freq_hz > 0:
        raise ValueError(f"freq_hz: must be positive, got {freq_hz!r}")
    if not propagation_speed_mps > 0:
        raise ValueError(f"propagation_speed_mps: must be positive, got {propagation_speed_mps!r}")
    return propagation_speed_mps / (2.0 * freq_hz)
