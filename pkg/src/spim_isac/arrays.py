"""Uniform linear array geometry, steering vectors, and geometric channel synthesis.

All angles at public boundaries are in degrees on [-90, 90]; radians appear
only inside the trigonometric evaluation. Arrays use half-wavelength element
spacing, so the phase of element n (1-based) toward angle theta is
-pi*(n-1)*sin(theta) and every steering vector is scaled to unit norm.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ArrayGeometry:
    """Half-wavelength ULA described by its element count."""

    num_elements: int

    def __post_init__(self) -> None:
        if self.num_elements < 1:
            raise ValueError(f"num_elements must be >= 1, got {self.num_elements}")


def validate_angle_deg(angle_deg: float) -> float:
    """Check an azimuth angle lies in [-90, 90] degrees and return it."""
    if not -90.0 <= angle_deg <= 90.0:
        raise ValueError(f"angle must be in [-90, 90] degrees, got {angle_deg}")
    return float(angle_deg)


@dataclass(frozen=True)
class PathParams:
    """One scattering path: power gain plus departure/arrival angles (degrees)."""

    gain: float
    dod: float
    doa: float

    def __post_init__(self) -> None:
        if self.gain < 0:
            raise ValueError(f"path gain must be non-negative, got {self.gain}")
        validate_angle_deg(self.dod)
        validate_angle_deg(self.doa)


def steering_vector(geometry: ArrayGeometry, angle_deg: float) -> np.ndarray:
    """Unit-norm ULA steering vector toward ``angle_deg``.

    Entry n (1-based) is (1/sqrt(N)) * exp(-j*pi*(n-1)*sin(angle)).

    Parameters
    ----------
    geometry : ArrayGeometry
        Array with N elements.
    angle_deg : float
        Azimuth angle in degrees, in [-90, 90].

    Returns
    -------
    np.ndarray
        Complex vector of length N with unit Euclidean norm.
    """
    validate_angle_deg(angle_deg)
    n = geometry.num_elements
    phase = -np.pi * np.arange(n) * np.sin(np.deg2rad(angle_deg))
    return np.exp(1j * phase) / np.sqrt(n)


def coherence(geometry: ArrayGeometry, angle1_deg: float, angle2_deg: float) -> float:
    """Magnitude of the inner product between two steering vectors.

    Equals 1 exactly when the angles coincide and decays toward 0 for
    distinct angles as the element count grows.
    """
    if angle1_deg == angle2_deg:
        validate_angle_deg(angle1_deg)
        return 1.0
    a1 = steering_vector(geometry, angle1_deg)
    a2 = steering_vector(geometry, angle2_deg)
    return float(np.abs(np.vdot(a1, a2)))


@dataclass(frozen=True)
class ChannelRealization:
    """Narrowband geometric channel between a transmit and a receive ULA.

    Paths are sorted by strictly decreasing gain (ties keep input order).
    ``P`` and ``Q`` hold the receive/transmit steering vectors of the sorted
    paths as columns, ``Lambda`` is the diagonal matrix of sqrt-gains, and
    ``H = P @ Lambda @ Q^H``.
    """

    tx: ArrayGeometry
    rx: ArrayGeometry
    paths: tuple[PathParams, ...]
    P: np.ndarray = field(repr=False)
    Lambda: np.ndarray = field(repr=False)
    Q: np.ndarray = field(repr=False)
    H: np.ndarray = field(repr=False)

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    @property
    def gains(self) -> np.ndarray:
        return np.array([p.gain for p in self.paths])

    @property
    def dods(self) -> np.ndarray:
        return np.array([p.dod for p in self.paths])

    @property
    def doas(self) -> np.ndarray:
        return np.array([p.doa for p in self.paths])


def build_channel(
    tx: ArrayGeometry, rx: ArrayGeometry, paths: list[PathParams] | tuple[PathParams, ...]
) -> ChannelRealization:
    """Assemble the geometric channel H = sum_m sqrt(gain_m) a_R(doa_m) a_T(dod_m)^H.

    Paths are sorted by decreasing gain with a stable tie-break on the input
    order. Raises ValueError for an empty path list.
    """
    if len(paths) == 0:
        raise ValueError("channel needs at least one path")
    ordered = tuple(sorted(paths, key=lambda p: -p.gain))
    P = np.column_stack([steering_vector(rx, p.doa) for p in ordered])
    Q = np.column_stack([steering_vector(tx, p.dod) for p in ordered])
    Lambda = np.diag([np.sqrt(p.gain) for p in ordered])
    H = P @ Lambda @ Q.conj().T
    for arr in (P, Q, Lambda, H):
        arr.flags.writeable = False
    return ChannelRealization(tx=tx, rx=rx, paths=ordered, P=P, Lambda=Lambda, Q=Q, H=H)
