"""Radar search phase: probing echoes, sample covariance, MUSIC, and beampatterns.

The probing model applies the rank-one target reflector a(Phi) a(Phi)^T to a
random probe vector per snapshot, so each noise-free snapshot is a scalar
multiple of the target steering vector. The transpose form is used verbatim;
set ``conjugate=True`` for the a(Phi) a(Phi)^H variant (the two have identical
second-order statistics on a ULA).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayGeometry, steering_vector, validate_angle_deg
from .beamforming import HybridBeamformer

#: Default MUSIC / beampattern grid: [-90, 90] degrees in 0.1-degree steps.
GRID_STEP_DEG = 0.1


def default_grid() -> np.ndarray:
    """Angle grid from -90 to 90 degrees inclusive with 0.1-degree spacing."""
    return np.linspace(-90.0, 90.0, 1801)


@dataclass(frozen=True)
class ProbingSnapshots:
    """Array outputs collected while probing for the target."""

    samples: np.ndarray = field(repr=False)  # N_T x T_R, column t is one snapshot
    true_target_deg: float
    noise_var: float

    def __post_init__(self) -> None:
        if self.samples.ndim != 2 or self.samples.shape[1] < 1:
            raise ValueError("samples must be an N_T x T_R matrix with T_R >= 1")

    @property
    def num_snapshots(self) -> int:
        return self.samples.shape[1]


def simulate_probing(
    tx: ArrayGeometry,
    target_deg: float,
    t_r: int,
    noise_var: float,
    seed: int,
    conjugate: bool = False,
) -> ProbingSnapshots:
    """Simulate T_R probing snapshots from a single target.

    Each snapshot is ``a(Phi) a(Phi)^T r(t) + n(t)`` with r(t) a standard
    circular complex Gaussian probe vector and n(t) circular complex Gaussian
    noise of variance ``noise_var`` per entry. Deterministic given ``seed``.
    """
    if t_r < 1:
        raise ValueError(f"t_r must be >= 1, got {t_r}")
    if noise_var < 0:
        raise ValueError(f"noise_var must be >= 0, got {noise_var}")
    validate_angle_deg(target_deg)
    n_t = tx.num_elements
    rng = np.random.default_rng(seed)
    a = steering_vector(tx, target_deg)
    reflector = np.outer(a, a.conj() if conjugate else a)
    probes = (rng.standard_normal((n_t, t_r)) + 1j * rng.standard_normal((n_t, t_r))) / np.sqrt(2)
    noise = np.sqrt(noise_var / 2.0) * (
        rng.standard_normal((n_t, t_r)) + 1j * rng.standard_normal((n_t, t_r))
    )
    samples = reflector @ probes + noise
    samples.flags.writeable = False
    return ProbingSnapshots(samples=samples, true_target_deg=target_deg, noise_var=noise_var)


@dataclass(frozen=True)
class CovarianceEstimate:
    """Hermitian positive semidefinite covariance matrix."""

    R: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        herm = np.max(np.abs(self.R - self.R.conj().T))
        if herm > 1e-12:
            raise ValueError(f"covariance must be Hermitian, asymmetry {herm:.2e}")
        min_eig = float(np.linalg.eigvalsh(self.R)[0])
        if min_eig < -1e-9:
            raise ValueError(f"covariance must be PSD, min eigenvalue {min_eig:.2e}")


def sample_covariance(snaps: ProbingSnapshots) -> CovarianceEstimate:
    """R = (1/T_R) sum_t y(t) y(t)^H, Hermitian PSD by construction."""
    y = snaps.samples
    r = (y @ y.conj().T) / snaps.num_snapshots
    r = (r + r.conj().T) / 2.0  # kill roundoff asymmetry
    r.flags.writeable = False
    return CovarianceEstimate(R=r)


def music_spectrum(
    cov: CovarianceEstimate,
    geometry: ArrayGeometry,
    num_sources: int,
    grid_deg: np.ndarray,
) -> np.ndarray:
    """MUSIC pseudo-spectrum 1 / ||E_n^H a(theta)||^2 over the angle grid.

    ``E_n`` spans the eigenvectors of the N - num_sources smallest
    eigenvalues of the covariance. Returns one spectrum value per grid angle.

    Raises ValueError when num_sources is not in [1, N - 1] or the grid is
    empty.
    """
    n = geometry.num_elements
    if not 1 <= num_sources < n:
        raise ValueError(f"num_sources must be in [1, {n - 1}], got {num_sources}")
    grid_deg = np.asarray(grid_deg, dtype=float)
    if grid_deg.size == 0:
        raise ValueError("grid must be non-empty")
    _, vecs = np.linalg.eigh(cov.R)  # ascending eigenvalues
    noise_basis = vecs[:, : n - num_sources]
    steerers = np.column_stack([steering_vector(geometry, g) for g in grid_deg])
    denom = np.sum(np.abs(noise_basis.conj().T @ steerers) ** 2, axis=0)
    return 1.0 / denom


def estimate_doa(
    cov: CovarianceEstimate,
    geometry: ArrayGeometry,
    num_sources: int = 1,
    grid_deg: np.ndarray | None = None,
) -> float:
    """Angle of the MUSIC spectrum peak (single-source search)."""
    if grid_deg is None:
        grid_deg = default_grid()
    spectrum = music_spectrum(cov, geometry, num_sources, grid_deg)
    return float(np.asarray(grid_deg)[int(np.argmax(spectrum))])


def transmit_covariance(hb: HybridBeamformer) -> np.ndarray:
    """Covariance of the transmit signal, R_x = F_RF F_BB F_BB^H F_RF^H."""
    g = hb.F_RF @ hb.F_BB
    r = g @ g.conj().T
    return (r + r.conj().T) / 2.0


def beampattern(
    hb: HybridBeamformer, geometry: ArrayGeometry, grid_deg: np.ndarray | None = None
) -> np.ndarray:
    """Radiated power a(theta)^H R_x a(theta) at each grid angle.

    Values are real and non-negative up to roundoff; the real part of the
    quadratic form is returned.
    """
    if grid_deg is None:
        grid_deg = default_grid()
    r_x = transmit_covariance(hb)
    steerers = np.column_stack([steering_vector(geometry, g) for g in np.asarray(grid_deg)])
    values = np.einsum("ij,ik,kj->j", steerers.conj(), r_x, steerers)
    return values.real


def beampattern_db(values: np.ndarray, floor_db: float = -60.0) -> np.ndarray:
    """Normalize a beampattern to a 0 dB peak and clip at ``floor_db``.

    Used for CSV output and plotting; the linear values feed the analysis.
    """
    values = np.asarray(values, dtype=float)
    peak = np.max(values)
    if peak <= 0:
        return np.full_like(values, floor_db)
    db = 10.0 * np.log10(np.maximum(values / peak, 10.0 ** (floor_db / 10.0)))
    return np.maximum(db, floor_db)
