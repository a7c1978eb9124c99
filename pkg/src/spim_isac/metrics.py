"""Mutual-information metrics for the hybrid ISAC link.

Three rate quantities are exposed: the exact log-det mutual information for
an arbitrary hybrid pair, the strongest-path variant used by a conventional
mmWave ISAC transmitter together with its large-array closed form
log2(1 + eta^2 * gamma1 / sigma^2), and the asymptotic mutual information of
the pattern-modulated system computed from the per-pattern receive
covariances. All determinants go through a Cholesky log-det so the
expressions stay finite at ten receive antennas and low noise.

The pattern-modulated closed form is an asymptotic approximation: at very low
SNR it can dip below the best single-pattern rate. Values are reported
verbatim, without clamping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .arrays import ChannelRealization, steering_vector
from .beamforming import SpatialPattern, assemble_hybrid

_LOG2 = np.log(2.0)


@dataclass(frozen=True)
class NoiseModel:
    """Receiver noise of variance sigma_n^2 per antenna; SNR is 1/sigma_n^2."""

    variance: float

    def __post_init__(self) -> None:
        if self.variance <= 0:
            raise ValueError(f"noise variance must be > 0, got {self.variance}")

    @classmethod
    def from_snr_db(cls, snr_db: float) -> "NoiseModel":
        return cls(variance=10.0 ** (-snr_db / 10.0))

    @property
    def snr_db(self) -> float:
        return 10.0 * np.log10(1.0 / self.variance)


def _logdet_hermitian(a: np.ndarray) -> float:
    """log(det(A)) for Hermitian positive definite A via Cholesky."""
    chol = np.linalg.cholesky(a)
    return 2.0 * float(np.sum(np.log(np.diag(chol).real)))


def mi_general(
    H: np.ndarray, F_RF: np.ndarray, F_BB: np.ndarray, noise: NoiseModel
) -> float:
    """log2 det(I + (1/sigma^2) H F_RF F_BB F_BB^H F_RF^H H^H) in bits.

    Non-negative for any inputs of consistent shape; zero exactly when the
    effective precoded channel H F_RF F_BB vanishes.
    """
    n_r = H.shape[0]
    if F_RF.shape[0] != H.shape[1]:
        raise ValueError(f"F_RF has {F_RF.shape[0]} rows, channel expects {H.shape[1]}")
    if F_BB.shape[0] != F_RF.shape[1]:
        raise ValueError(f"F_BB has {F_BB.shape[0]} rows, F_RF provides {F_RF.shape[1]}")
    g = H @ F_RF @ F_BB
    a = np.eye(n_r) + (g @ g.conj().T) / noise.variance
    a = (a + a.conj().T) / 2.0
    return _logdet_hermitian(a) / _LOG2


def mmwave_beamformer(
    channel: ChannelRealization, target_deg: float, eta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Strongest-path hybrid pair [a_T(Phi), a_T(dod_1)], blkdiag{1-eta, eta}."""
    tx = channel.tx
    F_RF = np.column_stack(
        [steering_vector(tx, target_deg), steering_vector(tx, channel.paths[0].dod)]
    )
    F_BB = np.diag([1.0 - eta, eta])
    return F_RF, F_BB


def mi_mmwave_numerical(
    channel: ChannelRealization, target_deg: float, eta: float, noise: NoiseModel
) -> float:
    """Exact mutual information of the strongest-path mmWave ISAC transmitter."""
    if channel.num_paths < 1:
        raise ValueError("channel needs at least one path")
    F_RF, F_BB = mmwave_beamformer(channel, target_deg, eta)
    return mi_general(channel.H, F_RF, F_BB, noise)


def mi_mmwave_closed_form(gamma1: float, eta: float, noise: NoiseModel) -> float:
    """Large-array closed form log2(1 + eta^2 * gamma1 / sigma^2) in bits."""
    if gamma1 < 0:
        raise ValueError(f"gamma1 must be >= 0, got {gamma1}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    return float(np.log1p(eta**2 * gamma1 / noise.variance) / _LOG2)


@dataclass(frozen=True)
class PatternCovariances:
    """Receive covariances Sigma_i, one per spatial pattern, Hermitian PD."""

    sigmas: tuple[np.ndarray, ...]
    noise_var: float

    def __post_init__(self) -> None:
        for i, s in enumerate(self.sigmas):
            herm = np.max(np.abs(s - s.conj().T))
            if herm > 1e-12:
                raise ValueError(f"Sigma_{i + 1} must be Hermitian, asymmetry {herm:.2e}")
            min_eig = float(np.linalg.eigvalsh(s)[0])
            if min_eig < self.noise_var * (1.0 - 1e-9):
                raise ValueError(
                    f"Sigma_{i + 1} min eigenvalue {min_eig:.3e} below noise floor "
                    f"{self.noise_var:.3e}"
                )

    def __len__(self) -> int:
        return len(self.sigmas)


def receive_covariances(
    channel: ChannelRealization,
    patterns: list[SpatialPattern],
    target_deg: float,
    eta: float,
    noise: NoiseModel,
) -> PatternCovariances:
    """Sigma_i = H F_RF^(i) F_BB F_BB^H F_RF^(i)H H^H + sigma^2 I per pattern."""
    n_r = channel.rx.num_elements
    sigmas = []
    for pattern in patterns:
        hb = assemble_hybrid(channel.tx, channel, pattern, target_deg, eta)
        g = channel.H @ hb.F_RF @ hb.F_BB
        s = g @ g.conj().T + noise.variance * np.eye(n_r)
        s = (s + s.conj().T) / 2.0
        s.flags.writeable = False
        sigmas.append(s)
    return PatternCovariances(sigmas=tuple(sigmas), noise_var=noise.variance)


def mi_spim(covs: PatternCovariances, noise: NoiseModel) -> float:
    """Asymptotic mutual information of the pattern-modulated system in bits.

    log2(K / (2 sigma^2)^N_R) - (1/K) sum_i log2(sum_j det(Sigma_i + Sigma_j)^-1),
    evaluated entirely in the log domain. With K = 1 this reduces exactly to
    the log-det rate of the single remaining beamformer.
    """
    k = len(covs)
    if k < 1:
        raise ValueError("need at least one pattern covariance")
    n_r = covs.sigmas[0].shape[0]
    logdets = np.array(
        [[_logdet_hermitian(si + sj) for sj in covs.sigmas] for si in covs.sigmas]
    )
    lead = np.log(k) - n_r * np.log(2.0 * noise.variance)
    inner = np.array([logsumexp(-logdets[i]) for i in range(k)])
    return float((lead - np.mean(inner)) / _LOG2)


def mi_sweep(
    axis: np.ndarray,
    kind: str,
    gamma1: float = 0.5,
    eta: float = 0.5,
    snr_db: float = 20.0,
    channel: ChannelRealization | None = None,
    target_deg: float = 40.0,
) -> np.ndarray:
    """Evaluate an MI metric over one swept axis, everything else fixed.

    ``kind`` selects the axis: "snr" (dB values), "gamma1", or "eta". With a
    channel the exact strongest-path rate is swept; otherwise the closed form.
    """
    axis = np.asarray(axis, dtype=float)
    if kind not in ("snr", "gamma1", "eta"):
        raise ValueError(f"unknown sweep kind {kind!r}")

    def evaluate(g1: float, e: float, s_db: float) -> float:
        noise = NoiseModel.from_snr_db(s_db)
        if channel is not None:
            return mi_mmwave_numerical(channel, target_deg, e, noise)
        return mi_mmwave_closed_form(g1, e, noise)

    if kind == "snr":
        return np.array([evaluate(gamma1, eta, s) for s in axis])
    if kind == "gamma1":
        return np.array([evaluate(g, eta, snr_db) for g in axis])
    return np.array([evaluate(gamma1, e, snr_db) for e in axis])
