"""Spatial-pattern enumeration and hybrid/digital beamformer construction.

A spatial pattern is a subset of the communication paths that the analog
network beamforms toward; the number of usable patterns is the largest power
of two not exceeding C(M, N_RF - 1). The analog beamformer stacks the radar
steering column in front of the selected path steering columns, and the
baseband stage is the block-diagonal trade-off matrix
blkdiag{(1 - eta), eta * I}.

Convention note: the radar baseband weight is taken as (1 - eta) rather than
(eta - 1); the two differ only by sign and produce identical transmit
covariances and mutual information, which depend on F_BB @ F_BB^H alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayGeometry, ChannelRealization, steering_vector

#: Tolerance for the constant-modulus and set-membership checks.
MODULUS_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class SpatialPattern:
    """Strictly increasing 1-based indices of the paths selected for data."""

    selected_paths: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.selected_paths) == 0:
            raise ValueError("pattern must select at least one path")
        if any(p < 1 for p in self.selected_paths):
            raise ValueError(f"path indices are 1-based, got {self.selected_paths}")
        if any(b <= a for a, b in zip(self.selected_paths, self.selected_paths[1:])):
            raise ValueError(f"path indices must be strictly increasing, got {self.selected_paths}")

    def __len__(self) -> int:
        return len(self.selected_paths)


def pattern_count(m_paths: int, n_rf_comm: int) -> int:
    """Number of usable spatial patterns, 2**floor(log2(C(M, n_rf_comm))).

    Exact integer arithmetic throughout. Raises ValueError unless
    1 <= n_rf_comm <= m_paths.
    """
    if m_paths < 1:
        raise ValueError(f"m_paths must be >= 1, got {m_paths}")
    if not 1 <= n_rf_comm <= m_paths:
        raise ValueError(f"n_rf_comm must be in [1, {m_paths}], got {n_rf_comm}")
    c = math.comb(m_paths, n_rf_comm)
    return 1 << (c.bit_length() - 1)


def enumerate_patterns(m_paths: int, n_rf_comm: int) -> list[SpatialPattern]:
    """First pattern_count(M, n_rf_comm) size-n_rf_comm subsets of {1..M}.

    Subsets are taken in lexicographic order over sorted index tuples, which
    keeps the strongest (lowest-index) paths in play and makes the truncation
    from C(M, n_rf_comm) down to a power of two deterministic.
    """
    k = pattern_count(m_paths, n_rf_comm)
    combos = itertools.islice(itertools.combinations(range(1, m_paths + 1), n_rf_comm), k)
    return [SpatialPattern(selected_paths=c) for c in combos]


def radar_beamformer(tx: ArrayGeometry, target_deg: float) -> np.ndarray:
    """Radar-only analog column: the transmit steering vector at the target."""
    return steering_vector(tx, target_deg)


@dataclass(frozen=True)
class HybridBeamformer:
    """Analog/baseband pair for one spatial pattern.

    ``F_RF`` is N_T x N_RF with the radar column first; every entry has
    modulus 1/sqrt(N_T). ``F_BB`` is the block-diagonal trade-off matrix.
    """

    F_RF: np.ndarray = field(repr=False)
    F_BB: np.ndarray = field(repr=False)
    pattern: SpatialPattern
    eta: float

    def __post_init__(self) -> None:
        # Off-block entries of F_BB must vanish (scalar block + identity block).
        # F_RF is deliberately not validated here so that check_constraints can
        # report on candidate beamformers that violate the modulus constraint.
        off = self.F_BB.copy()
        off[0, 0] = 0.0
        off[1:, 1:] -= np.diag(np.diag(off[1:, 1:]))
        if np.max(np.abs(off)) > 0:
            raise ValueError("F_BB must be block-diagonal")

    @property
    def n_rf(self) -> int:
        return self.F_RF.shape[1]

    @property
    def n_streams(self) -> int:
        return self.F_BB.shape[1]


def assemble_hybrid(
    tx: ArrayGeometry,
    channel: ChannelRealization,
    pattern: SpatialPattern,
    target_est_deg: float,
    eta: float,
    renormalize: bool = False,
) -> HybridBeamformer:
    """Build the hybrid pair for one spatial pattern.

    F_RF = [f_R, a_T(dod_p) for p in pattern] and
    F_BB = blkdiag{(1 - eta), eta * I}. With ``renormalize`` the baseband
    matrix is rescaled so that ||F_RF @ F_BB||_F equals the stream count;
    default off, since the unscaled form is what the closed-form mutual
    information analysis assumes.

    Raises ValueError for eta outside [0, 1] or pattern indices outside the
    channel's path range.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    if max(pattern.selected_paths) > channel.num_paths:
        raise ValueError(
            f"pattern selects path {max(pattern.selected_paths)} "
            f"but channel has {channel.num_paths} paths"
        )
    f_r = radar_beamformer(tx, target_est_deg)
    comm_cols = [steering_vector(tx, channel.paths[p - 1].dod) for p in pattern.selected_paths]
    F_RF = np.column_stack([f_r] + comm_cols)
    n_bar = len(pattern)
    F_BB = np.zeros((n_bar + 1, n_bar + 1))
    F_BB[0, 0] = 1.0 - eta
    F_BB[1:, 1:] = eta * np.eye(n_bar)
    if renormalize:
        fro = np.linalg.norm(F_RF @ F_BB)
        if fro > 0:
            F_BB = F_BB * (F_BB.shape[1] / fro)
    F_RF.flags.writeable = False
    F_BB.flags.writeable = False
    return HybridBeamformer(F_RF=F_RF, F_BB=F_BB, pattern=pattern, eta=eta)


def optimal_digital(channel: ChannelRealization, n_streams: int) -> np.ndarray:
    """Unconstrained digital beamformer: top right singular vectors of H.

    Columns are orthonormal and span the directions carrying the n_streams
    largest singular values. Raises ValueError when n_streams exceeds
    min(N_R, N_T).
    """
    n_r, n_t = channel.H.shape
    if not 1 <= n_streams <= min(n_r, n_t):
        raise ValueError(f"n_streams must be in [1, {min(n_r, n_t)}], got {n_streams}")
    _, _, vh = np.linalg.svd(channel.H)
    return vh[:n_streams].conj().T


@dataclass(frozen=True)
class JointBeamformer:
    """Trade-off combination of the digital and radar-only beamformers."""

    F_CR: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)


def joint_fcr(
    F_opt: np.ndarray, f_r: np.ndarray, eta: float, xi: np.ndarray | None = None
) -> JointBeamformer:
    """F_CR = eta * F_opt + (1 - eta) * f_R @ xi.

    ``xi`` is a unit-norm 1 x N_S row vector lifting the radar column to the
    stream dimension; defaults to the first canonical unit row. eta = 1
    returns F_opt exactly and eta = 0 returns the rank-one radar term.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    n_s = F_opt.shape[1]
    if xi is None:
        xi = np.zeros(n_s, dtype=complex)
        xi[0] = 1.0
    xi = np.asarray(xi, dtype=complex).reshape(-1)
    if xi.shape[0] != n_s:
        raise ValueError(f"xi must have length {n_s}, got {xi.shape[0]}")
    norm_sq = float(np.vdot(xi, xi).real)
    if abs(norm_sq - 1.0) > 1e-9:
        raise ValueError(f"xi must be unit norm, got ||xi||^2 = {norm_sq}")
    F_CR = eta * F_opt + (1.0 - eta) * np.outer(np.asarray(f_r), xi)
    return JointBeamformer(F_CR=F_CR, xi=xi)


@dataclass(frozen=True)
class ConstraintReport:
    """Feasibility report for a hybrid pair against the design constraint set.

    The Frobenius power deviation is informational: the closed-form trade-off
    construction does not rescale to meet it.
    """

    modulus_residual: float
    comm_columns_admissible: bool
    fro_norm: float
    fro_deviation_from_streams: float

    @property
    def constant_modulus_ok(self) -> bool:
        return self.modulus_residual < MODULUS_TOL


def check_constraints(
    hb: HybridBeamformer,
    channel: ChannelRealization,
    patterns: list[SpatialPattern],
) -> ConstraintReport:
    """Report how an arbitrary hybrid pair sits against the constraint set.

    Checks (a) the max deviation of analog entry moduli from 1/sqrt(N_T),
    (b) whether every communication column matches a steering vector of some
    enumerated pattern within 1e-9, and (c) ||F_RF @ F_BB||_F together with
    its deviation from the stream count. Nothing is enforced; values are
    reported as-is.
    """
    n_t = hb.F_RF.shape[0]
    if n_t != channel.tx.num_elements:
        raise ValueError(
            f"beamformer has {n_t} rows but the channel transmit array has "
            f"{channel.tx.num_elements} elements"
        )
    modulus_residual = float(np.max(np.abs(np.abs(hb.F_RF) - 1.0 / np.sqrt(n_t))))

    admissible_cols = [
        steering_vector(channel.tx, channel.paths[p - 1].dod)
        for pat in patterns
        for p in pat.selected_paths
    ]
    comm_ok = True
    for j in range(1, hb.F_RF.shape[1]):
        col = hb.F_RF[:, j]
        if not any(np.max(np.abs(col - cand)) < MEMBERSHIP_TOL for cand in admissible_cols):
            comm_ok = False
            break

    fro = float(np.linalg.norm(hb.F_RF @ hb.F_BB))
    return ConstraintReport(
        modulus_residual=modulus_residual,
        comm_columns_admissible=comm_ok,
        fro_norm=fro,
        fro_deviation_from_streams=float(abs(fro - hb.n_streams)),
    )
