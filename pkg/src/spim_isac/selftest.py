"""Self-contained property suite, runnable without producing any figures.

Each check exercises one structural guarantee of the library against an
independent computation (brute-force determinant, exact combinatorics,
repeated seeded runs). The CLI exposes the suite as the ``selftest``
subcommand; every check prints one PASS/FAIL line.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .arrays import ArrayGeometry, PathParams, build_channel, coherence, steering_vector
from .beamforming import (
    assemble_hybrid,
    enumerate_patterns,
    joint_fcr,
    optimal_digital,
    pattern_count,
)
from .experiments import ScenarioConfig, mi_vs_snr
from .metrics import NoiseModel, mi_general, mi_spim, receive_covariances
from .radar import sample_covariance, simulate_probing


def check_steering_norm() -> bool:
    """Unit norm of 200 random steering vectors within 1e-12."""
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 257))
        a = steering_vector(ArrayGeometry(n), float(rng.uniform(-90, 90)))
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            return False
    return True


def check_coherence_decay() -> bool:
    """Coherence at N=1024 below coherence at N=16 for 100 separated angle pairs."""
    rng = np.random.default_rng(2025)
    done = 0
    while done < 100:
        a1, a2 = rng.uniform(-90, 90, 2)
        if abs(math.sin(math.radians(a1)) - math.sin(math.radians(a2))) <= 0.05:
            continue
        done += 1
        if coherence(ArrayGeometry(1024), a1, a2) >= coherence(ArrayGeometry(16), a1, a2):
            return False
    return True


def check_covariances_psd() -> bool:
    """Sample and receive covariances stay Hermitian PSD across random runs."""
    for seed in range(5):
        snaps = simulate_probing(ArrayGeometry(32), 10.0 * seed - 20.0, 50, 0.1, seed=seed)
        cov = sample_covariance(snaps).R  # constructor validates Hermitian PSD
        if np.max(np.abs(cov - cov.conj().T)) > 1e-12:
            return False
        rng = np.random.default_rng(seed)
        paths = [
            PathParams(gain=g, dod=float(rng.uniform(-90, 90)), doa=float(rng.uniform(-90, 90)))
            for g in (0.6, 0.4)
        ]
        channel = build_channel(ArrayGeometry(32), ArrayGeometry(8), paths)
        receive_covariances(
            channel, enumerate_patterns(2, 1), 40.0, 0.5, NoiseModel(0.01)
        )  # constructor validates positive definiteness
    return True


def check_determinant_lemma() -> bool:
    """det(I + a a^H) = 1 + a^H a for 200 random complex vectors, |delta| < 1e-10."""
    rng = np.random.default_rng(2026)
    for _ in range(200):
        n = int(rng.integers(1, 17))
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lhs = np.linalg.det(np.eye(n) + np.outer(a, a.conj()))
        rhs = 1.0 + float(np.vdot(a, a).real)
        if abs(lhs - rhs) > 1e-10 * max(1.0, abs(rhs)):
            return False
    return True


def check_spim_k1_identity() -> bool:
    """Single-pattern SPIM rate equals the log-det rate within 1e-9 bits."""
    rng = np.random.default_rng(2027)
    for _ in range(20):
        paths = [
            PathParams(gain=float(g), dod=float(rng.uniform(-90, 90)), doa=float(rng.uniform(-90, 90)))
            for g in sorted(rng.uniform(0.1, 1.0, 1), reverse=True)
        ]
        channel = build_channel(ArrayGeometry(16), ArrayGeometry(4), paths)
        noise = NoiseModel(float(rng.uniform(0.005, 1.0)))
        patterns = enumerate_patterns(1, 1)
        covs = receive_covariances(channel, patterns, 40.0, 0.5, noise)
        hb = assemble_hybrid(channel.tx, channel, patterns[0], 40.0, 0.5)
        direct = mi_general(channel.H, hb.F_RF, hb.F_BB, noise)
        if abs(mi_spim(covs, noise) - direct) > 1e-9:
            return False
    return True


def check_pattern_count_combinatorics() -> bool:
    """Pattern count is the top power of two under C(M, n) for all M <= 12."""
    for m in range(1, 13):
        for n in range(1, m + 1):
            k = pattern_count(m, n)
            c = math.comb(m, n)
            if k & (k - 1) or not k <= c < 2 * k:
                return False
            if len(enumerate_patterns(m, n)) != k:
                return False
    return True


def check_fcr_endpoints() -> bool:
    """Joint beamformer reduces exactly to each endpoint at eta 1 and 0."""
    rng = np.random.default_rng(2028)
    paths = [PathParams(gain=1.0, dod=20.0, doa=-10.0), PathParams(gain=0.5, dod=-45.0, doa=60.0)]
    channel = build_channel(ArrayGeometry(16), ArrayGeometry(4), paths)
    f_opt = optimal_digital(channel, 2)
    f_r = steering_vector(ArrayGeometry(16), 40.0)
    xi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    xi = xi / np.linalg.norm(xi)
    comm_only = joint_fcr(f_opt, f_r, 1.0, xi).F_CR
    radar_only = joint_fcr(f_opt, f_r, 0.0, xi).F_CR
    return np.array_equal(comm_only, f_opt) and np.array_equal(radar_only, np.outer(f_r, xi))


def check_bit_reproducibility() -> bool:
    """Identical sweep bits for repeated runs and for 1 vs 4 worker threads."""
    cfg = ScenarioConfig(trials=5, snr_grid_db=(0.0, 10.0, 20.0), seed=11)
    a = mi_vs_snr(cfg, workers=1)
    b = mi_vs_snr(cfg, workers=4)
    c = mi_vs_snr(cfg, workers=1)
    return all(
        np.array_equal(getattr(a, name), getattr(b, name))
        and np.array_equal(getattr(a, name), getattr(c, name))
        for name in ("mi_spim", "mi_mmwave_num", "mi_mmwave_cf", "stderr_spim", "stderr_mmwave_num")
    )


CHECKS: tuple[tuple[str, Callable[[], bool]], ...] = (
    ("steering-norm", check_steering_norm),
    ("coherence-decay", check_coherence_decay),
    ("covariances-hermitian-psd", check_covariances_psd),
    ("determinant-lemma", check_determinant_lemma),
    ("spim-k1-identity", check_spim_k1_identity),
    ("pattern-count-combinatorics", check_pattern_count_combinatorics),
    ("fcr-endpoints", check_fcr_endpoints),
    ("bit-reproducibility", check_bit_reproducibility),
)


def run_selftest(quiet: bool = False) -> bool:
    """Run every property check; print one line per check unless quiet."""
    all_ok = True
    for name, fn in CHECKS:
        ok = fn()
        all_ok &= ok
        if not quiet:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return all_ok
