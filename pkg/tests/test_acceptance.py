"""Acceptance suite: one test per headline criterion, each printing PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report lines. The Monte-Carlo sweeps use the default scenario (128 transmit
and 10 receive antennas, two paths, target at 40 degrees, 500 trials).

Known red: the gain-crossover criterion asserts the sign flip of
(mi_spim - mi_mmwave) between gamma1 = 0.75 and 0.85 with the crossover at
0.80 +/- 0.05. Under this scenario (SNR 20 dB, eta = 0.5) the measured
crossover sits near 0.70 for every seed tried, so the test fails honestly;
the one-directional claim that the modulated system wins only when
gamma1 < 4 * gamma2 does hold and is covered by test_crossover_necessary_
condition.
"""

import time

import numpy as np
import pytest

from spim_isac.arrays import ArrayGeometry
from spim_isac.experiments import ScenarioConfig, beampattern_sweep, mi_vs_gain, mi_vs_snr
from spim_isac.radar import default_grid, estimate_doa, sample_covariance, simulate_probing
from spim_isac.selftest import CHECKS

TRIALS = 500
SEED = 1


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def snr_sweep():
    cfg = ScenarioConfig(trials=TRIALS, seed=SEED)
    start = time.perf_counter()
    result = mi_vs_snr(cfg)
    return result, time.perf_counter() - start


@pytest.fixture(scope="module")
def gain_sweep():
    cfg = ScenarioConfig(trials=TRIALS, seed=SEED)
    return mi_vs_gain(cfg, snr_db=20.0)


def test_closed_form_match(snr_sweep):
    """Simulated strongest-path MI tracks the closed form within 0.1 bits."""
    result, runtime = snr_sweep
    gaps = np.abs(result.mi_mmwave_num - result.mi_mmwave_cf)
    ok = bool(np.all(gaps < 0.1)) and runtime < 120.0
    _report(
        "closed-form-match",
        ok,
        f"max |numerical - closed form| = {np.max(gaps):.4f} bits over SNR "
        f"{result.axis[0]:.0f}..{result.axis[-1]:.0f} dB ({runtime:.1f} s for {TRIALS} trials)",
    )


def test_spim_superiority(snr_sweep):
    """Pattern-modulated MI beats the strongest-path MI at every SNR point."""
    result, _ = snr_sweep
    diffs = result.mi_spim - result.mi_mmwave_num
    gap_20db = diffs[int(np.argwhere(result.axis == 20.0)[0, 0])]
    ok = bool(np.all(diffs > 0)) and gap_20db >= 0.5
    _report(
        "spim-superiority",
        ok,
        f"min gap {np.min(diffs):.4f} bits, gap at 20 dB {gap_20db:.4f} bits (need > 0 and >= 0.5)",
    )


def test_crossover_location(gain_sweep):
    """Sign of (mi_spim - mi_mmwave) flips between 0.75 and 0.85, crossing at 0.80 +/- 0.05."""
    result = gain_sweep
    diffs = result.mi_spim - result.mi_mmwave_num
    at = dict(zip(np.round(result.axis, 2), diffs))
    crossover = float("nan")
    for i in range(len(diffs) - 1):
        if diffs[i] > 0 >= diffs[i + 1]:
            x0, x1 = result.axis[i], result.axis[i + 1]
            crossover = x0 + (x1 - x0) * diffs[i] / (diffs[i] - diffs[i + 1])
            break
    ok = at[0.75] > 0 > at[0.85] and 0.75 <= crossover <= 0.85
    _report(
        "gain-crossover",
        ok,
        f"diff at 0.75 = {at[0.75]:+.4f}, at 0.85 = {at[0.85]:+.4f}, "
        f"interpolated crossover = {crossover:.4f} (need sign flip in [0.75, 0.85])",
    )


def test_crossover_necessary_condition(gain_sweep):
    """Whenever gamma1 > 4 * gamma2 the modulated system is strictly worse."""
    result = gain_sweep
    diffs = result.mi_spim - result.mi_mmwave_num
    beyond = result.axis > 0.8
    ok = bool(np.all(diffs[beyond] < 0))
    _report(
        "gain-crossover-necessary-condition",
        ok,
        f"max diff for gamma1 > 0.8 is {np.max(diffs[beyond]):+.4f} bits (need < 0)",
    )


def test_beampattern_tradeoff():
    """Power pivots from the target to the selected path as eta goes 0 to 1."""
    panels = beampattern_sweep()
    etas = panels[0].etas
    assert etas == (0.0, 0.3, 0.5, 0.8, 1.0)
    ok = True
    details = []
    for panel in panels:
        grid = panel.angles_deg
        target_col = int(np.argmin(np.abs(grid - 40.0)))
        path_col = int(np.argmin(np.abs(grid - panel.path_deg)))
        at_target = panel.curves[:, target_col]
        at_path = panel.curves[:, path_col]
        decreasing = bool(np.all(np.diff(at_target) < 0))
        increasing = bool(np.all(np.diff(at_path) > 0))
        peak_radar = abs(grid[int(np.argmax(panel.curves[0]))] - 40.0) < 1e-9
        peak_comm = abs(grid[int(np.argmax(panel.curves[-1]))] - panel.path_deg) < 1e-9
        ok &= decreasing and increasing and peak_radar and peak_comm
        details.append(
            f"path {panel.path_deg:.0f}: target-lobe monotone down {decreasing}, "
            f"path-lobe monotone up {increasing}, eta=0 peak at 40 {peak_radar}, "
            f"eta=1 peak at path {peak_comm}"
        )
    _report("beampattern-tradeoff", ok, "; ".join(details))


def test_music_accuracy():
    """100 seeded probing runs at 10 dB land within 0.1 degrees at least 95 times."""
    tx = ArrayGeometry(128)
    grid = default_grid()
    hits = 0
    for seed in range(100):
        snaps = simulate_probing(tx, 40.0, t_r=100, noise_var=0.1, seed=seed)
        est = estimate_doa(sample_covariance(snaps), tx, 1, grid)
        hits += abs(est - 40.0) <= 0.1 + 1e-12
    noiseless = simulate_probing(tx, 40.0, t_r=10, noise_var=0.0, seed=0)
    exact = estimate_doa(sample_covariance(noiseless), tx, 1, grid)
    on_grid = abs(exact - 40.0) < 1e-9
    ok = hits >= 95 and on_grid
    _report(
        "music-accuracy",
        ok,
        f"{hits}/100 runs within 0.1 deg (need >= 95), noiseless estimate {exact} deg",
    )


def test_property_suite():
    """Structural property checks, no figures involved."""
    failures = [name for name, fn in CHECKS if not fn()]
    _report(
        "property-suite",
        not failures,
        f"{len(CHECKS) - len(failures)}/{len(CHECKS)} checks passed"
        + (f", failing: {', '.join(failures)}" if failures else ""),
    )
