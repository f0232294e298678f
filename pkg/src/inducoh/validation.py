"""Dual-path validation suites.

Two independent routes compute the same observables:

- closed forms vs. the Gaussian engine, on a random grid of brightnesses,
  transmittances and phases (relative tolerance, residuals measured as
  |a - b| / max(1, |b|) so phase zeros cannot inflate them);
- the truncated Fock-space oracle vs. the Gaussian engine, comparing all
  first and second moments (absolute tolerance).

The oracle suite only scores configurations whose final state the oracle
certifies (no unreliable flag, no hard leakage); uncertifiable draws are
counted as skipped and replaced by fresh draws, since their moments are
not trustworthy at the requested cutoff by the oracle's own criterion.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import fock, model

CLOSED_FORM_TOLERANCE = 1e-9
ORACLE_TOLERANCE = 1e-6
DEFAULT_SEED = 1234
DEFAULT_CUTOFF = 12
DEFAULT_R_MAX = 0.6


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one validation suite."""

    name: str
    samples: int
    worst_residual: float
    tolerance: float
    runtime: float
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.worst_residual <= self.tolerance

    def summary(self) -> str:
        skipped = f" ({self.skipped} skipped as uncertifiable)" if self.skipped else ""
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name}: {self.samples} samples{skipped}, worst residual "
            f"{self.worst_residual:.3e} (tolerance {self.tolerance:.0e}), "
            f"{self.runtime:.1f} s: {verdict}"
        )


def _relative(value: float, reference: float) -> float:
    # floor only guards against a reference of exactly zero
    return abs(value - reference) / max(abs(reference), 1e-12)


def random_setup(rng: np.random.Generator, brightness_max: float = 10.0) -> model.SetupParams:
    """One random interferometer configuration for the closed-form suite."""
    return model.SetupParams(
        va=float(rng.uniform(0.0, brightness_max)),
        vb=float(rng.uniform(0.0, brightness_max)),
        t=float(rng.uniform(0.0, 1.0)),
        theta_a=float(rng.uniform(0.0, 2.0 * math.pi)),
        theta_b=float(rng.uniform(0.0, 2.0 * math.pi)),
        idler_phase=float(rng.uniform(0.0, 2.0 * math.pi)),
    )


def closed_form_residual(params: model.SetupParams, scan_points: int = 32) -> float:
    """Worst relative deviation between engine and closed forms at one point.

    Covers both detector counts, the fringe-scan visibility, the arm
    coherence and the difference-count mean and variance.
    """
    eng = model.engine_observables(params)
    n1, n2 = model.detector_counts(params)
    diff_mean, diff_var = model.n_minus_statistics(params)
    scan = model.fringe_scan(params, model.aligned_scan(params, scan_points))
    residuals = (
        _relative(eng.n1_det, n1),
        _relative(eng.n2_det, n2),
        _relative(model.fringe_visibility(scan), model.visibility(params)),
        _relative(eng.gamma12, model.induced_coherence(params)),
        _relative(eng.n_minus_mean, diff_mean),
        _relative(eng.n_minus_var, diff_var),
    )
    return max(residuals)


def closed_form_suite(
    samples: int = 200,
    seed: int = DEFAULT_SEED,
    tolerance: float = CLOSED_FORM_TOLERANCE,
    scan_points: int = 32,
) -> SuiteResult:
    """Engine vs. closed forms over a random grid."""
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(samples):
        worst = max(worst, closed_form_residual(random_setup(rng), scan_points))
    return SuiteResult(
        "closed-form vs engine", samples, worst, tolerance, time.perf_counter() - start
    )


def oracle_residual(params: model.SetupParams, cutoff: int) -> float | None:
    """Worst absolute moment deviation, oracle vs engine, or None if the
    oracle cannot certify the state at this cutoff."""
    try:
        state = fock.simulate_network(params, cutoff)
    except fock.LeakageError:
        return None
    if state.unreliable:
        return None
    ms = model.engine_moments(params)
    n = ms.n_modes
    worst = 0.0
    for i in range(n):
        for j in range(n):
            worst = max(worst, abs(fock.cross_correlation(state, i, j) - ms.normal[i, j]))
            worst = max(worst, abs(fock.pair_correlation(state, i, j) - ms.anomalous[i, j]))
    return worst


def oracle_suite(
    samples: int = 50,
    seed: int = DEFAULT_SEED,
    cutoff: int = DEFAULT_CUTOFF,
    r_max: float = DEFAULT_R_MAX,
    tolerance: float = ORACLE_TOLERANCE,
) -> SuiteResult:
    """Fock oracle vs. Gaussian engine over random certified configurations.

    Gains are drawn uniformly from [0, r_max].  Raises LeakageError when
    the cutoff is so small that certified configurations are too rare to
    collect, which is the actionable "increase the cutoff" case.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    if not 0.0 < r_max:
        raise ValueError(f"r_max must be > 0, got {r_max}")
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    worst = 0.0
    certified = 0
    skipped = 0
    max_draws = 20 * samples
    for _ in range(max_draws):
        ra, rb = rng.uniform(0.0, r_max, size=2)
        params = model.SetupParams(
            va=float(math.sinh(ra) ** 2),
            vb=float(math.sinh(rb) ** 2),
            t=float(rng.uniform(0.0, 1.0)),
            theta_a=float(rng.uniform(0.0, 2.0 * math.pi)),
            theta_b=float(rng.uniform(0.0, 2.0 * math.pi)),
            idler_phase=float(rng.uniform(0.0, 2.0 * math.pi)),
        )
        residual = oracle_residual(params, cutoff)
        if residual is None:
            skipped += 1
            continue
        worst = max(worst, residual)
        certified += 1
        if certified >= samples:
            break
    if certified < samples:
        raise fock.LeakageError(
            f"only {certified} of the requested {samples} configurations could be "
            f"certified after {max_draws} draws at cutoff {cutoff} (r_max {r_max}); "
            f"increase the cutoff"
        )
    return SuiteResult(
        "oracle vs engine", certified, worst, tolerance, time.perf_counter() - start, skipped
    )


def run_suites(
    samples: int = 50,
    seed: int = DEFAULT_SEED,
    cutoff: int = DEFAULT_CUTOFF,
    r_max: float = DEFAULT_R_MAX,
    closed_form_samples: int = 200,
) -> list[SuiteResult]:
    """Both suites, in the order they are reported by the CLI."""
    return [
        closed_form_suite(closed_form_samples, seed),
        oracle_suite(samples, seed, cutoff, r_max),
    ]
