"""Truncated Fock-space oracle for the interferometer.

Everything here works directly on a state vector over occupation-number
states with a per-mode cutoff, using ladder-operator matrix elements
(a |n> = sqrt(n) |n-1>).  None of the Bogoliubov/Gaussian machinery is
reused, so agreement between the two is a genuine cross-check.

Squeezers are applied as exp(xi a^dag b^dag - conj(xi) a b) through a
truncated series, split into substeps of |xi| <= 0.1 to keep each
series short; beam splitters and phase shifts conserve photon number
and are applied the same way without any norm loss.  Truncation error
shows up as population near the cutoff, which `leakage_report` exposes
and `observables_from_state` refuses to ignore.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .model import (
    AFTER_CRYSTALS,
    BALANCE_PORT,
    FILTER_PORT,
    FULL,
    IDLER,
    SIGNAL_A,
    SIGNAL_B,
    SetupParams,
)

UNRELIABLE_TOP_POPULATION = 1e-8
HARD_LEAKAGE_LIMIT = 1e-4
_MAX_STEP = 0.1
_SERIES_TOL = 1e-16
_MAX_TERMS = 120


class LeakageError(RuntimeError):
    """Raised when truncation leakage makes oracle output untrustworthy."""


@dataclass(frozen=True)
class LeakageReport:
    """Population stuck near the cutoff, per mode, plus lost norm."""

    top_two_population: NDArray[np.float64]
    norm_deficit: float

    @property
    def worst(self) -> float:
        return float(self.top_two_population.max())


@dataclass(frozen=True)
class FockState:
    """State vector on (cutoff+1)^n_modes occupation states.

    `peak_top_population` tracks the largest single-mode top-level
    population seen at any point of the state's history; once it
    exceeds UNRELIABLE_TOP_POPULATION the state is flagged unreliable.
    """

    cutoff: int
    amplitudes: NDArray[np.complex128]
    peak_top_population: float = 0.0

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim < 1 or any(size != self.cutoff + 1 for size in amps.shape):
            raise ValueError("amplitudes must have shape (cutoff+1,) * n_modes")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def unreliable(self) -> bool:
        return self.peak_top_population > UNRELIABLE_TOP_POPULATION


@dataclass(frozen=True)
class OracleObservables:
    """Counts, coherence and difference statistics of two chosen modes."""

    n_a: float
    n_b: float
    cross: complex
    gamma12: float
    diff_mean: float
    diff_var: float


def vacuum(n_modes: int, cutoff: int) -> FockState:
    if n_modes < 1:
        raise ValueError(f"need at least one mode, got {n_modes}")
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")
    amps = np.zeros((cutoff + 1,) * n_modes, dtype=np.complex128)
    amps[(0,) * n_modes] = 1.0
    return FockState(cutoff, amps)


def basis_state(n_modes: int, cutoff: int, occupations) -> FockState:
    """A single occupation-number state |n_0, ..., n_{k-1}>."""
    occ = tuple(int(n) for n in occupations)
    if len(occ) != n_modes:
        raise ValueError(f"need {n_modes} occupations, got {len(occ)}")
    if any(n < 0 or n > cutoff for n in occ):
        raise ValueError(f"occupations must lie in [0, {cutoff}], got {occ}")
    amps = np.zeros((cutoff + 1,) * n_modes, dtype=np.complex128)
    amps[occ] = 1.0
    return FockState(cutoff, amps)


def _lowered(psi: np.ndarray, axis: int) -> np.ndarray:
    """Apply the annihilation operator of one mode."""
    moved = np.moveaxis(psi, axis, 0)
    out = np.zeros_like(moved)
    d = psi.shape[axis]
    weights = np.sqrt(np.arange(1.0, d)).reshape((-1,) + (1,) * (moved.ndim - 1))
    out[:-1] = weights * moved[1:]
    return np.moveaxis(out, 0, axis)


def _raised(psi: np.ndarray, axis: int) -> np.ndarray:
    """Apply the creation operator of one mode (truncated at the cutoff)."""
    moved = np.moveaxis(psi, axis, 0)
    out = np.zeros_like(moved)
    d = psi.shape[axis]
    weights = np.sqrt(np.arange(1.0, d)).reshape((-1,) + (1,) * (moved.ndim - 1))
    out[1:] = weights * moved[:-1]
    return np.moveaxis(out, 0, axis)


def _occupation_weighted(values: np.ndarray, axis: int) -> np.ndarray:
    d = values.shape[axis]
    shape = [1] * values.ndim
    shape[axis] = d
    return values * np.arange(d).reshape(shape)


def _level_population(psi: np.ndarray, axis: int, levels: slice) -> float:
    probs = np.abs(np.moveaxis(psi, axis, 0)[levels]) ** 2
    return float(probs.sum())


def _top_population(psi: np.ndarray) -> float:
    return max(_level_population(psi, axis, slice(-1, None)) for axis in range(psi.ndim))


def _series_exp(psi: np.ndarray, generator) -> np.ndarray:
    """exp(G) psi by plain Taylor series; G must keep the series norm-bounded."""
    total = psi.copy()
    term = psi
    for order in range(1, _MAX_TERMS):
        term = generator(term) / order
        total += term
        if float(np.vdot(term, term).real) < _SERIES_TOL**2:
            return total
    raise RuntimeError("operator series did not converge; generator step too large")


def _evolve_pair(psi: np.ndarray, mode_a: int, mode_b: int, substeps: int, generator) -> np.ndarray:
    """Evolve with a two-mode generator, axes brought to the front once.

    `generator(y, ww)` receives the state reshaped to (d, d, rest) and the
    ladder weight table ww[m, n] = sqrt((m+1)(n+1)) of shape (d-1, d-1, 1).
    """
    d = psi.shape[mode_a]
    moved = np.moveaxis(psi, (mode_a, mode_b), (0, 1))
    moved_shape = moved.shape
    work = np.ascontiguousarray(moved).reshape(d, d, -1)
    root = np.sqrt(np.arange(1.0, d))
    ww = (root[:, None] * root[None, :])[:, :, None]
    for _ in range(substeps):
        work = _series_exp(work, lambda y: generator(y, ww))
    out = work.reshape(moved_shape)
    return np.moveaxis(out, (0, 1), (mode_a, mode_b))


def apply_phase(state: FockState, mode: int, phase: float) -> FockState:
    """Phase shifter exp(i phase N) on one mode; exact and leak-free."""
    _check_state_modes(state, mode)
    d = state.cutoff + 1
    shape = [1] * state.n_modes
    shape[mode] = d
    factors = np.exp(1j * phase * np.arange(d)).reshape(shape)
    return FockState(state.cutoff, state.amplitudes * factors, state.peak_top_population)


def apply_two_mode_squeezer(
    state: FockState, signal: int, idler: int, gain: float, pump_phase: float = 0.0
) -> FockState:
    """Two-mode squeezer exp(xi a^dag b^dag - conj(xi) a b), xi = gain e^{i phase}.

    Raises LeakageError when the resulting population in the top two
    levels of any mode exceeds HARD_LEAKAGE_LIMIT; the cutoff is then
    too small for this gain.
    """
    _check_state_modes(state, signal, idler)
    if gain < 0.0 or not math.isfinite(gain):
        raise ValueError(f"gain must be finite and >= 0, got {gain}")
    substeps = max(1, math.ceil(gain / _MAX_STEP))
    xi = (gain / substeps) * complex(math.cos(pump_phase), math.sin(pump_phase))

    def generator(y: np.ndarray, ww: np.ndarray) -> np.ndarray:
        # xi a^dag b^dag - conj(xi) a b on the two front axes
        out = np.zeros_like(y)
        out[1:, 1:] = xi * ww * y[:-1, :-1]
        out[:-1, :-1] -= xi.conjugate() * ww * y[1:, 1:]
        return out

    psi = _evolve_pair(state.amplitudes, signal, idler, substeps, generator)
    new_state = FockState(
        state.cutoff, psi, max(state.peak_top_population, _top_population(psi))
    )
    worst = leakage_report(new_state).worst
    if worst > HARD_LEAKAGE_LIMIT:
        raise LeakageError(
            f"top-two-level population {worst:.3e} exceeds {HARD_LEAKAGE_LIMIT:.0e} "
            f"after a squeezer of gain {gain}; increase the cutoff (currently {state.cutoff})"
        )
    return new_state


def apply_beam_splitter(state: FockState, mode_a: int, mode_b: int, transmittance: float) -> FockState:
    """Beam splitter of intensity transmittance T: a' = t a + r b, b' = t b - r a.

    Photon-number conserving, so the truncated evolution is exactly
    unitary and introduces no norm loss.
    """
    _check_state_modes(state, mode_a, mode_b)
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
    kappa = math.atan2(math.sqrt(1.0 - transmittance), math.sqrt(transmittance))
    substeps = max(1, math.ceil(kappa / _MAX_STEP))
    angle = kappa / substeps

    def generator(y: np.ndarray, ww: np.ndarray) -> np.ndarray:
        # angle (a^dag b - b^dag a) on the two front axes
        out = np.zeros_like(y)
        out[1:, :-1] = angle * ww * y[:-1, 1:]
        out[:-1, 1:] -= angle * ww * y[1:, :-1]
        return out

    psi = _evolve_pair(state.amplitudes, mode_a, mode_b, substeps, generator)
    return FockState(state.cutoff, psi, max(state.peak_top_population, _top_population(psi)))


def leakage_report(state: FockState) -> LeakageReport:
    """Per-mode population in the top two levels, plus the norm deficit."""
    psi = state.amplitudes
    top_two = np.array(
        [_level_population(psi, axis, slice(-2, None)) for axis in range(psi.ndim)]
    )
    return LeakageReport(top_two, abs(1.0 - state.norm))


def number_mean(state: FockState, mode: int) -> float:
    _check_state_modes(state, mode)
    probs = np.abs(state.amplitudes) ** 2
    return float(_occupation_weighted(probs, mode).sum())


def cross_correlation(state: FockState, mode_a: int, mode_b: int) -> complex:
    """<a_i^dag a_j> evaluated from ladder matrix elements."""
    _check_state_modes(state, mode_a)
    _check_state_modes(state, mode_b)
    return complex(np.vdot(_lowered(state.amplitudes, mode_a), _lowered(state.amplitudes, mode_b)))


def pair_correlation(state: FockState, mode_a: int, mode_b: int) -> complex:
    """<a_i a_j> evaluated from ladder matrix elements."""
    _check_state_modes(state, mode_a)
    _check_state_modes(state, mode_b)
    return complex(np.vdot(state.amplitudes, _lowered(_lowered(state.amplitudes, mode_a), mode_b)))


def number_covariance(state: FockState, mode_a: int, mode_b: int) -> float:
    """Cov(N_i, N_j) from the joint photon-number distribution."""
    _check_state_modes(state, mode_a)
    _check_state_modes(state, mode_b)
    probs = np.abs(state.amplitudes) ** 2
    joint = float(_occupation_weighted(_occupation_weighted(probs, mode_a), mode_b).sum())
    return joint - number_mean(state, mode_a) * number_mean(state, mode_b)


def difference_statistics(state: FockState, mode_a: int, mode_b: int) -> tuple[float, float]:
    """Mean and variance of N_i - N_j."""
    mean = number_mean(state, mode_a) - number_mean(state, mode_b)
    var = (
        number_covariance(state, mode_a, mode_a)
        + number_covariance(state, mode_b, mode_b)
        - 2.0 * number_covariance(state, mode_a, mode_b)
    )
    return mean, var


def observables_from_state(
    state: FockState, signal_a: int = SIGNAL_A, signal_b: int = SIGNAL_B
) -> OracleObservables:
    """Counts, coherence and difference statistics of the two signal modes.

    Refuses to report from a state flagged unreliable, since its
    expectation values can be off by more than the truncation budget.
    """
    if state.unreliable:
        raise LeakageError(
            f"state flagged unreliable: peak top-level population "
            f"{state.peak_top_population:.3e} exceeds {UNRELIABLE_TOP_POPULATION:.0e}; "
            f"increase the cutoff (currently {state.cutoff})"
        )
    n_a = number_mean(state, signal_a)
    n_b = number_mean(state, signal_b)
    cross = cross_correlation(state, signal_a, signal_b)
    denom = math.sqrt(n_a * n_b)
    gamma = abs(cross) / denom if denom > 0.0 else math.nan
    diff_mean, diff_var = difference_statistics(state, signal_a, signal_b)
    return OracleObservables(n_a, n_b, cross, gamma, diff_mean, diff_var)


def simulate_network(params: SetupParams, cutoff: int, cut: str = FULL) -> FockState:
    """Run the interferometer in truncated Fock space.

    Same element sequence and mode layout as `model.build_network`, but
    computed entirely through Fock-space unitaries.
    """
    if cut not in (AFTER_CRYSTALS, FULL):
        raise ValueError(f"unknown cut {cut!r}")
    n = 4 if params.t2 >= 1.0 else 5
    state = vacuum(n, cutoff)
    state = apply_two_mode_squeezer(state, SIGNAL_A, IDLER, params.gain_a, params.theta_a)
    state = apply_phase(state, IDLER, params.idler_phase)
    state = apply_beam_splitter(state, IDLER, FILTER_PORT, params.t)
    state = apply_two_mode_squeezer(state, SIGNAL_B, IDLER, params.gain_b, params.theta_b)
    if n == 5:
        state = apply_beam_splitter(state, SIGNAL_B, BALANCE_PORT, params.t2)
    if cut == FULL:
        state = apply_beam_splitter(state, SIGNAL_A, SIGNAL_B, 0.5)
    return state


def _check_state_modes(state: FockState, *modes: int) -> None:
    for m in modes:
        if not 0 <= m < state.n_modes:
            raise ValueError(f"mode index {m} out of range for {state.n_modes} modes")
    if len(set(modes)) != len(modes):
        raise ValueError(f"mode indices must be distinct, got {modes}")
