"""Second-moment bookkeeping for Gaussian states produced from vacuum.

For a Bogoliubov transform a' = U a + V a^dag acting on vacuum, the
state of the output modes is zero-mean Gaussian and fully described by

    normal_ij    = <a'_i^dag a'_j> = sum_k conj(V_ik) V_jk,
    anomalous_ij = <a'_i a'_j>     = sum_k U_ik V_jk.

Photon-number statistics follow from Wick's theorem; see
docs/wick_covariance.md for the derivation of

    Cov(N_i, N_j) = |anomalous_ij|^2 + |normal_ij|^2 + delta_ij normal_ii.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .bogoliubov import DEFAULT_TOLERANCE, GaussianMap, validate

_IMAG_TOL = 1e-12


@dataclass(frozen=True)
class MomentSet:
    """Normal (<a^dag a>) and anomalous (<a a>) second moments."""

    normal: NDArray[np.complex128]
    anomalous: NDArray[np.complex128]

    def __post_init__(self) -> None:
        normal = np.array(self.normal, dtype=np.complex128)
        anomalous = np.array(self.anomalous, dtype=np.complex128)
        normal.setflags(write=False)
        anomalous.setflags(write=False)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "anomalous", anomalous)

    @property
    def n_modes(self) -> int:
        return self.normal.shape[0]


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > _IMAG_TOL:
        raise ValueError(f"{what} should be real, found imaginary residual {value.imag:.3e}")
    return float(value.real)


def _check_indices(moments: MomentSet, *modes: int) -> None:
    for mode in modes:
        if not 0 <= mode < moments.n_modes:
            raise ValueError(f"mode index {mode} out of range for {moments.n_modes} modes")


def moments_from_map(transform: GaussianMap, tolerance: float = DEFAULT_TOLERANCE) -> MomentSet:
    """Second moments of the output state when the inputs are in vacuum.

    Raises ValueError if `transform` fails its commutator invariants at
    `tolerance`; moments of an ill-formed map would be meaningless.
    """
    report = validate(transform, tolerance)
    if not report.ok:
        raise ValueError(
            "transform violates commutation invariants "
            f"(residuals {report.commutator_residual:.3e}, {report.symmetry_residual:.3e})"
        )
    v = transform.v
    normal = v.conj() @ v.T
    anomalous = transform.u @ v.T
    return MomentSet(normal, anomalous)


def number_mean(moments: MomentSet, mode: int) -> float:
    """Mean photon number <N_i> of one output mode."""
    _check_indices(moments, mode)
    return _real(complex(moments.normal[mode, mode]), "number mean")


def cross_correlation(moments: MomentSet, mode_i: int, mode_j: int) -> complex:
    """First-order coherence <a_i^dag a_j> between two output modes."""
    _check_indices(moments, mode_i, mode_j)
    return complex(moments.normal[mode_i, mode_j])


def number_covariance(moments: MomentSet, mode_i: int, mode_j: int) -> float:
    """Photon-number covariance Cov(N_i, N_j) of the output state."""
    _check_indices(moments, mode_i, mode_j)
    cov = (
        abs(moments.anomalous[mode_i, mode_j]) ** 2
        + abs(moments.normal[mode_i, mode_j]) ** 2
    )
    if mode_i == mode_j:
        cov += number_mean(moments, mode_i)
    return cov


def difference_statistics(moments: MomentSet, mode_i: int, mode_j: int) -> tuple[float, float]:
    """Mean and variance of the photon-number difference N_i - N_j."""
    _check_indices(moments, mode_i, mode_j)
    if mode_i == mode_j:
        raise ValueError("difference statistics need two distinct modes")
    mean = number_mean(moments, mode_i) - number_mean(moments, mode_j)
    var = (
        number_covariance(moments, mode_i, mode_i)
        + number_covariance(moments, mode_j, mode_j)
        - 2.0 * number_covariance(moments, mode_i, mode_j)
    )
    return mean, var


def total_photons(moments: MomentSet) -> float:
    """Total mean photon number over all output modes."""
    return _real(complex(np.trace(moments.normal)), "total photon number")
