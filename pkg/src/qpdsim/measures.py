"""Quantum-information functionals: entropy, coherence, entanglement, averages.

All entropic quantities use log base 2. Every functional accepts either a
single matrix (d, d) or a stacked batch (..., d, d) and returns a float or an
array of matching batch shape.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable

import numpy as np

from .errors import DimensionMismatchError, EmptyTrajectoryError
from .linalg import hermitian_eigenvalues, partial_trace
from .dynamics import Trajectory

_SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y).real  # real +-1 antidiagonal

_trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy < 2.0 fallback


def _entropy_from_probs(w: np.ndarray) -> np.ndarray:
    # 0 log 0 := 0; eigenvalues that dip within tolerance below zero are
    # clamped before the log.
    w = np.clip(np.asarray(w).real, 0.0, None)
    safe = np.where(w > 0.0, w, 1.0)
    return -np.sum(w * np.log2(safe), axis=-1)


def _scalar_or_array(x: np.ndarray, was_single: bool):
    return float(x) if was_single else x


def von_neumann_entropy(rho: np.ndarray):
    """S = -tr(rho log2 rho), in bits."""
    rho = np.asarray(rho)
    s = _entropy_from_probs(hermitian_eigenvalues(rho))
    return _scalar_or_array(s, rho.ndim == 2)


def l1_coherence(rho: np.ndarray):
    """Sum of the moduli of all off-diagonal entries."""
    rho = np.asarray(rho)
    total = np.sum(np.abs(rho), axis=(-2, -1))
    diag = np.sum(np.abs(np.diagonal(rho, axis1=-2, axis2=-1)), axis=-1)
    return _scalar_or_array(total - diag, rho.ndim == 2)


def relative_entropy_coherence(rho: np.ndarray):
    """Entropy gained by dephasing: S(diag(rho)) - S(rho), in bits."""
    rho = np.asarray(rho)
    diag = np.diagonal(rho, axis1=-2, axis2=-1).real
    c = _entropy_from_probs(diag) - _entropy_from_probs(hermitian_eigenvalues(rho))
    return _scalar_or_array(c, rho.ndim == 2)


def concurrence(rho: np.ndarray):
    """Two-qubit concurrence from the spin-flipped state.

    The square-rooted eigenvalues of rho rho_tilde are obtained as singular
    values of sqrt(w) (V^dag Y V^*) sqrt(w) built from the eigensystem
    (w, V) of rho; the square-root weights enter multiplicatively, so the
    values stay accurate even for (near-)pure inputs.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (4, 4):
        raise DimensionMismatchError(f"concurrence needs 4x4 states, got {rho.shape[-2:]}")
    w, v = np.linalg.eigh(rho)
    root_w = np.sqrt(np.clip(w, 0.0, None))
    congruent_flip = v.conj().swapaxes(-1, -2) @ _SPIN_FLIP @ v.conj()
    n = root_w[..., :, None] * congruent_flip * root_w[..., None, :]
    s = np.linalg.svd(n, compute_uv=False)  # descending
    c = np.clip(2.0 * s[..., 0] - np.sum(s, axis=-1), 0.0, None)
    return _scalar_or_array(c, rho.ndim == 2)


def entanglement_of_formation(rho: np.ndarray):
    """Two-qubit entanglement of formation via the concurrence closed form.

    Agrees with the reduced-state entropy on pure states and vanishes on
    product states.
    """
    rho = np.asarray(rho)
    c = np.asarray(concurrence(rho))
    x = 0.5 * (1.0 + np.sqrt(1.0 - np.clip(c, 0.0, 1.0) ** 2))
    ef = _entropy_from_probs(np.stack([x, 1.0 - x], axis=-1))
    return _scalar_or_array(ef, rho.ndim == 2)


def mutual_information(rho: np.ndarray):
    """I(A:B) = S(A) + S(B) - S(AB) for a 4x4 joint state, in bits."""
    rho = np.asarray(rho)
    s_a = _entropy_from_probs(hermitian_eigenvalues(partial_trace(rho, "A", (2, 2))))
    s_b = _entropy_from_probs(hermitian_eigenvalues(partial_trace(rho, "B", (2, 2))))
    s_ab = _entropy_from_probs(hermitian_eigenvalues(rho))
    return _scalar_or_array(s_a + s_b - s_ab, rho.ndim == 2)


def trapezoid_mean(values: np.ndarray, times: np.ndarray) -> float:
    """Composite-trapezoid time average (1/T) integral of f dt over [0, T]."""
    times = np.asarray(times, dtype=float)
    if len(times) < 2:
        raise EmptyTrajectoryError("need at least two samples to average")
    span = times[-1] - times[0]
    return float(_trapezoid(np.asarray(values, dtype=float), times, axis=0) / span)


def time_average(traj: Trajectory, f: Callable[[np.ndarray], float]) -> float:
    """Trapezoid mean of a per-state functional along a uniform trajectory."""
    if len(traj) == 0:
        raise EmptyTrajectoryError("trajectory holds no samples")
    steps = np.diff(traj.times)
    if len(steps) == 0:
        raise EmptyTrajectoryError("need at least two samples to average")
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise ValueError("time grid must be uniform")
    values = np.array([float(f(s)) for s in traj.states])
    return trapezoid_mean(values, traj.times)


@dataclass(frozen=True)
class MeasureRecord:
    """Scalar information measures of one 4x4 state (or time-averaged)."""

    S_B: float
    S_A: float
    S_AB: float
    I_AB: float
    Cl1_B: float
    Cl1_A: float
    Cl1_AB: float
    CRE_AB: float
    EF_AB: float


@dataclass(frozen=True)
class MeasureSeries:
    """The same measures sampled along a trajectory, one array per field."""

    S_B: np.ndarray
    S_A: np.ndarray
    S_AB: np.ndarray
    I_AB: np.ndarray
    Cl1_B: np.ndarray
    Cl1_A: np.ndarray
    Cl1_AB: np.ndarray
    CRE_AB: np.ndarray
    EF_AB: np.ndarray


MEASURE_FIELDS = tuple(f.name for f in fields(MeasureRecord))


def measure_series(states: np.ndarray) -> MeasureSeries:
    """All measures along stacked states (N, 4, 4), fully vectorized."""
    states = np.asarray(states, dtype=complex)
    rho_b = partial_trace(states, "B", (2, 2))
    rho_a = partial_trace(states, "A", (2, 2))
    s_ab = _entropy_from_probs(hermitian_eigenvalues(states))
    s_b = _entropy_from_probs(hermitian_eigenvalues(rho_b))
    s_a = _entropy_from_probs(hermitian_eigenvalues(rho_a))
    return MeasureSeries(
        S_B=s_b,
        S_A=s_a,
        S_AB=s_ab,
        I_AB=s_a + s_b - s_ab,
        Cl1_B=np.asarray(l1_coherence(rho_b)),
        Cl1_A=np.asarray(l1_coherence(rho_a)),
        Cl1_AB=np.asarray(l1_coherence(states)),
        CRE_AB=_entropy_from_probs(np.diagonal(states, axis1=-2, axis2=-1).real) - s_ab,
        EF_AB=np.asarray(entanglement_of_formation(states)),
    )


def measure_state(rho: np.ndarray) -> MeasureRecord:
    """All measures of a single 4x4 state."""
    series = measure_series(np.asarray(rho, dtype=complex)[None, :, :])
    return MeasureRecord(**{name: float(getattr(series, name)[0]) for name in MEASURE_FIELDS})


def average_measures(series: MeasureSeries, times: np.ndarray) -> MeasureRecord:
    """Trapezoid time average of every measure in a series."""
    return MeasureRecord(
        **{name: trapezoid_mean(getattr(series, name), times) for name in MEASURE_FIELDS}
    )
