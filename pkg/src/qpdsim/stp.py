"""Sure-thing-principle analysis: choice probabilities, the branch-mixture
correction chi(t), its probability leak delta(t), and the per-scenario
verdict.

delta(t) is the signed gap between the uncertain-branch choice probability
and the classical mixture of the certain branches; a nonzero value anywhere
on the grid is a principle violation. Delta(t), the summed magnitudes of the
chi diagonal, bounds |delta| from above.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dynamics import Trajectory
from .errors import EmptyInputError, GridMismatchError

# Threshold separating quadrature noise (<= 1e-10 in coherence-free
# scenarios) from genuine violations (>= 1e-3 at catalog parameters).
DELTA_EPS = 1e-6

_IMAG_TOL = 1e-12


def choice_probability(rho: np.ndarray):
    """Probability of choosing defection: diagonal entries dd and cd.

    Accepts a single 4x4 state or a stacked batch (..., 4, 4).
    """
    rho = np.asarray(rho)
    p = rho[..., 0, 0].real + rho[..., 2, 2].real
    return float(p) if rho.ndim == 2 else p


def chi_series(
    traj_u: Trajectory, traj_d: Trajectory, traj_c: Trajectory, p_b: float
) -> np.ndarray:
    """chi(t) = rho_u(t) - p_B rho_d(t) - (1 - p_B) rho_c(t) on a shared grid."""
    if not (
        traj_u.times.shape == traj_d.times.shape == traj_c.times.shape
        and np.array_equal(traj_u.times, traj_d.times)
        and np.array_equal(traj_u.times, traj_c.times)
    ):
        raise GridMismatchError("branch trajectories must share one time grid")
    return traj_u.states - p_b * traj_d.states - (1.0 - p_b) * traj_c.states


def chi_at(
    traj_u: Trajectory, traj_d: Trajectory, traj_c: Trajectory, p_b: float, t_index: int
) -> np.ndarray:
    """chi at one grid index."""
    return chi_series(traj_u, traj_d, traj_c, p_b)[t_index]


def _real_diag_sum(chi: np.ndarray, indices) -> np.ndarray:
    diag = np.diagonal(chi, axis1=-2, axis2=-1)[..., indices]
    total = np.sum(diag, axis=-1)
    if np.max(np.abs(total.imag), initial=0.0) > _IMAG_TOL:
        raise ValueError("chi diagonal has a non-negligible imaginary part")
    return total.real


def stp_delta(chi: np.ndarray):
    """Signed probability leak of chi: diagonal entries dd + cd."""
    chi = np.asarray(chi)
    delta = _real_diag_sum(chi, [0, 2])
    return float(delta) if chi.ndim == 2 else delta


def stp_delta_bound(chi: np.ndarray):
    """Upper envelope for |delta|: sum of |chi_ii| over the full diagonal."""
    chi = np.asarray(chi)
    bound = np.sum(np.abs(np.diagonal(chi, axis1=-2, axis2=-1)), axis=-1)
    return float(bound) if chi.ndim == 2 else bound


@dataclass(frozen=True)
class StpRecord:
    """Per-sample probabilities and mixture deviation."""

    t: float
    p_u: float
    p_d: float
    p_c: float
    delta: float
    delta_bound: float


@dataclass(frozen=True)
class StpVerdict:
    violated: bool
    max_abs_delta: float
    onset_time: Optional[float]


def stp_records(
    traj_u: Trajectory, traj_d: Trajectory, traj_c: Trajectory, p_b: float
) -> list[StpRecord]:
    """Per-sample records for three aligned branch trajectories."""
    chi = chi_series(traj_u, traj_d, traj_c, p_b)
    delta = np.atleast_1d(stp_delta(chi))
    bound = np.atleast_1d(stp_delta_bound(chi))
    p_u = np.atleast_1d(choice_probability(traj_u.states))
    p_d = np.atleast_1d(choice_probability(traj_d.states))
    p_c = np.atleast_1d(choice_probability(traj_c.states))
    return [
        StpRecord(float(t), float(pu), float(pd), float(pc), float(dl), float(db))
        for t, pu, pd, pc, dl, db in zip(traj_u.times, p_u, p_d, p_c, delta, bound)
    ]


def stp_verdict(records: Sequence[StpRecord], eps: float = DELTA_EPS) -> StpVerdict:
    """Classify a scenario from its delta samples.

    Violated iff max |delta| exceeds eps; onset_time is the first grid time
    where that happens, None when the principle holds.
    """
    if len(records) == 0:
        raise EmptyInputError("no records to judge")
    deltas = np.array([r.delta for r in records])
    max_abs = float(np.max(np.abs(deltas)))
    violated = max_abs > eps
    onset = None
    if violated:
        onset = float(records[int(np.argmax(np.abs(deltas) > eps))].t)
    return StpVerdict(violated, max_abs, onset)
