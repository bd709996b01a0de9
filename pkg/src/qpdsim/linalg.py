"""Dense complex Hermitian linear algebra shared by all simulation modules.

Conventions used throughout the package: the prediction subsystem B is the
first tensor factor and the action subsystem A the second, giving the joint
basis order {dd, dc, cd, cc}.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NotNormalizedError, NotPositiveError

# Validation tolerances. PSD_TOL also bounds how far below zero an eigenvalue
# may sit before entropy-style functions refuse to clamp it silently.
HERM_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-12


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # unitary, columns aligned with eigenvalues


def is_hermitian(m: np.ndarray, tol: float = HERM_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().swapaxes(-1, -2))) <= tol)


def _eig2_closed(m: np.ndarray) -> Spectrum:
    # Closed form for 2x2 Hermitian matrices: mean +- radius. Exact values for
    # the regression anchors used by the state catalog.
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    mean = 0.5 * (a + d)
    radius = np.hypot(0.5 * (a - d), abs(b))
    eigenvalues = np.array([mean + radius, mean - radius])
    if abs(b) == 0.0:
        order = np.argsort([-a, -d], kind="stable")
        vectors = np.eye(2, dtype=complex)[:, order]
        return Spectrum(np.array([a, d])[order], vectors)
    # Columns [b, eps - a] are eigenvectors and mutually orthogonal.
    vectors = np.empty((2, 2), dtype=complex)
    for k, eps in enumerate(eigenvalues):
        v = np.array([b, eps - a], dtype=complex)
        vectors[:, k] = v / np.linalg.norm(v)
    return Spectrum(eigenvalues, vectors)


def eig_hermitian(m: np.ndarray) -> Spectrum:
    """Eigendecompose a Hermitian matrix; eigenvalues sorted descending.

    Raises NonHermitianError if the symmetry tolerance is exceeded.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m):
        raise NonHermitianError(f"matrix is not Hermitian within {HERM_TOL:g}")
    if m.shape[0] == 2:
        return _eig2_closed(m)
    w, v = np.linalg.eigh(m)
    return Spectrum(w[::-1].copy(), v[:, ::-1].copy())


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of stacked Hermitian matrices (..., d, d), descending.

    No symmetry validation; callers guarantee the input. The 2x2 case uses
    the closed form so it vectorizes without a LAPACK loop.
    """
    m = np.asarray(m)
    if m.shape[-1] == 2:
        a = m[..., 0, 0].real
        d = m[..., 1, 1].real
        mean = 0.5 * (a + d)
        radius = np.hypot(0.5 * (a - d), np.abs(m[..., 0, 1]))
        return np.stack([mean + radius, mean - radius], axis=-1)
    return np.linalg.eigvalsh(m)[..., ::-1]


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first argument as the leading factor."""
    return np.kron(np.asarray(a), np.asarray(b))


def partial_trace(m: np.ndarray, keep: str, dims: tuple[int, int]) -> np.ndarray:
    """Reduce a bipartite matrix to one subsystem.

    ``dims`` is (d_B, d_A) with B the leading tensor factor; ``keep`` selects
    the subsystem that survives ("A" traces out B and vice versa). Supports
    stacked input (..., d, d).
    """
    m = np.asarray(m)
    d_b, d_a = dims
    if m.shape[-1] != d_b * d_a or m.shape[-2] != d_b * d_a:
        raise DimensionMismatchError(
            f"matrix dim {m.shape[-1]} incompatible with subsystem dims {dims}"
        )
    blocks = m.reshape(*m.shape[:-2], d_b, d_a, d_b, d_a)
    if keep == "A":
        return np.einsum("...ikil->...kl", blocks)
    if keep == "B":
        return np.einsum("...ikjk->...ij", blocks)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def unitary_from_hamiltonian(h: np.ndarray, t: float) -> np.ndarray:
    """Propagator exp(-i h t) via the spectral decomposition of Hermitian h."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def assert_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Validate the Hermitian / unit-trace / PSD invariants of a state.

    Returns the validated array unchanged so calls can be chained.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError(f"{name}: expected a square matrix, got shape {rho.shape}")
    if not is_hermitian(rho):
        raise NonHermitianError(f"{name}: not Hermitian within {HERM_TOL:g}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise NotNormalizedError(f"{name}: trace {tr:.16g} differs from 1 beyond {TRACE_TOL:g}")
    w = np.linalg.eigvalsh(rho)
    if w[0] < -PSD_TOL:
        raise NotPositiveError(f"{name}: minimum eigenvalue {w[0]:.3e} below -{PSD_TOL:g}")
    return rho
