"""Shared random generators and independent oracles for the test suite."""

import numpy as np

from qpdsim import HamiltonianParams, ScenarioSpec, SubsystemParams


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g + g.conj().T) / 2.0


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_pure_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_subsystem_params(rng: np.random.Generator, coherent: bool = True) -> SubsystemParams:
    p = rng.uniform(0.0, 1.0)
    if not coherent:
        return SubsystemParams(p)
    # magnitude strictly inside the positivity disk
    mag = np.sqrt(p * (1.0 - p)) * rng.uniform(0.0, 0.999)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    return SubsystemParams(p, mag * np.exp(1j * phase))


def random_scenario(rng: np.random.Generator, coherent_prediction: bool = True) -> ScenarioSpec:
    prediction = random_subsystem_params(rng, coherent=coherent_prediction)
    action = random_subsystem_params(rng)
    return ScenarioSpec.uncorrelated("random", prediction, action)


def random_hamiltonian_params(rng: np.random.Generator) -> HamiltonianParams:
    return HamiltonianParams(
        mu_d=rng.uniform(-2.0, 2.0),
        mu_c=rng.uniform(-2.0, 2.0),
        gamma=rng.uniform(-3.0, 3.0),
    )


def rk4_propagator(h: np.ndarray, t: float, steps: int = 2000) -> np.ndarray:
    """Classical fixed-step RK4 for dU/dt = -i h U, U(0) = I."""
    dt = t / steps
    u = np.eye(h.shape[0], dtype=complex)
    for _ in range(steps):
        k1 = -1j * (h @ u)
        k2 = -1j * (h @ (u + 0.5 * dt * k1))
        k3 = -1j * (h @ (u + 0.5 * dt * k2))
        k4 = -1j * (h @ (u + dt * k3))
        u = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return u
