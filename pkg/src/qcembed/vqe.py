"""Variational quantum eigensolver driver.

Parameters start from a seeded Gaussian draw (sigma = 0.001 by default,
sigma = 0 gives the plain Hartree-Fock start), the objective is the
exact statevector expectation of the qubit Hamiltonian, and minimization
uses bound-constrained L-BFGS-B with central finite-difference
gradients.  Every objective evaluation is recorded in an ordered trace;
the optimizer stops when the energy change between accepted iterates
drops below the tolerance or the iteration cap is reached.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO

import numpy as np
import scipy.optimize

from .pauli import PauliSum
from .sim import UccsdAnsatz, evolve_ansatz, expectation

__all__ = ["VqeConfig", "VqeResult", "VqeError", "initialize_parameters", "minimize", "write_trace_csv"]

_PARAMETER_BOUND = np.pi  # exp(theta G) is 2*pi-periodic in this representation


class VqeError(RuntimeError):
    """Optimizer diagnostic failure; carries the evaluation trace so far."""

    def __init__(self, message: str, trace: list[tuple[int, float]]):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class VqeConfig:
    """Optimizer settings.

    ``sigma`` is the standard deviation of the seeded Gaussian parameter
    initialization, ``tolerance`` the energy convergence threshold in
    Hartree, and ``gradient_step`` the central-difference step.
    """

    seed: int = 0
    sigma: float = 0.001
    max_iterations: int = 50
    tolerance: float = 1e-6
    gradient_step: float = 1e-6

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.gradient_step <= 0:
            raise ValueError(f"gradient_step must be positive, got {self.gradient_step}")


@dataclass(frozen=True)
class VqeResult:
    """Minimization outcome.

    ``trace`` lists every objective evaluation as (evaluation_index,
    energy); ``iterate_energies`` holds the energies of the accepted
    optimizer iterates (monotone non-increasing).
    """

    energy: float
    parameters: np.ndarray
    trace: tuple[tuple[int, float], ...]
    evaluations: int
    converged: bool
    iterate_energies: tuple[float, ...] = field(default=())


def initialize_parameters(n: int, config: VqeConfig) -> np.ndarray:
    """n draws from Normal(0, sigma^2) with a seeded deterministic generator."""
    if n < 0:
        raise ValueError(f"parameter count must be >= 0, got {n}")
    rng = np.random.default_rng(config.seed)
    if config.sigma == 0.0:
        return np.zeros(n)
    return rng.normal(0.0, config.sigma, size=n)


class _Converged(Exception):
    pass


def minimize(hamiltonian: PauliSum, ansatz: UccsdAnsatz, config: VqeConfig | None = None) -> VqeResult:
    """Minimize theta -> <psi(theta)| H |psi(theta)> over the ansatz parameters."""
    if config is None:
        config = VqeConfig()
    if hamiltonian.n_qubits != ansatz.n_qubits:
        raise ValueError(
            f"hamiltonian acts on {hamiltonian.n_qubits} qubits, ansatz on {ansatz.n_qubits}"
        )

    trace: list[tuple[int, float]] = []
    last_eval: dict[str, tuple[np.ndarray, float] | None] = {"value": None}

    def objective(theta: np.ndarray) -> float:
        state = evolve_ansatz(ansatz, theta)
        energy = expectation(state, hamiltonian)
        if not np.isfinite(energy):
            raise VqeError(f"non-finite energy {energy} during optimization", list(trace))
        trace.append((len(trace), energy))
        last_eval["value"] = (np.array(theta, dtype=float), energy)
        return energy

    n = ansatz.n_parameters
    x0 = initialize_parameters(n, config)

    if n == 0:
        energy = objective(x0)
        return VqeResult(
            energy=energy,
            parameters=x0,
            trace=tuple(trace),
            evaluations=len(trace),
            converged=True,
            iterate_energies=(energy,),
        )

    def gradient(theta: np.ndarray) -> np.ndarray:
        h = config.gradient_step
        grad = np.empty(n)
        for k in range(n):
            shifted = np.array(theta, dtype=float)
            shifted[k] = theta[k] + h
            plus = objective(shifted)
            shifted[k] = theta[k] - h
            minus = objective(shifted)
            grad[k] = (plus - minus) / (2.0 * h)
        return grad

    iterate_energies: list[float] = []
    best: dict[str, tuple[np.ndarray, float] | None] = {"value": None}

    def callback(xk: np.ndarray) -> None:
        cached = last_eval["value"]
        if cached is not None and np.array_equal(cached[0], xk):
            energy = cached[1]
        else:
            energy = objective(xk)
        previous = iterate_energies[-1] if iterate_energies else None
        iterate_energies.append(energy)
        best["value"] = (np.array(xk, dtype=float), energy)
        if previous is not None and abs(energy - previous) < config.tolerance:
            raise _Converged

    converged = False
    try:
        result = scipy.optimize.minimize(
            objective,
            x0,
            jac=gradient,
            method="L-BFGS-B",
            bounds=[(-_PARAMETER_BOUND, _PARAMETER_BOUND)] * n,
            callback=callback,
            options={
                "maxiter": config.max_iterations,
                "ftol": 0.0,
                "gtol": 1e-12,
            },
        )
        parameters = np.array(result.x, dtype=float)
        energy = float(result.fun)
        if len(iterate_energies) >= 2:
            converged = abs(iterate_energies[-1] - iterate_energies[-2]) < config.tolerance
    except _Converged:
        parameters, energy = best["value"]  # type: ignore[misc]
        converged = True

    if not iterate_energies:
        iterate_energies.append(energy)

    return VqeResult(
        energy=energy,
        parameters=parameters,
        trace=tuple(trace),
        evaluations=len(trace),
        converged=converged,
        iterate_energies=tuple(iterate_energies),
    )


def write_trace_csv(trace, stream: IO[str]) -> None:
    """Emit the evaluation trace as CSV (evaluation_index, energy)."""
    writer = csv.writer(stream)
    writer.writerow(["evaluation_index", "energy"])
    for index, energy in trace:
        writer.writerow([index, format(energy, ".10g")])
