"""Cross-module pipeline checks on fixture molecules beyond the minimal cases."""

import numpy as np
import pytest

from qcembed.activespace import ActiveSpaceSpec, reduce_integrals
from qcembed.embedding import EmbeddingConfig, run_embedding
from qcembed.fci import fci_solve
from qcembed.meanfield import solve_rhf
from qcembed.sim import (
    build_uccsd_ansatz,
    evolve_ansatz,
    expectation,
    lift_reduced_parity_state,
    map_active_hamiltonian,
    spin_summed_one_rdm,
)
from qcembed.vqe import VqeConfig, minimize


def test_lih_2e4o_vqe_pipeline(lih_integrals):
    """FCIDUMP -> RHF -> (2e,4o) window -> parity/reduced VQE -> FCI-level energy."""
    mf = solve_rhf(lih_integrals)
    active = reduce_integrals(lih_integrals, mf, ActiveSpaceSpec(2, 4))
    hamiltonian = map_active_hamiltonian(active)
    ansatz = build_uccsd_ansatz(active.n_orbitals, active.n_electrons)
    assert ansatz.n_qubits == 6
    assert ansatz.n_parameters == 15

    fci = fci_solve(active)
    result = minimize(hamiltonian, ansatz, VqeConfig(seed=0))
    assert result.converged
    assert result.energy == pytest.approx(fci.ground_energy, abs=1e-6)
    assert result.energy >= fci.ground_energy - 1e-9

    # density feedback: the optimal-state 1-RDM matches the FCI 1-RDM
    state = evolve_ansatz(ansatz, result.parameters)
    lifted = lift_reduced_parity_state(state, active.n_orbitals, ansatz.n_alpha, ansatz.n_beta)
    gamma = spin_summed_one_rdm(lifted, active.n_orbitals)
    assert np.trace(gamma) == pytest.approx(2.0, abs=1e-8)
    assert np.allclose(gamma, fci.one_rdm, atol=5e-4)


def test_lih_embedding_with_vqe_solver_matches_fci_solver(lih_integrals):
    spec = ActiveSpaceSpec(2, 3)
    fci_state = run_embedding(lih_integrals, spec, EmbeddingConfig(active_solver="fci"))
    vqe_state = run_embedding(
        lih_integrals, spec, EmbeddingConfig(active_solver="vqe"), VqeConfig(seed=3)
    )
    assert fci_state.converged and vqe_state.converged
    assert vqe_state.final_energy >= fci_state.final_energy - 1e-9
    assert vqe_state.final_energy == pytest.approx(fci_state.final_energy, abs=2e-6)
    assert vqe_state.iteration == 2
    # correlation lowers the energy below the bath reference
    assert vqe_state.final_energy < vqe_state.mean_field_energy - 1e-6


def test_variational_bound_over_random_parameters(lih_integrals):
    mf = solve_rhf(lih_integrals)
    active = reduce_integrals(lih_integrals, mf, ActiveSpaceSpec(2, 3))
    hamiltonian = map_active_hamiltonian(active)
    ansatz = build_uccsd_ansatz(active.n_orbitals, active.n_electrons)
    fci = fci_solve(active)
    rng = np.random.default_rng(81)
    for _ in range(10):
        theta = rng.uniform(-np.pi, np.pi, size=ansatz.n_parameters)
        energy = expectation(evolve_ansatz(ansatz, theta), hamiltonian)
        assert energy >= fci.ground_energy - 1e-9


def test_h2o_larger_window_embedding(golden, h2o_integrals):
    """(4e,4o) water window: converged embedding sits between RHF and full FCI."""
    state = run_embedding(h2o_integrals, ActiveSpaceSpec(4, 4), EmbeddingConfig(active_solver="fci"))
    assert state.converged
    assert state.iteration == 2
    assert state.final_energy < golden["h2o"]["e_hf"] - 1e-4
    assert state.final_energy > golden["h2o"]["e_fci"] - 1e-9
    # more correlation than the (2e,2o) window
    smaller = run_embedding(h2o_integrals, ActiveSpaceSpec(2, 2), EmbeddingConfig(active_solver="fci"))
    assert state.final_energy < smaller.final_energy
