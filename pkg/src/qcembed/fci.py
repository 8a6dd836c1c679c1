"""Exact diagonalization over the active determinant basis.

Determinants are pairs of alpha/beta occupation strings over the active
spatial orbitals (blocked spin-orbital convention shared with the qubit
mappings).  The basis is alpha-string major, beta-string minor, with
strings ordered by their integer bit value.  Matrix elements follow the
Slater-Condon rules on spin orbitals; small problems are solved densely,
larger ones with an implicitly restarted Lanczos iteration seeded from
the Hartree-Fock determinant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .activespace import ActiveHamiltonian

__all__ = ["FciError", "FciCapacityError", "FciResult", "fci_solve", "compute_1rdm"]

DEFAULT_DIMENSION_CAP = 40_000
DENSE_DIMENSION_LIMIT = 2_000


class FciError(ValueError):
    """Inconsistent electron/spin specification."""


class FciCapacityError(RuntimeError):
    """Requested determinant basis exceeds the configured cap."""


def _bit_strings(n_orbitals: int, n_occupied: int) -> list[int]:
    """All n_orbitals-bit masks with n_occupied bits set, in lexicographic
    (ascending integer) order."""
    strings = []
    for occ in combinations(range(n_orbitals), n_occupied):
        mask = 0
        for k in occ:
            mask |= 1 << k
        strings.append(mask)
    strings.sort()
    return strings


@dataclass(frozen=True)
class FciResult:
    """Ground eigenpair plus the spin-summed one-particle density matrix.

    ``ground_energy`` excludes the inactive energy offset; callers add
    it when reporting totals.
    """

    ground_energy: float
    ground_vector: np.ndarray
    basis_dimension: int
    one_rdm: np.ndarray
    n_orbitals: int
    alpha_strings: tuple[int, ...]
    beta_strings: tuple[int, ...]


class _DeterminantSpace:
    """Slater-Condon matrix elements over combined spin-orbital masks."""

    def __init__(self, active: ActiveHamiltonian, n_alpha: int, n_beta: int):
        n = active.n_orbitals
        self.n_spatial = n
        self.n_modes = 2 * n
        self.alpha_strings = _bit_strings(n, n_alpha)
        self.beta_strings = _bit_strings(n, n_beta)
        self.dimension = len(self.alpha_strings) * len(self.beta_strings)

        h = np.asarray(active.one_body_eff)
        eri = active.two_body_dense()
        m = self.n_modes
        # spin-orbital one-body and antisymmetrized two-body <PQ||RS>
        self.h_so = np.zeros((m, m))
        self.h_so[:n, :n] = h
        self.h_so[n:, n:] = h
        spin_delta = np.zeros((m, m))
        spin_delta[:n, :n] = 1.0
        spin_delta[n:, n:] = 1.0
        spatial = np.tile(np.arange(n), 2)
        coulomb = eri[np.ix_(spatial, spatial, spatial, spatial)]
        # <PQ|RS> = (PR|QS) delta(sP,sR) delta(sQ,sS), chemists -> physicists
        phys = np.einsum("prqs,pr,qs->pqrs", coulomb, spin_delta, spin_delta, optimize=True)
        self.antisym = phys - np.transpose(phys, (0, 1, 3, 2))

    def determinant(self, i_alpha: int, i_beta: int) -> int:
        return self.alpha_strings[i_alpha] | (self.beta_strings[i_beta] << self.n_spatial)

    def index(self, i_alpha: int, i_beta: int) -> int:
        return i_alpha * len(self.beta_strings) + i_beta

    def diagonal(self, det: int) -> float:
        occ = _occupied_list(det, self.n_modes)
        value = sum(self.h_so[p, p] for p in occ)
        for a in range(len(occ)):
            for b in range(a + 1, len(occ)):
                value += self.antisym[occ[a], occ[b], occ[a], occ[b]]
        return float(value)

    def single(self, det: int, i: int, a: int) -> float:
        """<det| H |det with i -> a>, including the permutation sign."""
        value = self.h_so[i, a]
        rest = det & ~(1 << i)
        for j in _occupied_list(rest, self.n_modes):
            value += self.antisym[i, j, a, j]
        return _excitation_sign(det, i, a) * float(value)

    def double(self, det: int, i: int, j: int, a: int, b: int) -> float:
        """<det| H |det with (i, j) -> (a, b)>, i < j and a < b."""
        sign = _excitation_sign(det, i, a)
        intermediate = (det & ~(1 << i)) | (1 << a)
        sign *= _excitation_sign(intermediate, j, b)
        return sign * float(self.antisym[i, j, a, b])


def _occupied_list(mask: int, n_modes: int) -> list[int]:
    return [k for k in range(n_modes) if (mask >> k) & 1]


def _excitation_sign(det: int, i: int, a: int) -> int:
    """Sign of moving an electron from occupied i to empty a in det."""
    low, high = (i, a) if i < a else (a, i)
    between = det & (((1 << high) - 1) & ~((1 << (low + 1)) - 1))
    return -1 if between.bit_count() % 2 else 1


def _connections(space: _DeterminantSpace):
    """Yield (row, col, value) over the lower triangle incl. diagonal."""
    n = space.n_spatial
    n_b = len(space.beta_strings)
    alpha_index = {m: i for i, m in enumerate(space.alpha_strings)}
    beta_index = {m: i for i, m in enumerate(space.beta_strings)}

    def substitutions(mask: int):
        occ = [k for k in range(n) if (mask >> k) & 1]
        virt = [k for k in range(n) if not (mask >> k) & 1]
        for i in occ:
            for a in virt:
                yield i, a, (mask & ~(1 << i)) | (1 << a)

    def double_substitutions(mask: int):
        occ = [k for k in range(n) if (mask >> k) & 1]
        virt = [k for k in range(n) if not (mask >> k) & 1]
        for i, j in combinations(occ, 2):
            for a, b in combinations(virt, 2):
                yield i, j, a, b, (mask & ~(1 << i) & ~(1 << j)) | (1 << a) | (1 << b)

    for ia, alpha in enumerate(space.alpha_strings):
        for ib, beta in enumerate(space.beta_strings):
            row = ia * n_b + ib
            det = alpha | (beta << n)
            yield row, row, space.diagonal(det)

            # alpha singles
            for i, a, new_alpha in substitutions(alpha):
                col = alpha_index[new_alpha] * n_b + ib
                if col < row:
                    yield row, col, space.single(det, i, a)
            # beta singles
            for i, a, new_beta in substitutions(beta):
                col = ia * n_b + beta_index[new_beta]
                if col < row:
                    yield row, col, space.single(det, i + n, a + n)
            # alpha-alpha doubles
            for i, j, a, b, new_alpha in double_substitutions(alpha):
                col = alpha_index[new_alpha] * n_b + ib
                if col < row:
                    yield row, col, space.double(det, i, j, a, b)
            # beta-beta doubles
            for i, j, a, b, new_beta in double_substitutions(beta):
                col = ia * n_b + beta_index[new_beta]
                if col < row:
                    yield row, col, space.double(det, i + n, j + n, a + n, b + n)
            # alpha-beta doubles
            for i, a, new_alpha in substitutions(alpha):
                for j, b, new_beta in substitutions(beta):
                    col = alpha_index[new_alpha] * n_b + beta_index[new_beta]
                    if col < row:
                        yield row, col, space.double(det, i, j + n, a, b + n)


def _hartree_fock_index(space: _DeterminantSpace, n_alpha: int, n_beta: int) -> int:
    hf_alpha = (1 << n_alpha) - 1
    hf_beta = (1 << n_beta) - 1
    ia = space.alpha_strings.index(hf_alpha)
    ib = space.beta_strings.index(hf_beta)
    return space.index(ia, ib)


def fci_solve(
    active: ActiveHamiltonian,
    n_electrons: int | None = None,
    s_z: float = 0.0,
    dimension_cap: int = DEFAULT_DIMENSION_CAP,
    dense_limit: int = DENSE_DIMENSION_LIMIT,
) -> FciResult:
    """Lowest eigenpair of the active Hamiltonian in a fixed (N, S_z) sector.

    Dense diagonalization is used for basis dimensions up to
    ``dense_limit``; beyond that a Lanczos iteration with a
    deterministic Hartree-Fock start vector takes over.  Exceeding
    ``dimension_cap`` raises :class:`FciCapacityError`.
    """
    if n_electrons is None:
        n_electrons = active.n_electrons
    twice_sz = round(2 * s_z)
    if abs(2 * s_z - twice_sz) > 1e-12:
        raise FciError(f"s_z must be a multiple of 1/2, got {s_z}")
    if (n_electrons + twice_sz) % 2 != 0:
        raise FciError(f"inconsistent (n_electrons={n_electrons}, s_z={s_z})")
    n_alpha = (n_electrons + twice_sz) // 2
    n_beta = n_electrons - n_alpha
    n = active.n_orbitals
    if not (0 <= n_alpha <= n and 0 <= n_beta <= n):
        raise FciError(
            f"cannot place ({n_alpha} alpha, {n_beta} beta) electrons in {n} orbitals"
        )

    if n == 0:
        vector = np.array([1.0])
        return FciResult(0.0, vector, 1, np.zeros((0, 0)), 0, (0,), (0,))

    space = _DeterminantSpace(active, n_alpha, n_beta)
    if space.dimension > dimension_cap:
        raise FciCapacityError(
            f"basis dimension {space.dimension} exceeds the cap of {dimension_cap}"
        )

    if space.dimension <= dense_limit:
        matrix = np.zeros((space.dimension, space.dimension))
        for row, col, value in _connections(space):
            matrix[row, col] = value
            matrix[col, row] = value
        energies, vectors = scipy.linalg.eigh(matrix, subset_by_index=[0, 0])
        energy = float(energies[0])
        vector = vectors[:, 0]
    else:
        rows, cols, vals = [], [], []
        for row, col, value in _connections(space):
            rows.append(row)
            cols.append(col)
            vals.append(value)
            if row != col:
                rows.append(col)
                cols.append(row)
                vals.append(value)
        matrix = scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(space.dimension, space.dimension)
        )
        v0 = np.zeros(space.dimension)
        v0[_hartree_fock_index(space, n_alpha, n_beta)] = 1.0
        energies, vectors = scipy.sparse.linalg.eigsh(matrix, k=1, which="SA", v0=v0)
        energy = float(energies[0])
        vector = vectors[:, 0]

    # deterministic global sign: largest-magnitude component positive
    pivot = int(np.argmax(np.abs(vector)))
    if vector[pivot] < 0:
        vector = -vector

    one_rdm = _one_rdm_from_vector(
        n, tuple(space.alpha_strings), tuple(space.beta_strings), vector
    )
    return FciResult(
        ground_energy=energy,
        ground_vector=vector,
        basis_dimension=space.dimension,
        one_rdm=one_rdm,
        n_orbitals=n,
        alpha_strings=tuple(space.alpha_strings),
        beta_strings=tuple(space.beta_strings),
    )


def _one_rdm_from_vector(
    n: int,
    alpha_strings: tuple[int, ...],
    beta_strings: tuple[int, ...],
    vector: np.ndarray,
) -> np.ndarray:
    n_b = len(beta_strings)
    alpha_index = {m: i for i, m in enumerate(alpha_strings)}
    beta_index = {m: i for i, m in enumerate(beta_strings)}
    gamma = np.zeros((n, n))

    for ia, alpha in enumerate(alpha_strings):
        for ib, beta in enumerate(beta_strings):
            source = ia * n_b + ib
            weight = vector[source]
            if weight == 0.0:
                continue
            det = alpha | (beta << n)
            # diagonal occupations
            for p in range(n):
                if (alpha >> p) & 1:
                    gamma[p, p] += weight * weight
                if (beta >> p) & 1:
                    gamma[p, p] += weight * weight
            # alpha substitutions p <- q
            for q in range(n):
                if not (alpha >> q) & 1:
                    continue
                for p in range(n):
                    if p == q or (alpha >> p) & 1:
                        continue
                    new_alpha = (alpha & ~(1 << q)) | (1 << p)
                    target = alpha_index[new_alpha] * n_b + ib
                    sign = _excitation_sign(det, q, p)
                    gamma[p, q] += sign * vector[target] * weight
            # beta substitutions
            for q in range(n):
                if not (beta >> q) & 1:
                    continue
                for p in range(n):
                    if p == q or (beta >> p) & 1:
                        continue
                    new_beta = (beta & ~(1 << q)) | (1 << p)
                    target = ia * n_b + beta_index[new_beta]
                    sign = _excitation_sign(det, q + n, p + n)
                    gamma[p, q] += sign * vector[target] * weight
    return gamma


def compute_1rdm(result: FciResult) -> np.ndarray:
    """Spin-summed one-particle reduced density matrix of the ground state,
    recomputed from the stored eigenvector."""
    return _one_rdm_from_vector(
        result.n_orbitals, result.alpha_strings, result.beta_strings, result.ground_vector
    )
