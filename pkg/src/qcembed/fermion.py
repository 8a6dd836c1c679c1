"""Second-quantized fermionic operators over spin orbitals.

Spin orbitals use blocked ordering: modes 0..M-1 are the alpha spins of
the M spatial orbitals, modes M..2M-1 the beta spins.  This choice makes
the two parity-symmetry qubits land at fixed positions (M-1 and 2M-1)
after the parity mapping, which the two-qubit reduction relies on.
"""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .activespace import ActiveHamiltonian

__all__ = ["FermionTerm", "FermionOperator", "spin_orbital_hamiltonian", "excitation_generator"]

# A term is a product of ladder operators applied right-to-left:
# ((mode, is_creation), ...) with coefficients collected in a dict.
FermionTerm = tuple[tuple[int, bool], ...]


class FermionOperator:
    """Linear combination of ladder-operator products on ``n_modes`` modes."""

    __slots__ = ("n_modes", "_terms")

    def __init__(self, n_modes: int, terms: Mapping[FermionTerm, complex] | None = None):
        self.n_modes = int(n_modes)
        self._terms: dict[FermionTerm, complex] = {}
        if terms:
            for term, coeff in terms.items():
                if any(mode < 0 or mode >= n_modes for mode, _ in term):
                    raise ValueError(f"mode index out of range in term {term}")
                if coeff != 0.0:
                    self._terms[term] = complex(coeff)

    @classmethod
    def identity(cls, n_modes: int, coeff: complex = 1.0) -> "FermionOperator":
        return cls(n_modes, {(): coeff})

    def terms(self) -> dict[FermionTerm, complex]:
        return dict(self._terms)

    def items(self) -> Iterable[tuple[FermionTerm, complex]]:
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if self.n_modes != other.n_modes:
            raise ValueError("mode count mismatch")
        acc = dict(self._terms)
        for term, coeff in other._terms.items():
            acc[term] = acc.get(term, 0.0) + coeff
        return FermionOperator(self.n_modes, acc)

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        return self + (-1.0) * other

    def __mul__(self, scalar: complex) -> "FermionOperator":
        return FermionOperator(self.n_modes, {t: c * scalar for t, c in self._terms.items()})

    __rmul__ = __mul__

    def hermitian_conjugate(self) -> "FermionOperator":
        acc: dict[FermionTerm, complex] = {}
        for term, coeff in self._terms.items():
            conj_term = tuple((mode, not creation) for mode, creation in reversed(term))
            acc[conj_term] = acc.get(conj_term, 0.0) + coeff.conjugate()
        return FermionOperator(self.n_modes, acc)

    def __repr__(self) -> str:
        return f"FermionOperator(n_modes={self.n_modes}, terms={len(self._terms)})"


def spin_orbital_hamiltonian(active: ActiveHamiltonian) -> FermionOperator:
    """Expand an active-space Hamiltonian into second quantization.

    Returns sum_pq h_pq a+_p a_q + (1/2) sum (pq|rs) a+_{p,s1} a+_{r,s2}
    a_{s,s2} a_{q,s1} over 2 * n_orbitals blocked spin orbitals.  The
    inactive energy offset is not included.
    """
    n = active.n_orbitals
    h = np.asarray(active.one_body_eff)
    terms: dict[FermionTerm, complex] = {}

    def add(term: FermionTerm, coeff: float) -> None:
        if coeff != 0.0:
            terms[term] = terms.get(term, 0.0) + coeff

    for p in range(n):
        for q in range(n):
            if h[p, q] == 0.0:
                continue
            for spin in (0, n):
                add(((p + spin, True), (q + spin, False)), h[p, q])

    for (p, q, r, s), value in active.two_body.items_canonical():
        # expand the canonical class back to all distinct index orders
        seen = set()
        for a, b in ((p, q), (q, p)):
            for c, d in ((r, s), (s, r)):
                for (w, x), (y, z) in (((a, b), (c, d)), ((c, d), (a, b))):
                    if (w, x, y, z) in seen:
                        continue
                    seen.add((w, x, y, z))
                    for spin1 in (0, n):
                        for spin2 in (0, n):
                            add(
                                (
                                    (w + spin1, True),
                                    (y + spin2, True),
                                    (z + spin2, False),
                                    (x + spin1, False),
                                ),
                                0.5 * value,
                            )
    return FermionOperator(2 * n, terms)


def excitation_generator(excitation: tuple[int, ...], n_modes: int) -> FermionOperator:
    """Anti-Hermitian generator T - T^dagger for a single or double excitation.

    ``excitation`` is (i, a) for a+_a a_i or (i, j, a, b) for
    a+_a a+_b a_j a_i, in spin-orbital indices.
    """
    if len(excitation) == 2:
        i, a = excitation
        t = FermionOperator(n_modes, {((a, True), (i, False)): 1.0})
    elif len(excitation) == 4:
        i, j, a, b = excitation
        t = FermionOperator(n_modes, {((a, True), (b, True), (j, False), (i, False)): 1.0})
    else:
        raise ValueError(f"excitation must have 2 or 4 indices, got {excitation}")
    return t - t.hermitian_conjugate()
