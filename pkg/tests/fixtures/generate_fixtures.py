#!/usr/bin/env python3
"""Generate the FCIDUMP fixtures and golden energies used by the test suite.

Standalone oracle: evaluates STO-3G integrals (McMurchie-Davidson scheme,
s and p shells), runs its own restricted Hartree-Fock, transforms to the
molecular-orbital basis, emits FCIDUMP text, and computes full-CI ground
energies by direct ladder-operator application in the determinant basis.
Shares no code with the package under test.

Run from the repository root:

    python3 tests/fixtures/generate_fixtures.py

Outputs (committed to the repository):
    tests/fixtures/*.fcidump
    tests/fixtures/golden.json

Sanity anchors printed at the end compare against well-known literature
values (H2/STO-3G near equilibrium: HF about -1.1167 Ha, FCI about
-1.137 Ha; H2O/STO-3G HF about -74.96 Ha).
"""

from __future__ import annotations

import json
import math
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.special import hyp1f1

ANGSTROM_TO_BOHR = 1.8897259886

# STO-3G exponents; contraction coefficients are the universal Hehre-
# Stewart-Pople values shared by every element.
S_COEFFS = [0.1543289673, 0.5353281423, 0.4446345422]
SP_S_COEFFS = [-0.09996722919, 0.3995128261, 0.7001154689]
SP_P_COEFFS = [0.1559162750, 0.6076837186, 0.3919573931]

BASIS = {
    "H": [("S", [3.425250914, 0.6239137298, 0.1688554040], S_COEFFS)],
    "Li": [
        ("S", [16.11957475, 2.936200663, 0.7946504870], S_COEFFS),
        ("SP", [0.6362897469, 0.1478600533, 0.0480886784], None),
    ],
    "O": [
        ("S", [130.7093200, 23.80886050, 6.443608313], S_COEFFS),
        ("SP", [5.033151319, 1.169596125, 0.3803889600], None),
    ],
}

CHARGES = {"H": 1, "Li": 3, "O": 8}


# --------------------------------------------------------------------------
# Gaussian integrals (McMurchie-Davidson)
# --------------------------------------------------------------------------


def boys(n: int, x: float) -> float:
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2 * n + 1)


def hermite_coefficient(i, j, t, q_x, a, b, memo):
    key = (i, j, t)
    if key in memo:
        return memo[key]
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        value = 0.0
    elif i == j == t == 0:
        value = math.exp(-q * q_x * q_x)
    elif j == 0:
        value = (
            (1.0 / (2 * p)) * hermite_coefficient(i - 1, j, t - 1, q_x, a, b, memo)
            - (q * q_x / a) * hermite_coefficient(i - 1, j, t, q_x, a, b, memo)
            + (t + 1) * hermite_coefficient(i - 1, j, t + 1, q_x, a, b, memo)
        )
    else:
        value = (
            (1.0 / (2 * p)) * hermite_coefficient(i, j - 1, t - 1, q_x, a, b, memo)
            + (q * q_x / b) * hermite_coefficient(i, j - 1, t, q_x, a, b, memo)
            + (t + 1) * hermite_coefficient(i, j - 1, t + 1, q_x, a, b, memo)
        )
    memo[key] = value
    return value


def hermite_coulomb(t, u, v, n, p, pc, memo):
    key = (t, u, v, n)
    if key in memo:
        return memo[key]
    if t == u == v == 0:
        r2 = pc[0] * pc[0] + pc[1] * pc[1] + pc[2] * pc[2]
        value = (-2.0 * p) ** n * boys(n, p * r2)
    elif t > 0:
        value = pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc, memo)
        if t > 1:
            value += (t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc, memo)
    elif u > 0:
        value = pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc, memo)
        if u > 1:
            value += (u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc, memo)
    else:
        value = pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc, memo)
        if v > 1:
            value += (v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc, memo)
    memo[key] = value
    return value


def primitive_overlap(a, lmn1, ra, b, lmn2, rb):
    p = a + b
    value = (math.pi / p) ** 1.5
    for dim in range(3):
        memo = {}
        value *= hermite_coefficient(lmn1[dim], lmn2[dim], 0, ra[dim] - rb[dim], a, b, memo)
    return value


def primitive_kinetic(a, lmn1, ra, b, lmn2, rb):
    l2, m2, n2 = lmn2
    term0 = b * (2 * (l2 + m2 + n2) + 3) * primitive_overlap(a, lmn1, ra, b, lmn2, rb)
    term1 = -2.0 * b * b * (
        primitive_overlap(a, lmn1, ra, b, (l2 + 2, m2, n2), rb)
        + primitive_overlap(a, lmn1, ra, b, (l2, m2 + 2, n2), rb)
        + primitive_overlap(a, lmn1, ra, b, (l2, m2, n2 + 2), rb)
    )
    term2 = -0.5 * (
        l2 * (l2 - 1) * primitive_overlap(a, lmn1, ra, b, (l2 - 2, m2, n2), rb)
        + m2 * (m2 - 1) * primitive_overlap(a, lmn1, ra, b, (l2, m2 - 2, n2), rb)
        + n2 * (n2 - 1) * primitive_overlap(a, lmn1, ra, b, (l2, m2, n2 - 2), rb)
    )
    return term0 + term1 + term2


def primitive_nuclear(a, lmn1, ra, b, lmn2, rb, rc):
    p = a + b
    center = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    pc = center - np.asarray(rc)
    memos = [{}, {}, {}]
    coulomb_memo = {}
    value = 0.0
    for t in range(lmn1[0] + lmn2[0] + 1):
        e_t = hermite_coefficient(lmn1[0], lmn2[0], t, ra[0] - rb[0], a, b, memos[0])
        for u in range(lmn1[1] + lmn2[1] + 1):
            e_u = hermite_coefficient(lmn1[1], lmn2[1], u, ra[1] - rb[1], a, b, memos[1])
            for v in range(lmn1[2] + lmn2[2] + 1):
                e_v = hermite_coefficient(lmn1[2], lmn2[2], v, ra[2] - rb[2], a, b, memos[2])
                value += e_t * e_u * e_v * hermite_coulomb(t, u, v, 0, p, pc, coulomb_memo)
    return 2.0 * math.pi / p * value


def primitive_eri(a, lmn1, ra, b, lmn2, rb, c, lmn3, rc, d, lmn4, rd):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    center_p = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    center_q = (c * np.asarray(rc) + d * np.asarray(rd)) / q
    pq = center_p - center_q
    memo_bra = [{}, {}, {}]
    memo_ket = [{}, {}, {}]
    coulomb_memo = {}
    value = 0.0
    for t in range(lmn1[0] + lmn2[0] + 1):
        e1 = hermite_coefficient(lmn1[0], lmn2[0], t, ra[0] - rb[0], a, b, memo_bra[0])
        for u in range(lmn1[1] + lmn2[1] + 1):
            e2 = hermite_coefficient(lmn1[1], lmn2[1], u, ra[1] - rb[1], a, b, memo_bra[1])
            for v in range(lmn1[2] + lmn2[2] + 1):
                e3 = hermite_coefficient(lmn1[2], lmn2[2], v, ra[2] - rb[2], a, b, memo_bra[2])
                bra = e1 * e2 * e3
                if bra == 0.0:
                    continue
                for tau in range(lmn3[0] + lmn4[0] + 1):
                    f1 = hermite_coefficient(lmn3[0], lmn4[0], tau, rc[0] - rd[0], c, d, memo_ket[0])
                    for nu in range(lmn3[1] + lmn4[1] + 1):
                        f2 = hermite_coefficient(lmn3[1], lmn4[1], nu, rc[1] - rd[1], c, d, memo_ket[1])
                        for phi in range(lmn3[2] + lmn4[2] + 1):
                            f3 = hermite_coefficient(
                                lmn3[2], lmn4[2], phi, rc[2] - rd[2], c, d, memo_ket[2]
                            )
                            ket = f1 * f2 * f3
                            if ket == 0.0:
                                continue
                            sign = -1.0 if (tau + nu + phi) % 2 else 1.0
                            value += (
                                bra
                                * ket
                                * sign
                                * hermite_coulomb(t + tau, u + nu, v + phi, 0, alpha, pq, coulomb_memo)
                            )
    return value * 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))


def primitive_norm(a, lmn):
    l, m, n = lmn
    double_fact = lambda k: math.prod(range(k, 0, -2)) if k > 0 else 1
    return (
        (2 * a / math.pi) ** 0.75
        * (4 * a) ** ((l + m + n) / 2.0)
        / math.sqrt(double_fact(2 * l - 1) * double_fact(2 * m - 1) * double_fact(2 * n - 1))
    )


class BasisFunction:
    def __init__(self, center, lmn, exponents, coefficients):
        self.center = tuple(center)
        self.lmn = tuple(lmn)
        self.exponents = list(exponents)
        coeffs = [c * primitive_norm(a, lmn) for a, c in zip(exponents, coefficients)]
        # normalize the contracted function
        self.coefficients = coeffs
        norm = math.sqrt(self._self_overlap())
        self.coefficients = [c / norm for c in coeffs]

    def _self_overlap(self):
        value = 0.0
        for a, ca in zip(self.exponents, self.coefficients):
            for b, cb in zip(self.exponents, self.coefficients):
                value += ca * cb * primitive_overlap(a, self.lmn, self.center, b, self.lmn, self.center)
        return value


def build_basis(geometry):
    functions = []
    for element, coords in geometry:
        for shell, exponents, coeffs in BASIS[element]:
            if shell == "S":
                functions.append(BasisFunction(coords, (0, 0, 0), exponents, coeffs))
            elif shell == "SP":
                functions.append(BasisFunction(coords, (0, 0, 0), exponents, SP_S_COEFFS))
                for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    functions.append(BasisFunction(coords, lmn, exponents, SP_P_COEFFS))
    return functions


def contracted(kernel, *functions):
    value = 0.0
    args = []
    for f in functions:
        args.append(list(zip(f.exponents, f.coefficients)))
    if len(functions) == 2:
        f1, f2 = functions
        for a, ca in args[0]:
            for b, cb in args[1]:
                value += ca * cb * kernel(a, f1.lmn, f1.center, b, f2.lmn, f2.center)
    else:
        f1, f2, f3, f4 = functions
        for a, ca in args[0]:
            for b, cb in args[1]:
                for c, cc in args[2]:
                    for d, cd in args[3]:
                        value += ca * cb * cc * cd * kernel(
                            a, f1.lmn, f1.center, b, f2.lmn, f2.center,
                            c, f3.lmn, f3.center, d, f4.lmn, f4.center,
                        )
    return value


def integral_tables(geometry):
    functions = build_basis(geometry)
    n = len(functions)
    overlap = np.zeros((n, n))
    kinetic = np.zeros((n, n))
    nuclear = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            overlap[i, j] = overlap[j, i] = contracted(primitive_overlap, functions[i], functions[j])
            kinetic[i, j] = kinetic[j, i] = contracted(primitive_kinetic, functions[i], functions[j])
            attraction = 0.0
            for element, coords in geometry:
                kernel = lambda a, l1, r1, b, l2, r2: primitive_nuclear(a, l1, r1, b, l2, r2, coords)
                attraction -= CHARGES[element] * contracted(kernel, functions[i], functions[j])
            nuclear[i, j] = nuclear[j, i] = attraction

    eri = np.zeros((n, n, n, n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for ij, (i, j) in enumerate(pairs):
        for k, l in pairs[: ij + 1]:
            value = contracted(primitive_eri, functions[i], functions[j], functions[k], functions[l])
            for a, b in ((i, j), (j, i)):
                for c, d in ((k, l), (l, k)):
                    eri[a, b, c, d] = value
                    eri[c, d, a, b] = value
    return overlap, kinetic + nuclear, eri


def nuclear_repulsion(geometry):
    value = 0.0
    for (el1, r1), (el2, r2) in combinations(geometry, 2):
        dist = math.dist(r1, r2)
        value += CHARGES[el1] * CHARGES[el2] / dist
    return value


# --------------------------------------------------------------------------
# Restricted Hartree-Fock in the AO basis
# --------------------------------------------------------------------------


def restricted_hartree_fock(overlap, h_core, eri, n_electrons, max_iter=200, tol=1e-12):
    import scipy.linalg

    n_occ = n_electrons // 2
    eps, coeff = scipy.linalg.eigh(h_core, overlap)
    density = 2.0 * coeff[:, :n_occ] @ coeff[:, :n_occ].T
    energy = 0.0
    for _ in range(max_iter):
        coulomb = np.einsum("pqrs,rs->pq", eri, density)
        exchange = np.einsum("prqs,rs->pq", eri, density)
        fock = h_core + coulomb - 0.5 * exchange
        new_energy = 0.5 * np.sum(density * (h_core + fock))
        eps, coeff = scipy.linalg.eigh(fock, overlap)
        density = 0.5 * density + 0.5 * (2.0 * coeff[:, :n_occ] @ coeff[:, :n_occ].T)
        if abs(new_energy - energy) < tol:
            energy = new_energy
            break
        energy = new_energy
    # final canonicalization with the unmixed density
    density = 2.0 * coeff[:, :n_occ] @ coeff[:, :n_occ].T
    coulomb = np.einsum("pqrs,rs->pq", eri, density)
    exchange = np.einsum("prqs,rs->pq", eri, density)
    fock = h_core + coulomb - 0.5 * exchange
    eps, coeff = scipy.linalg.eigh(fock, overlap)
    density = 2.0 * coeff[:, :n_occ] @ coeff[:, :n_occ].T
    fock = h_core + np.einsum("pqrs,rs->pq", eri, density) - 0.5 * np.einsum(
        "prqs,rs->pq", eri, density
    )
    energy = 0.5 * np.sum(density * (h_core + fock))
    for col in range(coeff.shape[1]):
        pivot = np.argmax(np.abs(coeff[:, col]))
        if coeff[pivot, col] < 0:
            coeff[:, col] = -coeff[:, col]
    return float(energy), eps, coeff


def mo_transform(h_core, eri, coeff):
    h_mo = coeff.T @ h_core @ coeff
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", coeff, coeff, coeff, coeff, eri, optimize=True)
    return h_mo, eri_mo


# --------------------------------------------------------------------------
# FCIDUMP emission
# --------------------------------------------------------------------------


def emit_fcidump(path, h_mo, eri_mo, core, n_electrons, threshold=1e-14):
    n = h_mo.shape[0]
    lines = [
        f" &FCI NORB={n},NELEC={n_electrons},MS2=0,",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        " &END",
    ]
    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                s_top = q if r == p else r
                for s in range(s_top + 1):
                    value = float(eri_mo[p, q, r, s])
                    if abs(value) > threshold:
                        lines.append(f" {value!r} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            if abs(h_mo[p, q]) > threshold:
                lines.append(f" {float(h_mo[p, q])!r} {p + 1} {q + 1} 0 0")
    lines.append(f" {float(core)!r} 0 0 0 0")
    Path(path).write_text("\n".join(lines) + "\n")


# --------------------------------------------------------------------------
# FCI by direct ladder-operator application on determinant masks
# --------------------------------------------------------------------------


def sector_determinants(n_spatial, n_alpha, n_beta):
    alpha_masks = []
    for occ in combinations(range(n_spatial), n_alpha):
        alpha_masks.append(sum(1 << k for k in occ))
    beta_masks = []
    for occ in combinations(range(n_spatial), n_beta):
        beta_masks.append(sum(1 << k for k in occ))
    alpha_masks.sort()
    beta_masks.sort()
    dets = []
    for a in alpha_masks:
        for b in beta_masks:
            dets.append(a | (b << n_spatial))
    return dets


def apply_annihilation(det, mode):
    if not (det >> mode) & 1:
        return None, 0
    sign = -1 if bin(det & ((1 << mode) - 1)).count("1") % 2 else 1
    return det & ~(1 << mode), sign


def apply_creation(det, mode):
    if (det >> mode) & 1:
        return None, 0
    sign = -1 if bin(det & ((1 << mode) - 1)).count("1") % 2 else 1
    return det | (1 << mode), sign


def fci_ground_energy(h_mo, eri_mo, n_electrons, n_spatial):
    import scipy.linalg

    n_alpha = n_electrons // 2
    n_beta = n_electrons - n_alpha
    dets = sector_determinants(n_spatial, n_alpha, n_beta)
    index = {det: i for i, det in enumerate(dets)}
    dim = len(dets)
    hamiltonian = np.zeros((dim, dim))

    def mode_index(p, spin):
        return p + spin * n_spatial

    for det_index, det in enumerate(dets):
        # one-body
        for q in range(n_spatial):
            for q_spin in (0, 1):
                det1, sign1 = apply_annihilation(det, mode_index(q, q_spin))
                if det1 is None:
                    continue
                for p in range(n_spatial):
                    if h_mo[p, q] == 0.0:
                        continue
                    det2, sign2 = apply_creation(det1, mode_index(p, q_spin))
                    if det2 is None:
                        continue
                    hamiltonian[index[det2], det_index] += h_mo[p, q] * sign1 * sign2
        # two-body: 0.5 * (pq|rs) a+_{p s1} a+_{r s2} a_{s s2} a_{q s1}
        for q in range(n_spatial):
            for s1 in (0, 1):
                det1, sign1 = apply_annihilation(det, mode_index(q, s1))
                if det1 is None:
                    continue
                for s in range(n_spatial):
                    for s2 in (0, 1):
                        det2, sign2 = apply_annihilation(det1, mode_index(s, s2))
                        if det2 is None:
                            continue
                        for r in range(n_spatial):
                            det3, sign3 = apply_creation(det2, mode_index(r, s2))
                            if det3 is None:
                                continue
                            for p in range(n_spatial):
                                value = eri_mo[p, q, r, s]
                                if value == 0.0:
                                    continue
                                det4, sign4 = apply_creation(det3, mode_index(p, s1))
                                if det4 is None:
                                    continue
                                hamiltonian[index[det4], det_index] += (
                                    0.5 * value * sign1 * sign2 * sign3 * sign4
                                )

    energies = scipy.linalg.eigh(hamiltonian, eigvals_only=True, subset_by_index=[0, 0])
    return float(energies[0]), dim


def casci_2_2(h_mo, eri_mo, core, n_electrons):
    """Frozen-core (2e,2o) energy: freeze the lowest occupied orbitals,
    correlate the HOMO/LUMO pair."""
    n_occ = n_electrons // 2
    frozen = list(range(n_occ - 1))
    active = [n_occ - 1, n_occ]
    h_eff = h_mo.copy()
    for i in frozen:
        h_eff += 2.0 * eri_mo[:, :, i, i] - eri_mo[:, i, i, :]
    inactive_energy = core
    for i in frozen:
        inactive_energy += h_mo[i, i] + h_eff[i, i]
    h_act = h_eff[np.ix_(active, active)]
    eri_act = eri_mo[np.ix_(active, active, active, active)]
    e_active, _ = fci_ground_energy(h_act, eri_act, 2, 2)
    return inactive_energy + e_active


# --------------------------------------------------------------------------
# Molecule definitions and driver
# --------------------------------------------------------------------------


def h2_geometry(distance_angstrom):
    d = distance_angstrom * ANGSTROM_TO_BOHR
    return [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, d))]


def lih_geometry(distance_angstrom=1.5949):
    d = distance_angstrom * ANGSTROM_TO_BOHR
    return [("Li", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, d))]


def h2o_geometry():
    return [
        ("O", (0.0, 0.0, 0.1173 * ANGSTROM_TO_BOHR)),
        ("H", (0.0, 0.7572 * ANGSTROM_TO_BOHR, -0.4692 * ANGSTROM_TO_BOHR)),
        ("H", (0.0, -0.7572 * ANGSTROM_TO_BOHR, -0.4692 * ANGSTROM_TO_BOHR)),
    ]


def process(name, geometry, n_electrons, out_dir, compute_fci=True, compute_casci=False):
    print(f"[{name}] building integrals ...")
    overlap, h_core, eri = integral_tables(geometry)
    core = nuclear_repulsion(geometry)
    e_hf, mo_energies, coeff = restricted_hartree_fock(overlap, h_core, eri, n_electrons)
    e_hf_total = e_hf + core
    h_mo, eri_mo = mo_transform(h_core, eri, coeff)
    path = out_dir / f"{name}.fcidump"
    emit_fcidump(path, h_mo, eri_mo, core, n_electrons)
    record = {
        "file": path.name,
        "n_orbitals": int(h_mo.shape[0]),
        "n_electrons": int(n_electrons),
        "e_hf": e_hf_total,
        "orbital_energies": [float(e) for e in mo_energies],
    }
    if compute_fci:
        e_fci, dim = fci_ground_energy(h_mo, eri_mo, n_electrons, h_mo.shape[0])
        record["e_fci"] = e_fci + core
        record["fci_dimension"] = dim
        print(f"[{name}] HF = {e_hf_total:.8f}  FCI = {e_fci + core:.8f}  (dim {dim})")
    else:
        print(f"[{name}] HF = {e_hf_total:.8f}")
    if compute_casci:
        record["e_casci_2_2"] = casci_2_2(h_mo, eri_mo, core, n_electrons)
        print(f"[{name}] CASCI(2e,2o) = {record['e_casci_2_2']:.8f}")
    return record


def main():
    out_dir = Path(__file__).parent
    golden = {}
    golden["h2_0735"] = process("h2_sto3g_0735", h2_geometry(0.735), 2, out_dir)
    golden["h2_1100"] = process("h2_sto3g_1100", h2_geometry(1.10), 2, out_dir)
    golden["h2_1500"] = process("h2_sto3g_1500", h2_geometry(1.50), 2, out_dir)
    golden["lih"] = process("lih_sto3g", lih_geometry(), 4, out_dir, compute_casci=True)
    golden["h2o"] = process("h2o_sto3g", h2o_geometry(), 10, out_dir, compute_casci=True)

    with open(out_dir / "golden.json", "w") as handle:
        json.dump(golden, handle, indent=2)
    print("golden values written to", out_dir / "golden.json")

    print("\nsanity anchors (literature):")
    print(f"  H2 HF  {golden['h2_0735']['e_hf']:+.6f}  vs about -1.1167")
    print(f"  H2 FCI {golden['h2_0735']['e_fci']:+.6f}  vs about -1.137")
    print(f"  H2O HF {golden['h2o']['e_hf']:+.6f}  vs about -74.96")
    print(f"  LiH HF {golden['lih']['e_hf']:+.6f}  vs about -7.86")


if __name__ == "__main__":
    main()
