"""FCIDUMP ingestion and emission.

The FCIDUMP text format (Knowles-Handy convention) carries one- and
two-electron integrals over an orthonormal orbital basis: a namelist
header declaring NORB, NELEC and MS2 followed by ``value i j k l``
records with 1-based indices.  Two-electron values are chemists'
notation (pq|rs) and enjoy the full 8-fold permutational symmetry

    (pq|rs) = (qp|rs) = (pq|sr) = (qp|sr) = (rs|pq) = ...

which this module exploits by storing one canonical representative per
equivalence class.  FCIDUMP files are the package's sole molecular-data
ingestion path; basis sets and geometries live upstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import IO, Iterator

import numpy as np

__all__ = [
    "FcidumpError",
    "SymmetricTwoBody",
    "IntegralSet",
    "parse_fcidump",
    "read_fcidump",
    "write_fcidump",
    "save_fcidump",
]


class FcidumpError(ValueError):
    """Malformed FCIDUMP content.  Carries the offending 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


def _pair_index(p: int, q: int) -> int:
    """Composite index for an ordered pair p >= q (0-based)."""
    if p < q:
        p, q = q, p
    return p * (p + 1) // 2 + q


class SymmetricTwoBody:
    """Two-electron integrals (pq|rs) stored under 8-fold permutational symmetry.

    Keys are composite pair indices (pq, rs) with p >= q, r >= s and
    pq >= rs; any of the 8 equivalent index orders resolves to the same
    stored value.  Unset entries read as 0.
    """

    __slots__ = ("n_orbitals", "_data")

    def __init__(self, n_orbitals: int, data: dict[tuple[int, int], float] | None = None):
        self.n_orbitals = int(n_orbitals)
        self._data: dict[tuple[int, int], float] = {}
        if data:
            for (pq, rs), value in data.items():
                if value != 0.0:
                    self._data[(pq, rs) if pq >= rs else (rs, pq)] = float(value)

    def _key(self, p: int, q: int, r: int, s: int) -> tuple[int, int]:
        n = self.n_orbitals
        if not all(0 <= i < n for i in (p, q, r, s)):
            raise IndexError(f"orbital index out of range for n_orbitals={n}: {(p, q, r, s)}")
        pq = _pair_index(p, q)
        rs = _pair_index(r, s)
        return (pq, rs) if pq >= rs else (rs, pq)

    def get(self, p: int, q: int, r: int, s: int) -> float:
        return self._data.get(self._key(p, q, r, s), 0.0)

    def set(self, p: int, q: int, r: int, s: int, value: float) -> None:
        key = self._key(p, q, r, s)
        if value == 0.0:
            self._data.pop(key, None)
        else:
            self._data[key] = float(value)

    def items_canonical(self) -> Iterator[tuple[tuple[int, int, int, int], float]]:
        """Yield ((p, q, r, s), value) for the canonical representative of
        each stored class, sorted by index tuple.  Indices are 0-based with
        p >= q, r >= s and (p, q) >= (r, s)."""
        inverse = {}
        for p in range(self.n_orbitals):
            for q in range(p + 1):
                inverse[_pair_index(p, q)] = (p, q)
        entries = []
        for (pq, rs), value in self._data.items():
            p, q = inverse[pq]
            r, s = inverse[rs]
            entries.append(((p, q, r, s), value))
        entries.sort(key=lambda e: e[0])
        yield from entries

    def dense(self) -> np.ndarray:
        """Expand to a full n^4 tensor (chemists' index order)."""
        n = self.n_orbitals
        out = np.zeros((n, n, n, n))
        for (p, q, r, s), value in self.items_canonical():
            for a, b in ((p, q), (q, p)):
                for c, d in ((r, s), (s, r)):
                    out[a, b, c, d] = value
                    out[c, d, a, b] = value
        return out

    @classmethod
    def from_dense(cls, tensor: np.ndarray, tolerance: float = 0.0) -> "SymmetricTwoBody":
        n = tensor.shape[0]
        obj = cls(n)
        for p in range(n):
            for q in range(p + 1):
                for r in range(p + 1):
                    s_max = q if r == p else r
                    for s in range(s_max + 1):
                        value = float(tensor[p, q, r, s])
                        if abs(value) > tolerance:
                            obj.set(p, q, r, s, value)
        return obj

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymmetricTwoBody):
            return NotImplemented
        return self.n_orbitals == other.n_orbitals and self._data == other._data

    def __len__(self) -> int:
        return len(self._data)


@dataclass(frozen=True)
class IntegralSet:
    """Molecular integrals over an orthonormal orbital basis.

    Attributes
    ----------
    n_orbitals, n_electrons, spin_2ms
        System size declarations from the FCIDUMP header (MS2 = 2*Ms).
    core_energy
        Scalar offset in Hartree (nuclear repulsion plus any frozen core
        folded in upstream).
    one_body
        Symmetric n x n matrix h_pq in Hartree.
    two_body
        (pq|rs) under 8-fold symmetry, chemists' notation, Hartree.
    """

    n_orbitals: int
    n_electrons: int
    spin_2ms: int
    core_energy: float
    one_body: np.ndarray
    two_body: SymmetricTwoBody = field(repr=False)

    def __post_init__(self):
        if self.n_orbitals < 1:
            raise ValueError(f"n_orbitals must be positive, got {self.n_orbitals}")
        if self.n_electrons < 0:
            raise ValueError(f"n_electrons must be non-negative, got {self.n_electrons}")
        if self.n_electrons > 2 * self.n_orbitals:
            raise ValueError(
                f"{self.n_electrons} electrons do not fit in {self.n_orbitals} orbitals"
            )
        h = np.asarray(self.one_body, dtype=float)
        if h.shape != (self.n_orbitals, self.n_orbitals):
            raise ValueError(f"one_body shape {h.shape} does not match n_orbitals={self.n_orbitals}")
        if not np.array_equal(h, h.T):
            if not np.allclose(h, h.T, atol=1e-12):
                raise ValueError("one_body matrix is not symmetric")
            h = 0.5 * (h + h.T)
        h.flags.writeable = False
        object.__setattr__(self, "one_body", h)
        if self.two_body.n_orbitals != self.n_orbitals:
            raise ValueError("two_body dimension does not match n_orbitals")

    @cached_property
    def two_body_dense(self) -> np.ndarray:
        tensor = self.two_body.dense()
        tensor.flags.writeable = False
        return tensor

    @classmethod
    def from_arrays(
        cls,
        one_body: np.ndarray,
        two_body: np.ndarray | SymmetricTwoBody,
        core_energy: float = 0.0,
        n_electrons: int = 0,
        spin_2ms: int = 0,
    ) -> "IntegralSet":
        n = np.asarray(one_body).shape[0]
        if not isinstance(two_body, SymmetricTwoBody):
            two_body = SymmetricTwoBody.from_dense(np.asarray(two_body, dtype=float))
        return cls(n, n_electrons, spin_2ms, float(core_energy), np.array(one_body, dtype=float), two_body)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegralSet):
            return NotImplemented
        return (
            self.n_orbitals == other.n_orbitals
            and self.n_electrons == other.n_electrons
            and self.spin_2ms == other.spin_2ms
            and self.core_energy == other.core_energy
            and np.array_equal(self.one_body, other.one_body)
            and self.two_body == other.two_body
        )


_HEADER_KEY = re.compile(r"([A-Za-z0-9_]+)\s*=\s*([^,\s=]+)")


def parse_fcidump(source: str | IO[str]) -> IntegralSet:
    """Parse FCIDUMP text into an :class:`IntegralSet`.

    ``source`` is the file content (or a readable text handle).  Header
    keys may be separated by commas or whitespace; ORBSYM/ISYM and other
    unknown keys are accepted and ignored.  Data records follow the
    namelist terminator (``&END`` or ``/``): ``value i j k l`` with
    1-based indices, where ``i j 0 0`` is a one-body entry, all-zero
    indices carry the core energy, and ``i 0 0 0`` records (orbital
    energies written by some emitters) are skipped.  Duplicate entries
    overwrite, last wins.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    lines = text.splitlines()

    header_parts: list[str] = []
    data_start = None
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        upper = stripped.upper()
        terminator = None
        for token in ("&END", "/END", "/"):
            pos = upper.find(token)
            if pos >= 0:
                terminator = (pos, token)
                break
        if terminator is not None:
            header_parts.append(stripped[: terminator[0]])
            data_start = lineno  # data begins on the following line
            break
        header_parts.append(stripped)
    if data_start is None:
        raise FcidumpError("missing namelist terminator (&END or /)", len(lines) or 1)

    header = " ".join(header_parts)
    keys = {k.upper(): v for k, v in _HEADER_KEY.findall(header)}

    def header_int(name: str, required: bool, default: int = 0) -> int:
        if name not in keys:
            if required:
                raise FcidumpError(f"header is missing {name}", 1)
            return default
        try:
            return int(keys[name])
        except ValueError:
            raise FcidumpError(f"header {name}={keys[name]!r} is not an integer", 1) from None

    n_orbitals = header_int("NORB", required=True)
    n_electrons = header_int("NELEC", required=True)
    spin_2ms = header_int("MS2", required=False)
    if n_orbitals < 1:
        raise FcidumpError(f"NORB must be positive, got {n_orbitals}", 1)

    one_body = np.zeros((n_orbitals, n_orbitals))
    two_body = SymmetricTwoBody(n_orbitals)
    core_energy = 0.0

    for lineno in range(data_start + 1, len(lines) + 1):
        stripped = lines[lineno - 1].strip()
        if not stripped or stripped.startswith("!") or stripped.startswith("#"):
            continue
        fields = stripped.replace(",", " ").split()
        if len(fields) != 5:
            raise FcidumpError(f"expected 'value i j k l', got {stripped!r}", lineno)
        try:
            value = float(fields[0].replace("D", "E").replace("d", "e"))
        except ValueError:
            raise FcidumpError(f"non-numeric value field {fields[0]!r}", lineno) from None
        try:
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError:
            raise FcidumpError(f"non-integer index in {stripped!r}", lineno) from None
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orbitals:
                raise FcidumpError(f"index {idx} outside [0, NORB={n_orbitals}]", lineno)

        if i == j == k == l == 0:
            core_energy = value
        elif k == l == 0 and i > 0 and j > 0:
            one_body[i - 1, j - 1] = value
            one_body[j - 1, i - 1] = value
        elif j == k == l == 0 and i > 0:
            continue  # orbital-energy record, not part of the Hamiltonian
        elif min(i, j, k, l) > 0:
            two_body.set(i - 1, j - 1, k - 1, l - 1, value)
        else:
            raise FcidumpError(f"unrecognized index pattern {(i, j, k, l)}", lineno)

    return IntegralSet(n_orbitals, n_electrons, spin_2ms, core_energy, one_body, two_body)


def read_fcidump(path: str | Path) -> IntegralSet:
    """Read and parse an FCIDUMP file from disk."""
    return parse_fcidump(Path(path).read_text())


def write_fcidump(integrals: IntegralSet) -> str:
    """Emit canonical FCIDUMP text: symmetry-unique entries only, sorted by
    indices, with round-trip-exact float formatting (``parse(write(s)) == s``)."""
    n = integrals.n_orbitals
    lines = [
        f" &FCI NORB={n},NELEC={integrals.n_electrons},MS2={integrals.spin_2ms},",
        "  ORBSYM=" + "1," * n,
        "  ISYM=1,",
        " &END",
    ]
    for (p, q, r, s), value in integrals.two_body.items_canonical():
        lines.append(f" {float(value)!r} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            value = float(integrals.one_body[p, q])
            if value != 0.0:
                lines.append(f" {value!r} {p + 1} {q + 1} 0 0")
    lines.append(f" {float(integrals.core_energy)!r} 0 0 0 0")
    return "\n".join(lines) + "\n"


def save_fcidump(integrals: IntegralSet, path: str | Path) -> None:
    Path(path).write_text(write_fcidump(integrals))
