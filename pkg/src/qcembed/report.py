"""Correlation-recovery reporting against ingested reference energies.

The recovery percentage

    R = 100 * (E_embedded - E_DFT) / (E_CCSD - E_DFT)

measures how much of the baseline-to-coupled-cluster energy gap the
embedding closed: 0% is the plain baseline, 100% full recovery.
Reference energies (E_DFT, E_CCSD per molecule) are ingested constants;
a versioned copy of published values ships with the package data.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO

__all__ = [
    "ReportError",
    "ReferenceRow",
    "ResultRow",
    "RecoveryReport",
    "recovery",
    "load_reference_table",
    "packaged_reference_table",
    "build_report",
    "write_recovery_csv",
    "recovery_rows_to_json",
    "write_energy_table_csv",
]

_DEGENERATE_TOLERANCE = 1e-12
_RECOVERY_CONSISTENCY = 1e-9
_PLATEAU_DECIMALS = 1  # ties are judged at the table's rounding
RECOVERY_THRESHOLD_PERCENT = 60.0


class ReportError(ValueError):
    """Missing reference data or inconsistent report rows."""


def recovery(e_dft: float, e_qdft: float, e_ccsd: float) -> float:
    """Percentage of the DFT-to-CCSD gap closed by the embedding energy."""
    gap = e_ccsd - e_dft
    if abs(gap) < _DEGENERATE_TOLERANCE:
        raise ReportError(
            f"degenerate reference pair: |e_ccsd - e_dft| = {abs(gap):.3e} < {_DEGENERATE_TOLERANCE}"
        )
    return 100.0 * (e_qdft - e_dft) / gap


@dataclass(frozen=True)
class ReferenceRow:
    molecule: str
    e_dft: float
    e_ccsd: float
    e_hf: float | None = None


@dataclass(frozen=True)
class ResultRow:
    """One embedding result: molecule, active-space label and total energy."""

    molecule: str
    n_active_electrons: int
    n_active_orbitals: int
    e_qdft: float
    mu: float | None = None
    converged: bool = True


@dataclass(frozen=True)
class RecoveryReport:
    """Recovery row; the stored percentage is validated against the three
    energies at construction."""

    molecule: str
    mu_opt: float | None
    n_active_electrons: int
    n_active_orbitals: int
    e_dft: float
    e_qdft: float
    e_ccsd: float
    recovery_percent: float
    best_for_molecule: bool = False
    plateau: bool = False

    def __post_init__(self):
        expected = recovery(self.e_dft, self.e_qdft, self.e_ccsd)
        if abs(expected - self.recovery_percent) > _RECOVERY_CONSISTENCY:
            raise ReportError(
                f"stored recovery {self.recovery_percent!r} disagrees with the energies "
                f"(recomputed {expected!r})"
            )

    @property
    def above_threshold(self) -> bool:
        return self.recovery_percent >= RECOVERY_THRESHOLD_PERCENT

    @property
    def active_label(self) -> str:
        return f"({self.n_active_electrons}e,{self.n_active_orbitals}o)"


def load_reference_table(source: str | Path | IO[str]) -> dict[str, ReferenceRow]:
    """Read a reference-energy CSV with columns molecule, e_dft, e_ccsd
    (optionally e_hf); '#' lines are comments."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        lines = Path(source).read_text().splitlines()
    rows = [line for line in lines if line.strip() and not line.lstrip().startswith("#")]
    table: dict[str, ReferenceRow] = {}
    for record in csv.DictReader(rows):
        molecule = record["molecule"].strip()
        table[molecule] = ReferenceRow(
            molecule=molecule,
            e_dft=float(record["e_dft"]),
            e_ccsd=float(record["e_ccsd"]),
            e_hf=float(record["e_hf"]) if record.get("e_hf") not in (None, "") else None,
        )
    return table


def packaged_reference_table() -> dict[str, ReferenceRow]:
    """Reference energies shipped with the package (published constants)."""
    text = resources.files("qcembed").joinpath("data/reference_energies.csv").read_text()
    return load_reference_table(io.StringIO(text))


def build_report(
    results: list[ResultRow],
    references: dict[str, ReferenceRow],
    mu_opt: dict[str, float] | None = None,
) -> list[RecoveryReport]:
    """Combine embedding results with reference energies.

    Flags the maximum-recovery active space per molecule; rows that tie
    with the maximum at one-decimal rounding share a plateau flag.
    Raises :class:`ReportError` for a molecule without reference data.
    """
    raw: list[RecoveryReport] = []
    for row in results:
        ref = references.get(row.molecule)
        if ref is None:
            raise ReportError(f"no reference energies for molecule {row.molecule!r}")
        percent = recovery(ref.e_dft, row.e_qdft, ref.e_ccsd)
        raw.append(
            RecoveryReport(
                molecule=row.molecule,
                mu_opt=(mu_opt or {}).get(row.molecule, row.mu),
                n_active_electrons=row.n_active_electrons,
                n_active_orbitals=row.n_active_orbitals,
                e_dft=ref.e_dft,
                e_qdft=row.e_qdft,
                e_ccsd=ref.e_ccsd,
                recovery_percent=percent,
            )
        )

    final: list[RecoveryReport] = []
    by_molecule: dict[str, list[RecoveryReport]] = {}
    for row in raw:
        by_molecule.setdefault(row.molecule, []).append(row)
    for molecule_rows in by_molecule.values():
        best = max(r.recovery_percent for r in molecule_rows)
        rounded_best = round(best, _PLATEAU_DECIMALS)
        at_max = [r for r in molecule_rows if round(r.recovery_percent, _PLATEAU_DECIMALS) == rounded_best]
        plateau = len(at_max) > 1
        for row in molecule_rows:
            is_best = row.recovery_percent == best
            on_plateau = plateau and round(row.recovery_percent, _PLATEAU_DECIMALS) == rounded_best
            final.append(
                RecoveryReport(
                    molecule=row.molecule,
                    mu_opt=row.mu_opt,
                    n_active_electrons=row.n_active_electrons,
                    n_active_orbitals=row.n_active_orbitals,
                    e_dft=row.e_dft,
                    e_qdft=row.e_qdft,
                    e_ccsd=row.e_ccsd,
                    recovery_percent=row.recovery_percent,
                    best_for_molecule=is_best,
                    plateau=on_plateau,
                )
            )
    return final


def _fmt(value: float) -> str:
    return format(value, ".10g")


def write_recovery_csv(rows: list[RecoveryReport], stream: IO[str]) -> None:
    writer = csv.writer(stream)
    writer.writerow(
        [
            "molecule",
            "ne",
            "no",
            "e_dft",
            "e_qdft",
            "e_ccsd",
            "recovery_percent",
            "above_60_threshold",
            "best_for_molecule",
            "plateau",
            "mu_opt",
        ]
    )
    for row in rows:
        writer.writerow(
            [
                row.molecule,
                row.n_active_electrons,
                row.n_active_orbitals,
                _fmt(row.e_dft),
                _fmt(row.e_qdft),
                _fmt(row.e_ccsd),
                _fmt(row.recovery_percent),
                str(row.above_threshold).lower(),
                str(row.best_for_molecule).lower(),
                str(row.plateau).lower(),
                "" if row.mu_opt is None else _fmt(row.mu_opt),
            ]
        )


def recovery_rows_to_json(rows: list[RecoveryReport]) -> str:
    payload = [
        {
            "molecule": row.molecule,
            "ne": row.n_active_electrons,
            "no": row.n_active_orbitals,
            "e_dft": row.e_dft,
            "e_qdft": row.e_qdft,
            "e_ccsd": row.e_ccsd,
            "recovery_percent": row.recovery_percent,
            "above_60_threshold": row.above_threshold,
            "best_for_molecule": row.best_for_molecule,
            "plateau": row.plateau,
            "mu_opt": row.mu_opt,
        }
        for row in rows
    ]
    return json.dumps(payload, indent=2)


def write_energy_table_csv(
    molecule: str,
    rows,
    active_electrons: int,
    active_orbitals: int,
    stream: IO[str],
) -> None:
    """Per-mu energy table: molecule, mu, ne, no, e_hf, e_qdft, iterations, converged."""
    writer = csv.writer(stream)
    writer.writerow(["molecule", "mu", "ne", "no", "e_hf", "e_qdft", "iterations", "converged"])
    for row in rows:
        writer.writerow(
            [
                molecule,
                _fmt(row.mu),
                active_electrons,
                active_orbitals,
                _fmt(row.e_hf),
                _fmt(row.e_total),
                row.iterations,
                str(row.converged).lower(),
            ]
        )
