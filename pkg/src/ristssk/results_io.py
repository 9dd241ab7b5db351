"""CSV persistence for sweep results and plot data."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .config import SystemConfig
from .engine import BerPoint, SweepResult

RESULTS_HEADER = ("snr_db", "trials", "bits_sent", "bit_errors", "block_errors", "ber", "bler", "throughput_bpcu")
PLOT_HEADER = ("label", "snr_db", "ber", "throughput_bpcu")

PathLike = Union[str, os.PathLike]


@dataclass(frozen=True)
class RunManifest:
    config: SystemConfig
    label: str
    results_path: Path
    plot_path: Path | None = None

    def __post_init__(self):
        if not self.label.strip():
            raise ValueError("run label must not be empty")


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _write(path: PathLike, header: Iterable[str], rows: Iterable[Iterable]) -> Path:
    path = Path(path)
    try:
        if path.parent != Path(""):
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def write_results(result: SweepResult, path: PathLike) -> Path:
    rows = (
        (fmt(p.snr_db), p.trials, p.bits_sent, p.bit_errors, p.block_errors, fmt(p.ber), fmt(p.bler), fmt(tp))
        for p, tp in zip(result.points, result.throughput)
    )
    return _write(path, RESULTS_HEADER, rows)


def read_results(path: PathLike) -> list[dict[str, float]]:
    """Read a results CSV back into dicts of numbers (counts as int)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULTS_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        ints = {"trials", "bits_sent", "bit_errors", "block_errors"}
        return [{k: int(v) if k in ints else float(v) for k, v in row.items()} for row in reader]


def points_from_rows(rows: list[dict[str, float]]) -> list[BerPoint]:
    return [BerPoint(r["snr_db"], r["trials"], r["bit_errors"], r["bits_sent"], r["block_errors"]) for r in rows]


def emit_plot_data(results: list[SweepResult], path: PathLike) -> Path:
    """Long-format ``label,snr_db,ber,throughput_bpcu`` rows sorted by (label, snr_db)."""
    if not results:
        raise ValueError("emit_plot_data needs at least one sweep result")
    rows = sorted(
        ((r.label, p.snr_db, p.ber, tp) for r in results for p, tp in zip(r.points, r.throughput)),
        key=lambda row: (row[0], row[1]),
    )
    return _write(path, PLOT_HEADER, ((label, fmt(s), fmt(b), fmt(t)) for label, s, b, t in rows))
