"""CSV and JSON output for matrices, sets, profiles and tables.

Matrix files start with a ``T,N,kind`` line followed by T rows of N entries
written as ``re+imi`` or ``re-imi``. Floats use the shortest round-trip
``repr``, so reading a file back reproduces every entry bit for bit.
"""

import csv
import json
import math
import re
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from ..config import ExperimentConfig
from ..errors import InvalidParameter
from ..fourier import DensityProfile, SpikeReport
from ..majorant import MajorantProfile
from ..models import ComplexMatrix, IntegerSet, RowSubset
from ..planted import StatTable

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^([+-]?{_NUMBER})([+-])({_NUMBER})i$")


def format_complex(z: complex) -> str:
    re_part, im_part = float(z.real), float(z.imag)
    sign = "-" if math.copysign(1.0, im_part) < 0 else "+"
    return f"{re_part!r}{sign}{abs(im_part)!r}i"


def parse_complex(text: str) -> complex:
    match = _COMPLEX.match(text.strip())
    if not match:
        raise InvalidParameter(f"Malformed complex entry: '{text}'")
    re_text, sign, im_text = match.groups()
    im_part = float(im_text)
    return complex(float(re_text), -im_part if sign == "-" else im_part)


def write_matrix(M: ComplexMatrix, output_path: Path) -> Path:
    """Write a matrix in the ``T,N,kind`` CSV format."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow([M.T, M.N, M.kind])
        for row in M.data:
            writer.writerow([format_complex(z) for z in row])
    return output_path


def _parse_header(header: list[str], input_path: Path) -> tuple[int, int, str]:
    if len(header) != 3:
        raise InvalidParameter(f"Matrix header must be 'T,N,kind', got {header}")
    try:
        T, N = int(header[0]), int(header[1])
    except ValueError:
        raise InvalidParameter(
            f"Matrix header of {input_path} needs integer T and N, got {header[:2]}"
        ) from None
    if T < 1 or N < 1:
        raise InvalidParameter(f"Matrix header of {input_path} needs T, N >= 1, got {T}x{N}")
    return T, N, header[2]


def read_matrix(input_path: Path) -> ComplexMatrix:
    """Read a matrix written by ``write_matrix``.

    Raises:
        InvalidParameter: If the header, an entry or the body shape is malformed.
    """
    try:
        with open(input_path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            try:
                header = next(reader)
            except StopIteration:
                raise InvalidParameter(f"Empty matrix file: {input_path}") from None
            T, N, kind = _parse_header(header, input_path)
            rows = [[parse_complex(cell) for cell in row] for row in reader if row]
    except (UnicodeDecodeError, csv.Error) as e:
        raise InvalidParameter(f"Cannot read matrix file {input_path}: {e}") from e
    if len(rows) != T or any(len(row) != N for row in rows):
        raise InvalidParameter(f"Matrix body does not match header {T}x{N}")
    return ComplexMatrix(np.asarray(rows, dtype=np.complex128), kind=kind)


def write_integer_set(W: IntegerSet, output_path: Path) -> Path:
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text("".join(f"{int(t)}\n" for t in W.elements), encoding="utf-8")
    return output_path


def read_integer_set(input_path: Path) -> IntegerSet:
    """Newline-delimited integers; blank lines are ignored."""
    lines = input_path.read_text(encoding="utf-8").split()
    try:
        return IntegerSet.from_iterable(int(v) for v in lines)
    except ValueError as e:
        raise InvalidParameter(f"Set file must hold one integer per line: {e}") from e


def _write_rows(output_path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return output_path


def write_density_profile(profile: DensityProfile, output_path: Path) -> Path:
    return _write_rows(output_path, ["grid", "value"], profile.rows())


def write_spike_report(report: SpikeReport, output_path: Path) -> Path:
    rows = [(s.p, s.q, s.location, s.count, s.mass) for s in report.spikes]
    return _write_rows(output_path, ["p", "q", "location", "count", "mass"], rows)


def write_majorant_profile(profile: MajorantProfile, output_path: Path) -> Path:
    return _write_rows(output_path, ["t", "value"], profile.rows())


def write_ssv_table(
    rows: Iterable[tuple[int, float, str, RowSubset]], output_path: Path
) -> Path:
    """Rows of (S, value, method, subset); the subset is space-separated 1-based rows."""
    body = [
        (S, value, method, " ".join(str(i) for i in subset)) for S, value, method, subset in rows
    ]
    return _write_rows(output_path, ["S", "value", "method", "subset"], body)


def write_json(data: Any, output_path: Path) -> Path:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return output_path


def write_stat_table(
    table: StatTable, config: ExperimentConfig, output_dir: Path
) -> tuple[Path, Path]:
    """Write ``stats.csv`` and the ``stats.json`` sidecar (config, hash, seeds, errors)."""
    rows = [(r.alpha, r.sigma, r.trial, r.arm, r.statistic, r.value) for r in table.records]
    csv_path = _write_rows(
        output_dir / "stats.csv", ["alpha", "sigma", "trial", "arm", "statistic", "value"], rows
    )
    sidecar = {
        "config": config.model_dump(),
        "config_hash": table.config_hash,
        "seeds": list(table.seeds),
        "errors": list(table.errors),
    }
    json_path = write_json(sidecar, output_dir / "stats.json")
    return csv_path, json_path
