"""File formats: field manifests, coefficient files, canonical JSON reports.

Fields travel as a JSON manifest {d, M, data} next to a little-endian binary
of interleaved (re, im) float64 in row-major grid order (CSV accepted for
d=1).  Coefficient boxes travel as CSV rows (n_1..n_d, re, im) or as a
binary file with a one-line JSON header {d, N_max}.  Reports are emitted as
canonical JSON: sorted keys, floats at 17 significant digits, so identical
runs are byte-identical.
"""
from __future__ import annotations

import dataclasses
import json
import os

import numpy as np

from .coeffs import CoeffArray
from .grid import Grid, SampledField

__all__ = [
    "write_field",
    "read_field",
    "write_coeffs_csv",
    "read_coeffs_csv",
    "write_coeffs_binary",
    "read_coeffs_binary",
    "read_coeffs",
    "read_input",
    "jsonable",
    "canonical_json",
]


def write_field(fld: SampledField, manifest_path: str, data_path: str | None = None) -> str:
    """Emit manifest JSON + binary (or CSV if data_path ends in .csv)."""
    if data_path is None:
        root, _ = os.path.splitext(manifest_path)
        data_path = root + ".bin"
    flat = fld.values.reshape(-1)
    if data_path.endswith(".csv"):
        if fld.grid.d != 1:
            raise ValueError("CSV field data is defined for d=1 only")
        x = np.arange(fld.grid.M) / fld.grid.M
        with open(data_path, "w") as fh:
            fh.write("x,re,im\n")
            for xv, v in zip(x, flat):
                fh.write(f"{xv:.17g},{v.real:.17g},{v.imag:.17g}\n")
    else:
        interleaved = np.empty((flat.size, 2), dtype="<f8")
        interleaved[:, 0] = flat.real
        interleaved[:, 1] = flat.imag
        interleaved.tofile(data_path)
    manifest = {
        "d": fld.grid.d,
        "M": fld.grid.M,
        "data": os.path.basename(data_path),
    }
    with open(manifest_path, "w") as fh:
        fh.write(canonical_json(manifest))
        fh.write("\n")
    return data_path


def read_field(manifest_path: str) -> SampledField:
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    for key in ("d", "M", "data"):
        if key not in manifest:
            raise ValueError(f"field manifest is missing key {key!r}")
    d, M = int(manifest["d"]), int(manifest["M"])
    data_path = os.path.join(os.path.dirname(os.path.abspath(manifest_path)), manifest["data"])
    if str(manifest["data"]).endswith(".csv"):
        if d != 1:
            raise ValueError("CSV field data is defined for d=1 only")
        vals = _read_csv_columns(data_path, 2)
        flat = vals[:, -2] + 1j * vals[:, -1]
    else:
        raw = np.fromfile(data_path, dtype="<f8")
        if raw.size != 2 * M**d:
            raise ValueError(
                f"field data has {raw.size} floats, expected {2 * M**d} "
                f"for d={d}, M={M}"
            )
        raw = raw.reshape(-1, 2)
        flat = raw[:, 0] + 1j * raw[:, 1]
    grid = Grid(d=d, M=M)
    return SampledField(grid=grid, values=flat.reshape((M,) * d))


def _read_csv_columns(path: str, min_cols: int) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                continue  # header line
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[1] < min_cols:
        raise ValueError(f"{path} has no numeric rows with >= {min_cols} columns")
    return arr


def write_coeffs_csv(coeffs: CoeffArray, path: str) -> None:
    axes = coeffs.lattice_axes()
    mesh = np.meshgrid(*axes, indexing="ij")
    ns = np.stack([m.ravel() for m in mesh], axis=-1)
    flat = coeffs.a.reshape(-1)
    with open(path, "w") as fh:
        fh.write(",".join(f"n{j + 1}" for j in range(coeffs.d)) + ",re,im\n")
        for n_row, v in zip(ns, flat):
            idx = ",".join(str(int(n)) for n in n_row)
            fh.write(f"{idx},{v.real:.17g},{v.imag:.17g}\n")


def read_coeffs_csv(path: str) -> CoeffArray:
    arr = _read_csv_columns(path, 3)
    d = arr.shape[1] - 2
    ns = arr[:, :d].astype(int)
    N_max = int(np.max(np.abs(ns)))
    side = 2 * N_max + 1
    a = np.zeros((side,) * d, dtype=complex)
    idx = tuple((ns[:, j] + N_max) for j in range(d))
    a[idx] = arr[:, d] + 1j * arr[:, d + 1]
    return CoeffArray(d=d, N_max=N_max, a=a, source="file")


def write_coeffs_binary(coeffs: CoeffArray, path: str) -> None:
    # one-line header: the reader splits header from payload at the first newline
    header = json.dumps(
        {"N_max": coeffs.N_max, "d": coeffs.d}, sort_keys=True, separators=(",", ":")
    )
    flat = coeffs.a.reshape(-1)
    interleaved = np.empty((flat.size, 2), dtype="<f8")
    interleaved[:, 0] = flat.real
    interleaved[:, 1] = flat.imag
    with open(path, "wb") as fh:
        fh.write(header.encode("utf-8"))
        fh.write(b"\n")
        fh.write(interleaved.tobytes())


def read_coeffs_binary(path: str) -> CoeffArray:
    with open(path, "rb") as fh:
        header_line = fh.readline()
        body = fh.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
        d, N_max = int(header["d"]), int(header["N_max"])
    except (ValueError, KeyError) as exc:
        raise ValueError(f"{path} has no valid coefficient header: {exc}") from None
    side = 2 * N_max + 1
    raw = np.frombuffer(body, dtype="<f8")
    if raw.size != 2 * side**d:
        raise ValueError(
            f"coefficient payload has {raw.size} floats, expected {2 * side**d}"
        )
    raw = raw.reshape(-1, 2)
    a = (raw[:, 0] + 1j * raw[:, 1]).reshape((side,) * d)
    return CoeffArray(d=d, N_max=N_max, a=a, source="file")


def read_coeffs(path: str) -> CoeffArray:
    if path.endswith(".csv"):
        return read_coeffs_csv(path)
    return read_coeffs_binary(path)


def read_input(path: str):
    """Field manifest (.json) or coefficient file, by extension."""
    if path.endswith(".json"):
        return read_field(path)
    return read_coeffs(path)


def jsonable(obj):
    """Recursively convert dataclasses/arrays/complex into JSON-ready data."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _render(obj, out: list, indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj)
        for i, k in enumerate(keys):
            out.append(f'{pad}  {json.dumps(str(k))}: ')
            _render(obj[k], out, indent + 1)
            out.append(",\n" if i + 1 < len(keys) else "\n")
        out.append(pad + "}")
        return
    if isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(obj):
            out.append(pad + "  ")
            _render(v, out, indent + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
        return
    if isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
        return
    if isinstance(obj, float):
        if not np.isfinite(obj):
            raise ValueError(f"non-finite float {obj} cannot enter a canonical report")
        out.append(format(obj, ".17g"))
        return
    if isinstance(obj, int):
        out.append(str(obj))
        return
    if isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=True))
        return
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, '.17g' floats, two-space indent."""
    out: list = []
    _render(jsonable(obj), out, 0)
    return "".join(out)
