"""File formats: matrix JSON, signal CSV with JSON sidecar, raw phase-space
tables with sidecar, and PGM magnitude plots.

Round-trip guarantee: rational matrices re-read bit-exact ("p/q" strings),
float payloads re-read bit-exact (repr'd floats in JSON, raw float64 in
binary tables).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .distributions import TFGrid
from .grids import DiscreteSignal, GridSpec
from .matrices import FLOAT, RATIONAL, Matrix


def _frac_str(x):
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def matrix_to_dict(m):
    if m.mode == RATIONAL:
        entries = [[_frac_str(x) for x in row] for row in m.entries()]
    else:
        entries = m.entries()
    return {"rows": m.rows, "cols": m.cols, "mode": m.mode, "entries": entries}


def matrix_from_dict(obj):
    mode = obj["mode"]
    entries = obj["entries"]
    if len(entries) != obj["rows"] or any(len(r) != obj["cols"] for r in entries):
        raise ValueError("entry grid does not match declared shape")
    if mode == RATIONAL:
        return Matrix.rational([[Fraction(str(x)) for x in row] for row in entries])
    if mode == FLOAT:
        return Matrix.from_float(entries)
    raise ValueError(f"unknown matrix mode {mode!r}")


def save_matrix(path, m):
    Path(path).write_text(json.dumps(matrix_to_dict(m), indent=1) + "\n")


def load_matrix(path):
    return matrix_from_dict(json.loads(Path(path).read_text()))


def _sidecar(path):
    return Path(str(path) + ".json")


def save_signal(path, sig):
    """CSV of "re,im" lines, samples flattened row-major; sidecar holds the grid."""
    path = Path(path)
    flat = sig.samples.reshape(-1)
    lines = [f"{float(z.real)!r},{float(z.imag)!r}" for z in flat]
    path.write_text("\n".join(lines) + "\n")
    _sidecar(path).write_text(
        json.dumps({"d": sig.spec.d, "N": sig.spec.n, "T": sig.spec.extent}) + "\n"
    )


def load_signal(path):
    path = Path(path)
    meta = json.loads(_sidecar(path).read_text())
    spec = GridSpec(d=int(meta["d"]), n=int(meta["N"]), extent=float(meta["T"]))
    vals = []
    for line in path.read_text().strip().splitlines():
        re_s, im_s = line.split(",")
        vals.append(complex(float(re_s), float(im_s)))
    arr = np.array(vals, dtype=complex)
    if arr.size != spec.n ** spec.d:
        raise ValueError(f"sample count {arr.size} does not match grid {spec.shape}")
    return DiscreteSignal(spec, arr.reshape(spec.shape))


def save_tfgrid(path, table):
    """Raw little-endian float64 interleaved (re, im), row-major, plus sidecar."""
    path = Path(path)
    flat = table.values.reshape(-1)
    inter = np.empty(2 * flat.size, dtype="<f8")
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    path.write_bytes(inter.tobytes())
    _sidecar(path).write_text(
        json.dumps(
            {
                "d": table.spec.d,
                "N": table.spec.n,
                "T": table.spec.extent,
                "provenance": table.provenance,
            }
        )
        + "\n"
    )


def load_tfgrid(path):
    path = Path(path)
    meta = json.loads(_sidecar(path).read_text())
    spec = GridSpec(d=int(meta["d"]), n=int(meta["N"]), extent=float(meta["T"]))
    raw = np.frombuffer(path.read_bytes(), dtype="<f8")
    if raw.size != 2 * spec.n ** spec.d:
        raise ValueError("payload size does not match grid")
    vals = raw[0::2] + 1j * raw[1::2]
    return TFGrid(spec, vals.reshape(spec.shape), provenance=meta.get("provenance", ""))


def tfgrid_to_csv(path, table):
    flat = table.values.reshape(-1)
    Path(path).write_text(
        "\n".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in flat) + "\n"
    )


def write_pgm(path, table, floor_ratio=1e-6):
    """8-bit P5 magnitude image with log scaling; rows follow the first axis."""
    mag = np.abs(table.values)
    if mag.ndim != 2:
        raise ValueError("plots need a 2-axis table")
    peak = float(np.max(mag))
    if peak == 0.0:
        img = np.zeros(mag.shape, dtype=np.uint8)
    else:
        floor = peak * floor_ratio
        scaled = np.log(np.maximum(mag, floor) / floor) / np.log(1.0 / floor_ratio)
        img = np.clip(np.rint(255 * scaled), 0, 255).astype(np.uint8)
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.tobytes())
