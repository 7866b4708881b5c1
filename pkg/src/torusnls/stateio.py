"""On-disk formats for spectral states and sequences.

Binary state dump (extension anything but .json), all little-endian:

    offset  size  content
    0       4     magic b"TNLS"
    4       4     format version, uint32 (currently 1)
    8       4     dim, uint32
    12      4     n_per_axis, uint32
    16      16    normalization tag, ASCII padded with NUL
                  (currently b"mode-amplitude"): coefficients are the
                  amplitudes of e^{i<k,x>} in the canonical flat layout
    32      -     payload: n_per_axis^dim pairs of float64 (re, im)

JSON state dump (extension .json):

    {"format": "torusnls-spectral", "version": 1, "dim": d,
     "n_per_axis": N, "normalization": "mode-amplitude",
     "re": [...], "im": [...]}

Sequence file (JSON, consumed by the bourgain-norm subcommand):

    {"format": "torusnls-sequence", "version": 1, "tau": t, "dim": d,
     "n_per_axis": N, "normalization": "mode-amplitude",
     "fields": [{"re": [...], "im": [...]}, ...]}
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .bourgain import SequenceSample
from .spectral import SpectralField, make_grid

MAGIC = b"TNLS"
FORMAT_VERSION = 1
NORMALIZATION = "mode-amplitude"
_HEADER = struct.Struct("<4sIII16s")


def save_field_binary(path, field: SpectralField) -> None:
    tag = NORMALIZATION.encode().ljust(16, b"\x00")
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, field.grid.dim, field.grid.n_per_axis, tag)
    payload = np.empty((field.grid.n_modes, 2))
    payload[:, 0] = field.coeffs.real
    payload[:, 1] = field.coeffs.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.astype("<f8").tobytes())


def load_field_binary(path) -> SpectralField:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated state file")
    magic, version, dim, n, tag = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: not a torusnls state file (bad magic {magic!r})")
    if version != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {version}")
    if tag.rstrip(b"\x00").decode() != NORMALIZATION:
        raise ValueError(f"{path}: unknown normalization tag {tag!r}")
    grid = make_grid(int(dim), int(n))
    expect = _HEADER.size + 16 * grid.n_modes
    if len(raw) != expect:
        raise ValueError(f"{path}: payload has {len(raw) - _HEADER.size} bytes, expected {16 * grid.n_modes}")
    payload = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(-1, 2)
    return SpectralField(grid, payload[:, 0] + 1j * payload[:, 1])


def save_field_json(path, field: SpectralField) -> None:
    doc = {
        "format": "torusnls-spectral",
        "version": FORMAT_VERSION,
        "dim": field.grid.dim,
        "n_per_axis": field.grid.n_per_axis,
        "normalization": NORMALIZATION,
        "re": field.coeffs.real.tolist(),
        "im": field.coeffs.imag.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_field_json(path) -> SpectralField:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "torusnls-spectral":
        raise ValueError(f"{path}: not a torusnls spectral JSON file")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {doc.get('version')}")
    grid = make_grid(int(doc["dim"]), int(doc["n_per_axis"]))
    return SpectralField(grid, np.asarray(doc["re"]) + 1j * np.asarray(doc["im"]))


def save_field(path, field: SpectralField) -> None:
    """Dispatch on extension: .json gets the JSON form, anything else binary."""
    if str(path).endswith(".json"):
        save_field_json(path, field)
    else:
        save_field_binary(path, field)


def load_field(path) -> SpectralField:
    if str(path).endswith(".json"):
        return load_field_json(path)
    return load_field_binary(path)


def save_sequence_json(path, seq: SequenceSample) -> None:
    doc = {
        "format": "torusnls-sequence",
        "version": FORMAT_VERSION,
        "tau": seq.tau,
        "dim": seq.grid.dim,
        "n_per_axis": seq.grid.n_per_axis,
        "normalization": NORMALIZATION,
        "fields": [
            {"re": f.coeffs.real.tolist(), "im": f.coeffs.imag.tolist()} for f in seq.fields
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_sequence_json(path) -> SequenceSample:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != "torusnls-sequence":
        raise ValueError(f"{path}: not a torusnls sequence file")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format version {doc.get('version')}")
    grid = make_grid(int(doc["dim"]), int(doc["n_per_axis"]))
    fields = [
        SpectralField(grid, np.asarray(f["re"]) + 1j * np.asarray(f["im"]))
        for f in doc["fields"]
    ]
    return SequenceSample(tau=float(doc["tau"]), fields=fields)
