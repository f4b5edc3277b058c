"""On-disk containers: the SIDX binary embedding format, CSV interchange,
and the run manifest tying baseline, candidates and accuracies together.

SIDX layout (all little-endian):
    offset 0   magic   "SIDX" (4 bytes)
    offset 4   version u8, currently 1
    offset 5   dtype   u8: 0 = float32, 1 = float64
    offset 6   reserved, 2 zero bytes
    offset 8   q       u64
    offset 16  d       u64
    offset 24  labels  q * u32
    then       data    q * d values, row-major
Total size must equal 24 + 4*q + q*d*width(dtype).
"""
from __future__ import annotations

import csv
import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .core import LabeledFeatureSet, validate_feature_set
from .errors import (
    BadMagic,
    DuplicateCandidateName,
    EmptyCandidateList,
    ManifestError,
    MissingLabelColumn,
    NonNumericCell,
    RaggedRows,
    SepidxError,
    SizeMismatch,
    UnsupportedVersion,
)

MAGIC = b"SIDX"
HEADER_LEN = 24
SIDX_VERSION = 1
_WIDTH = {0: 4, 1: 8}
_NPTYPE = {0: "<f4", 1: "<f8"}

MANIFEST_SCHEMA_ID = "sepidx-manifest/1"

_MANIFEST_JSONSCHEMA = {
    "type": "object",
    "required": ["schema", "baseline", "candidates"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": MANIFEST_SCHEMA_ID},
        "baseline": {
            "type": "object",
            "oneOf": [
                {"required": ["path"], "properties": {"path": {"type": "string"}},
                 "additionalProperties": False},
                {"required": ["si0"],
                 "properties": {"si0": {"type": "number", "minimum": 0, "maximum": 1}},
                 "additionalProperties": False},
            ],
        },
        "candidates": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "path": {"type": "string"},
                    "precomputed_si": {"type": "number", "minimum": 0, "maximum": 1},
                    "accuracy": {"type": "number", "minimum": 0, "maximum": 1},
                },
                "oneOf": [
                    {"required": ["path"], "not": {"required": ["precomputed_si"]}},
                    {"required": ["precomputed_si"], "not": {"required": ["path"]}},
                ],
            },
        },
        "options": {"type": "object"},
    },
}


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


# --- SIDX ---

def read_sidx_bytes(data: bytes, name: str = "") -> LabeledFeatureSet:
    """Decode a SIDX byte string; raises a FormatError subclass on any
    malformed input (total: error or value, never a crash)."""
    if len(data) < HEADER_LEN:
        raise SizeMismatch(f"file too short for header: {len(data)} < {HEADER_LEN}")
    if data[:4] != MAGIC:
        raise BadMagic(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    version = data[4]
    if version != SIDX_VERSION:
        raise UnsupportedVersion(f"unsupported SIDX version {version}")
    dtype = data[5]
    if dtype not in _WIDTH:
        raise UnsupportedVersion(f"unknown dtype code {dtype}")
    if data[6:8] != b"\x00\x00":
        raise UnsupportedVersion("reserved header bytes must be zero")
    q, d = struct.unpack_from("<QQ", data, 8)
    if q > (1 << 40) or d > (1 << 40):
        raise SizeMismatch(f"implausible dimensions q={q}, d={d}")
    expected = HEADER_LEN + 4 * q + q * d * _WIDTH[dtype]
    if len(data) != expected:
        raise SizeMismatch(
            f"declared q={q}, d={d}, dtype={dtype} implies {expected} bytes, "
            f"file has {len(data)}")
    labels = np.frombuffer(data, dtype="<u4", count=q, offset=HEADER_LEN)
    values = np.frombuffer(data, dtype=_NPTYPE[dtype], count=q * d,
                           offset=HEADER_LEN + 4 * q)
    points = values.reshape(q, d)
    meta = {}
    if dtype == 1:
        # engine storage is float32: narrow with round-to-nearest-even
        points = points.astype(np.float32)
        meta["narrowed_from"] = "float64"
    return validate_feature_set(
        LabeledFeatureSet(points=np.ascontiguousarray(points, dtype=np.float32),
                          labels=labels.astype(np.uint32), name=name, meta=meta))


def read_sidx(path: str | Path) -> LabeledFeatureSet:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise SepidxError(f"cannot read {path}: {e}") from e
    return read_sidx_bytes(data, name=path.stem)


def write_sidx_bytes(fs: LabeledFeatureSet) -> bytes:
    fs = validate_feature_set(fs)
    header = MAGIC + bytes([SIDX_VERSION, 0, 0, 0]) + struct.pack("<QQ", fs.q, fs.d)
    return (header
            + fs.labels.astype("<u4").tobytes()
            + fs.points.astype("<f4").tobytes())


def write_sidx(fs: LabeledFeatureSet, path: str | Path) -> None:
    """Byte-deterministic for a given feature set."""
    path = Path(path)
    try:
        path.write_bytes(write_sidx_bytes(fs))
    except OSError as e:
        raise SepidxError(f"cannot write {path}: {e}") from e


# --- CSV ---

def read_csv(path: str | Path, label_column: str) -> LabeledFeatureSet:
    """Rectangular numeric CSV with a header row; features are all
    non-label columns in header order."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SepidxError(f"cannot read {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise NonNumericCell(f"{path}: not valid UTF-8 text: {e}") from e
    try:
        rows = list(csv.reader(text.splitlines()))
    except csv.Error as e:
        raise RaggedRows(f"{path}: malformed CSV: {e}") from e
    if not rows:
        raise SizeMismatch(f"{path}: empty CSV")
    header = rows[0]
    if label_column not in header:
        raise MissingLabelColumn(
            f"{path}: no column {label_column!r} in header {header}")
    li = header.index(label_column)
    feat_cols = [i for i in range(len(header)) if i != li]
    if not feat_cols:
        raise MissingLabelColumn(f"{path}: no feature columns besides the label")
    points = []
    labels = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise RaggedRows(
                f"{path}: line {lineno} has {len(row)} cells, header has {len(header)}")
        try:
            lab = int(row[li])
        except ValueError as e:
            raise NonNumericCell(
                f"{path}: line {lineno}, column {label_column!r}: "
                f"{row[li]!r} is not an integer label") from e
        vals = []
        for i in feat_cols:
            try:
                vals.append(float(row[i]))
            except ValueError as e:
                raise NonNumericCell(
                    f"{path}: line {lineno}, column {header[i]!r}: "
                    f"{row[i]!r} is not numeric") from e
        points.append(vals)
        labels.append(lab)
    if not points:
        raise SizeMismatch(f"{path}: CSV has a header but no data rows")
    return validate_feature_set(LabeledFeatureSet(
        points=np.asarray(points, dtype=np.float32),
        labels=np.asarray(labels),
        name=path.stem,
    ))


def write_csv(fs: LabeledFeatureSet, path: str | Path, label_column: str = "label") -> None:
    fs = validate_feature_set(fs)
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(fs.d)] + [label_column])
        for row, lab in zip(fs.points, fs.labels):
            w.writerow([format(float(v), ".9g") for v in row] + [int(lab)])


# --- run manifest ---

@dataclass(frozen=True)
class ManifestCandidate:
    name: str
    path: Path | None = None
    precomputed_si: float | None = None
    accuracy: float | None = None


@dataclass(frozen=True)
class RunManifest:
    baseline_path: Path | None
    baseline_si0: float | None
    candidates: tuple[ManifestCandidate, ...]
    options: dict = field(default_factory=dict)
    digests: dict = field(default_factory=dict)


def load_manifest(path: str | Path) -> RunManifest:
    """Load and validate a sepidx-manifest/1 JSON file; relative paths are
    resolved against the manifest's directory and must exist."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SepidxError(f"cannot read {path}: {e}") from e
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ManifestError(f"{path}: invalid JSON: {e}") from e
    try:
        jsonschema.validate(obj, _MANIFEST_JSONSCHEMA)
    except jsonschema.ValidationError as e:
        pointer = "/" + "/".join(str(p) for p in e.absolute_path)
        raise ManifestError(f"{path}: schema violation at {pointer}: {e.message}") from e

    if not obj["candidates"]:
        raise EmptyCandidateList(f"{path}: empty candidates list")
    names = [c["name"] for c in obj["candidates"]]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise DuplicateCandidateName(f"{path}: duplicate candidate names: {dupes}")

    base = path.parent
    digests = {}

    def resolve(rel: str, owner: str) -> Path:
        p = (base / rel).resolve() if not Path(rel).is_absolute() else Path(rel)
        if not p.is_file():
            raise ManifestError(f"{path}: {owner}: no such file: {p}")
        digests[owner] = file_digest(p)
        return p

    baseline_path = None
    baseline_si0 = None
    if "path" in obj["baseline"]:
        baseline_path = resolve(obj["baseline"]["path"], "baseline")
    else:
        baseline_si0 = float(obj["baseline"]["si0"])

    cands = []
    for c in obj["candidates"]:
        cands.append(ManifestCandidate(
            name=c["name"],
            path=resolve(c["path"], c["name"]) if "path" in c else None,
            precomputed_si=c.get("precomputed_si"),
            accuracy=c.get("accuracy"),
        ))
    return RunManifest(
        baseline_path=baseline_path,
        baseline_si0=baseline_si0,
        candidates=tuple(cands),
        options=obj.get("options", {}),
        digests=digests,
    )
