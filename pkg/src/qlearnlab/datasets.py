"""JSONL persistence for measurement records.

Each file starts with one header object (``{"header": {...}}``) followed by
one JSON object per record.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bell import BellDataset
from .dynamics import OutcomeMatrix
from .ensemble import EnsembleSpec
from .errors import ValidationError
from .noise import ReadoutProfile
from .shadow import ShadowDataset

_LETTERS = "IXYZ"


def _bits_str(row) -> str:
    return "".join("1" if b else "0" for b in row)


def _parse_bits(text: str) -> list[int]:
    if set(text) - {"0", "1"}:
        raise ValidationError(f"not a bit string: {text!r}")
    return [int(c) for c in text]


def _header(kind: str, spec, seed, noise, extra=None) -> dict:
    h = {
        "kind": kind,
        "spec": None if spec is None else spec.to_json(),
        "seed": seed,
        "noise": None if noise is None else noise.to_json(),
    }
    if extra:
        h.update(extra)
    return h


def _write(path, header: dict, lines) -> Path:
    path = Path(path)
    with path.open("w") as fh:
        fh.write(json.dumps({"header": header}, sort_keys=True) + "\n")
        for obj in lines:
            fh.write(json.dumps(obj, sort_keys=True) + "\n")
    return path


def _read(path, kind: str):
    with Path(path).open() as fh:
        first = fh.readline()
        if not first:
            raise ValidationError(f"{path}: empty dataset file")
        header = json.loads(first).get("header")
        if header is None or header.get("kind") != kind:
            raise ValidationError(f"{path}: expected a {kind} header")
        records = [json.loads(line) for line in fh if line.strip()]
    return header, records


def _meta(header):
    spec = None if header.get("spec") is None else EnsembleSpec.from_json(header["spec"])
    noise = None if header.get("noise") is None else ReadoutProfile.from_json(header["noise"])
    return spec, header.get("seed"), noise


def save_bell_dataset(data: BellDataset, path) -> Path:
    header = _header("bell", data.spec, data.seed, data.noise, {"n": data.n, "N_Q": data.n_q})
    return _write(path, header, ({"t": t, "bits": _bits_str(row)} for t, row in enumerate(data.bits)))


def load_bell_dataset(path) -> BellDataset:
    header, records = _read(path, "bell")
    spec, seed, noise = _meta(header)
    records.sort(key=lambda r: r["t"])
    bits = np.array([_parse_bits(r["bits"]) for r in records], dtype=np.uint8).reshape(len(records), -1)
    if len(records) == 0:
        bits = np.zeros((0, 2 * header["n"]), dtype=np.uint8)
    return BellDataset.from_bits(bits, spec=spec, seed=seed, noise=noise)


def save_shadow_dataset(data: ShadowDataset, path) -> Path:
    header = _header("shadow", data.spec, data.seed, data.noise, {"n": data.n, "N": data.size})
    lines = (
        {"bases": "".join(_LETTERS[b] for b in bases), "bits": _bits_str(bits)}
        for bases, bits in zip(data.bases, data.bits)
    )
    return _write(path, header, lines)


def load_shadow_dataset(path) -> ShadowDataset:
    header, records = _read(path, "shadow")
    spec, seed, noise = _meta(header)
    n = header["n"]
    bases = np.array([[_LETTERS.index(c) for c in r["bases"]] for r in records], dtype=np.int8).reshape(-1, n)
    bits = np.array([_parse_bits(r["bits"]) for r in records], dtype=np.uint8).reshape(-1, n)
    return ShadowDataset(bases, bits, spec=spec, seed=seed, noise=noise)


def save_outcome_matrix(m: OutcomeMatrix, path) -> Path:
    header = {"kind": "outcomes", **m.meta, "strategy": m.strategy, "width": m.width}
    return _write(path, header, ({"t": t, "bits": _bits_str(row)} for t, row in enumerate(m.rows)))


def load_outcome_matrix(path) -> OutcomeMatrix:
    header, records = _read(path, "outcomes")
    records.sort(key=lambda r: r["t"])
    rows = np.array([_parse_bits(r["bits"]) for r in records], dtype=np.uint8).reshape(-1, header["width"])
    meta = {k: v for k, v in header.items() if k not in ("kind", "width", "strategy")}
    return OutcomeMatrix(rows, header["strategy"], meta)
