"""JSON operator-set files and Gram CSV export.

Matrices are stored as nested lists of ``[re, im]`` float pairs.  Python's
float repr round-trips exactly, so write -> read is bit-exact.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .construct import OrthoSet, check_kind
from .core import AntiLinearOp, DEFAULT_TOL, is_conjugation, is_skew_conjugation

SCHEMA_VERSION = "1"
FILE_KINDS = ("conjugation", "skew", "general")


class FormatError(ValueError):
    """An operator-set file does not follow the schema."""


@dataclass
class OperatorSetFile:
    dim: int
    kind: str
    matrices: list = field(default_factory=list)
    meta: str = ""
    tol: float = DEFAULT_TOL
    schema_version: str = SCHEMA_VERSION

    @property
    def ops(self) -> list[AntiLinearOp]:
        return [AntiLinearOp(m) for m in self.matrices]

    @classmethod
    def from_set(cls, s: OrthoSet, tol: float = DEFAULT_TOL) -> "OperatorSetFile":
        return cls(s.dim, s.kind, [op.mat for op in s.ops], s.meta, tol)

    def to_set(self) -> OrthoSet:
        return OrthoSet(self.dim, check_kind(self.kind), tuple(self.ops), self.meta)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "dim": self.dim,
            "kind": self.kind,
            "meta": self.meta,
            "tol": self.tol,
            "matrices": [encode_matrix(m) for m in self.matrices],
        }

    @classmethod
    def from_dict(cls, data: dict, check: bool = True) -> "OperatorSetFile":
        try:
            version = str(data["schema_version"])
            dim = data["dim"]
            kind = data["kind"]
            raw = data["matrices"]
        except (KeyError, TypeError) as exc:
            raise FormatError(f"missing field: {exc}") from None
        if version != SCHEMA_VERSION:
            raise FormatError(f"unsupported schema_version {version!r}")
        if not isinstance(dim, int) or dim < 1:
            raise FormatError(f"dim must be a positive integer, got {dim!r}")
        if kind not in FILE_KINDS:
            raise FormatError(f"kind must be one of {FILE_KINDS}, got {kind!r}")
        mats = [decode_matrix(m, dim) for m in raw]
        out = cls(dim, kind, mats, str(data.get("meta", "")), float(data.get("tol", DEFAULT_TOL)))
        if check:
            out.check_structure()
        return out

    def check_structure(self) -> None:
        """Enforce the per-operator predicate implied by ``kind``."""
        if self.kind == "general":
            return
        pred = is_conjugation if self.kind == "conjugation" else is_skew_conjugation
        for i, op in enumerate(self.ops):
            if not pred(op, self.tol):
                raise FormatError(f"matrix {i} is not a {self.kind} at tol {self.tol}")


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(raw, dim: int) -> np.ndarray:
    try:
        arr = np.array(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"matrix is not numeric: {exc}") from None
    if arr.shape != (dim, dim, 2):
        raise FormatError(f"matrix has shape {arr.shape}, expected {(dim, dim, 2)}")
    if not np.all(np.isfinite(arr)):
        raise FormatError("matrix entries must be finite")
    return arr[..., 0] + 1j * arr[..., 1]


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def write_set(path, f: OperatorSetFile) -> None:
    Path(path).write_text(dumps(f.to_dict()))


def read_set(path, check: bool = True) -> OperatorSetFile:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    return OperatorSetFile.from_dict(data, check=check)


def format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def write_gram_csv(path, gram: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in np.asarray(gram):
            w.writerow([format_complex(complex(z)) for z in row])


def read_gram_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [[complex(c.replace("i", "j")) for c in row] for row in csv.reader(fh)]
    return np.array(rows, dtype=np.complex128)


def matrices_to_ops(mats: Sequence) -> list[AntiLinearOp]:
    return [m if isinstance(m, AntiLinearOp) else AntiLinearOp(m) for m in mats]
