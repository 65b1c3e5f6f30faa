"""JSON artifacts: frame files, operator files, analysis reports.

Complex entries are two-element ``[re, im]`` arrays of IEEE-754 doubles
throughout, so files are language-neutral and round-trip bit-exactly.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FrameFileError
from .frames import Frame, build_frame
from .krein import KreinSpace


def complex_to_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[complex_to_pair(z) for z in row] for row in M]


def real_matrix_or_none(M):
    return matrix_to_json(M) if M is not None else None


def _pair_to_complex(v, where: str) -> complex:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(x, (int, float)) for x in v)):
        raise FrameFileError(f"{where}: complex entries must be [re, im] pairs")
    return complex(v[0], v[1])


def json_to_matrix(doc, where: str) -> np.ndarray:
    if not isinstance(doc, list) or not doc:
        raise FrameFileError(f"{where}: expected a non-empty array of rows")
    rows = []
    width = None
    for i, row in enumerate(doc):
        if not isinstance(row, list) or (width is not None and len(row) != width):
            raise FrameFileError(f"{where}[{i}]: ragged or non-array row")
        width = len(row)
        rows.append([_pair_to_complex(v, f"{where}[{i}][{j}]")
                     for j, v in enumerate(row)])
    return np.array(rows, dtype=complex)


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FrameFileError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameFileError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise FrameFileError(f"{path}: top level must be an object")
    return doc


def _parse_space(doc, where: str = "space") -> KreinSpace:
    if where not in doc or not isinstance(doc[where], dict):
        raise FrameFileError(f"{where}: missing or not an object")
    sp = doc[where]
    for key in ("p", "q"):
        if key not in sp or not isinstance(sp[key], int) or isinstance(sp[key], bool):
            raise FrameFileError(f"{where}.{key}: missing or not an integer")
        if sp[key] < 0:
            raise FrameFileError(f"{where}.{key}: must be non-negative")
    if sp["p"] + sp["q"] < 1:
        raise FrameFileError(f"{where}: p + q must be at least 1")
    return KreinSpace.canonical(sp["p"], sp["q"])


def load_frame_file(path) -> Frame:
    """Parse {"space": {"p", "q"}, "vectors": [[[re, im], ...], ...]}."""
    doc = _load_json(path)
    space = _parse_space(doc)
    if "vectors" not in doc or not isinstance(doc["vectors"], list):
        raise FrameFileError("vectors: missing or not an array")
    if not doc["vectors"]:
        raise FrameFileError("vectors: at least one vector is required")
    vecs = []
    for i, v in enumerate(doc["vectors"]):
        if not isinstance(v, list) or len(v) != space.dim:
            raise FrameFileError(
                f"vectors[{i}]: must be an array of length p + q = {space.dim}")
        vecs.append([_pair_to_complex(z, f"vectors[{i}][{j}]")
                     for j, z in enumerate(v)])
    try:
        return build_frame(space, np.array(vecs, dtype=complex))
    except ValueError as exc:
        raise FrameFileError(f"vectors: {exc}") from exc


def frame_to_doc(frame: Frame) -> dict:
    return {
        "space": {"p": frame.space.p, "q": frame.space.q},
        "vectors": [[complex_to_pair(z) for z in frame.vectors[:, i]]
                    for i in range(frame.size)],
    }


def save_frame_file(frame: Frame, path) -> None:
    Path(path).write_text(json.dumps(frame_to_doc(frame), indent=2) + "\n")


def load_operator_file(path) -> tuple[KreinSpace, np.ndarray]:
    """Parse {"space": {"p", "q"}, "matrix": [[[re, im], ...], ...]}."""
    doc = _load_json(path)
    space = _parse_space(doc)
    if "matrix" not in doc:
        raise FrameFileError("matrix: missing")
    M = json_to_matrix(doc["matrix"], "matrix")
    if M.shape != (space.dim, space.dim):
        raise FrameFileError(
            f"matrix: expected shape {(space.dim, space.dim)}, got {M.shape}")
    return space, M


def save_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2, allow_nan=False) + "\n")
