"""Matrix files: headerless row-major CSV plus a JSON metadata sidecar.

For ``gram.csv`` the sidecar is ``gram.csv.json`` and holds at least
``{"n": int, "N": int, "kind": "frame" | "gram"}``; generator output adds
``seed``, ``clique`` and ``eps``.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .frame_core import FrameMatrix, GramMatrix

__all__ = ["sidecar_path", "write_matrix", "read_matrix", "read_gram", "read_frame"]


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def write_matrix(path, obj, **extra) -> None:
    """Write a :class:`GramMatrix` or :class:`FrameMatrix` and its sidecar."""
    path = Path(path)
    if isinstance(obj, GramMatrix):
        meta = {"n": obj.ambient_dim, "N": obj.N, "kind": "gram"}
    elif isinstance(obj, FrameMatrix):
        meta = {"n": obj.n, "N": obj.N, "kind": "frame"}
    else:
        raise TypeError(f"expected GramMatrix or FrameMatrix, got {type(obj).__name__}")
    meta.update(extra)
    np.savetxt(path, obj.entries, fmt="%.17g", delimiter=",")
    sidecar_path(path).write_text(json.dumps(meta, sort_keys=True) + "\n")


def read_matrix(path) -> tuple[np.ndarray, dict]:
    """Return ``(array, metadata)``; metadata is empty if no sidecar exists."""
    path = Path(path)
    a = np.loadtxt(path, delimiter=",", ndmin=2)
    side = sidecar_path(path)
    meta = json.loads(side.read_text()) if side.exists() else {}
    return a, meta


def read_gram(path, n: int | None = None) -> tuple[GramMatrix, dict]:
    a, meta = read_matrix(path)
    if meta.get("kind", "gram") != "gram":
        raise ValueError(f"{path} holds a {meta['kind']}, not a gram matrix")
    n = n if n is not None else meta.get("n")
    if n is None:
        raise ValueError(f"{path}: ambient dimension n not given and no sidecar found")
    if "N" in meta and meta["N"] != a.shape[0]:
        raise ValueError(f"{path}: sidecar says N={meta['N']} but matrix has {a.shape[0]} rows")
    return GramMatrix(a, int(n)), meta


def read_frame(path) -> tuple[FrameMatrix, dict]:
    a, meta = read_matrix(path)
    if meta.get("kind", "frame") != "frame":
        raise ValueError(f"{path} holds a {meta['kind']}, not a frame")
    return FrameMatrix(a), meta
