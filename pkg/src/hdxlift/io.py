"""JSON artifacts with canonical serialisation and content hashes.

Files are written with sorted keys and a fixed layout, so identical inputs
give byte-identical files.  A hash covers only an artifact's content
(never its metadata), which lets lineage blocks be re-checked offline.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from .complex import SimplicialComplex, build_from_top_faces, face_key
from .errors import DomainError
from .lifting import Signing

FORMAT_VERSION = 1


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def digest(obj: Any) -> str:
    return "sha256:" + hashlib.sha256(canonical_dumps(obj).encode()).hexdigest()


def write_json(path, obj: Any) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n")


def read_json(path) -> Any:
    return json.loads(Path(path).read_text())


def _complex_content(X: SimplicialComplex) -> dict:
    return {"k": X.k, "vertices": X.vertex_count, "top_faces": [list(f) for f in X.top_faces]}


def complex_hash(X: SimplicialComplex) -> str:
    return digest(_complex_content(X))


def complex_to_json(X: SimplicialComplex, meta: dict | None = None, lineage: dict | None = None) -> dict:
    out = _complex_content(X)
    out["content_hash"] = digest(out)
    if X.labels is not None:
        out["labels"] = list(X.labels)
    if lineage is not None:
        out["lineage"] = lineage
    if meta is not None:
        out["meta"] = meta
    return out


def complex_from_json(data: dict) -> SimplicialComplex:
    """Load the complex format; non-integer vertex labels are re-mapped to ``0..n-1``."""
    k = int(data["k"])
    tops = data["top_faces"]
    labels = data.get("labels")
    vertices = data.get("vertices")
    flat = [v for f in tops for v in f]
    if labels is None and any(not isinstance(v, int) or isinstance(v, bool) for v in flat):
        labels = sorted({v for v in flat}, key=lambda x: (str(type(x)), str(x)))
        index = {v: i for i, v in enumerate(labels)}
        tops = [[index[v] for v in f] for f in tops]
        vertices = len(labels)
    elif labels is not None and vertices is None:
        vertices = len(labels)
    return build_from_top_faces(k, tops, vertices=vertices, labels=labels)


def signing_hash(f: Signing) -> str:
    return digest({"faces": f.as_mapping()})


def signing_to_json(f: Signing, meta: dict | None = None) -> dict:
    out = {"faces": f.as_mapping(), "complex_hash": complex_hash(f.complex)}
    if meta is not None:
        out["meta"] = meta
    return out


def signing_from_json(data: dict, X: SimplicialComplex) -> Signing:
    expected = data.get("complex_hash")
    if expected is not None and expected != complex_hash(X):
        raise DomainError(f"signing was made for complex {expected}, not {complex_hash(X)}")
    return Signing.from_mapping(X, data["faces"])


def lineage_block(base: SimplicialComplex, f: Signing) -> dict:
    return {"base_hash": complex_hash(base), "signing_hash": signing_hash(f)}


def check_lineage(lift_json: dict, base: SimplicialComplex, f: Signing) -> list[str]:
    """Mismatches between a lift file, its own content hash, and its claimed parents."""
    problems = []
    stored = lift_json.get("content_hash")
    if stored is not None:
        actual = complex_hash(complex_from_json(lift_json))
        if stored != actual:
            problems.append(f"content hash {stored} does not match the file's faces ({actual})")
    lin = lift_json.get("lineage")
    if lin is None:
        return ["lift file has no lineage block"]
    if lin.get("base_hash") != complex_hash(base):
        problems.append(f"base hash {lin.get('base_hash')} != {complex_hash(base)}")
    if lin.get("signing_hash") != signing_hash(f):
        problems.append(f"signing hash {lin.get('signing_hash')} != {signing_hash(f)}")
    return problems


__all__ = [
    "FORMAT_VERSION",
    "canonical_dumps",
    "check_lineage",
    "complex_from_json",
    "complex_hash",
    "complex_to_json",
    "digest",
    "face_key",
    "lineage_block",
    "read_json",
    "signing_from_json",
    "signing_hash",
    "signing_to_json",
    "write_json",
]
