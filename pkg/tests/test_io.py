import json

import pytest

from hdxlift.complex import complete_complex
from hdxlift.errors import DomainError, PurityError
from hdxlift.io import (
    canonical_dumps,
    check_lineage,
    complex_from_json,
    complex_hash,
    complex_to_json,
    lineage_block,
    read_json,
    signing_from_json,
    signing_hash,
    signing_to_json,
    write_json,
)
from hdxlift.lifting import Signing, local_lift


def test_complex_roundtrip(tmp_path):
    X = complete_complex(6, 2)
    write_json(tmp_path / "x.json", complex_to_json(X, meta={"a": 1}))
    Y = complex_from_json(read_json(tmp_path / "x.json"))
    assert Y == X and complex_hash(Y) == complex_hash(X)


def test_hash_ignores_meta_and_face_order():
    X = complete_complex(5, 2)
    doc = complex_to_json(X, meta={"seed": 1})
    doc["top_faces"] = list(reversed(doc["top_faces"]))
    assert complex_hash(complex_from_json(doc)) == complex_hash(X)


def test_string_labels_are_remapped():
    doc = {"k": 1, "top_faces": [["b", "a"], ["c", "b"], ["a", "c"]]}
    X = complex_from_json(doc)
    assert X.vertex_count == 3 and X.labels == ("a", "b", "c")
    assert X.top_faces == ((0, 1), (0, 2), (1, 2))
    assert complex_to_json(X)["labels"] == ["a", "b", "c"]


def test_non_pure_file_names_the_face():
    with pytest.raises(PurityError, match="3-4"):
        complex_from_json({"k": 2, "top_faces": [[0, 1, 2], [3, 4]]})


def test_signing_roundtrip_and_domain(rng):
    X = complete_complex(5, 2)
    f = Signing.random(X, rng)
    doc = json.loads(canonical_dumps(signing_to_json(f)))
    assert signing_from_json(doc, X) == f
    assert signing_hash(f) == signing_hash(signing_from_json(doc, X))
    with pytest.raises(DomainError):
        signing_from_json(doc, complete_complex(6, 2))


def test_lineage_detects_tampering(rng):
    X = complete_complex(5, 2)
    f = Signing.random(X, rng)
    Xh = local_lift(X, f)
    doc = complex_to_json(Xh, lineage=lineage_block(X, f))
    assert check_lineage(doc, X, f) == []
    g = f.copy()
    g.values[0] *= -1
    assert any("signing hash" in p for p in check_lineage(doc, X, g))
    tampered = json.loads(json.dumps(doc))
    tampered["top_faces"][0], tampered["top_faces"][1] = tampered["top_faces"][1], tampered["top_faces"][0]
    assert check_lineage(tampered, X, f) == []  # order is not content
    tampered["top_faces"].pop()
    assert any("content hash" in p for p in check_lineage(tampered, X, f))
    assert check_lineage({"k": 2, "top_faces": []}, X, f) == ["lift file has no lineage block"]


def test_canonical_dumps_sorted():
    assert canonical_dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
