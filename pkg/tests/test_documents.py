import json

import pytest

from qhomlie import Mat, example_nilpotent_prop12, example_sl2, example_toy_prop12, load_shipped, parse, serialize
from qhomlie.documents import DocumentError, digest, doc_to_algebra, dumps, parse_vector


@pytest.mark.parametrize("make", [lambda: example_sl2(1), lambda: example_sl2("-2/3"), example_toy_prop12,
                                  example_nilpotent_prop12])
def test_roundtrip_and_canonical_bytes(make):
    A = make()
    text = serialize(A)
    B = parse(text)
    assert B == A
    assert serialize(B) == text
    assert text.endswith("\n")
    # reordering keys and entries gives the same canonical bytes
    doc = json.loads(text)
    doc["bracket"].reverse()
    assert serialize(doc_to_algebra(json.loads(json.dumps(doc)))) == text


def test_shipped_document_is_the_example():
    assert load_shipped() == example_sl2(1)


def test_digest_is_stable():
    assert digest("abc") == digest(b"abc")
    assert digest("abc").startswith("sha256:")


def minimal(**over):
    doc = {"dim": 2, "bracket": [{"i": 0, "j": 1, "coeffs": [{"k": 1, "c": "1"}]}]}
    doc.update(over)
    return doc


def test_defaults_and_pair_coefficients():
    A = doc_to_algebra(minimal())
    assert A.twist == Mat.identity(2)
    assert A.basis_names == ("e0", "e1")
    B = doc_to_algebra(minimal(bracket=[{"i": 0, "j": 1, "coeffs": [[1, "1"]]}]))
    assert B.bracket == A.bracket


@pytest.mark.parametrize("over, message", [
    ({"format": 2}, "unsupported format"),
    ({"dim": -1}, "dim"),
    ({"bracket": [{"i": 1, "j": 0, "coeffs": []}]}, "i < j"),
    ({"bracket": [{"i": 0, "j": 5, "coeffs": []}]}, "out of range"),
    ({"bracket": [{"i": 0, "j": 1, "coeffs": []}, {"i": 0, "j": 1, "coeffs": []}]}, "duplicate"),
    ({"bracket": [{"i": 0, "j": 1, "coeffs": [{"k": 0, "c": "x/y"}]}]}, "unparseable"),
    ({"bracket": [{"i": 0, "j": 1, "coeffs": [{"k": 0, "c": 0.5}]}]}, "rational"),
    ({"form": [["1", "2"], ["3", "1"]]}, "asymmetric form"),
    ({"twist": [["1", "0"]]}, "rows"),
    ({"basis": ["a"]}, "basis"),
])
def test_rejections(over, message):
    with pytest.raises(DocumentError, match=message):
        doc_to_algebra(minimal(**over))


def test_malformed_json():
    with pytest.raises(DocumentError, match="malformed JSON"):
        parse("{not json")


def test_parse_vector():
    assert parse_vector("1, -1/2,0") == (1, -0.5, 0)
    assert parse_vector("") == ()
    with pytest.raises(DocumentError):
        parse_vector("1,2", n=3)


def test_dumps_sorted():
    assert dumps({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
