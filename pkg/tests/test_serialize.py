import json

import pytest

from laxcyl.corpus import corpus_documents
from laxcyl.errors import SchemaError, ValidationError
from laxcyl.gallery import z6, z6_chain
from laxcyl.serialize import canonical_json, dump, from_document, load, parse_space, to_document


def roundtrip(kind, obj):
    doc = to_document(kind, obj)
    back_kind, _, back = from_document(json.loads(canonical_json(doc)))
    assert back_kind == kind
    return doc, back


def test_corpus_roundtrip(corpus):
    """Decoding then encoding every corpus document reproduces it byte for byte."""
    for _, kind, obj in corpus_documents(corpus):
        doc, back = roundtrip(kind, obj)
        assert canonical_json(to_document(kind, back)) == canonical_json(doc)


def test_spaces_and_data_compare_equal(corpus):
    for X in corpus.ringed:
        assert roundtrip("space", X)[1] == X
    for X in corpus.pos_data:
        assert roundtrip("datum", X)[1] == X


def test_point_file(tmp_path):
    path = tmp_path / "z6.json"
    dump(path, "space", z6(), name="z6")
    assert parse_space(path) == z6()
    assert load(path)[1] == "z6"


def test_bare_datum_accepted(tmp_path):
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(to_document("space", z6_chain())["body"]))
    assert parse_space(path) == z6_chain()


def test_canonical_json_sorted_and_stable():
    text = canonical_json({"b": 1, "a": [2, {"d": 0, "c": 1}]})
    assert text.index('"a"') < text.index('"b"') and text.index('"c"') < text.index('"d"')
    assert canonical_json(json.loads(text)) == text


def test_missing_field_pointer():
    doc = to_document("space", z6_chain())
    del doc["body"]["stalks"]
    with pytest.raises(SchemaError) as e:
        from_document(doc)
    assert e.value.pointer == "/body/stalks"


def test_out_of_range_entry_pointer():
    doc = {"kind": "space", "body": {"kernel": "ring", "poset": {"elements": ["*"]},
                                     "stalks": [["*", {"order": 2, "add": [[0, 1], [1, 0]],
                                                       "mul": [[0, 0], [0, 7]], "zero": 0, "one": 1}]]}}
    with pytest.raises(SchemaError) as e:
        from_document(doc)
    assert e.value.pointer == "/body/stalks/0/1/mul/1/1"


def test_bad_mul_table():
    """Multiplication without a unit is caught by the axiom check, not the schema."""
    doc = {"kind": "space", "body": {"kernel": "ring", "poset": {"elements": ["*"]},
                                     "stalks": [["*", {"order": 2, "add": [[0, 1], [1, 0]],
                                                       "mul": [[0, 0], [0, 0]], "zero": 0, "one": 1}]]}}
    with pytest.raises(ValidationError):
        from_document(doc)


def test_unknown_kind():
    with pytest.raises(SchemaError):
        from_document({"kind": "sheaf", "body": {}})
