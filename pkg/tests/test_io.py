import json

import pytest

from ainfty import io
from ainfty.dga import BUILTIN_NAMES, builtin_dga, random_dga
from ainfty.graded import HomogeneousVector
from ainfty.hodge import build_hodge, homotopy, make_datum_harmonic
from ainfty.simplicial import ComplexError, minimal_torus
from ainfty.transfer import AInftyStructure


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_dga_roundtrip(name):
    A = builtin_dga(name)
    text = io.canonical_json(io.serialize_dga(A))
    B = io.parse_dga(text)
    assert io.canonical_json(io.serialize_dga(B)) == text
    assert io.content_hash(A) == io.content_hash(B)


def test_random_dga_roundtrip_bit_exact():
    A = random_dga(7)
    assert io.serialize_dga(io.parse_dga(io.pretty_json(io.serialize_dga(A)))) == io.serialize_dga(A)


def test_hash_ignores_name_only():
    A = builtin_dga("torus")
    doc = io.serialize_dga(A)
    doc["name"] = "renamed"
    assert io.content_hash(io.parse_dga(doc)) == io.content_hash(A)
    doc["d"]["0"][0][0] = "7"
    assert io.content_hash(io.parse_dga(doc)) != io.content_hash(A)


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("d"),
    lambda d: d.__setitem__("degree_range", "zero"),
    lambda d: d["mult"].__setitem__("1,1", [[["1"]]]),
    lambda d: d["d"].__setitem__("0", [["1/0"]]),
    lambda d: d["d"].__setitem__("0", [[0.5]]),
])
def test_malformed_dga_rejected(mutate):
    doc = io.serialize_dga(builtin_dga("interval"))
    mutate(doc)
    with pytest.raises(io.FormatError):
        io.parse_dga(doc)


def test_invalid_json_rejected():
    with pytest.raises(io.FormatError):
        io.parse_dga("{not json")


def test_complex_text_format():
    K = io.parse_complex("# torus\n" + io.serialize_complex(minimal_torus()))
    assert K == minimal_torus()
    with pytest.raises(ComplexError):
        io.parse_complex("# nothing\n")
    with pytest.raises(ComplexError):
        io.parse_complex("vertices: a a\na\n")


def test_map_and_subcomplex_roundtrip():
    pkg = build_hodge(builtin_dga("sphere2"))
    Q = homotopy(pkg)
    assert io.parse_map(io.canonical_json(io.serialize_map(Q)), Q.source, shift=-1) == Q
    datum = make_datum_harmonic(pkg)
    W = io.parse_subcomplex(io.canonical_json(io.serialize_subcomplex(datum.W)), datum.W.ambient)
    assert W == datum.W
    with pytest.raises(io.FormatError):
        io.parse_map(io.serialize_map(Q), Q.source, shift=1)


def test_mu_table_export_reload():
    datum = make_datum_harmonic(build_hodge(builtin_dga("torus")))
    s = AInftyStructure(datum, 3)
    doc = io.export_mu_tables(s, [1, 2, 3])
    doc = json.loads(io.canonical_json(doc))
    entries = io.load_mu_entries(doc, s.dim)
    for n in (1, 2, 3):
        for t, v in s.table(n).items():
            assert entries.get(t, datum.W.space.zero(v.degree)) == v
    assert doc["complete_orders"] == [1, 2, 3]


def test_vector_json():
    v = HomogeneousVector.of(2, ["1/2", -3])
    assert io.vector_from_json(io.vector_to_json(v)) == v
    assert io.vector_to_json(v) == {"degree": 2, "coords": ["1/2", "-3"]}
