import copy
import json

import pytest

from autostruct.automata import equivalent
from autostruct.errors import StructureFileError
from autostruct.fixtures import fixture
from autostruct.structfile import (GROUP_KINDS, parse_structure,
                                   parse_structure_file, serialize_structure,
                                   write_structure_file)


def z2_data():
    return {
        "name": "z2",
        "group": {"kind": "free_abelian", "rank": 2},
        "generators": [
            {"symbol": "x", "inverse": "X", "image": [1, 0]},
            {"symbol": "X", "inverse": "x", "image": [-1, 0]},
            {"symbol": "y", "inverse": "Y", "image": [0, 1]},
            {"symbol": "Y", "inverse": "y", "image": [0, -1]},
        ],
        "language": {"regex": "(x*|X*)(y*|Y*)(xyXY)*"},
    }


def test_group_kinds():
    assert GROUP_KINDS == ("free_abelian", "free_group", "finite_table")


def test_parse_minimal_free_abelian():
    s = parse_structure(z2_data())
    assert s.name == "z2"
    assert s.backend.kind == "free_abelian"
    assert s.backend.evaluate("xxY") == (2, -1)
    assert s.language.member("xyXY")
    assert not s.language.member("yx")


def test_round_trip_fixtures(all_fixtures, tmp_path):
    for fx in all_fixtures:
        path = tmp_path / f"{fx.name}.json"
        write_structure_file(fx.structure, path, name=fx.name)
        loaded = parse_structure_file(path)
        assert loaded.name == fx.name
        assert loaded.backend.kind == fx.structure.backend.kind
        assert loaded.alphabet.symbols == fx.structure.alphabet.symbols
        assert equivalent(loaded.language, fx.structure.language)
        for letter in loaded.alphabet.symbols:
            assert loaded.backend.image(letter) == \
                fx.structure.backend.image(letter)


def test_serialized_form_uses_automaton(tmp_path):
    data = serialize_structure(fixture("z").structure, name="z")
    assert "automaton" in data["language"]
    assert "regex" not in data["language"]
    # the emitted JSON is stable under a second round trip
    path = tmp_path / "z.json"
    write_structure_file(fixture("z").structure, path, name="z")
    again = tmp_path / "z2nd.json"
    write_structure_file(parse_structure_file(path), again, name="z")
    assert path.read_text() == again.read_text()


def test_missing_file(tmp_path):
    with pytest.raises(StructureFileError, match="cannot read"):
        parse_structure_file(tmp_path / "absent.json")


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(StructureFileError, match="malformed JSON"):
        parse_structure_file(path)


def test_top_level_must_be_object():
    with pytest.raises(StructureFileError, match="top level"):
        parse_structure([1, 2, 3])


@pytest.mark.parametrize("missing", ["group", "generators", "language"])
def test_missing_required_field(missing):
    data = z2_data()
    del data[missing]
    with pytest.raises(StructureFileError, match=missing):
        parse_structure(data)


def test_name_must_be_string():
    data = z2_data()
    data["name"] = 7
    with pytest.raises(StructureFileError, match="name"):
        parse_structure(data)


def test_generator_entry_must_be_object():
    data = z2_data()
    data["generators"][1] = "X"
    with pytest.raises(StructureFileError, match=r"generators\[1\]"):
        parse_structure(data)


def test_generator_fields_must_be_strings():
    data = z2_data()
    del data["generators"][0]["inverse"]
    with pytest.raises(StructureFileError, match="inverse"):
        parse_structure(data)


def test_non_involutive_pairing():
    data = z2_data()
    data["generators"][1]["inverse"] = "y"
    with pytest.raises(StructureFileError, match="involution"):
        parse_structure(data)


def test_unknown_group_kind():
    data = z2_data()
    data["group"]["kind"] = "braid"
    with pytest.raises(StructureFileError, match="group.kind"):
        parse_structure(data)


@pytest.mark.parametrize("rank", [0, -1, "2", None])
def test_bad_rank(rank):
    data = z2_data()
    data["group"]["rank"] = rank
    with pytest.raises(StructureFileError, match="rank"):
        parse_structure(data)


def test_image_wrong_length():
    data = z2_data()
    data["generators"][0]["image"] = [1]
    with pytest.raises(StructureFileError, match="length-2"):
        parse_structure(data)


def test_image_not_integers():
    data = z2_data()
    data["generators"][0]["image"] = [1.5, 0]
    with pytest.raises(StructureFileError, match="integer vector"):
        parse_structure(data)


def test_inverse_image_inconsistency():
    """Declared inverses whose images are not group inverses are rejected."""
    data = z2_data()
    data["generators"][1]["image"] = [1, 0]
    with pytest.raises(StructureFileError, match="group"):
        parse_structure(data)


def test_bad_regex():
    data = z2_data()
    data["language"] = {"regex": "(x"}
    with pytest.raises(StructureFileError, match="regex"):
        parse_structure(data)


def test_regex_over_undeclared_symbol():
    data = z2_data()
    data["language"] = {"regex": "z*"}
    with pytest.raises(StructureFileError, match="regex"):
        parse_structure(data)


def test_language_needs_regex_or_automaton():
    data = z2_data()
    data["language"] = {}
    with pytest.raises(StructureFileError, match="regex.*automaton"):
        parse_structure(data)


def test_bad_automaton_json():
    data = z2_data()
    data["language"] = {"automaton": {"n_states": "three"}}
    with pytest.raises(StructureFileError, match="automaton"):
        parse_structure(data)


def test_empty_regex_is_epsilon_language():
    data = z2_data()
    data["language"] = {"regex": ""}
    s = parse_structure(data)
    assert s.language.member("")
    assert not s.language.member("x")
    assert s.language.enumerate_words(3) == [""]


# -- free group ------------------------------------------------------------


def free_group_data():
    return {
        "name": "f2",
        "group": {"kind": "free_group", "rank": 2},
        "generators": [
            {"symbol": "a", "inverse": "A", "image": "a"},
            {"symbol": "A", "inverse": "a", "image": "A"},
            {"symbol": "b", "inverse": "B", "image": "b"},
            {"symbol": "B", "inverse": "b", "image": "B"},
        ],
        "language": {"regex": "(ab)*"},
    }


def test_parse_free_group():
    s = parse_structure(free_group_data())
    assert s.backend.kind == "free_group"
    # aA cancels; the basis indexing follows declaration order
    assert s.backend.evaluate("aA") == s.backend.identity()
    assert s.backend.evaluate("ab") == (1, 2)
    assert s.language.member("abab")


def test_free_group_composite_images():
    """Generators may map to longer basis words as long as the inverse
    pairing stays consistent."""
    data = free_group_data()
    data["generators"][2]["image"] = "ba"
    data["generators"][3]["image"] = "AB"
    s = parse_structure(data)
    assert s.backend.evaluate("b") == (2, 1)
    assert s.backend.evaluate("bB") == s.backend.identity()


def test_free_group_image_unknown_symbol():
    data = free_group_data()
    data["generators"][0]["image"] = "c"
    with pytest.raises(StructureFileError, match="unknown symbol"):
        parse_structure(data)


def test_free_group_rank_too_small():
    data = free_group_data()
    data["group"]["rank"] = 1
    with pytest.raises(StructureFileError, match="rank"):
        parse_structure(data)


def test_free_group_round_trip(tmp_path):
    s = parse_structure(free_group_data())
    path = tmp_path / "f2.json"
    write_structure_file(s, path, name="f2")
    loaded = parse_structure_file(path)
    assert loaded.backend.kind == "free_group"
    for letter in "aAbB":
        assert loaded.backend.image(letter) == s.backend.image(letter)
    assert equivalent(loaded.language, s.language)


# -- finite table ------------------------------------------------------------


def z2_mod_data():
    return {
        "name": "c2",
        "group": {"kind": "finite_table", "table": [[0, 1], [1, 0]],
                  "identity": 0},
        "generators": [{"symbol": "t", "inverse": "t", "image": 1}],
        "language": {"regex": "t*"},
    }


def test_parse_finite_table():
    s = parse_structure(z2_mod_data())
    assert s.backend.kind == "finite_table"
    assert s.backend.evaluate("tt") == 0
    assert s.backend.norm(1) == 1
    assert s.language.member("ttt")


def test_finite_table_missing_table():
    data = z2_mod_data()
    del data["group"]["table"]
    with pytest.raises(StructureFileError, match="table"):
        parse_structure(data)


def test_finite_table_image_must_be_index():
    data = z2_mod_data()
    data["generators"][0]["image"] = [1]
    with pytest.raises(StructureFileError, match="image"):
        parse_structure(data)


def test_finite_table_invalid_table():
    data = z2_mod_data()
    data["group"]["table"] = [[0, 1], [1, 2]]
    with pytest.raises(StructureFileError, match="group"):
        parse_structure(data)


def test_finite_table_round_trip(tmp_path):
    s = parse_structure(z2_mod_data())
    path = tmp_path / "c2.json"
    write_structure_file(s, path, name="c2")
    loaded = parse_structure_file(path)
    assert loaded.backend.table == s.backend.table
    assert equivalent(loaded.language, s.language)


def test_written_file_is_valid_json_with_final_newline(tmp_path):
    path = tmp_path / "out.json"
    write_structure_file(fixture("control").structure, path)
    text = path.read_text()
    assert text.endswith("\n")
    json.loads(text)


def test_copy_is_not_shared():
    data = z2_data()
    parse_structure(copy.deepcopy(data))
    # parsing must not mutate its input
    assert data == z2_data()
