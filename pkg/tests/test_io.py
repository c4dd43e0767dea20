import numpy as np
import pytest

from covstream.instances import CoveringInstance, SetSystem, VariableKind
from covstream.io import ParseError, read_instance, write_instance, write_metadata

from conftest import random_instance, random_set_system


def test_ilp_round_trip(tmp_path, rng):
    inst = random_instance(rng, kind=VariableKind.INTEGER)
    path = tmp_path / "inst.ilp"
    write_instance(inst, path)
    back = read_instance(path)
    assert back == CoveringInstance(inst.n, inst.columns, inst.b, inst.c,
                                    inst.variable_kind)


def test_sets_round_trip(tmp_path, rng):
    s = random_set_system(rng, weighted=True)
    path = tmp_path / "inst.sets"
    write_instance(s, path)
    assert read_instance(path) == s


def test_fuzz_round_trip(tmp_path):
    for seed in range(100):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        path = tmp_path / f"fuzz_{seed}.ilp"
        write_instance(inst, path)
        back = read_instance(path)
        assert (back.n, back.columns, back.b, back.c) == \
            (inst.n, inst.columns, inst.b, inst.c)


def test_negative_value_names_line(tmp_path):
    path = tmp_path / "bad.ilp"
    path.write_text("ilp 2 1 binary\nb 1 1\ncol -3 0:1\n")
    with pytest.raises(ParseError) as err:
        read_instance(path)
    assert err.value.line_no == 3


def test_out_of_range_row_rejected(tmp_path):
    path = tmp_path / "bad.ilp"
    path.write_text("ilp 2 1 binary\nb 1 1\ncol 1 2:1\n")
    with pytest.raises(ParseError, match="out of range"):
        read_instance(path)


def test_malformed_headers(tmp_path):
    for text in ("", "what 1 2\n", "ilp 2 1\n", "sets 2\nset 1 0\n"):
        path = tmp_path / "bad.txt"
        path.write_text(text)
        with pytest.raises(ParseError):
            read_instance(path)


def test_sets_element_out_of_range(tmp_path):
    path = tmp_path / "bad.sets"
    path.write_text("sets 3 1\nset 1 0 3\n")
    with pytest.raises(ParseError) as err:
        read_instance(path)
    assert err.value.line_no == 2


def test_comments_and_blank_lines_ignored(tmp_path):
    path = tmp_path / "ok.sets"
    path.write_text("# generated\nsets 2 1\n\nset 1 0 1\n")
    s = read_instance(path)
    assert s.sets == (frozenset({0, 1}),)


def test_metadata_file(tmp_path):
    path = tmp_path / "meta.txt"
    write_metadata({"theta": 1, "t_bar": (1, 2)}, path)
    lines = path.read_text().splitlines()
    assert lines == ["t_bar [1, 2]", "theta 1"]
