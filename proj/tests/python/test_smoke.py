import os
import pathlib

import pytest

import coopver

CORPUS = pathlib.Path(os.environ.get("COOPVER_CORPUS_DIR", pathlib.Path(__file__).parents[2] / "corpus"))


def load(name, width=8):
    path = CORPUS / name
    return coopver.Program(path.read_text(), width=width, path=str(path))


def test_program_shape():
    p = load("s01_countdown.mc")
    assert set(p.variables) >= {"n", "x", "y"}
    assert p.loop_head_lines == [4]
    assert len(p.program_hash) == 64


def test_kind_with_affine_proves_safe():
    p = load("s01_countdown.mc")
    r = coopver.verify(p, master="kind", helpers=["affine"], timer_m=0.5, timeout_h=30, timeout=60)
    assert r["verdict"] == "true"
    assert r["run_name"] == "kind-affine-0.5"
    assert r["helped"]
    assert r["witness"] is not None


def test_unsafe_matches_oracle():
    p = load("u01_countdown_unsafe.mc")
    assert coopver.oracle_verdict(p) == "false"
    r = coopver.verify(p, master="predabs", timeout=60)
    assert r["verdict"] == "false"


def test_affine_helper_invariant_holds():
    p = load("s01_countdown.mc")
    r = coopver.run_helper(p, "affine")
    assert r["status"] == "completed"
    assert r["invariants"]
    for line, expr in r["invariants"]:
        assert coopver.invariant_holds(p, expr, line) is True
    assert not coopver.witness_is_trivial(r["witness"])


def test_map_property_round_trip():
    text = (CORPUS / "s01_countdown.mc").read_text()
    mapped = coopver.map_property(text, "assert_stmt")
    assert "assert(" in mapped
    assert coopver.map_property(mapped, "error_label") != mapped


def test_errors_are_raised():
    with pytest.raises(coopver.Error):
        coopver.Program("int main() { y = 1; }")
    with pytest.raises(ValueError):
        coopver.map_property("int main() {}", "bogus")
