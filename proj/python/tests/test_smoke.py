import pathlib
import shutil

import pytest

import polycheck

CORPUS = pathlib.Path(__file__).resolve().parents[2] / "corpus"


def source(name):
    return (CORPUS / f"{name}.pr").read_text()


def test_signature():
    assert polycheck.signature(source("subwords_ab")) == "(Out[1], 0) -> Out[1]"


def test_run():
    assert polycheck.run(source("asToBs"), "abc") == "bbc"
    assert polycheck.run(source("map_reverse"), "hello world") == "olleh dlrow"


def test_rejection_raises():
    with pytest.raises(polycheck.CompileError, match="NestedWordEquality"):
        polycheck.signature((CORPUS / "rejected" / "pcp.pr").read_text())


def test_compile_outputs():
    assert polycheck.simple(source("reverse")).startswith("for i in reversed(input) do")
    assert "t1 arity 1 out 'b'" in polycheck.interpretation(source("asToBs"))


def test_metrics():
    m = polycheck.metrics(source("prefixes"))
    assert m["qrank"] == 0
    assert m["arity"] == 2
    assert m["fp_size"] <= m["simple_size"] <= m["interp_size"]


def test_bounded_counterexample():
    r = polycheck.verify(source("get_last_word"), 'ends_with("a")', 'contains_factor("aa")', backends=["bounded"])
    assert r["result"] == "invalid"
    assert r["replayed"]


def test_bounded_valid_is_marked():
    r = polycheck.verify(source("asToBs"), "true", "forall x. label(x) != 'a'", backends=["bounded"], max_length=4)
    assert r["result"] == "valid"
    assert r["bounded_only"]


@pytest.mark.skipif(shutil.which("z3") is None, reason="z3 not installed")
def test_z3_proves_swap():
    r = polycheck.verify(source("asToBs"), "true", "forall x. label(x) != 'a'", backends=["z3"], timeout=30)
    assert r["result"] == "valid"
    assert not r["bounded_only"]
