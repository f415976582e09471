import io
import json
import re
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from mcop.cli import main

SCHEMAS = json.loads((resources.files("mcop.data") / "schemas.json").read_text())


def fixture(name):
    return str(resources.files("mcop.data") / f"{name}.mcop")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--json", *argv)
    data = json.loads(out)
    kind = "error" if "error" in data else data["command"]
    jsonschema.validate(data, {**SCHEMAS[kind], "$defs": SCHEMAS["$defs"]})
    assert not re.search(r"\d\.\d", out), "decimal float in output"
    return code, data


@pytest.fixture
def write(tmp_path):
    def _write(text, name="doc.mcop"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


class TestBuild:
    def test_chain4(self):
        code, out, _ = run("build", fixture("chain4"))
        assert code == 0
        assert len(out.strip().splitlines()) == 3
        assert "[order-cover]" in out

    def test_two_tops(self):
        code, data = run_json("build", fixture("two_tops"))
        assert code == 0 and len(data["constraints"]) == 3

    def test_facets_only(self):
        code, data = run_json("build", fixture("two_tops"), "--facets-only")
        assert sorted(c["text"] for c in data["constraints"]) == ["-x_p <= 0", "x_p <= 1"]

    def test_missing_minimum(self, write):
        code, out, err = run("build", write("covers: a<p<b\nmarking: b=1\n"))
        assert code == 3 and "min(P) ⊆ P* violated" in err
        code, data = run_json("build", write("covers: a<p<b\nmarking: b=1\n"))
        assert data["error"]["invariant"] == "min(P) ⊆ P* violated"

    def test_parse_error(self, write):
        assert run("build", write("nonsense\n"))[0] == 2
        assert run("build", "/does/not/exist")[0] == 2

    def test_chain_override(self):
        code, data = run_json("build", fixture("chain4"), "--chain", "p,q")
        assert data["partition"] == {"chain": ["p", "q"], "order": []}
        assert run("build", fixture("chain4"), "--chain", "zz")[0] == 2

    def test_json_after_subcommand(self):
        code, out, _ = run("build", fixture("chain4"), "--json")
        assert json.loads(out)["command"] == "build"


class TestPoints:
    def test_chain4(self):
        code, out, _ = run("points", fixture("chain4"))
        lines = out.strip().splitlines()
        assert code == 0 and lines[-1] == "count: 10" and lines[0] == "(0, 0)"

    def test_counter_example_one(self):
        code, data = run_json("points", fixture("ranked_bad_marking"), "--interior")
        assert data["points"] == [[2, 2, 3, 4, 5]]

    def test_counter_example_two(self):
        assert run_json("points", fixture("unranked_t2"), "--interior")[1]["count"] == 0
        assert run_json("points", fixture("unranked_t3"), "--interior")[1]["points"] == [[1, 1, 2], [2, 1, 2]]

    def test_dilate(self):
        assert run_json("points", fixture("chain4"), "--dilate", "2")[1]["count"] == 28
        assert run("points", fixture("chain4"), "--dilate", "-1")[0] == 2

    def test_unbounded(self, write):
        code, data = run_json("points", write("covers: a<p\nmarking: a=0\n"))
        assert code == 4 and data["error"]["code"] == 4

    def test_dim_cap(self, monkeypatch):
        monkeypatch.setenv("MCOP_MAX_DIM", "4")
        assert run("points", fixture("ranked_bad_marking"))[0] == 7
        monkeypatch.setenv("MCOP_MAX_DIM", "5")
        assert run("points", fixture("ranked_bad_marking"), "--interior")[0] == 0
        monkeypatch.setenv("MCOP_MAX_DIM", "lots")
        assert run("points", fixture("chain4"))[0] == 2


class TestDecompose:
    def test_point(self):
        code, out, _ = run("decompose", fixture("chain4"), "1,2")
        assert code == 0
        assert out.count("omega_1") == 3
        assert "verified: 1 decomposition(s), all ok" in out

    def test_json(self):
        code, data = run_json("decompose", fixture("chain4"), "(1,2)")
        summands = data["decompositions"][0]["summands"]
        assert sum(s["weight"] for s in summands) == 3
        assert all(s["filter"] == ["b"] for s in summands)

    def test_outside(self):
        assert run("decompose", fixture("chain4"), "2,1")[0] == 5

    def test_all(self):
        code, data = run_json("decompose", fixture("two_tops"), "--all")
        assert code == 0 and len(data["decompositions"]) == 2 and data["verified"]

    def test_usage(self):
        assert run("decompose", fixture("chain4"))[0] == 2
        assert run("decompose", fixture("chain4"), "1,2", "--all")[0] == 2
        assert run("decompose", fixture("chain4"), "x,y")[0] == 2


class TestReflexive:
    def test_audit_chain4(self):
        code, data = run_json("reflexive", fixture("chain4"), "--all-partitions")
        assert code == 0 and len(data["rows"]) == 4
        assert all(r["reflexive"] for r in data["rows"]) and data["agreement"]

    def test_counter_example(self):
        code, out, _ = run("reflexive", fixture("ranked_bad_marking"))
        assert code == 0 and "not reflexive" in out and "failing facet: x_r - x_t <= 2" in out
        code, data = run_json("reflexive", fixture("ranked_bad_marking"))
        assert data["rows"][0]["failing_facet"]["rhs"] == 2

    def test_non_regular_audit(self):
        assert run("reflexive", fixture("two_tops"), "--all-partitions")[0] == 6

    def test_no_interior(self):
        code, data = run_json("reflexive", fixture("unranked_t2"))
        assert code == 0 and data["rows"][0]["interior_count"] == 0


class TestEhrhart:
    def test_chain4(self):
        code, data = run_json("ehrhart", fixture("chain4"))
        assert data["polynomials"][0]["coefficients"] == [1, "9/2", "9/2"]

    def test_equivalence(self):
        code, out, _ = run("ehrhart", fixture("chain4"), "--check-equivalence")
        assert code == 0 and "equivalence over 4 partitions: PASS" in out

    def test_reciprocity_and_hibi(self):
        code, data = run_json("ehrhart", fixture("chain4"), "--check-reciprocity", "3", "--hibi")
        assert data["reciprocity"] and data["hibi"]
        code, data = run_json("ehrhart", fixture("ranked_bad_marking"), "--hibi")
        assert code == 0 and data["hibi"] is False

    def test_unbounded(self, write):
        assert run("ehrhart", write("covers: a<p\nmarking: a=0\n"))[0] == 4


class TestVerify:
    def test_all_partitions(self):
        code, data = run_json("verify", fixture("chain4"), "--all-partitions")
        assert code == 0 and len(data["minkowski"]) == 4 and data["ok"]

    def test_additivity(self, write):
        other = write("covers: a<p<q<b\nmarking: a=1, b=2\n", "other.mcop")
        code, data = run_json("verify", fixture("chain4"), "--additivity", other)
        assert code == 0 and data["additivity"]["equal"]

    def test_additivity_no_common_cell(self, write):
        first = write("covers: z<p, p<u, p<v\nmarking: z=0, u=1, v=0\n", "l.mcop")
        second = write("covers: z<p, p<u, p<v\nmarking: z=0, u=0, v=1\n", "m.mcop")
        code, data = run_json("verify", first, "--additivity", second)
        assert code == 3 and "common refinement" in data["error"]["invariant"]


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate", "x")[0] == 2


def test_help():
    assert run("--help")[0] == 0


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "mcop.cli", "points", fixture("chain4"), "--json"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and json.loads(out.stdout)["count"] == 10
