import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, strategies as st

import thetaconn.cli as cli
from make_fixtures import GOLDEN, fixture_path
from thetaconn.checks import CheckResult
from thetaconn.connection import InvariantViolation
from thetaconn.jobspec import LISTED, JobSpec, SpecError, example_spec, parse_config
from thetaconn.report import strip_timing, to_json

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report-schema.json").read_text())


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv + ["--format", "json"], capsys)
    return code, (json.loads(out) if out else None), err


# -- golden examples -----------------------------------------------------------

@pytest.mark.parametrize("name", GOLDEN)
def test_golden_examples(name):
    code, doc = cli.cmd_examples(name)
    assert code == 0
    jsonschema.validate(doc, SCHEMA)
    assert to_json(strip_timing(doc)) == fixture_path(name).read_text()


def test_golden_content():
    d = json.loads(fixture_path("g2-subregular").read_text())
    assert d["connection"]["display"] == "d + X_1/t dt + X_(-2) dt"
    oc = d["local"]["orbit_checks"]
    assert (oc["dim_centralizer_sigma"], oc["dim_g0_sigma_weight0"], oc["dim_orbit_tangent"],
            oc["dim_g1_sigma_weight1"]) == (4, 4, 4, 4)
    d = json.loads(fixture_path("2a2n:1").read_text())
    assert d["local"]["h1"] == 0 and d["local"]["irregularity"] == "3/1" and d["local"]["h0_zero"] == 3
    d = json.loads(fixture_path("frenkel-gross:G2").read_text())
    assert d["local"]["slope"] == "1/6" and d["local"]["predicted_orbit"]["name"] == "regular"
    assert d["local"]["residue_kernel_chain"][0] == 2


# -- analyze -------------------------------------------------------------------

def test_analyze_g2(capsys):
    code, doc, _ = run_json(["analyze", "--type", "G2", "--kac", "1,1,0", "--sample", "stable", "--seed", "7"], capsys)
    assert code == 0
    assert doc["local"]["h1"] == 0 and doc["local"]["rigid"] is True


def test_analyze_2a2(capsys):
    code, doc, _ = run_json(["analyze", "--type", "A2", "--sigma", "2,1", "--kac", "1,0", "--sample", "stable"],
                            capsys)
    assert code == 0
    assert doc["local"]["slope"] == "1/1" and doc["local"]["residue"] == {} and doc["local"]["rigid"]


def test_analyze_fg_a1(capsys):
    code, doc, _ = run_json(["analyze", "--type", "A", "--rank", "1", "--kac", "1,1", "--vector", "1,1"], capsys)
    assert code == 0
    assert doc["local"]["slope"] == "1/2" and doc["local"]["h1"] == 0


def test_non_rigid_verdict_is_not_an_error(capsys):
    code, doc, _ = run_json(["analyze", "--type", "A1", "--kac", "1,0", "--vector", "0,1,0"], capsys)
    assert code == 0
    assert doc["local"]["rigid"] is None  # X = E is not semisimple


def test_text_format(capsys):
    code, out, _ = run(["analyze", "--type", "A2", "--kac", "1,1,1", "--vector", "1,1,1", "--format", "text"], capsys)
    assert code == 0
    assert any(line.split()[:2] == ["local.rigid", "true"] for line in out.splitlines())


# -- verify ----------------------------------------------------------------------

def test_verify_g2_loopalg(capsys):
    code, doc, _ = run_json(["verify", "--type", "G2", "--kac", "1,1,0", "--suite", "loopalg"], capsys)
    assert code == 0 and doc["all_passed"]
    names = {c["name"] for c in doc["checks"]}
    assert {"loopalg.heisenberg_abelian", "loopalg.heisenberg_pairing_full_rank"} <= names


def test_verify_fg_a2_connection(capsys):
    code, doc, _ = run_json(["verify", "--type", "A2", "--kac", "1,1,1", "--suite", "connection"], capsys)
    assert code == 0
    euler = next(c for c in doc["checks"] if c["name"] == "connection.euler_consistency")
    assert euler["passed"]


def test_verify_trivial_gradings(capsys):
    code, doc, _ = run_json(["verify", "--type", "B2", "--kac", "1,0,0", "--suite", "gradings"], capsys)
    assert code == 0
    passed = {c["name"]: c["passed"] for c in doc["checks"]}
    assert passed["gradings.grading_sum"] and passed["gradings.bidegree_bounds"]


def test_property_failure_exits_1(capsys, monkeypatch):
    def failing(grading, suite, seed=0, truncation=None):
        return [CheckResult("core.fake", False, {"why": "forced"}, {"seed": seed})]
    monkeypatch.setattr(cli, "run_suite", failing)
    code, doc, _ = run_json(["verify", "--type", "A1", "--kac", "1,1", "--seed", "4"], capsys)
    assert code == 1 and not doc["all_passed"]
    rep = doc["checks"][0]["reproducer"]
    assert rep["seed"] == 4 and rep["job"]["kac"] == "1,1"


# -- exit codes ------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["analyze", "--type", "G3", "--kac", "1,1,0"],
    ["analyze", "--type", "G2", "--kac", "1,1"],
    ["analyze", "--type", "G2", "--kac", "2,2,0"],
    ["analyze", "--type", "A2", "--kac", "1,1,1", "--vector", "1,1"],
    ["analyze", "--type", "A2", "--kac", "1,1,1", "--vector", "x"],
    ["analyze", "--type", "A2", "--sigma", "1,1", "--kac", "1,1"],
    ["analyze", "--type", "A1", "--kac", "1,0"],
    ["analyze", "--config", "/nonexistent/job.cfg"],
    ["analyze", "--kac", "1,1"],
    ["examples", "nope"],
    ["examples", "2a2n:9"],
])
def test_bad_input_exits_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("thetaconn: error:")


def test_invariant_violation_exits_3(capsys, monkeypatch):
    def broken(*a, **k):
        raise InvariantViolation("forced")
    monkeypatch.setattr(cli, "analyze", broken)
    code, _, err = run(["analyze", "--type", "A1", "--kac", "1,1", "--vector", "1,1"], capsys)
    assert code == 3 and "invariant" in err


def test_unexpected_error_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(cli, "analyze", lambda *a, **k: 1 / 0)
    code, _, _ = run(["analyze", "--type", "A1", "--kac", "1,1", "--vector", "1,1"], capsys)
    assert code == 3


# -- config grammar --------------------------------------------------------------

def test_parse_config():
    text = "# job\nType = G2  # exceptional\n\nkac = 1,1,0\nseed=3\n"
    assert parse_config(text) == {"type": "G2", "kac": "1,1,0", "seed": "3"}
    for bad in ["kac 1,1", "kac = 1\nkac = 2"]:
        with pytest.raises(SpecError):
            parse_config(bad)
    with pytest.raises(SpecError):
        JobSpec.from_config("type = G2\nkac = 1,1,0\ncolour = red\n")
    with pytest.raises(SpecError):
        JobSpec.from_config("type = G2\nkac = 1,1,0\nvector = 1\nsample = any\n")


def test_series_and_rank_keys():
    spec = JobSpec.from_config("series = B\nrank = 2\nkac = 1,1,1\n")
    assert spec.type == "B2" and spec.sample == "stable"


jobspecs = st.builds(
    lambda typ, kac, sigma, vec, sample, seed, trunc, fmt: JobSpec(
        type=typ, kac=kac, sigma=sigma, vector=vec, sample=None if vec is not None else sample,
        seed=seed, truncation=trunc, format=fmt),
    st.sampled_from(["A2", "G2", "D4", "E6"]),
    st.lists(st.integers(0, 5), min_size=1, max_size=5).map(tuple),
    st.sampled_from([None, (1, 0), (2, 1, 0), (2, 1, 3, 0)]),
    st.one_of(st.none(), st.lists(st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5)),
                                  min_size=1, max_size=6).map(tuple)),
    st.sampled_from(["any", "regular-semisimple", "stable"]),
    st.integers(0, 2 ** 32),
    st.one_of(st.none(), st.integers(1, 60)),
    st.sampled_from(["json", "text"]),
)


@given(jobspecs)
def test_config_round_trip(spec):
    again = JobSpec.from_config(spec.to_config())
    assert again == spec
    assert again.to_config() == spec.to_config()


def test_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "job.cfg"
    cfg.write_text("type = A2\nkac = 1,1,1\nvector = 1,1,1\nformat = text\n")
    code, doc, _ = run_json(["analyze", "--config", str(cfg), "--sample", "stable", "--seed", "2"], capsys)
    assert code == 0
    assert doc["job"]["sample"] == "stable" and doc["job"]["vector"] is None and doc["job"]["seed"] == 2


# -- determinism, output files, batch -------------------------------------------

def test_determinism(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert cli.main(["analyze", "--type", "G2", "--kac", "1,1,0", "--seed", "11", "--out", str(p)]) == 0
    docs = [strip_timing(json.loads(p.read_text())) for p in paths]
    assert to_json(docs[0]) == to_json(docs[1])


def _batch_dir(tmp_path):
    d = tmp_path / "jobs"
    d.mkdir()
    (d / "b_fg.cfg").write_text("type = A2\nkac = 1,1,1\nvector = 1,1,1\n")
    (d / "a_g2.cfg").write_text("type = G2\nkac = 1,1,0\nseed = 3\n")
    (d / "c_bad.cfg").write_text("type = Q7\nkac = 1\n")
    return d


def test_batch(tmp_path, capsys):
    d = _batch_dir(tmp_path)
    code1, doc1, _ = run_json(["analyze", "--batch", str(d)], capsys)
    code2, doc2, _ = run_json(["analyze", "--batch", str(d), "--jobs", "2"], capsys)
    assert code1 == code2 == 2
    assert [i["name"] for i in doc1["batch"]] == ["a_g2.cfg", "b_fg.cfg", "c_bad.cfg"]
    assert [i["exit_code"] for i in doc1["batch"]] == [0, 0, 2]
    assert to_json(strip_timing(doc1)) == to_json(strip_timing(doc2))
    jsonschema.validate(doc1, SCHEMA)


def test_batch_verify_all_good(tmp_path, capsys):
    d = tmp_path / "jobs"
    d.mkdir()
    (d / "one.cfg").write_text("type = A1\nkac = 1,1\n")
    code, doc, _ = run_json(["verify", "--batch", str(d), "--suite", "gradings"], capsys)
    assert code == 0 and doc["batch"][0]["report"]["all_passed"]


# -- list -----------------------------------------------------------------------

def test_list(capsys):
    code, out, _ = run(["list"], capsys)
    assert code == 0
    rows = {line.split()[0]: line.split() for line in out.splitlines()[1:]}
    assert set(rows) == set(LISTED)
    assert rows["g2-subregular"][4] == "3"
    assert rows["2a2n:1"][4] == "2" and rows["2a2n:2"][4] == "2"
    code, again, _ = run(["list"], capsys)
    assert again == out


def test_list_json(capsys):
    code, doc, _ = run_json(["list"], capsys)
    jsonschema.validate(doc, SCHEMA)
    assert all(r["stable"] for r in doc["gradings"])


def test_examples_spec_names():
    assert example_spec("2a2n:3").kac == (1, 0, 0, 0)
    assert example_spec("frenkel-gross:C3").vector == (1, 1, 1, 1)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "thetaconn", "examples", "frenkel-gross:A1", "--format", "text"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "local.slope" in proc.stdout and "1/2" in proc.stdout
