import json
import random

import pytest

from laxcyl.cli import main
from laxcyl.corpus import generate_corpus, lax_instances, write_corpus
from laxcyl.errors import UnknownSuite
from laxcyl.gallery import chart, named_examples, z6_chain_projection
from laxcyl.serialize import dump
from laxcyl.suites import Workspace, run_suite

SMALL = {"lax": 6, "triples": 3, "ringed": 4, "theorem": 4, "covers": 4, "pos": 3}


@pytest.fixture
def files(tmp_path):
    for name, (kind, obj) in named_examples().items():
        dump(tmp_path / f"{name}.json", kind, obj)
    dump(tmp_path / "chart.json", "morphism", chart("Z/2"))
    dump(tmp_path / "proj.json", "morphism", z6_chain_projection())
    dump(tmp_path / "lax.json", "lax-instance", lax_instances(random.Random(5), 1)[0])
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out)


def test_check_schematic_exit_codes(files, capsys):
    code, r = run(capsys, "check-schematic", "--space", files / "z6-chain.json")
    assert code == 0 and r["verdict"] and r["pseudo_schematic"]["verdict"]
    code, r = run(capsys, "check-schematic", "--space", files / "z4-chain.json")
    assert code == 1 and r["witness"]["reason"] == "restriction not flat"


def test_missing_file_is_input_error(files, capsys):
    code, r = run(capsys, "check-schematic", "--space", files / "nope.json")
    assert code == 2 and r["error"] == "FileNotFoundError"


def test_wrong_kind_gives_pointer(files, capsys):
    code, r = run(capsys, "check-qciso", "--morphism", files / "z6.json")
    assert code == 2 and r["error"] == "SchemaError" and r["pointer"] == "/kind"


def test_qciso(files, capsys):
    assert run(capsys, "check-qciso", "--morphism", files / "proj.json")[0] == 0
    code, r = run(capsys, "check-qciso", "--morphism", files / "chart.json")
    assert code == 1 and r["points"] == [1, 2]


def test_cylinder_and_nerve(files, capsys):
    code, r = run(capsys, "nerve", "--cover", files / "z6-cover.json")
    assert code == 0 and r["kind"] == "datum"
    code, r = run(capsys, "cylinder", "--datum", files / "wedge.json")
    assert code == 0 and len(r["body"]["poset"]["elements"]) == 9


def test_cylinder_theorem_needs_rings(files, capsys):
    code, r = run(capsys, "cylinder-theorem", "--datum", files / "wedge.json")
    assert code == 2 and r["error"] == "ShapeMismatch"


def test_descent_report(files, capsys):
    code, r = run(capsys, "descent-report", "--space", files / "z6-chain.json", "--cover", files / "z6-cover.json")
    assert code == 0 and r["external"]["colimit_size"] == 2 and r["internal"]["verdict"]
    code, r = run(capsys, "descent-report", "--cover", files / "z6-subcover.json")
    assert r["corollary"]["missed_primes"] == [{"point": "*", "prime": [0, 3]}]


def test_pi1_and_vankampen(files, capsys, tmp_path):
    code, r = run(capsys, "pi1", "--space", files / "circle.json")
    assert code == 0 and r["h1"] == [0] and r["homs"]["Z/2"] == 2
    panel = tmp_path / "panel.json"
    panel.write_text(json.dumps(["S3", {"name": "C2", "mul": [[0, 1], [1, 0]]}]))
    code, r = run(capsys, "vankampen", "--datum", files / "wedge.json", "--panel", panel)
    assert code == 0 and r["homs"]["S3"]["cylinder"] == 36 and r["homs"]["C2"]["amalgam"] == 4


def test_verify_lax_colimit(files, capsys):
    code, r = run(capsys, "verify-lax-colimit", "--datum", files / "lax.json")
    assert code == 0 and r["iso"]


def test_bad_caps_file(files, capsys, tmp_path):
    caps = tmp_path / "caps.json"
    caps.write_text("[1]")
    code, r = run(capsys, "pi1", "--space", files / "circle.json", "--caps", caps)
    assert code == 2 and r["error"] == "SchemaError"


def test_out_flag_writes_file(files, capsys, tmp_path):
    out = tmp_path / "r.json"
    assert main(["pi1", "--space", str(files / "circle.json"), "--out", str(out)]) == 0
    assert capsys.readouterr().out == "" and json.loads(out.read_text())["h1"] == [0]


def test_corpus_generate(tmp_path, capsys):
    code, r = run(capsys, "corpus", "generate", "--out", tmp_path / "ws", "--seed", 3)
    assert code == 0 and r["files"] == len(list((tmp_path / "ws").rglob("*.json")))


def test_empty_workspace_warns(tmp_path, capsys):
    with pytest.warns(UserWarning):
        code, r = run(capsys, "suite", "descent", "--workspace", tmp_path)
    assert code == 0 and r["warnings"] and r["summary"]["total"] == 0


def test_unknown_suite(tmp_path):
    with pytest.raises(UnknownSuite):
        run_suite(Workspace.open(tmp_path), "homology")
    with pytest.raises(SystemExit):
        main(["suite", "homology", "--workspace", str(tmp_path)])


def test_suite_bundles_do_not_depend_on_jobs(tmp_path):
    write_corpus(generate_corpus(0, SMALL), tmp_path / "ws")
    outs = []
    for jobs in (1, 2):
        out = tmp_path / f"bundle{jobs}.json"
        code = main(["suite", "lax-colimit", "--workspace", str(tmp_path / "ws"), "--jobs", str(jobs),
                     "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
