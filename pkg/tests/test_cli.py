import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from modtwist.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_check_s3():
    code, out, _ = run("check", str(SAMPLES / "s3_diag_p7.json"))
    report = json.loads(out)
    assert code == 0 and report["defined_over_Q"] is True
    assert report["witness"]["g_tau"] == [0, 1, 1, 0]


def test_check_c14_reports_both_counts():
    code, out, _ = run("check", str(SAMPLES / "c14_unipotent_s1_p7.json"))
    report = json.loads(out)
    assert code == 0 and report["defined_over_Q"] is False
    assert report["certificate"]["Compatible"] > 0 and report["certificate"]["StronglyCompatible"] == 0


def test_check_thm2_file_is_projectivized():
    code, out, _ = run("check", str(SAMPLES / "klein_thm2_p7.json"))
    assert code == 0 and json.loads(out)["defined_over_Q"] is True


def test_verify_directory_of_corpus(tmp_path):
    code, _, _ = run("corpus", "--out", str(tmp_path))
    assert code == 0
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) >= 50
    assert {int(json.loads(f.read_text())["p"]) for f in files} == {7, 11, 13}
    code, out, _ = run("verify", str(tmp_path))
    report = json.loads(out)
    assert code == 0 and report["agree"] and report["problems"] == len(files)
    c14 = next(r for r in report["results"] if r["problem"] == "c14_unipotent_s1_p7")
    assert c14["defined_over_Q"] is False


def test_corpus_is_deterministic(tmp_path):
    run("corpus", "--out", str(tmp_path / "a"))
    run("corpus", "--out", str(tmp_path / "b"))
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_thm2_and_classify():
    code, out, _ = run("thm2", str(SAMPLES / "klein_thm2_p7.json"))
    report = json.loads(out)
    assert code == 0 and report["agree"] and report["witness"]["lambda"] in (1, -1)
    code, out, _ = run("thm2", str(SAMPLES / "c14_thm2_unipotent_p7.json"))
    report = json.loads(out)
    assert code == 0 and report["witness"] is None and report["pgl_g"] is None
    code, out, _ = run("classify", str(SAMPLES / "klein_thm2_p7.json"))
    assert code == 0 and json.loads(out)["class"] == "DiagOneMinusOne"


def test_thm2_rejects_descent_file():
    code, _, err = run("thm2", str(SAMPLES / "s3_diag_p7.json"))
    assert code == 1 and "thm2" in err


def test_survey_table_and_figure(tmp_path):
    fig = tmp_path / "s.png"
    code, out, _ = run("survey", "--group", str(SAMPLES / "group_c4_over_c2.json"), "--p", "7",
                       "--figure", str(fig))
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "image_order\tclasses\tdescend\tfail"
    assert lines[2:] == ["1\t1\t1\t0", "2\t1\t0\t1", "total\t2\t1\t1"]
    first = fig.read_bytes()
    assert first[:4] == b"\x89PNG"
    run("survey", "--group", str(SAMPLES / "group_c4_over_c2.json"), "--p", "7", "--figure", str(fig))
    assert fig.read_bytes() == first


def test_reports_byte_identical():
    a = run("check", str(SAMPLES / "s4_a4_octahedral_p11.json"))
    b = run("check", str(SAMPLES / "s4_a4_octahedral_p11.json"))
    assert a == b


def test_cap_env_handling(monkeypatch):
    monkeypatch.setenv("DESCENT_MAX_NODES", "0")
    code, out, _ = run("check", str(SAMPLES / "d4_over_center_inv0_p7.json"))
    # the direct search is refused but the conjugation route still decides
    assert code == 0 and json.loads(out)["route"] == "Prop4"
    monkeypatch.setenv("DESCENT_MAX_NODES", "zero")
    code, _, err = run("check", str(SAMPLES / "d4_over_center_inv0_p7.json"))
    assert code == 1 and "DESCENT_MAX_NODES" in err


def test_refusal_maps_to_exit_2(monkeypatch):
    import modtwist.cli as cli
    from modtwist.errors import SearchCapExceeded

    def refuse(problem):
        raise SearchCapExceeded("too big", estimate=10, cap=1)

    monkeypatch.setattr(cli, "decide", refuse)
    code, _, err = run("check", str(SAMPLES / "s3_diag_p7.json"))
    assert code == 2 and "refused" in err


@pytest.mark.parametrize("argv", [["bogus"], [], ["check"], ["survey", "--group", "x.json"]])
def test_usage_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_bad_file_exit_1(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"p": 4}))
    code, _, err = run("check", str(bad))
    assert code == 1 and "p" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modtwist", "check", str(SAMPLES / "c2_trivial_p7.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["defined_over_Q"] is True
