import subprocess
import sys

import pytest

from qlid.harness import corpus
from qlid.harness.cli import main
from qlid.harness.specfile import dump_spec, write_spec


@pytest.fixture
def shafir_spec(tmp_path):
    return str(write_spec(corpus.get("shafir1992"), tmp_path / "shafir.spec"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_infer_quantum(capsys, shafir_spec):
    code, out, _ = run(capsys, "infer", "--spec", shafir_spec, "--theta", "2.8151")
    assert code == 0
    assert "risk_averse," in out
    assert out.splitlines()[2].endswith(",0.630001")


def test_infer_classical_builtin_name(capsys):
    code, out, _ = run(capsys, "infer", "--spec", "shafir1992", "--classical")
    assert code == 0
    assert out.splitlines()[2].endswith(",0.905")


def test_infer_with_evidence(capsys):
    code, out, _ = run(capsys, "infer", "--spec", "shafir1992", "--classical", "--evidence", "X1=defect")
    assert code == 0
    assert out.splitlines()[2].endswith(",0.97")


def test_meu_modes(capsys):
    code, out, _ = run(capsys, "meu", "--spec", "shafir1992", "--mode", "classical")
    assert code == 0
    assert out.splitlines()[1] == "context,eu_action_cooperate,eu_action_defect,chosen"
    assert all(line.endswith(",defect") for line in out.splitlines()[2:])
    code, out, _ = run(capsys, "meu", "--spec", "shafir1992", "--mode", "quantum")
    assert code == 0
    assert all(line.endswith(",cooperate") for line in out.splitlines()[2:])


def test_fit_theta(capsys):
    code, out, _ = run(capsys, "fit-theta", "--spec", "shafir1992", "--grid", "100000")
    assert code == 0
    thetas = [float(line.split(",")[0]) for line in out.splitlines()[2:]]
    assert len(thetas) == 2
    assert min(abs(t - 2.8151) for t in thetas) < 2e-3


def test_fit_theta_unattainable(capsys):
    code, _, err = run(capsys, "fit-theta", "--spec", "shafir1992", "--target", "0.01", "--grid", "10000")
    assert code == 4
    assert "attainable range" in err


def test_sweep(capsys, tmp_path):
    out_file = tmp_path / "p.csv"
    code, out, _ = run(capsys, "sweep", "--spec", "li2002_game1", "--what", "prob", "--steps", "4", "--out", str(out_file))
    assert code == 0
    assert len(out_file.read_text().splitlines()) == 5
    eu = tmp_path / "eu.csv"
    code, out, _ = run(capsys, "sweep", "--spec", "li2002_game1", "--what", "eu", "--steps", "16", "--out", str(eu))
    assert code == 0
    assert (tmp_path / "eu.dominance.csv").exists()
    assert len(out.splitlines()) == 2


def test_reproduce_writes_csv(capsys, tmp_path):
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "reproduce", "--dataset", "li2002_game2", "--grid", "20000", "--out", str(target))
    assert code == 0
    assert "comparisons within tolerance" in out
    assert target.read_text().startswith("experiment,quantity,")


def test_validate_and_export(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--out", str(tmp_path))
    assert code == 0
    assert len(list(tmp_path.glob("*.spec"))) == 8
    code, out, _ = run(capsys, "validate", "--spec", str(tmp_path / "li2002_game5.spec"))
    assert code == 0
    assert out.startswith("li2002_game5: ok")


def test_bad_spec_exit_2(capsys, tmp_path):
    text = dump_spec(corpus.get("shafir1992")).replace("p_known_defect = 0.97", "p_known_defect = 1.2")
    bad = tmp_path / "bad.spec"
    bad.write_text(text)
    code, _, err = run(capsys, "validate", "--spec", str(bad))
    assert code == 2
    assert "probability out of range" in err and "network.p_known_defect" in err and ":7:" in err


def test_missing_theta_needs_flag(capsys, tmp_path):
    text = "\n".join(l for l in dump_spec(corpus.get("shafir1992")).splitlines() if not l.startswith("theta"))
    spec = tmp_path / "nt.spec"
    spec.write_text(text)
    assert run(capsys, "validate", "--spec", str(spec))[0] == 0
    code, _, err = run(capsys, "meu", "--spec", str(spec), "--mode", "quantum")
    assert code == 2 and "--theta" in err
    assert run(capsys, "meu", "--spec", str(spec), "--mode", "quantum", "--theta", "2.8")[0] == 0


def test_unknown_spec_exit_2(capsys):
    assert run(capsys, "validate", "--spec", "nope")[0] == 2


def test_degenerate_exit_3(capsys, tmp_path):
    # X1 known with certainty, X2 deterministic: impossible evidence makes the query degenerate
    text = dump_spec(corpus.get("shafir1992")).replace("p_known_defect = 0.97", "p_known_defect = 1.0")
    text = text.replace("p_known_cooperate = 0.84", "p_known_cooperate = 1.0").replace(
        "p_classical = 0.905", "p_classical = 1.0"
    )
    spec = tmp_path / "deg.spec"
    spec.write_text(text)
    code, _, err = run(capsys, "infer", "--spec", str(spec), "--theta", "3.141592653589793")
    assert code == 3
    assert "degenerate" in err


def test_bad_evidence_exit_2(capsys):
    assert run(capsys, "infer", "--spec", "shafir1992", "--classical", "--evidence", "X1")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qlid", "validate", "--spec", "shafir1992"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "shafir1992: ok" in proc.stdout
