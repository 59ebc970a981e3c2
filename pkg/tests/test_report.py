import pytest

from qlid.harness import corpus, reproduce
from qlid.harness.csvio import report_csv
from qlid.harness.report import expected_decisions, format_report, resolve_dataset
from qlid.harness.specfile import write_spec

GRID = 100_000


@pytest.fixture(scope="module")
def builtin():
    return reproduce("builtin", grid=GRID)


def test_all_experiments_run(builtin):
    assert [r.record.name for r in builtin.runs] == [r.name for r in corpus.BUILTIN]
    names = {c.quantity for c in builtin.comparisons}
    assert {"p_defect_classical", "p_defect_quantum", "theta_fit"} <= names


def test_classical_and_quantum_probabilities_pass(builtin):
    for c in builtin.comparisons:
        if c.quantity in ("p_defect_classical", "p_defect_quantum") or c.quantity.startswith("decision_"):
            assert c.passed, c


def test_deterministic_bytes(builtin):
    again = reproduce("builtin", grid=GRID)
    assert report_csv(again) == report_csv(builtin)
    assert format_report(again) == format_report(builtin)


def test_jobs_match_serial(builtin):
    assert report_csv(reproduce("builtin", grid=GRID, jobs=4)) == report_csv(builtin)


def test_directory_dataset(tmp_path, builtin):
    for rec in corpus.BUILTIN:
        write_spec(rec, tmp_path / f"{rec.name}.spec")
    from_dir = reproduce(tmp_path, grid=GRID)
    # files sort alphabetically, which keeps li2002_* ahead of shafir1992
    by_name = {r.record.name: r.comparisons for r in from_dir.runs}
    for run in builtin.runs:
        assert by_name[run.record.name] == run.comparisons


def test_resolve_dataset_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        resolve_dataset(tmp_path)
    assert [r.name for r in resolve_dataset("li2002_game4")] == ["li2002_game4"]


def test_expected_decisions():
    assert expected_decisions(corpus.get("shafir1992")) == ("defect", "cooperate")
    assert expected_decisions(corpus.get("li2002_game6")) == ("defect", "defect")
    assert expected_decisions(corpus.get("li2002_game3")) == ("defect", "")


def test_theta_missing_skips_quantum():
    rec = corpus.get("shafir1992")
    from dataclasses import replace

    report = reproduce([replace(rec, theta_reported=None)], grid=GRID)
    names = {c.quantity for c in report.comparisons}
    assert "p_defect_quantum" not in names and "theta_fit" not in names
    assert not any(n.startswith("meu_ql") for n in names)
    assert report.runs[0].theta_fit is not None
