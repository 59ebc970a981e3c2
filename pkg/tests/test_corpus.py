import pytest

from qlid.harness import corpus
from qlid.harness.records import MEU_KEYS


def test_eight_experiments():
    names = [r.name for r in corpus.BUILTIN]
    assert names == ["shafir1992"] + [f"li2002_game{i}" for i in range(1, 8)]


@pytest.mark.parametrize("record", corpus.BUILTIN, ids=lambda r: r.name)
def test_classical_column_consistent(record):
    assert abs(record.p_classical - 0.5 * (record.p_known_defect + record.p_known_cooperate)) <= 5e-4
    assert record.theta_reported is not None
    assert set(record.reference_meu) == set(MEU_KEYS)


def test_bold_rows_do_not_violate():
    flags = {r.name: r.stp_violation for r in corpus.BUILTIN}
    assert [n for n, v in flags.items() if not v] == ["li2002_game3", "li2002_game6", "li2002_game7"]


def test_published_values_spot_check():
    shafir = corpus.get("shafir1992")
    assert (shafir.p_known_defect, shafir.p_known_cooperate, shafir.p_unknown_observed) == (0.97, 0.84, 0.63)
    assert corpus.get("li2002_game7").theta_reported == 3.7812
    assert corpus.get("li2002_game2").payoffs["dd"] == 73


def test_unknown_name():
    with pytest.raises(KeyError, match="no built-in"):
        corpus.get("li2002_game8")
