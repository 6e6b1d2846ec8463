from pathlib import Path

import pytest

from config import DEFAULT_TOLERANCES, Tolerances, load_tolerances


def test_defaults():
    assert DEFAULT_TOLERANCES.exact_tol == 1e-12
    assert DEFAULT_TOLERANCES.qybe_tol == 1e-10
    assert DEFAULT_TOLERANCES.bisection_xtol == 1e-10


def test_override_accepts_upper_and_lower_case():
    tol = Tolerances().override({"EXACT_TOL": "1e-9", "qybe_tol": 2e-8})
    assert tol.exact_tol == 1e-9
    assert tol.qybe_tol == 2e-8
    # the original is untouched
    assert DEFAULT_TOLERANCES.exact_tol == 1e-12


@pytest.mark.parametrize("values, error", [
    ({"no_such_tol": "1"}, KeyError),
    ({"exact_tol": "tiny"}, ValueError),
    ({"exact_tol": "-1e-3"}, ValueError),
    ({"exact_tol": "0"}, ValueError),
])
def test_override_rejects(values, error):
    with pytest.raises(error):
        Tolerances().override(values)


def test_load_from_dotenv_file(tmp_path):
    path = tmp_path / "tolerances.env"
    path.write_text("QYBE_TOL=1e-8\nEXACT_TOL=1e-11\n")
    tol = load_tolerances(path)
    assert tol.qybe_tol == 1e-8
    assert tol.exact_tol == 1e-11


def test_flag_overrides_win_over_file(tmp_path):
    path = tmp_path / "tolerances.env"
    path.write_text("QYBE_TOL=1e-8\n")
    tol = load_tolerances(path, {"qybe_tol": "3e-7"})
    assert tol.qybe_tol == 3e-7


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_tolerances("/nonexistent/tolerances.env")


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("EXACT_TOL", "0.5")
    monkeypatch.setenv("QYBE_TOL", "0.5")
    assert load_tolerances() == DEFAULT_TOLERANCES


def test_example_file_holds_the_defaults():
    example = Path(__file__).resolve().parent.parent / "tolerances.env.example"
    assert load_tolerances(example) == DEFAULT_TOLERANCES
