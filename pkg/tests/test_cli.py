import csv
import json

import pytest

from src.cli import main
from src.config.settings import settings
from src.errors import EXIT_OK, EXIT_USAGE
from src.io.models import TableauModel
from src.schemes import library


@pytest.fixture(autouse=True)
def restore_settings():
    saved = (settings.degree, settings.threads, settings.seed)
    yield
    settings.degree, settings.threads, settings.seed = saved


def test_trees(capsys):
    assert main(["trees", "3"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4
    assert lines[0].split("\t") == ["()", "1", "1", "1"]


def test_trees_json(capsys):
    main(["trees", "2", "--format", "json"])
    rows = json.loads(capsys.readouterr().out)
    assert rows[1] == {"tree": "(())", "order": 2, "sigma": 1, "factorial": 2}


def test_hopf_antipode(capsys):
    assert main(["hopf", "(())", "antipode"]) == EXIT_OK
    assert set(capsys.readouterr().out.splitlines()) == {"-1 * (())", "1 * () ()"}


def test_hopf_coproduct_csv(capsys):
    main(["hopf", "(())", "reduced", "--format", "csv"])
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows == [["coefficient", "left", "right"], ["1", "()", "()"]]


def test_decompose_tree(capsys):
    assert main(["decompose", "(())"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("tree: (())")
    assert "idsqrt:" in out and "minus:" in out and "plus:" in out
    assert "1/2 * (())" in out


def test_decompose_random(capsys):
    assert main(["decompose", "--random", "--degree", "4", "--seed", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "seed 3, degree 4" in out
    assert "no" not in out.split("\n", 1)[1]


def test_decompose_needs_input():
    assert main(["decompose"]) == EXIT_USAGE


def test_bad_tree_is_a_usage_error():
    assert main(["hopf", "(()", "antipode"]) == EXIT_USAGE


def test_bad_degree_exits():
    with pytest.raises(SystemExit):
        main(["trees", "--degree", "11"])


def test_help_names_the_ees_families(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    help_text = " ".join(capsys.readouterr().out.split())
    assert "explicit and effectively symmetric (EES) families" in help_text


def test_scheme_check(capsys):
    assert main(["scheme", "check", "midpoint", "--degree", "6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "ord: 2" in out
    assert "ord+: >= 6" in out
    assert "symmetric: yes" in out


def test_scheme_show_json(capsys):
    main(["scheme", "show", "rk4", "--format", "json"])
    model = TableauModel.model_validate_json(capsys.readouterr().out)
    assert model.name == "rk4"
    assert model.b == ["1/6", "1/3", "1/3", "1/6"]


def test_scheme_from_file(tmp_path, capsys):
    path = tmp_path / "heun.json"
    path.write_text(TableauModel.from_tableau(library.heun2()).model_dump_json())
    assert main(["scheme", "check", str(path), "--degree", "4"]) == EXIT_OK
    assert "ord: 2" in capsys.readouterr().out


def test_unknown_scheme():
    assert main(["scheme", "check", "rk9"]) == EXIT_USAGE
    assert main(["scheme", "check", "missing.json"]) == EXIT_USAGE


def test_ees_derive(capsys):
    assert main(["ees", "derive", "--family", "2,5", "--x", "1/4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert '"name": "ees25:1/4"' in out
    assert "EC(5): 0 conditions" in out
    assert "EC(4):" in out and "max |residual| = 0.000e+00" in out


@pytest.mark.parametrize("x", ["0.1", "1/2"])
def test_ees_derive_rejects_parameter(x):
    assert main(["ees", "derive", "--family", "2,5", "--x", x]) == EXIT_USAGE


def test_ees_scan(tmp_path, capsys):
    path = tmp_path / "scan.csv"
    assert main(["ees", "derive", "--family", "2,5", "--x", "scan", "--csv", str(path)]) == EXIT_OK
    assert "minimizer" in capsys.readouterr().out
    assert path.read_text().startswith("x,objective")


def test_stability_report(capsys):
    assert main(["stability", "--scheme", "euler"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "R(z) = 1 + z" in out
    assert "symmetric component: A-stable" in out
    assert "[-2.000000, 0]" in out


def test_stability_raster(tmp_path):
    path = tmp_path / "star.pgm"
    args = ["stability", "--scheme", "rk4", "--raster", str(path), "--star", "--resolution", "21", "--threads", "1"]
    assert main(args) == EXIT_OK
    assert path.read_bytes().startswith(b"P5\n21 21\n255\n")
    assert json.loads(path.with_suffix(".json").read_text())["kind"] == "star"


def test_integrate_reverse(capsys):
    args = ["integrate", "--problem", "inverse-square", "--scheme", "midpoint", "--h", "0.1", "--t-end", "10", "--reverse"]
    assert main(args) == EXIT_OK
    assert "midpoint: reversal error" in capsys.readouterr().out


def test_integrate_galactic_section(tmp_path, capsys):
    section = tmp_path / "section.csv"
    args = [
        "integrate", "--problem", "galactic", "--scheme", "rk4", "--h", "0.025", "--t-end", "20",
        "--poincare", str(section), "--hamiltonian-mae",
    ]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    assert "section points:" in out and "hamiltonian MAE:" in out
    assert section.read_text().splitlines()[0] == "t,q1,q3,p1,p3"


def test_integrate_without_hamiltonian():
    args = ["integrate", "--problem", "linear", "--scheme", "rk4", "--h", "0.1", "--t-end", "1", "--hamiltonian-mae"]
    assert main(args) == EXIT_USAGE


def test_verify_list(capsys):
    assert main(["verify", "--list"]) == EXIT_OK
    ids = capsys.readouterr().out.splitlines()
    assert "galactic.full" in ids and "rk.dirk" in ids


def test_verify_prefix(capsys):
    assert main(["verify", "hopf.antipode."]) == EXIT_OK
    assert "4 passed, 0 failed" in capsys.readouterr().out


def test_verify_discrepancy_passes(capsys):
    assert main(["verify", "rk.dirk", "--format", "csv"]) == EXIT_OK
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[1][:2] == ["rk.dirk", "documented-discrepancy"]
