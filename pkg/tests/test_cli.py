import json

from synthdg.cli import main
from synthdg.report import EXIT_INPUT_ERROR, EXIT_LAW_FAILURE, EXIT_OK

SABOTAGED = """
version: 1
algebras:
  W_D:
    generators: [X]
    relations: [{X: 2}]
homs:
  broken:
    source: W_D
    target: W_D
    images: {X: "X + 1"}
"""


def test_algebra_show(capsys):
    assert main(["algebra", "show", "W_D2"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "dim 3: 1, X, Y"


def test_algebra_show_free_generators(capsys):
    assert main(["algebra", "show", "RxD"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "k[Z,X]/(X^2) is not a Weil algebra, free generators: Z"


def test_unknown_algebra(capsys):
    assert main(["algebra", "show", "nope"]) == EXIT_INPUT_ERROR
    assert "algebras.nope" in capsys.readouterr().err


def test_hom_check(capsys):
    assert main(["hom", "check", "diagonal"]) == EXIT_OK
    assert "PASS document.homs.diagonal" in capsys.readouterr().out


def test_sabotaged_hom(tmp_path, capsys):
    path = tmp_path / "doc.yaml"
    path.write_text(SABOTAGED)
    assert main(["hom", "check", "broken", "--input", str(path), "--json"]) == EXIT_LAW_FAILURE
    data = json.loads(capsys.readouterr().out)
    assert data["failed"] == 1
    assert data["entries"][0]["witness"]["relation"] == "X^2"


def test_prolong_eval(capsys):
    assert main(["prolong", "eval", "square", "--algebra", "W_D", "--point", "3 + 5*X"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "(9 + 30*X)"


def test_prolong_eval_with_floats(capsys):
    code = main(["prolong", "eval", "square", "--algebra", "W_D", "--point", "1/2 + X", "--scalar", "float"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "(0.25 + X)"


def test_form_validate(capsys):
    assert main(["form", "validate", "x_dy", "--samples", "5"]) == EXIT_OK
    assert "0 failed" in capsys.readouterr().out


def test_form_d(capsys):
    assert main(["form", "d", "x_dy", "--samples", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "d(x_dy) = 1 dx^dy"


def test_form_d_json(capsys):
    assert main(["form", "d", "y_dx", "--samples", "4", "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert {e["id"] for e in data["entries"]} == {"oracle.matches.y_dx", "oracle.is-form.y_dx"}
    assert data["seed"] == 42


def test_missing_config(tmp_path, capsys):
    assert main(["algebra", "show", "W_D", "--config", str(tmp_path / "absent.json")]) == EXIT_INPUT_ERROR


def test_algebra_show_ground_field(capsys):
    assert main(["algebra", "show", "k"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "dim 1: 1"


def test_algebra_show_cube(capsys):
    assert main(["algebra", "show", "W_D3"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("dim 8: 1, X1, X2, X3, X1*X2")


def test_check_all_report_is_byte_identical(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"samples": 4, "trials": 4, "max_perm_size": 4}))
    args = ["check", "all", "--config", str(config), "--seed", "7", "--json"]
    assert main(args) == EXIT_OK
    first = capsys.readouterr().out
    assert main(args) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    data = json.loads(first)
    assert data["seed"] == 7
    assert data["failed"] == 0
    assert data["passed"] == len(data["entries"])
