import json
import math
from fractions import Fraction

import pytest

from arithdyn.cli import build_parser, main
from arithdyn.core.exceptions import MapParseError

pytestmark = pytest.mark.integration

SMALL_TOPOLOGICAL = "y^2*(x*y+1), x*(x*y^3+1)"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_height_json_is_exact(capsys):
    code, out, err = run(capsys, "height", "--point", "1/2,3")
    assert code == 0
    assert err == ""
    report = json.loads(out)
    meta = report.pop("meta")
    assert report == {
        "global_log_arg": 6,
        "locals": [{"place": "2", "log_arg": 2}, {"place": "inf", "log_arg": 3}],
    }
    assert meta["seed"] == 0
    assert meta["budgets"]["max_iter"] == 16


def test_height_with_map_lists_bad_places(capsys):
    code, out, _ = run(capsys, "height", "--map", "1/6*x^2 + y, x", "--point", "1/5,1")
    assert code == 0
    assert json.loads(out)["bad_places"] == ["2", "3", "5", "inf"]


def test_height_with_map_reports_local_heights_along_the_orbit(capsys):
    code, out, _ = run(capsys, "height", "--map", "1/6*x^2 + y, x", "--point", "1/5,1", "--max-iter", "3")
    assert code == 0
    report = json.loads(out)
    along = report["orbit_local_heights"]
    assert along["iterations"] == 3
    assert sorted(along["tau"]) == sorted(report["bad_places"])
    assert all(len(values) == 4 for values in along["tau"].values())
    assert [float(v) for v in along["tau"]["5"][:2]] == pytest.approx([math.log(5), math.log(25)])
    assert [float(v) for v in along["tau"]["2"][:2]] == pytest.approx([0, math.log(2)])
    assert float(along["tau"]["inf"][1]) == pytest.approx(math.log(Fraction(151, 150)))
    assert report["growth_bound"]["degree"] == 2
    assert report["growth_bound"]["constant_argument"] == 12
    assert float(report["growth_bound"]["constant"]) == pytest.approx(math.log(12))
    assert report["meta"]["budgets"]["max_iter"] == 3


def test_dyndeg_identity(capsys):
    code, out, _ = run(capsys, "dyndeg", "--map", "x, y")
    assert code == 0
    report = json.loads(out)
    assert report["degrees"]["lambda1"]["polynomial"] == "x - 1"
    assert report["degrees"]["lambda2"] == 1
    assert report["degrees"]["growth_exponent"] is None
    assert report["automorphism"] is True
    assert report["meta"]["schema"] == "arithdyn/1"


@pytest.mark.slow
def test_analyze_small_topological(capsys):
    code, out, _ = run(capsys, "analyze", "--map", SMALL_TOPOLOGICAL, "--point", "2,0")
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"map", "degrees", "points", "report", "meta"}
    assert report["map"] == "x*y^3 + y^2, x^2*y^3 + x"
    assert report["report"]["lambda1_polynomial"] == "x^2 - 4*x - 3"
    assert report["report"]["lambda2"] == 4
    assert report["report"]["inequality_star_ok"] is True
    point = report["points"][0]
    assert point["point"] == [2, 0]
    assert point["main_theorem"]["inequality_star_ok"] is True
    assert report["meta"]["budgets"]["max_iter"] == 16
    assert report["meta"]["seed"] == 0


def test_analyze_is_deterministic(capsys):
    argv = ("analyze", "--example", "henon", "--point", "3,5", "--point", "2,2", "--seed", "5")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == second[0] == 0
    assert first[1] == second[1]
    assert json.loads(first[1])["meta"]["seed"] == 5


def test_degrees_csv(capsys):
    code, out, _ = run(capsys, "degrees", "--example", "skew-product", "--max-iter", "6", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,degree,verified,primes"
    assert [line.split(",")[1] for line in lines[1:]] == ["1", "3", "8", "20", "48", "112", "256"]


def test_degrees_recurrence(capsys):
    code, out, _ = run(capsys, "degrees", "--example", "skew-product", "--max-iter", "6")
    report = json.loads(out)
    assert report["recurrence"]["coefficients"] == [4, -4]
    assert report["submultiplicativity_violations"] == []


def test_orbit_csv(capsys):
    code, out, _ = run(capsys, "orbit", "--example", "henon", "--point", "3,5", "--max-iter", "3", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,x1,x2,height,height_bits"
    assert [tuple(line.split(",")[1:3]) for line in lines[1:]] == [
        ("3", "5"), ("5", "22"), ("22", "479"), ("479", "229419")
    ]


def test_classify_text(capsys):
    code, out, _ = run(capsys, "classify", "--map", "y, y^2 - x", "--point", "0,0", "--format", "text")
    assert code == 0
    assert "classification.verdict: periodic" in out


def test_canheight_fixed_point(capsys):
    code, out, _ = run(capsys, "canheight", "--example", "henon", "--point", "2,2")
    report = json.loads(out)
    assert report["canonical_height"]["certified_zero"] is True
    assert report["functional_equation_residual"]["certified_zero"] is True


def test_timing_is_opt_in(capsys):
    _, plain, _ = run(capsys, "orbit", "--example", "henon", "--point", "3,5", "--max-iter", "2")
    _, timed, _ = run(capsys, "orbit", "--example", "henon", "--point", "3,5", "--max-iter", "2", "--timing")
    assert "timing" not in json.loads(plain)["meta"]
    assert "orbit" in json.loads(timed)["meta"]["timing"]


@pytest.mark.parametrize("argv,exit_code,code", [
    (("dyndeg", "--map", "x^2 +, y"), 2, "parse"),
    (("height", "--point", "1.5,2"), 2, "parse"),
    (("height", "--point", "1/2,3", "--max-iter", "abc"), 2, "parse"),
    (("height", "--point", "1/2,3", "--no-such-flag"), 2, "parse"),
    (("no-such-command",), 2, "parse"),
    ((), 2, "parse"),
    (("dyndeg", "--map", "x + y, x + y"), 3, "non-dominant"),
    (("dyndeg", "--example", "no-such-map"), 3, "precondition"),
    (("height",), 3, "precondition"),
    (("orbit", "--example", "henon", "--point", "1,1", "--point", "2,2"), 3, "precondition"),
    (("orbit", "--example", "henon", "--point", "1,1", "--max-iter", "-1"), 3, "precondition"),
    (("canheight", "--example", "henon", "--point", "3,5", "--bit-budget", "2"), 4, "budget"),
    (("canheight", "--example", "identity", "--point", "3,5"), 3, "precondition"),
])
def test_error_exit_codes(capsys, argv, exit_code, code):
    status, out, err = run(capsys, *argv)
    assert status == exit_code
    assert out == ""
    diagnostics = [line for line in err.splitlines() if line.startswith("arithdyn: error")]
    assert len(diagnostics) == 1
    assert diagnostics[0].startswith(f"arithdyn: error[{code}]:")
    assert err.rstrip("\n").endswith(diagnostics[0])


def test_map_and_example_are_exclusive():
    with pytest.raises(MapParseError) as exc:
        build_parser().parse_args(["dyndeg", "--map", "x, y", "--example", "henon"])
    assert exc.value.exit_code == 2
    assert "not allowed with argument" in exc.value.message


def test_usage_errors_are_single_line_diagnostics(capsys):
    status, out, err = run(capsys, "height", "--point", "1/2,3", "--max-iter", "abc")
    assert status == 2
    assert out == ""
    assert err.count("\n") == 1
    assert err.startswith(
        "arithdyn: error[parse]: arithdyn height: argument --max-iter: invalid int value: 'abc'"
    )


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "arithdyn 1.0.0" in capsys.readouterr().out
