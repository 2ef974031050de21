import json
import logging

import pytest

from arithdyn.core.config import Settings, get_settings
from arithdyn.core.exceptions import (
    EXIT_BUDGET,
    EXIT_PARSE,
    EXIT_PRECONDITION,
    ArithDynError,
    BadPrimeError,
    BudgetExceededError,
    InconsistencyError,
    MapParseError,
    NonDominantMapError,
    PreconditionError,
    UndeterminedError,
)
from arithdyn.core.monitoring import PerformanceMonitor, monitor_performance
from arithdyn.core.utils import configure_logging, decimal_string, format_rational, load_json_data, parse_rational

pytestmark = pytest.mark.unit


def test_default_settings(clean_env):
    settings = Settings()
    assert settings.SEED == 0
    assert settings.MAX_ITER == 16
    assert settings.ZERO_THRESHOLD == 0.05
    assert settings.HEIGHT_BOUND == 20.0
    assert settings.CLASSIFY_WINDOW == 5
    assert settings.API_PREFIX == "/api"


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("ARITHDYN_SEED", "17")
    monkeypatch.setenv("ARITHDYN_MAX_ITER", "9")
    settings = Settings()
    assert settings.SEED == 17
    assert settings.MAX_ITER == 9


def test_get_settings_is_cached():
    assert get_settings() is get_settings()


@pytest.mark.parametrize("error,exit_code,code", [
    (MapParseError("bad token", 1, 4), EXIT_PARSE, "parse"),
    (PreconditionError("outside domain"), EXIT_PRECONDITION, "precondition"),
    (NonDominantMapError("jacobian"), EXIT_PRECONDITION, "non-dominant"),
    (BadPrimeError("p divides"), EXIT_PRECONDITION, "bad-prime"),
    (BudgetExceededError("too big", partial_degree=12), EXIT_BUDGET, "budget"),
    (InconsistencyError("primes disagree"), EXIT_BUDGET, "internal-inconsistency"),
    (UndeterminedError("no repeat"), EXIT_BUDGET, "undetermined"),
])
def test_error_codes(error, exit_code, code):
    assert error.exit_code == exit_code
    assert error.code == code
    assert isinstance(error, ArithDynError)


def test_diagnostic_line():
    error = BudgetExceededError("coefficient bit\nbudget exceeded", partial_degree=40, bit_budget=64)
    diagnostic = error.to_diagnostic()
    assert diagnostic.startswith("arithdyn: error[budget]: coefficient bit budget exceeded ")
    assert "\n" not in diagnostic
    assert json.loads(diagnostic[diagnostic.index("{"):]) == {
        "bit_budget": 64,
        "partial_degree": 40,
    }
    assert error.to_dict()["details"]["partial_degree"] == 40


def test_format_and_parse_rational():
    assert format_rational(4) == 4
    assert format_rational(parse_rational("6/4")) == "3/2"
    assert format_rational(parse_rational(" -10/5 ")) == -2
    for bad in ("1.5", "2e3", "1/0", "", "a/2"):
        with pytest.raises(ArithDynError):
            parse_rational(bad)


def test_decimal_string_is_deterministic():
    assert decimal_string(2, 5) == decimal_string(2, 5)
    assert decimal_string(0.5, 3).startswith("0.5")


def test_load_json_data(temp_data_dir):
    path = f"{temp_data_dir}/data.json"
    with open(path, "w") as f:
        json.dump({"example_maps": []}, f)
    assert load_json_data(path) == {"example_maps": []}
    with pytest.raises(ArithDynError):
        load_json_data(f"{temp_data_dir}/missing.json")
    with open(path, "w") as f:
        f.write("{not json")
    with pytest.raises(ArithDynError):
        load_json_data(path)


def test_configure_logging():
    configure_logging("debug")
    assert logging.getLogger().level == logging.DEBUG
    configure_logging("WARNING")
    assert logging.getLogger().level == logging.WARNING


def test_performance_monitor_accumulates():
    timings = {}
    for _ in range(2):
        with PerformanceMonitor("step", timings=timings):
            pass
    assert set(timings) == {"step"}
    assert timings["step"] >= 0

    @monitor_performance()
    def add(a, b):
        return a + b

    assert add(2, 3) == 5
