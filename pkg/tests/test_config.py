import pytest
from pydantic import ValidationError

from robustkz.config import Settings


def test_defaults(monkeypatch):
    monkeypatch.delenv("ROBUSTKZ_THREADS", raising=False)
    s = Settings(_env_file=None)
    assert s.threads == 1
    assert s.oracle_budget == 10**7
    assert s.search_budget == 10**8
    assert s.matrix_validation_limit == 500
    assert s.assume_alpha is None


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("ROBUSTKZ_THREADS", "4")
    monkeypatch.setenv("ROBUSTKZ_ORACLE_BUDGET", "1000")
    s = Settings(_env_file=None)
    assert s.threads == 4
    assert s.oracle_budget == 1000


def test_env_file(tmp_path, monkeypatch):
    monkeypatch.delenv("ROBUSTKZ_LOG_LEVEL", raising=False)
    env = tmp_path / ".env"
    env.write_text("ROBUSTKZ_LOG_LEVEL=DEBUG\nUNRELATED_SETTING=1\n")
    assert Settings(_env_file=env).log_level == "DEBUG"


@pytest.mark.parametrize("name, value", [("ROBUSTKZ_THREADS", "0"),
                                         ("ROBUSTKZ_ASSUME_ALPHA", "0.5")])
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValidationError):
        Settings(_env_file=None)
