import logging

import pytest
from pydantic import ValidationError
from pythonjsonlogger import jsonlogger

from coherence_bounds.settings import Settings, setup_logging


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("COHB_LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("COHB_N_JOBS", "2")
    settings = Settings()
    assert settings.log_level == "DEBUG"
    assert settings.n_jobs == 2


def test_explicit_values_win_over_environment(monkeypatch):
    monkeypatch.setenv("COHB_LOG_FORMAT", "json")
    assert Settings.from_env().log_format == "json"
    assert Settings.from_env(log_format="plain").log_format == "plain"


def test_invalid_values_rejected():
    with pytest.raises(ValidationError):
        Settings(log_format="xml")
    with pytest.raises(ValidationError):
        Settings(n_jobs=0)


def test_json_logging_installs_json_formatter():
    root = logging.getLogger()
    saved = list(root.handlers), root.level
    try:
        setup_logging(Settings(log_format="json", log_level="INFO"))
        assert root.level == logging.INFO
        assert len(root.handlers) == 1
        assert isinstance(root.handlers[0].formatter, jsonlogger.JsonFormatter)
    finally:
        for h in list(root.handlers):
            root.removeHandler(h)
        for h in saved[0]:
            root.addHandler(h)
        root.setLevel(saved[1])
