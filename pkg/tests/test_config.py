import logging

import pytest

from src import runtime_config
from src.config.setting import EngineSettings


def test_engine_settings_defaults(monkeypatch):
    monkeypatch.delenv("ARQ_THREADS", raising=False)
    monkeypatch.delenv("ARQ_LOG_LEVEL", raising=False)
    settings = EngineSettings.from_env()
    assert settings.threads == 1
    assert settings.log_level == "WARNING"
    assert settings.logging_level == logging.WARNING


def test_engine_settings_read_the_environment(monkeypatch):
    monkeypatch.setenv("ARQ_THREADS", ' "4" ')
    monkeypatch.setenv("ARQ_LOG_LEVEL", "debug")
    settings = EngineSettings.from_env()
    assert settings.threads == 4
    assert settings.logging_level == logging.DEBUG


@pytest.mark.parametrize("value", ["zero", "0", "-2"])
def test_bad_thread_counts_are_rejected(monkeypatch, value):
    monkeypatch.setenv("ARQ_THREADS", value)
    with pytest.raises(RuntimeError):
        EngineSettings.from_env()


def test_bad_log_level_is_rejected(monkeypatch):
    monkeypatch.setenv("ARQ_LOG_LEVEL", "LOUD")
    with pytest.raises(RuntimeError):
        EngineSettings.from_env()


def test_settings_file_covers_the_defaults():
    settings = runtime_config.load_settings()
    assert set(runtime_config.DEFAULT_SETTINGS) <= set(settings)
    assert settings["serial_n"] == 4
    assert runtime_config.SETTINGS_PATH.exists()
