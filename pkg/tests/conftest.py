"""
Shared fixtures for the test suite
"""

import os

# Set environment for testing before any package module reads settings
os.environ['ENVIRONMENT'] = 'test'
os.environ.setdefault('LOG_LEVEL', 'WARNING')

import pytest
from typer.testing import CliRunner

from config.settings import settings
from lib.permops import chain_cycle
from lib.statespace import make_basis


@pytest.fixture
def fresh_settings(monkeypatch):
    """Settings re-read after the test's own environment changes"""
    settings.reload()
    yield settings
    settings.reload()


@pytest.fixture
def basis3():
    return make_basis(3)


@pytest.fixture
def cycle():
    """Û = P12 P23"""
    return chain_cycle()


@pytest.fixture
def runner():
    return CliRunner()

