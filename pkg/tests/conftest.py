"""Shared fixtures: deterministic hypothesis profile and the DSL corpus."""

from importlib import resources

import pytest
from hypothesis import HealthCheck, settings

from forcelab import dsl

settings.register_profile(
    "forcelab",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("forcelab")

FIXTURE_FILES = (
    "core.fl",
    "sweet_valid.fl",
    "sweet_invalid.fl",
    "extends_bad.fl",
    "towers.fl",
)


def fixture_text(name: str) -> str:
    return (resources.files("forcelab") / "fixtures" / name).read_text()


def load_fixture(name: str):
    """Parse one shipped fixture file; returns (Document, resolved env dict)."""
    doc = dsl.parse(fixture_text(name))
    return doc, dsl.resolve(doc)


def map_decls(doc) -> dict:
    return {d.name: d for d in doc.declarations if isinstance(d, dsl.MapDecl)}


@pytest.fixture(scope="session")
def core():
    return load_fixture("core.fl")


@pytest.fixture(scope="session")
def sweet_valid():
    return load_fixture("sweet_valid.fl")


@pytest.fixture(scope="session")
def sweet_invalid():
    return load_fixture("sweet_invalid.fl")


@pytest.fixture(scope="session")
def extends_bad():
    return load_fixture("extends_bad.fl")


@pytest.fixture(scope="session")
def towers():
    return load_fixture("towers.fl")
