"""Shared fixtures."""

import pytest
from rdflib import Namespace

from cwp_verifier.fixture import load_fixture, load_manifest
from cwp_verifier.triples.terms import PrefixTable

EX = Namespace("http://example.org/test#")


@pytest.fixture
def prefixes():
    """Prefix table binding ``ex:`` as the default prefix."""
    return PrefixTable({"ex": str(EX)}, default="ex")


@pytest.fixture(scope="session")
def manifest():
    return load_manifest()


@pytest.fixture(scope="session")
def casemgmt(manifest):
    """The parsed case-management model (shared; do not mutate)."""
    return load_fixture(manifest)
