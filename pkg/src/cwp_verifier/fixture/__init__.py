"""The bundled case-management model, populations and scenarios."""

from cwp_verifier.fixture.loader import (
    DATA_DIR,
    FixtureError,
    FixtureManifest,
    PopulationEntry,
    ScenarioEntry,
    fixture_clock,
    golden_trace,
    load_fixture,
    load_manifest,
    load_population,
    load_scenario,
)

__all__ = [
    "DATA_DIR",
    "FixtureError",
    "FixtureManifest",
    "PopulationEntry",
    "ScenarioEntry",
    "fixture_clock",
    "golden_trace",
    "load_fixture",
    "load_manifest",
    "load_population",
    "load_scenario",
]
