"""Unit tests for the fixture loader."""

import pytest

from cwp_verifier.fixture import load_manifest
from cwp_verifier.fixture.loader import (
    FixtureError,
    fixture_clock,
    golden_trace,
    load_population,
    load_scenario,
)
from cwp_verifier.triples.store import TripleStore


class TestLoadManifest:
    """Tests for load_manifest."""

    def test_bundled_manifest(self, manifest):
        """Verify populations, scenarios and the clock are listed."""
        assert "valid" in manifest.populations
        assert manifest.population("no-plan").expect == (
            "CONSTRAINT:withinPlan",
            "STRUCTURAL:CompositionMultiOwner",
        )
        assert manifest.scenario("labtest").final == "Resolved"
        assert manifest.scenario("constraints").final is None
        assert manifest.clock == "2016-01-01T00:00:00"

    def test_every_file_exists(self, manifest):
        """Verify all referenced files are present."""
        assert all(path.is_file() for path in manifest.files())

    def test_unknown_entries(self, manifest):
        """Verify lookups of unknown names raise FixtureError."""
        with pytest.raises(FixtureError):
            manifest.population("nope")
        with pytest.raises(FixtureError):
            manifest.scenario("nope")

    def test_missing_manifest(self, tmp_path):
        """Verify a directory without a manifest is refused."""
        with pytest.raises(FixtureError):
            load_manifest(tmp_path)

    def test_missing_referenced_file(self, tmp_path):
        """Verify a manifest naming an absent file is refused."""
        (tmp_path / "manifest.yaml").write_text("model: absent.model\n", encoding="utf-8")
        with pytest.raises(FixtureError) as exc_info:
            load_manifest(tmp_path)
        assert "absent.model" in str(exc_info.value)

    def test_manifest_without_model(self, tmp_path):
        """Verify the model entry is required."""
        (tmp_path / "manifest.yaml").write_text("populations: {}\n", encoding="utf-8")
        with pytest.raises(FixtureError):
            load_manifest(tmp_path)


class TestLoaders:
    """Tests for the population, scenario and trace loaders."""

    def test_population(self, casemgmt, manifest):
        """Verify populations are read with the model prefixes."""
        store = load_population("valid", casemgmt, manifest)
        assert isinstance(store, TripleStore)
        assert len(store) > 0

    def test_population_leaves_model_prefixes(self, casemgmt, manifest):
        """Verify parsing a population does not add prefixes to the model."""
        before = dict(casemgmt.prefixes.items())
        load_population("valid", casemgmt, manifest)
        assert dict(casemgmt.prefixes.items()) == before

    def test_scenario(self, casemgmt, manifest):
        """Verify scenarios carry their declared names."""
        assert load_scenario("imaging", casemgmt, manifest).name == "imaging"

    def test_golden_trace(self, manifest):
        """Verify golden traces start with the scenario header."""
        assert golden_trace("consult", manifest).startswith("scenario consult\nclock 2016-01-01T00:00:00\n")

    def test_fixture_clock(self, manifest):
        """Verify the fixture clock is the manifest's."""
        assert str(fixture_clock(manifest)) == "2016-01-01T00:00:00"
