"""Loading the bundled case-management fixture."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import yaml

from cwp_verifier.cli.parser import parse_model, parse_scenario
from cwp_verifier.errors import VerifierError
from cwp_verifier.query.clock import Clock
from cwp_verifier.statechart.scenario import Scenario
from cwp_verifier.triples.store import TripleStore
from cwp_verifier.triples.textformat import parse_triples
from cwp_verifier.workmodel import WorkModel

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
MANIFEST_FILE = "manifest.yaml"


class FixtureError(VerifierError):
    code = "FIXTURE_ERROR"


@dataclass(frozen=True)
class PopulationEntry:
    """An instance population and the finding codes ``check`` must report for it."""

    name: str
    file: Path
    expect: tuple[str, ...] = ()


@dataclass(frozen=True)
class ScenarioEntry:
    """A scenario, its golden trace and the state its orders end in."""

    name: str
    file: Path
    golden: Optional[Path] = None
    final: Optional[str] = None


@dataclass
class FixtureManifest:
    """What the fixture directory holds."""

    root: Path
    model: Path
    clock: str
    populations: dict[str, PopulationEntry] = field(default_factory=dict)
    scenarios: dict[str, ScenarioEntry] = field(default_factory=dict)

    def files(self) -> list[Path]:
        """Every file the manifest refers to."""
        paths = [self.model]
        paths += [p.file for p in self.populations.values()]
        for entry in self.scenarios.values():
            paths.append(entry.file)
            if entry.golden is not None:
                paths.append(entry.golden)
        return paths

    def population(self, name: str) -> PopulationEntry:
        try:
            return self.populations[name]
        except KeyError:
            raise FixtureError(f"fixture has no population '{name}'", subject=name)

    def scenario(self, name: str) -> ScenarioEntry:
        try:
            return self.scenarios[name]
        except KeyError:
            raise FixtureError(f"fixture has no scenario '{name}'", subject=name)


def load_manifest(root: Union[str, Path, None] = None) -> FixtureManifest:
    """Read ``manifest.yaml`` from the fixture directory.

    Args:
        root: Fixture directory; defaults to the bundled one

    Raises:
        FixtureError: If the manifest is missing or malformed, or names a
            file that does not exist
    """
    root = Path(root) if root is not None else DATA_DIR
    path = root / MANIFEST_FILE
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise FixtureError(f"cannot read fixture manifest {path}: {exc}", subject=str(path))
    except yaml.YAMLError as exc:
        raise FixtureError(f"invalid YAML in {path}: {exc}", subject=str(path))
    if not isinstance(data, dict) or "model" not in data:
        raise FixtureError(f"{path} must be a mapping with a 'model' entry", subject=str(path))

    populations = {
        name: PopulationEntry(name, root / entry["file"], tuple(entry.get("expect") or ()))
        for name, entry in (data.get("populations") or {}).items()
    }
    scenarios = {
        name: ScenarioEntry(
            name,
            root / entry["file"],
            root / entry["golden"] if entry.get("golden") else None,
            entry.get("final"),
        )
        for name, entry in (data.get("scenarios") or {}).items()
    }
    manifest = FixtureManifest(
        root=root,
        model=root / data["model"],
        clock=str(data.get("clock") or Clock.at()),
        populations=populations,
        scenarios=scenarios,
    )
    missing = [p for p in manifest.files() if not p.is_file()]
    if missing:
        raise FixtureError(f"fixture file {missing[0]} does not exist", subject=str(missing[0]))
    logger.debug(
        "fixture manifest: %d population(s), %d scenario(s)", len(populations), len(scenarios)
    )
    return manifest


def load_fixture(manifest: Optional[FixtureManifest] = None) -> WorkModel:
    """Parse the case-management model."""
    manifest = manifest or load_manifest()
    return parse_model(manifest.model.read_text(encoding="utf-8"))


def load_population(
    name: str, model: Optional[WorkModel] = None, manifest: Optional[FixtureManifest] = None
) -> TripleStore:
    """Parse one of the fixture's instance populations."""
    manifest = manifest or load_manifest()
    model = model or load_fixture(manifest)
    text = manifest.population(name).file.read_text(encoding="utf-8")
    return parse_triples(text, model.prefixes.copy())


def load_scenario(
    name: str, model: Optional[WorkModel] = None, manifest: Optional[FixtureManifest] = None
) -> Scenario:
    manifest = manifest or load_manifest()
    model = model or load_fixture(manifest)
    text = manifest.scenario(name).file.read_text(encoding="utf-8")
    return parse_scenario(text, model.prefixes)


def golden_trace(name: str, manifest: Optional[FixtureManifest] = None) -> str:
    """Expected trace text of a scenario under the fixture clock."""
    manifest = manifest or load_manifest()
    entry = manifest.scenario(name)
    if entry.golden is None:
        raise FixtureError(f"scenario '{name}' has no golden trace", subject=name)
    return entry.golden.read_text(encoding="utf-8")


def fixture_clock(manifest: Optional[FixtureManifest] = None) -> Clock:
    return Clock.at((manifest or load_manifest()).clock)
