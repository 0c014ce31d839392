#!/usr/bin/env python3
"""Rewrite the fixture's golden traces from the current simulator."""

import sys

from cwp_verifier.fixture import fixture_clock, load_fixture, load_manifest, load_scenario
from cwp_verifier.statechart.simulation import simulate


def main():
    manifest = load_manifest()
    model = load_fixture(manifest)
    clock = fixture_clock(manifest)
    failed = False

    for name, entry in sorted(manifest.scenarios.items()):
        if entry.golden is None:
            continue
        trace = simulate(model, load_scenario(name, model, manifest), clock)
        if not trace.ok:
            # A failing scenario must not become the expected output
            print(f"{name}: {len(trace.failures)} failed expectation(s), golden trace kept")
            failed = True
            continue
        text = trace.to_text()
        changed = not entry.golden.exists() or entry.golden.read_text(encoding="utf-8") != text
        entry.golden.write_text(text, encoding="utf-8")
        print(f"{name}: {'updated' if changed else 'unchanged'} {entry.golden}")

    return 1 if failed else 0


if __name__ == '__main__':
    sys.exit(main())
