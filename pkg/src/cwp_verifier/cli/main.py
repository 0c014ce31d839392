"""``cwp-verify`` command line."""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from cwp_verifier import __version__
from cwp_verifier.cli.commands import (
    cmd_check,
    cmd_export,
    cmd_parse,
    cmd_simulate,
    cmd_translate,
    cmd_verify,
)
from cwp_verifier.cli.parser import document_kind, parse_document, parse_model, parse_scenario
from cwp_verifier.cli.report import EXIT_OK, EXIT_TOOL_ERROR, Report, ReportFormat
from cwp_verifier.config import VerifierConfig, load_config
from cwp_verifier.errors import ModelSyntaxError, VerifierError
from cwp_verifier.query.clock import Clock
from cwp_verifier.schema.semantic import PartWholeStrategy, ValuePartitionStrategy
from cwp_verifier.triples.textformat import parse_triples

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwp-verify",
        description="Check, simulate and verify conceptual work product models",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML configuration file (default: ./cwp-verifier.yaml)")
    parser.add_argument("--clock", help="starting clock, YYYY-MM-DDThh:mm:ss")
    parser.add_argument("--max-iterations", type=int, help="pass cap for every rule run")
    parser.add_argument("--format", choices=[f.value for f in ReportFormat], default="text")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    parser.add_argument("-o", "--output", help="write the command's text output here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    parse = sub.add_parser("parse", help="print a model, scenario or triple file in canonical form")
    parse.add_argument("file")
    parse.add_argument("--model", help="model whose prefixes a scenario or triple file uses")

    check = sub.add_parser("check", help="check instance data against a model")
    check.add_argument("model")
    check.add_argument("data")

    translate = sub.add_parser("translate", help="export the translated schema")
    translate.add_argument("model")
    translate.add_argument("--part-whole", choices=[s.value for s in PartWholeStrategy])
    translate.add_argument("--value-partition", choices=[s.value for s in ValuePartitionStrategy])
    translate.add_argument("--ordered-index-limit", type=int)

    simulate = sub.add_parser("simulate", help="run a scenario and write its trace")
    simulate.add_argument("model")
    simulate.add_argument("scenario")

    verify = sub.add_parser("verify", help="verify solvability of the model's state machines")
    verify.add_argument("model")
    verify.add_argument("scenarios", nargs="*", help="scenarios replayed under shuffled rule orders")
    verify.add_argument("--permutations", type=int)
    verify.add_argument("--workers", type=int)

    export = sub.add_parser("export", help="export a model's schema or a triple file as triples")
    export.add_argument("file")
    export.add_argument("--model", help="model whose prefixes a triple file uses")
    return parser


def _read(path: str) -> tuple[str, bytes]:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return data.decode("utf-8"), data


def _configure_logging(verbosity: int, config: VerifierConfig) -> None:
    level = {0: config.log_level.upper(), 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(args: argparse.Namespace) -> int:
    config = load_config(args.config).override(
        max_iterations=args.max_iterations,
        clock=args.clock,
        permutations=getattr(args, "permutations", None),
        workers=getattr(args, "workers", None),
    )
    _configure_logging(args.verbose, config)
    logger.debug("running %s with %s", args.command, config)
    clock = Clock.at(config.clock) if config.clock else Clock.at()
    fmt = ReportFormat(args.format)
    report: Optional[Report] = None
    inputs: list[tuple[str, bytes]] = []

    def load_model(path: str):
        text, data = _read(path)
        inputs.append((path, data))
        return parse_model(text)

    if args.command == "parse":
        prefixes = load_model(args.model).prefixes if args.model else None
        text, _ = _read(args.file)
        document = parse_document(text, prefixes)
        _emit(cmd_parse(document, prefixes), args.output)
        return EXIT_OK

    if args.command == "export":
        text, _ = _read(args.file)
        if document_kind(text) == "model":
            _emit(cmd_export(parse_model(text)), args.output)
        else:
            prefixes = load_model(args.model).prefixes.copy() if args.model else None
            _emit(cmd_export(parse_triples(text, prefixes)), args.output)
        return EXIT_OK

    model = load_model(args.model)
    if args.command == "check":
        text, data = _read(args.data)
        inputs.append((args.data, data))
        report = cmd_check(model, parse_triples(text, model.prefixes.copy()), clock)
    elif args.command == "translate":
        overrides = {
            "part_whole_strategy": args.part_whole and PartWholeStrategy(args.part_whole),
            "value_partition_strategy": args.value_partition and ValuePartitionStrategy(args.value_partition),
            "ordered_index_limit": args.ordered_index_limit,
        }
        options = dataclasses.replace(
            model.options, **{k: v for k, v in overrides.items() if v is not None}
        )
        report, exported = cmd_translate(model, options)
        _emit(exported, args.output)
    elif args.command == "simulate":
        text, data = _read(args.scenario)
        inputs.append((args.scenario, data))
        report, trace = cmd_simulate(model, parse_scenario(text, model.prefixes), clock, config.max_iterations)
        _emit(trace, args.output)
    elif args.command == "verify":
        scenarios = []
        for path in args.scenarios:
            text, data = _read(path)
            inputs.append((path, data))
            scenarios.append(parse_scenario(text, model.prefixes))
        report = cmd_verify(
            model,
            scenarios,
            clock,
            config.max_iterations,
            config.permutations,
            config.permutation_seed,
            config.date_offset_days,
            config.workers,
        )

    for label, data in inputs:
        report.add_input(label, data)
    # translate and simulate print their output on stdout unless -o is given
    shares_stdout = args.command in ("translate", "simulate") and not args.output
    (sys.stderr if shares_stdout else sys.stdout).write(report.render(fmt))
    return report.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ModelSyntaxError as exc:
        for issue in exc.issues:
            print(f"error: {issue}", file=sys.stderr)
        return EXIT_TOOL_ERROR
    except VerifierError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_TOOL_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOOL_ERROR


if __name__ == "__main__":
    sys.exit(main())
