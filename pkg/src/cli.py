"""Command-line surface: generate, check-grammar, demo and derivation.

stdout carries only results; logging and error messages go to stderr.
Exit codes: 0 success, 1 generation or validation failure, 2 unreadable input.
"""

from __future__ import annotations

import os
import sys
import argparse
import logging

from tqdm import tqdm

from src.constants import EXIT_GENERATION_ERROR, EXIT_INPUT_ERROR, EXIT_OK, GRAPH_SUFFIX, PROGRAM_VERSION
from src.dot_export import derivation_dot, derived_tree_dot
from src.errors import GrammarError, GraphError, KreyolError, ValidationError
from src.generator import GenerationResult, generate
from src.grammar import Grammar
from src.parse_grammar import load_grammar_file
from src.report import provenance_table, report_json
from src.resource_path import resource_path
from src.semgraph import ConceptGraph, load_graph_file, parse_graph, validate_graph
from src.use_config import default_grammar_path, get_config_value

logger = logging.getLogger(__name__)

ERROR_MARK = "!"


class InputError(Exception):
    """Raised for anything that keeps a command from reading its inputs."""


def configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else getattr(logging, str(get_config_value("log_level")).upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )


def _load_grammar(path: str | None) -> Grammar:
    grammar_path = default_grammar_path(path)
    try:
        return load_grammar_file(grammar_path)
    except OSError as e:
        raise InputError(f"cannot read grammar {grammar_path}: {e.strerror or e}") from None
    except GrammarError as e:
        raise InputError(f"grammar {grammar_path}: {e}") from None


def _load_graph(args: argparse.Namespace) -> ConceptGraph:
    try:
        if args.inline is not None:
            return parse_graph(args.inline)
        return load_graph_file(args.input)
    except OSError as e:
        raise InputError(f"cannot read graph {args.input}: {e.strerror or e}") from None
    except GraphError as e:
        raise InputError(str(e)) from None


def _dot(result: GenerationResult) -> str:
    parts = []
    for sentence in result.sentences:
        parts.append(derived_tree_dot(sentence.finalized))
        parts.append(derivation_dot(sentence.derivation))
    return "\n".join(parts)


def _run_generation(args: argparse.Namespace, render) -> int:
    try:
        grammar = _load_grammar(args.grammar)
        graph = _load_graph(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if getattr(args, "strict", False):
        issues = validate_graph(graph, grammar)
        if issues:
            for issue in issues:
                print(f"error: {issue}", file=sys.stderr)
            return EXIT_GENERATION_ERROR

    try:
        result = generate(graph, grammar)
    except GraphError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except KreyolError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_GENERATION_ERROR

    print(render(result))
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    renderers = {
        "text": lambda result: result.text,
        "report": report_json,
        "dot": _dot,
    }
    return _run_generation(args, renderers[args.output])


def cmd_derivation(args: argparse.Namespace) -> int:
    renderers = {
        "dot": _dot,
        "report": provenance_table,
    }
    return _run_generation(args, renderers[args.output])


def cmd_check_grammar(args: argparse.Namespace) -> int:
    path = default_grammar_path(args.path or args.grammar)
    if not os.path.exists(path):
        print(f"error: no grammar at {path}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    try:
        grammar = load_grammar_file(path)
    except ValidationError as e:
        for issue in e.issues:
            print(f"invalid: {issue}")
        return EXIT_GENERATION_ERROR
    except GrammarError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GENERATION_ERROR

    print(f"ok: {len(grammar.lexicon)} entries, {len(grammar.frames)} frames, {len(grammar.trees)} trees")
    return EXIT_OK


def read_golden(path: str) -> list[tuple[str, str]]:
    """Fixture id and expected output per line; blank lines and # comments skipped."""
    pairs = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fixture, sep, expected = line.partition("\t")
            if not sep:
                raise InputError(f"{path}:{number}: expected 'fixture<TAB>sentence'")
            pairs.append((fixture, expected))
    return pairs


def run_fixture(path: str, grammar: Grammar) -> str:
    """Generated text, or the error class name behind a leading '!'."""
    try:
        return generate(load_graph_file(path), grammar).text
    except KreyolError as e:
        return ERROR_MARK + type(e).__name__


def cmd_demo(args: argparse.Namespace) -> int:
    golden_path = resource_path(args.golden or get_config_value("golden_path"))
    fixtures_dir = resource_path(args.fixtures or get_config_value("fixtures_dir"))
    try:
        grammar = _load_grammar(args.grammar)
        golden = read_golden(golden_path)
    except OSError as e:
        print(f"error: cannot read golden file {golden_path}: {e.strerror or e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    mismatches = []
    for fixture, expected in tqdm(golden, desc="Generating fixtures", file=sys.stderr, disable=args.quiet):
        path = os.path.join(fixtures_dir, fixture + GRAPH_SUFFIX)
        try:
            actual = run_fixture(path, grammar)
        except OSError as e:
            actual = f"{ERROR_MARK}missing fixture ({e.strerror or e})"
        print(f"{fixture}\t{actual}")
        logger.info("%s: %s", fixture, actual)
        if actual != expected:
            mismatches.append((fixture, expected, actual))

    for fixture, expected, actual in mismatches:
        print(f"mismatch {fixture}: expected '{expected}', got '{actual}'", file=sys.stderr)
    if mismatches:
        return EXIT_GENERATION_ERROR
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kreyol-tag", description="Generate Martinican Creole from conceptual graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {PROGRAM_VERSION}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grammar", help="grammar file (default: $KREYOL_GRAMMAR, then the shipped grammar)")
    common.add_argument("-v", "--verbose", action="store_true", help="log every tree operation")

    commands = parser.add_subparsers(dest="command", required=True)

    def graph_input(command: argparse.ArgumentParser):
        source = command.add_mutually_exclusive_group(required=True)
        source.add_argument("input", nargs="?", help="conceptual graph file (JSON)")
        source.add_argument("--inline", help="conceptual graph given as a JSON string")

    generate_cmd = commands.add_parser("generate", parents=[common], help="verbalize a conceptual graph")
    graph_input(generate_cmd)
    generate_cmd.add_argument("--output", choices=("text", "report", "dot"), default="text")
    generate_cmd.add_argument("--strict", action="store_true",
                              help="validate the graph first and report every problem")
    generate_cmd.set_defaults(handler=cmd_generate)

    check_cmd = commands.add_parser("check-grammar", parents=[common], help="load and validate a grammar file")
    check_cmd.add_argument("path", nargs="?", help="grammar file (default: as --grammar)")
    check_cmd.set_defaults(handler=cmd_check_grammar)

    demo_cmd = commands.add_parser("demo", parents=[common], help="run the fixture corpus against its golden output")
    demo_cmd.add_argument("--golden", help="golden file (fixture<TAB>expected per line)")
    demo_cmd.add_argument("--fixtures", help="directory holding <fixture>.graph files")
    demo_cmd.add_argument("-q", "--quiet", action="store_true", help="no progress bar")
    demo_cmd.set_defaults(handler=cmd_demo)

    derivation_cmd = commands.add_parser("derivation", parents=[common], help="show how a graph's sentences are derived")
    graph_input(derivation_cmd)
    derivation_cmd.add_argument("--output", choices=("dot", "report"), default="dot")
    derivation_cmd.set_defaults(handler=cmd_derivation)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    return args.handler(args)
