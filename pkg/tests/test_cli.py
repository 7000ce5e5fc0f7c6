import json
import os

import pytest

from src.cli import main
from src.constants import EXIT_GENERATION_ERROR, EXIT_INPUT_ERROR, EXIT_OK, GRAMMAR_ENV_VAR
from src.resource_path import resource_path

pytestmark = pytest.mark.cli

FIXTURES_DIR = resource_path("data/fixtures")


def fixture(name: str) -> str:
    return os.path.join(FIXTURES_DIR, name + ".graph")


@pytest.fixture(autouse=True)
def shipped_grammar(monkeypatch):
    monkeypatch.delenv(GRAMMAR_ENV_VAR, raising=False)


def test_generate_prints_the_sentence(capsys):
    assert main(["generate", fixture("pye-ba")]) == EXIT_OK
    assert capsys.readouterr().out == "Pyè ba Wobè an bel liv\n"


def test_generate_inline(capsys):
    document = json.dumps({
        "nodes": [{"id": "sleep", "key": "sleep", "attrs": {"tense": "passe"}}, {"id": "me", "key": "me"}],
        "relations": [{"role": "agent", "from": "sleep", "to": "me"}],
    })
    assert main(["generate", "--inline", document]) == EXIT_OK
    assert capsys.readouterr().out == "mwen té dòmi\n"


def test_generate_report(capsys):
    assert main(["generate", fixture("i-pote"), "--output", "report"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["text"] == "i pòté an boutèy wonm ba mwen"
    assert report["sentences"][0]["circumstants"] == [{"role": "recipient", "concept": "me"}]


def test_generation_error_exits_1(capsys):
    assert main(["generate", fixture("ka-ni")]) == EXIT_GENERATION_ERROR
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "AspectOnState" in captured.err
    assert "have" in captured.err


def test_strict_reports_validation_issues(capsys):
    assert main(["generate", "--strict", fixture("ka-ni")]) == EXIT_GENERATION_ERROR
    assert "error: AspectOnState: have:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["generate", "no/such/file.graph"],
    ["generate", "--inline", "{not json"],
    ["generate", "--inline", '{"nodes": [{"id": "a", "key": "sleep"}, {"id": "b", "key": "me"}]}'],
    ["generate", fixture("pye-ba"), "--grammar", "no/such.grammar"],
])
def test_unreadable_input_exits_2(capsys, argv):
    assert main(argv) == EXIT_INPUT_ERROR
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "error:" in captured.err


def test_grammar_from_environment(monkeypatch, capsys):
    monkeypatch.setenv(GRAMMAR_ENV_VAR, "no/such.grammar")
    assert main(["generate", fixture("pye-ba")]) == EXIT_INPUT_ERROR
    assert "no/such.grammar" in capsys.readouterr().err


def test_check_grammar(capsys):
    assert main(["check-grammar"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("ok: 29 entries, 4 frames, ")


def test_check_grammar_lists_issues(tmp_path, capsys):
    path = tmp_path / "bad.grammar"
    path.write_text('FEATURES\nharm: a\nTREES\nbad auxiliary: (A (B*) (C "c"))\n', encoding="utf-8")
    assert main(["check-grammar", str(path)]) == EXIT_GENERATION_ERROR
    out = capsys.readouterr().out
    assert "invalid: tree 'bad': foot category B differs from root A" in out.splitlines()


def test_check_grammar_missing_file(tmp_path, capsys):
    assert main(["check-grammar", str(tmp_path / "none.grammar")]) == EXIT_INPUT_ERROR


def test_demo_matches_golden(capsys):
    assert main(["demo", "--quiet"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert "mwen-te-ke-domi\tmwen té ké dòmi" in lines
    assert "ka-ni\t!AspectOnState" in lines


def test_demo_output_is_identical_across_runs(capsys):
    assert main(["demo", "--quiet"]) == EXIT_OK
    first = capsys.readouterr().out
    assert main(["demo", "--quiet"]) == EXIT_OK
    second = capsys.readouterr().out
    assert first.encode("utf-8") == second.encode("utf-8")
    assert first.count("\n") == 26


def test_demo_reports_mismatches(tmp_path, capsys):
    golden = tmp_path / "golden.tsv"
    golden.write_text("ravet\travèt\npye-ba\tPyè ba Wobè liv\n", encoding="utf-8")
    assert main(["demo", "-q", "--golden", str(golden)]) == EXIT_GENERATION_ERROR
    captured = capsys.readouterr()
    assert captured.out.splitlines() == ["ravet\travèt", "pye-ba\tPyè ba Wobè an bel liv"]
    assert "mismatch pye-ba" in captured.err


def test_derivation_dot(capsys):
    assert main(["derivation", fixture("pye-ba")]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("digraph {") == 2
    assert 'label="GPred\\n{' in out
    assert "sature=plus" in out
    assert "adjoin @ ε" in out


def test_derivation_provenance_table(capsys):
    assert main(["derivation", fixture("juxtapose"), "--output", "report"]) == EXIT_OK
    blocks = capsys.readouterr().out.rstrip("\n").split("\n\n")
    assert len(blocks) == 2
    first = blocks[0].splitlines()
    assert first[0] == "token|lemma|tree|address"
    assert first[1].startswith("Pyè|Pyè|nbar#")


def test_derivation_of_failing_graph_prints_nothing(capsys):
    assert main(["derivation", fixture("ka-ni")]) == EXIT_GENERATION_ERROR
    assert capsys.readouterr().out == ""
