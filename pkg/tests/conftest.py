import os

import pytest

from src.parse_grammar import load_grammar_file
from src.resource_path import resource_path
from src.semgraph import load_graph_file

FIXTURES_DIR = resource_path("data/fixtures")
GRAMMAR_PATH = resource_path("data/creole.grammar")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES_DIR, name + ".graph")


@pytest.fixture(scope="session")
def grammar():
    return load_grammar_file(GRAMMAR_PATH)


@pytest.fixture
def load_fixture():
    def load(name: str):
        return load_graph_file(fixture_path(name))
    return load
