from pathlib import Path

import pytest

from hybridasp.corpus import generate_corpus
from hybridasp.model import Fact, InitialCondition, Literal, Position
from hybridasp.oracle import brute_force_answer_sets
from hybridasp.syntax import parse_init, parse_program

DATA = Path(__file__).resolve().parent.parent / "data"
CORPUS_SIZE = 200
CORPUS_SEED = 0


def fact(text: str, step: int = 0, **params) -> Fact:
    return Fact(Literal.parse(text), Position.at(step, **params))


def facts(*items) -> frozenset:
    """facts(("a", 0), ("b", 1)) -> {(a, step 0), (b, step 1)}"""
    return frozenset(fact(t, k) for t, k in items)


@pytest.fixture(scope="session")
def e1():
    return parse_program((DATA / "e1.hasp").read_text())


@pytest.fixture(scope="session")
def j0():
    return InitialCondition(frozenset({Position(0)}))


@pytest.fixture(scope="session")
def e1_paths():
    return str(DATA / "e1.hasp"), str(DATA / "e1.init")


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(CORPUS_SIZE, CORPUS_SEED)


@pytest.fixture(scope="session")
def oracle_cache(corpus):
    return {c.seed: brute_force_answer_sets(c.program, c.init, universe=c.universe) for c in corpus}


@pytest.fixture
def report(capsys):
    """Print a line past pytest's output capture."""

    def emit(line: str):
        with capsys.disabled():
            print(line)

    return emit


def load(name: str):
    return parse_program((DATA / name).read_text()), parse_init((DATA / "e1.init").read_text())
