from importlib.resources import files

import pytest

from presabs.matrix import load_matrix
from presabs.model import Iri
from presabs.syntax import parse_ontology
from presabs.vocabulary import Vocabulary

DEMO = "http://purl.org/phenoscape/demo"
PATO = "http://purl.obolibrary.org/obo/pato#"


def data_text(name: str) -> str:
    return files("presabs").joinpath("data", name).read_text(encoding="utf-8")


def d(local: str) -> Iri:
    """IRI in the demo namespace."""
    return Iri(f"{DEMO}#{local}")


def pato(local: str) -> Iri:
    return Iri(PATO + local)


@pytest.fixture(scope="session")
def vocab():
    return Vocabulary.default()


@pytest.fixture(scope="session")
def demo():
    return parse_ontology(data_text("demo.ofn"))


@pytest.fixture(scope="session")
def demo_phenotypes():
    return parse_ontology(data_text("demo_phenotypes.ofn"))


@pytest.fixture(scope="session")
def toy_matrix():
    return load_matrix(data_text("toy_matrix.json"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose each phase's outcome to fixtures (used by the acceptance report)
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)
