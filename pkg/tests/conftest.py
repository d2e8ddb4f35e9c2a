import pytest

from hopfren.corpus import corpus_graph, load_corpus
from hopfren.hopf import GraphHopfAlgebra


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def G():
    """Corpus graphs by name."""
    return corpus_graph


@pytest.fixture(scope="session")
def hopf(corpus):
    return GraphHopfAlgebra(corpus, max_grade=3)


@pytest.fixture(scope="session")
def hopf4(corpus):
    return GraphHopfAlgebra(corpus, max_grade=4)
