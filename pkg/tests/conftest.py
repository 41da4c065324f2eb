import pathlib

import pytest

from segcue import corpus as corpus_mod

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def saffran_corpus():
    """The standard synthetic corpus: 6 trisyllabic words, 1000 utterances."""
    return corpus_mod.synthesize(corpus_mod.saffran_lexicon(), (4, 8), 1000, seed=1)


@pytest.fixture()
def small_corpus():
    text = "w 2 t\td u:\ty u:\ts i:\ny u:\ts i:\na\nb a\tb a\n"
    return corpus_mod.ingest(text)
