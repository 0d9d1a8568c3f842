import pytest

import settings

from rho_engine import RhoEngine
from seifert import random_corpus

@pytest.fixture(scope="session")
def corpus():
	return random_corpus(settings.CORPUS_SIZE, settings.CORPUS_SEED)

@pytest.fixture
def engine():
	return RhoEngine(max_n=3)
