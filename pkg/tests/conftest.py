from __future__ import annotations

from pathlib import Path

import pytest

from versesmith.checkpoint import load_checkpoint
from versesmith.corpus import Corpus, load_corpus, segment_lines

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"
REPO_ROOT = TESTS_DIR.parent
SAMPLE_CORPUS_PATH = REPO_ROOT / "fixtures" / "af_sample.txt"

TINY_TEXT = (
    "Die see praat saggies. Die wind val oor die berg. 'n Voël sing in die nag. "
    "Die kind tel klippe op die strand. Anna loop na die water. Die son brand warm. "
    "Die skip dryf ver. Die maan skyn oor die veld. Die hond blaf by die hek. "
    "Die vrou skryf 'n brief. Die man dra die boek. Die stad slaap vroeg. "
    "Die reën drup sag. Die boom groei stadig. Die vis swem diep. Die kat jag die mus. "
    "Die vuur brand laag. Die pad loop ver. Die gras word groen. Die dag breek oop."
)


@pytest.fixture(scope="session")
def tiny_corpus() -> Corpus:
    """20 short segmented lines; enough structure to overfit quickly."""
    return segment_lines(Corpus(source_name="tiny", raw_text=TINY_TEXT))


@pytest.fixture(scope="session")
def sample_corpus() -> Corpus:
    return segment_lines(load_corpus(SAMPLE_CORPUS_PATH))


@pytest.fixture(scope="session")
def sample_model():
    """Committed small checkpoint trained on the sample corpus."""
    return load_checkpoint(FIXTURES / "sample_model.ckpt")


@pytest.fixture(scope="session")
def tiny_model():
    """Committed 6-word-vocabulary checkpoint."""
    return load_checkpoint(FIXTURES / "tiny_model.ckpt")
