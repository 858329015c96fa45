import os

import pytest

from lexnorm.corpus import PreprocessRules, ingest_raw_text, load_corpus
from lexnorm.embeddings import load_vectors_file
from lexnorm.lexicon import Dictionary
from lexnorm.ngram import build_ngram
from lexnorm.normalizer import Normalizer

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                        "data", "synth")


@pytest.fixture(scope="session")
def synth_paths():
    return {
        "train": os.path.join(DATA_DIR, "train.norm"),
        "heldout": os.path.join(DATA_DIR, "heldout.norm"),
        "dictionary": os.path.join(DATA_DIR, "dictionary.txt"),
        "embeddings": os.path.join(DATA_DIR, "embeddings.vec"),
        "noisy": os.path.join(DATA_DIR, "noisy.txt"),
        "canonical": os.path.join(DATA_DIR, "canonical.txt"),
    }


@pytest.fixture(scope="session")
def train_corpus(synth_paths):
    return load_corpus(synth_paths["train"])


@pytest.fixture(scope="session")
def heldout_corpus(synth_paths):
    return load_corpus(synth_paths["heldout"])


@pytest.fixture(scope="session")
def synth_resources(synth_paths):
    dictionary = Dictionary.from_file(synth_paths["dictionary"])
    dictionary.source_path = synth_paths["dictionary"]
    embeddings = load_vectors_file(synth_paths["embeddings"])
    embeddings.source_path = synth_paths["embeddings"]
    rules = PreprocessRules()
    with open(synth_paths["noisy"], encoding="utf-8") as fh:
        noisy = build_ngram(ingest_raw_text(fh, rules))
    with open(synth_paths["canonical"], encoding="utf-8") as fh:
        canonical = build_ngram(ingest_raw_text(fh, rules))
    return dict(dictionary=dictionary, embeddings=embeddings,
                noisy_ngram=noisy, canonical_ngram=canonical)


@pytest.fixture(scope="session")
def trained_model(synth_resources, train_corpus):
    model = Normalizer(**synth_resources, n_trees=60, random_state=1)
    return model.fit(train_corpus)
