"""Shared fixtures: a deterministic synthetic corpus with scores and pairs."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import pytest

from lddetect.rng import SplitMix64, derive

# Words chosen for letter variety; the E_WORDS all contain 'e', the NO_E words
# none, so lipogram variants can be built deterministically.
VOCAB = (
    "the quick brown fox jumps over a lazy dog while many people read "
    "short plain texts about markets health history music and games "
    "every writer keeps some habits that models rarely copy exactly"
).split()
NO_E_VOCAB = [w for w in VOCAB if "e" not in w]
E_WORDS = [w for w in VOCAB if "e" in w]

SOURCES = ("human", "modelA", "modelB", "modelC")
DOMAINS = ("alpha", "beta")


def make_text(seed: int, n_words: int = 60, vocab=None, bias: str | None = None) -> str:
    """Deterministic pseudo-text: sampled words, sentence breaks every 8 words.

    ``bias`` names a source whose word choice is skewed toward the front of
    the vocabulary, so different sources have measurably different letter
    statistics.
    """
    vocab = list(vocab if vocab is not None else VOCAB)
    rng = SplitMix64(seed)
    words = []
    limit = len(vocab)
    if bias == "human":
        limit = max(8, len(vocab) // 2)
    for i in range(n_words):
        words.append(vocab[rng.below(limit)])
        if i % 8 == 7:
            words[-1] += "."
    text = " ".join(words)
    return text if text.endswith(".") else text + "."


def build_corpus_rows() -> list[dict]:
    rows = []
    for domain in DOMAINS:
        for source in SOURCES:
            for k in range(6):
                sid = f"{domain}-{source}-{k}"
                rows.append(
                    {
                        "id": sid,
                        "text": make_text(derive(11, domain, source, k), bias=source),
                        "domain": domain,
                        "source": source,
                        "temperature": None if source == "human" else (0.2, 0.5, 0.8)[k % 3],
                        "variant": "original",
                        "avoided_letters": [],
                    }
                )
    # Lipogram rewrites of a few modelA originals: some clean, some leaky.
    for k in range(4):
        base_seed = derive(13, "adv", k)
        clean = k % 2 == 0
        vocab = NO_E_VOCAB if clean else NO_E_VOCAB + ["the", "over"]
        rows.append(
            {
                "id": f"alpha-modelA-{k}-adv1",
                "text": make_text(base_seed, vocab=vocab),
                "domain": "alpha",
                "source": "modelA",
                "temperature": 0.5,
                "variant": "avoid_one",
                "avoided_letters": ["e"],
            }
        )
    for k in range(2):
        rows.append(
            {
                "id": f"alpha-modelA-{k}-adv2",
                "text": make_text(derive(17, "adv2", k), vocab=[w for w in NO_E_VOCAB if "o" not in w]),
                "domain": "alpha",
                "source": "modelA",
                "temperature": 0.5,
                "variant": "avoid_two",
                "avoided_letters": ["e", "o"],
            }
        )
    return rows


@pytest.fixture()
def corpus_path(tmp_path: Path) -> Path:
    path = tmp_path / "corpus.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for row in build_corpus_rows():
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    return path


@pytest.fixture()
def scores_path(tmp_path: Path, corpus_path: Path) -> Path:
    """Informative-but-noisy scores for two detectors covering every sample."""
    path = tmp_path / "scores.csv"
    rows = build_corpus_rows()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sample_id", "detector", "score"])
        for row in rows:
            is_ai = row["source"] != "human"
            for detector, gain in (("dna", 1.6), ("bino", 1.2)):
                noise = SplitMix64(derive(19, row["id"], detector)).below(1000) / 1000.0
                score = (gain if is_ai else 0.0) + noise
                writer.writerow([row["id"], detector, f"{score:.6f}"])
    return path


@pytest.fixture()
def pairs_path(tmp_path: Path) -> Path:
    path = tmp_path / "pairs.csv"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["original_id", "adversarial_id"])
        for k in range(4):
            writer.writerow([f"alpha-modelA-{k}", f"alpha-modelA-{k}-adv1"])
        for k in range(2):
            writer.writerow([f"alpha-modelA-{k}", f"alpha-modelA-{k}-adv2"])
    return path
