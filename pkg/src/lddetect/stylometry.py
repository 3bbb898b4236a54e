"""Surface stylometric features for comparison against the letter signal.

Sentence segmentation splits on runs of ``.!?`` followed by whitespace or
end of text; a text with no terminator counts as one sentence. Syllables use
a dictionary-free heuristic: maximal vowel runs (a, e, i, o, u, y) per folded
word, minus one for a terminal silent 'e' when the word has two or more
vowel groups, never below one. Punctuation and numeral counts cover ASCII
characters only. The type-token ratio here is over folded tokens; it stands
in for a lemma-based ratio (no lemmatizer is used) and is named with a
``_proxy`` suffix so the two are not conflated.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Mapping, Sequence

from .chardist import fold, tokenize
from .errors import DegenerateInputError, InputError
from .rng import SplitMix64, derive

_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+(?=\s|$)")
_VOWEL_RUN_RE = re.compile(r"[aeiouy]+")
_PUNCTUATION = set(string.punctuation)

PROFILE_FIELDS = (
    "fkgl",
    "lds",
    "words",
    "sentences",
    "syllables",
    "commas",
    "dots",
    "punctuation_total",
    "numerals",
    "words_per_sentence",
    "ttr_lemmas_proxy",
)


@dataclass(frozen=True)
class StylometricProfile:
    fkgl: float
    lds: float
    words: int
    sentences: int
    syllables: int
    commas: int
    dots: int
    punctuation_total: int
    numerals: int
    words_per_sentence: float
    ttr_lemmas_proxy: float


@dataclass(frozen=True)
class NgramReport:
    n: int
    unique_count: int
    total_count: int


def count_sentences(text: str) -> int:
    """Number of sentences under the terminator-run segmentation rule."""
    segments = [s for s in _SENTENCE_SPLIT_RE.split(text) if s.strip()]
    if segments:
        return len(segments)
    return 1 if text.strip() else 0


def count_syllables_word(word: str) -> int:
    """Heuristic syllables of one folded word (at least 1)."""
    groups = len(_VOWEL_RUN_RE.findall(word))
    if groups >= 2 and word.endswith("e"):
        groups -= 1
    return max(groups, 1)


def count_syllables(text: str) -> int:
    return sum(count_syllables_word(w) for w in tokenize(text))


def fkgl(text: str) -> float:
    """Flesch-Kincaid grade level: 0.39 W/S + 11.8 Sy/W - 15.59.

    May be negative for very short or simple texts.
    """
    words = tokenize(text)
    if not words:
        raise DegenerateInputError("text contains no words")
    n_words = len(words)
    n_sentences = count_sentences(text)
    n_syllables = sum(count_syllables_word(w) for w in words)
    return 0.39 * (n_words / n_sentences) + 11.8 * (n_syllables / n_words) - 15.59


def lexical_diversity(text: str) -> float:
    """Unique folded tokens over total tokens, in (0, 1]."""
    tokens = tokenize(text)
    if not tokens:
        raise DegenerateInputError("text contains no words")
    return len(set(tokens)) / len(tokens)


def ngram_report(texts: Sequence[str], n: int) -> NgramReport:
    """Unique and total word n-grams over all texts.

    Token streams are counted per text; n-grams never span text boundaries,
    since a cross-boundary n-gram is an artifact of concatenation rather
    than a sequence either author produced.
    """
    if n not in (1, 2):
        raise InputError(f"unsupported n-gram order {n}")
    unique: set[tuple[str, ...]] = set()
    total = 0
    for text in texts:
        tokens = tokenize(text)
        grams = len(tokens) - n + 1
        if grams <= 0:
            continue
        total += grams
        for i in range(grams):
            unique.add(tuple(tokens[i : i + n]))
    if total == 0:
        raise DegenerateInputError("no tokens across all texts")
    return NgramReport(n=n, unique_count=len(unique), total_count=total)


def surface_features(text: str) -> StylometricProfile:
    """Full stylometric profile of one text.

    Degenerate texts (no words) get the documented defaults: ratio fields
    are 0.0 and counter fields reflect the raw character counts.
    """
    if text is None:
        raise InputError("text must be a string")
    folded = fold(text)
    commas = folded.count(",")
    dots = folded.count(".")
    punctuation_total = sum(1 for ch in text if ch in _PUNCTUATION)
    numerals = sum(1 for ch in text if ch.isascii() and ch.isdigit())
    sentences = count_sentences(text)
    words = tokenize(text)
    n_words = len(words)
    if n_words == 0:
        return StylometricProfile(
            fkgl=0.0,
            lds=0.0,
            words=0,
            sentences=sentences,
            syllables=0,
            commas=commas,
            dots=dots,
            punctuation_total=punctuation_total,
            numerals=numerals,
            words_per_sentence=0.0,
            ttr_lemmas_proxy=0.0,
        )
    ttr = len(set(words)) / n_words
    return StylometricProfile(
        fkgl=fkgl(text),
        lds=ttr,
        words=n_words,
        sentences=sentences,
        syllables=sum(count_syllables_word(w) for w in words),
        commas=commas,
        dots=dots,
        punctuation_total=punctuation_total,
        numerals=numerals,
        words_per_sentence=n_words / sentences,
        ttr_lemmas_proxy=ttr,
    )


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def _threshold_candidates(values: Sequence[float]) -> list[float]:
    """Smallest unique value (classifies everything positive under >=) plus
    midpoints of consecutive unique values."""
    uniq = sorted(set(values))
    return [uniq[0]] + [(a + b) / 2.0 for a, b in zip(uniq, uniq[1:])]


def fit_threshold_classifier(
    values: Sequence[float], labels: Sequence[int]
) -> tuple[float, int, float]:
    """Best single-threshold classifier on (values, labels): (threshold, polarity, train F1).

    Polarity +1 predicts positive when value >= threshold, -1 when
    value <= threshold. Ties prefer polarity +1, then the smallest
    threshold.
    """
    best = None
    for polarity in (1, -1):
        for t in _threshold_candidates(values):
            tp = fp = fn = 0
            for v, y in zip(values, labels):
                pred = (v >= t) if polarity == 1 else (v <= t)
                if pred and y == 1:
                    tp += 1
                elif pred and y != 1:
                    fp += 1
                elif not pred and y == 1:
                    fn += 1
            f1 = _f1(tp, fp, fn)
            if best is None or f1 > best[2]:
                best = (t, polarity, f1)
    return best


def feature_classifier_eval(
    features: Mapping[str, Sequence[float]],
    labels: Sequence[int],
    seed: int,
    train_per_class: int | None = None,
) -> dict[str, float]:
    """Evaluation F1 of a per-feature single-threshold classifier.

    Samples are split per class with a seeded shuffle: ``train_per_class``
    of each class (default half, at least 1) fit the threshold and polarity,
    the rest are scored. Labels are +1 for the positive class, -1 otherwise.
    """
    labels = [1 if y == 1 else -1 for y in labels]
    pos = [i for i, y in enumerate(labels) if y == 1]
    neg = [i for i, y in enumerate(labels) if y == -1]
    if len(pos) < 2 or len(neg) < 2:
        raise InputError("need at least 2 samples per class")
    SplitMix64(derive(seed, "feature-eval", "pos")).shuffle(pos)
    SplitMix64(derive(seed, "feature-eval", "neg")).shuffle(neg)
    k_pos = train_per_class if train_per_class is not None else max(1, len(pos) // 2)
    k_neg = train_per_class if train_per_class is not None else max(1, len(neg) // 2)
    if k_pos >= len(pos) or k_neg >= len(neg):
        raise InputError("training split leaves an empty evaluation class")
    train_idx = sorted(pos[:k_pos] + neg[:k_neg])
    eval_idx = sorted(pos[k_pos:] + neg[k_neg:])

    out: dict[str, float] = {}
    for name, values in features.items():
        if len(values) != len(labels):
            raise InputError(f"feature {name!r} has {len(values)} values for {len(labels)} labels")
        t, polarity, _ = fit_threshold_classifier(
            [values[i] for i in train_idx], [labels[i] for i in train_idx]
        )
        tp = fp = fn = 0
        for i in eval_idx:
            pred = (values[i] >= t) if polarity == 1 else (values[i] <= t)
            if pred and labels[i] == 1:
                tp += 1
            elif pred and labels[i] != 1:
                fp += 1
            elif not pred and labels[i] == 1:
                fn += 1
        out[name] = _f1(tp, fp, fn)
    return out
