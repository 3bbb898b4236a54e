"""Letter and word probability distributions and the divergences between them.

The letter alphabet is fixed: texts are Unicode-case-folded and only ASCII
``a``-``z`` survive into letter statistics. Everything else (digits,
punctuation, whitespace, accented letters, non-Latin scripts) is ignored.
Words are the maximal runs of ``a``-``z`` left after folding.

All divergences use base-2 logarithms, so the Jensen-Shannon divergence lies
in [0, 1] and its square root (the letter-distribution score) does too, with
disjoint supports mapping exactly to 1.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import DegenerateInputError, InputError

ALPHABET = "abcdefghijklmnopqrstuvwxyz"
N_LETTERS = 26

_LETTER_INDEX = {c: i for i, c in enumerate(ALPHABET)}
_WORD_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class LetterDistribution:
    """Probability vector over the 26 letters, plus the count behind it.

    ``p`` sums to 1 (within 1e-12); ``total_letters`` is the number of letter
    observations that produced it. For distributions derived analytically
    (e.g. by projecting a word distribution) the count is the expected number
    of letters, rounded, and serves only as a non-degeneracy marker.
    """

    p: np.ndarray
    total_letters: int

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (N_LETTERS,):
            raise InputError(f"letter distribution must have {N_LETTERS} bins, got shape {p.shape}")
        if self.total_letters > 0:
            if np.any(p < 0.0) or np.any(p > 1.0):
                raise InputError("letter probabilities must lie in [0, 1]")
            if abs(float(p.sum()) - 1.0) > 1e-12:
                raise InputError(f"letter probabilities sum to {p.sum()!r}, expected 1")
        p.flags.writeable = False
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class WordDistribution:
    """Normalized word-frequency map. Keys are folded tokens, values sum to 1."""

    p: Mapping[str, float]
    total_words: int

    def __post_init__(self):
        if any(not w for w in self.p):
            raise InputError("word distribution contains an empty token")
        total = math.fsum(self.p.values())
        if self.p and abs(total - 1.0) > 1e-12:
            raise InputError(f"word probabilities sum to {total!r}, expected 1")


def fold(text: str) -> str:
    """Case-fold text for letter and word extraction."""
    return text.casefold()


def letter_counts(text: str) -> np.ndarray:
    """Raw counts of a-z in the folded text, as a 26-vector of ints."""
    counts = np.zeros(N_LETTERS, dtype=np.int64)
    for ch, n in Counter(fold(text)).items():
        idx = _LETTER_INDEX.get(ch)
        if idx is not None:
            counts[idx] = n
    return counts


def letter_distribution(text: str) -> LetterDistribution:
    """Normalized letter frequencies of one text.

    Raises ``DegenerateInputError`` if the text contains no a-z letters after
    folding.
    """
    counts = letter_counts(text)
    total = int(counts.sum())
    if total == 0:
        raise DegenerateInputError("text contains no letters a-z after folding")
    return LetterDistribution(p=counts / total, total_letters=total)


def pooled_letter_distribution(texts: Iterable[str]) -> LetterDistribution:
    """Distribution of a group of texts by pooling raw letter counts.

    Pooling weights long texts proportionally; it is the default group
    semantics throughout the package.
    """
    counts = np.zeros(N_LETTERS, dtype=np.int64)
    for text in texts:
        counts += letter_counts(text)
    total = int(counts.sum())
    if total == 0:
        raise DegenerateInputError("group contains no letters a-z after folding")
    return LetterDistribution(p=counts / total, total_letters=total)


def mean_letter_distribution(texts: Iterable[str]) -> LetterDistribution:
    """Group distribution as the unweighted mean of per-text distributions.

    Alternative to pooling for sensitivity checks; every text must be
    non-degenerate on its own.
    """
    rows = []
    total = 0
    for i, text in enumerate(texts):
        try:
            d = letter_distribution(text)
        except DegenerateInputError:
            raise DegenerateInputError(f"text {i} in group contains no letters a-z")
        rows.append(d.p)
        total += d.total_letters
    if not rows:
        raise DegenerateInputError("group is empty")
    return LetterDistribution(p=np.mean(rows, axis=0), total_letters=total)


def kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """Kullback-Leibler divergence in bits, with the 0*log(0/q) = 0 convention.

    Raises ``InputError`` when some p[i] > 0 has q[i] = 0 (support mismatch).
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InputError(f"dimension mismatch: {p.shape} vs {q.shape}")
    mask = p > 0.0
    if np.any(q[mask] == 0.0):
        raise InputError("support mismatch: p has mass where q is zero")
    return float(np.sum(p[mask] * np.log2(p[mask] / q[mask])))


def jsd(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in bits against the midpoint M = (p+q)/2.

    Zeros are allowed on either side; M covers the union support, so no
    smoothing constant is needed and disjoint supports give exactly 1.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise InputError(f"dimension mismatch: {p.shape} vs {q.shape}")
    m = 0.5 * (p + q)
    value = 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m)
    # Guard against rounding pushing an exact zero slightly negative.
    return max(value, 0.0)


def ld_score(d1: LetterDistribution, d2: LetterDistribution) -> float:
    """Letter-distribution score: root Jensen-Shannon distance in [0, 1].

    The square root turns JSD into a true metric (triangle inequality holds),
    with 0 iff the distributions are equal and 1 iff their supports are
    disjoint.
    """
    if d1.total_letters < 1 or d2.total_letters < 1:
        raise DegenerateInputError("cannot score a degenerate letter distribution")
    return math.sqrt(jsd(d1.p, d2.p))


def tokenize(text: str) -> list[str]:
    """Folded a-z word tokens: split on any non-letter, drop empties."""
    return _WORD_RE.findall(fold(text))


def word_distribution(text: str) -> WordDistribution:
    """Normalized word-frequency map of one text."""
    tokens = tokenize(text)
    if not tokens:
        raise DegenerateInputError("text contains no word tokens after folding")
    counts = Counter(tokens)
    total = len(tokens)
    return WordDistribution(p={w: n / total for w, n in counts.items()}, total_words=total)


def wd_score(w1: WordDistribution, w2: WordDistribution) -> float:
    """Root Jensen-Shannon distance over the union vocabulary, in [0, 1]."""
    if w1.total_words < 1 or w2.total_words < 1:
        raise DegenerateInputError("cannot score a degenerate word distribution")
    vocab = sorted(set(w1.p) | set(w2.p))
    p = np.array([w1.p.get(w, 0.0) for w in vocab])
    q = np.array([w2.p.get(w, 0.0) for w in vocab])
    return math.sqrt(jsd(p, q))


@lru_cache(maxsize=65536)
def _letter_fractions(word: str) -> np.ndarray:
    """Per-word letter shares: fractions[l] = count(l in word) / letters(word)."""
    counts = np.zeros(N_LETTERS, dtype=float)
    n = 0
    for ch in word:
        idx = _LETTER_INDEX.get(ch)
        if idx is not None:
            counts[idx] += 1.0
            n += 1
    if n == 0:
        raise InputError(f"word {word!r} contains no letters a-z after folding")
    counts /= n
    counts.flags.writeable = False
    return counts


def project_word_to_letter(w: WordDistribution) -> LetterDistribution:
    """Project a word distribution to letter space.

    Each word spreads its probability mass over its own letters in
    proportion to how often they occur in it, so every word contributes
    exactly its own mass and the output sums to 1. The projection is linear
    in the word probabilities.
    """
    p = np.zeros(N_LETTERS, dtype=float)
    for word in sorted(w.p):
        p += w.p[word] * _letter_fractions(fold(word))
    # Non-degeneracy marker: expected raw letter count of the sample,
    # total_words * sum_w P(w) * letters(w).
    letters_per_word = math.fsum(
        w.p[word] * sum(1 for ch in fold(word) if ch in _LETTER_INDEX) for word in w.p
    )
    total = max(1, round(w.total_words * letters_per_word))
    p /= p.sum()  # renormalize away accumulated rounding
    return LetterDistribution(p=p, total_letters=total)
