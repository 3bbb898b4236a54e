"""Group-level structure analysis of letter distributions.

Covers pairwise divergence matrices, the separation inequality between the
AI cluster and human text, average-linkage hierarchical clustering, PCA of
letter distributions, Pearson correlation of detection signals, and a
seeded convergence simulation that reproduces the 1/sqrt(N) decay of
empirical distributions toward their source, plus the bias floor that
domain-skewed sampling adds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import chardist
from .chardist import LetterDistribution, WordDistribution, ld_score, project_word_to_letter
from .errors import ComputeError, DegenerateInputError, InputError
from .rng import derive, numpy_gen


@dataclass(frozen=True)
class DivergenceMatrix:
    """Symmetric matrix of pairwise letter-distribution scores between groups."""

    labels: tuple[str, ...]
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        n = len(self.labels)
        if m.shape != (n, n):
            raise InputError(f"matrix shape {m.shape} does not match {n} labels")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    def value(self, a: str, b: str) -> float:
        i, j = self.labels.index(a), self.labels.index(b)
        return float(self.m[i, j])


@dataclass(frozen=True)
class SeparationReport:
    """Whether the largest AI-AI divergence stays below the smallest human-AI one."""

    max_ai_ai: float
    min_human_ai: float
    holds: bool
    argmax_pair: tuple[str, str]
    argmin_pair: tuple[str, str]


@dataclass(frozen=True)
class DendrogramNode:
    """Leaf (label set, no children) or merge of two subtrees at a height."""

    label: str | None = None
    left: "DendrogramNode | None" = None
    right: "DendrogramNode | None" = None
    height: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.label is not None

    def leaves(self) -> list[str]:
        if self.is_leaf:
            return [self.label]
        return self.left.leaves() + self.right.leaves()

    def to_nested(self):
        """Nested-list form: a leaf is its label, a merge is [left, right, height]."""
        if self.is_leaf:
            return self.label
        return [self.left.to_nested(), self.right.to_nested(), self.height]


@dataclass(frozen=True)
class PcaResult:
    """Top-k principal components of a set of letter distributions."""

    coordinates: np.ndarray  # (n, k) projections onto the top-k components
    explained_variance_ratio: np.ndarray  # (k,)
    component_loadings: np.ndarray  # (k, 26), rows orthonormal
    eigenvalues: np.ndarray  # full spectrum, descending


@dataclass(frozen=True)
class ConvergenceCurve:
    """Sampling error of empirical distributions versus sample size."""

    sample_sizes: tuple[int, ...]
    errors: tuple[float, ...]
    fitted_slope: float
    residual_rms: float


def pairwise_matrix(groups: Mapping[str, LetterDistribution]) -> DivergenceMatrix:
    """Pairwise letter-distribution scores between named groups.

    Labels keep the mapping's iteration order; the matrix is exactly
    symmetric with a zero diagonal.
    """
    labels = tuple(groups.keys())
    if len(labels) < 2:
        raise InputError("need at least 2 groups for a pairwise matrix")
    for name, dist in groups.items():
        if dist.total_letters < 1:
            raise DegenerateInputError(f"group {name!r} has a degenerate distribution")
    n = len(labels)
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = ld_score(groups[labels[i]], groups[labels[j]])
            m[i, j] = d
            m[j, i] = d
    return DivergenceMatrix(labels=labels, m=m)


def separation_report(matrix: DivergenceMatrix, human_labels: set[str]) -> SeparationReport:
    """Compare the AI-AI diameter against the closest human-AI distance.

    Ties are resolved toward the lexicographically smallest pair, so the
    report is deterministic under any row/column permutation of the matrix.
    """
    humans = set(human_labels)
    unknown = humans - set(matrix.labels)
    if unknown:
        raise InputError(f"human labels {sorted(unknown)} not in matrix labels")
    ai = [l for l in matrix.labels if l not in humans]
    if not humans or len(ai) < 2:
        raise InputError("need at least one human label and two AI labels")

    max_ai_ai, argmax = -math.inf, None
    for a, b in ((a, b) for a in sorted(ai) for b in sorted(ai) if a < b):
        v = matrix.value(a, b)
        if v > max_ai_ai:
            max_ai_ai, argmax = v, (a, b)
    min_human_ai, argmin = math.inf, None
    for h in sorted(humans):
        for a in sorted(ai):
            v = matrix.value(h, a)
            if v < min_human_ai:
                min_human_ai, argmin = v, (h, a)

    return SeparationReport(
        max_ai_ai=max_ai_ai,
        min_human_ai=min_human_ai,
        holds=max_ai_ai < min_human_ai,
        argmax_pair=argmax,
        argmin_pair=argmin,
    )


def agglomerative_cluster(matrix: DivergenceMatrix) -> DendrogramNode:
    """Average-linkage (UPGMA) hierarchical clustering of the matrix labels.

    Cluster-to-cluster distance is the mean of the base pairwise distances,
    maintained incrementally. Ties are broken toward the pair of clusters
    whose (lexicographically smallest leaf) identifiers compare smallest, so
    the tree is deterministic. Merge heights never decrease toward the root.
    """
    if len(matrix.labels) < 2:
        raise InputError("need at least 2 labels to cluster")

    # Each active cluster is keyed by its lexicographically smallest leaf.
    nodes: dict[str, DendrogramNode] = {l: DendrogramNode(label=l) for l in matrix.labels}
    sizes: dict[str, int] = {l: 1 for l in matrix.labels}
    dist: dict[frozenset[str], float] = {}
    for i, a in enumerate(matrix.labels):
        for j in range(i + 1, len(matrix.labels)):
            dist[frozenset((a, matrix.labels[j]))] = float(matrix.m[i, j])

    while len(nodes) > 1:
        keys = sorted(nodes)
        best = None
        for i, a in enumerate(keys):
            for b in keys[i + 1 :]:
                d = dist[frozenset((a, b))]
                if best is None or d < best[0]:
                    best = (d, a, b)
        d, a, b = best
        merged = DendrogramNode(left=nodes[a], right=nodes[b], height=d)
        size_a, size_b = sizes[a], sizes[b]
        for other in keys:
            if other in (a, b):
                continue
            da = dist.pop(frozenset((a, other)))
            db = dist.pop(frozenset((b, other)))
            dist[frozenset((a, other))] = (size_a * da + size_b * db) / (size_a + size_b)
        dist.pop(frozenset((a, b)))
        del nodes[b], sizes[b]
        nodes[a] = merged
        sizes[a] = size_a + size_b

    return next(iter(nodes.values()))


def pca(distributions: Sequence[LetterDistribution], k: int) -> PcaResult:
    """PCA of letter distributions via covariance eigendecomposition.

    Each distribution contributes one unweighted point in 26-space. Points
    are mean-centered; components are eigenvectors of the sample covariance,
    each oriented so its largest-magnitude coefficient is positive.
    """
    n = len(distributions)
    if n < 2:
        raise InputError("need at least 2 distributions for PCA")
    if not 1 <= k <= min(n - 1, chardist.N_LETTERS):
        raise InputError(f"k={k} out of range [1, {min(n - 1, chardist.N_LETTERS)}]")
    x = np.stack([d.p for d in distributions])
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    components = eigvecs[:, order].T  # rows are loading vectors
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    total = float(eigvals.sum())
    if total == 0.0:
        raise ComputeError("PCA input has zero variance")
    return PcaResult(
        coordinates=centered @ components[:k].T,
        explained_variance_ratio=eigvals[:k] / total,
        component_loadings=components[:k],
        eigenvalues=eigvals,
    )


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation; errors on constant sequences."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("sequences must be 1-D and of equal length")
    if x.size < 2:
        raise InputError("need at least 2 observations")
    dx = x - x.mean()
    dy = y - y.mean()
    denom = math.sqrt(float(dx @ dx)) * math.sqrt(float(dy @ dy))
    if denom == 0.0:
        raise InputError("correlation is undefined for a constant sequence")
    return float(dx @ dy) / denom


def correlation_matrix(signals: Mapping[str, Sequence[float]]) -> tuple[tuple[str, ...], np.ndarray]:
    """Pairwise Pearson correlations between named, aligned signals."""
    names = tuple(signals.keys())
    if len(names) < 2:
        raise InputError("need at least 2 signals")
    lengths = {len(signals[n]) for n in names}
    if len(lengths) != 1:
        raise InputError(f"signals have mismatched lengths: {sorted(lengths)}")
    n = len(names)
    m = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            r = pearson(signals[names[i]], signals[names[j]])
            m[i, j] = r
            m[j, i] = r
    return names, m


# ---------------------------------------------------------------------------
# Synthetic sources and the convergence simulation.
# ---------------------------------------------------------------------------

def _index_word(i: int) -> str:
    """Deterministic vocabulary: index -> base-26 letter string."""
    letters = []
    while True:
        i, r = divmod(i, 26)
        letters.append(chardist.ALPHABET[r])
        if i == 0:
            break
    return "".join(reversed(letters))


def zipf_word_distribution(vocab_size: int, exponent: float = 1.1) -> WordDistribution:
    """Zipf-weighted distribution over a deterministic synthetic vocabulary."""
    if vocab_size < 2:
        raise InputError("vocabulary must have at least 2 words")
    weights = np.array([1.0 / (rank + 1.0) ** exponent for rank in range(vocab_size)])
    weights /= weights.sum()
    return WordDistribution(
        p={_index_word(i): float(w) for i, w in enumerate(weights)},
        total_words=vocab_size,
    )


def tilt_word_distribution(dist: WordDistribution, strength: float, seed: int) -> WordDistribution:
    """Domain-skewed variant: reweight by seeded log-normal factors.

    Each word's probability is multiplied by exp(strength * g) with g drawn
    once per word from the derived stream, then renormalized. ``strength`` 0
    returns the input unchanged.
    """
    if strength == 0.0:
        return dist
    words = sorted(dist.p)
    g = numpy_gen(seed, "tilt").standard_normal(len(words))
    weights = np.array([dist.p[w] for w in words]) * np.exp(strength * g)
    weights /= weights.sum()
    return WordDistribution(
        p={w: float(x) for w, x in zip(words, weights)},
        total_words=dist.total_words,
    )


def sample_word_distribution(dist: WordDistribution, n_words: int, seed: int) -> WordDistribution:
    """Empirical distribution of n_words i.i.d. draws from ``dist``.

    Draws are realized as one multinomial over the vocabulary (the order of
    i.i.d. draws carries no information), which keeps large samples cheap.
    """
    if n_words < 1:
        raise InputError("need at least 1 word")
    words = sorted(dist.p)
    probs = np.array([dist.p[w] for w in words])
    counts = numpy_gen(seed, "draw").multinomial(n_words, probs)
    return WordDistribution(
        p={w: int(c) / n_words for w, c in zip(words, counts) if c > 0},
        total_words=n_words,
    )


def sample_letter_projections(
    dist: WordDistribution, n_words: int, n_samples: int, seed: int
) -> list[LetterDistribution]:
    """Letter projections of n_samples independent n_words-sized empirical draws.

    Equivalent to projecting each sampled word distribution individually
    (the projection is linear, so it commutes with the batched matrix form
    used here); batching keeps synthetic experiments fast.
    """
    if n_words < 1 or n_samples < 1:
        raise InputError("need positive sample counts")
    words = sorted(dist.p)
    probs = np.array([dist.p[w] for w in words])
    fractions = np.stack([chardist._letter_fractions(w) for w in words])
    counts = numpy_gen(seed, "draw").multinomial(n_words, probs, size=n_samples)
    rows = (counts / n_words) @ fractions
    rows /= rows.sum(axis=1, keepdims=True)
    letters_per_word = np.array([sum(1 for ch in w if "a" <= ch <= "z") for w in words])
    totals = counts @ letters_per_word
    return [
        LetterDistribution(p=rows[i], total_letters=max(1, int(totals[i])))
        for i in range(n_samples)
    ]


def convergence_simulation(
    reference: WordDistribution,
    sample_sizes: Sequence[int],
    skew: float | None = None,
    seed: int = 0,
) -> ConvergenceCurve:
    """Measure how fast sampled distributions approach the reference.

    For each N, draw N words i.i.d. (from the reference, or from its skewed
    variant when ``skew`` is set), project the empirical word distribution to
    letter space, and record the letter-distribution score against the
    reference's own projection. Under proportional sampling the error decays
    like 1/sqrt(N); under a skewed source it plateaus at a positive floor
    regardless of N. The slope is fit by ordinary least squares on
    (log10 N, log10 error) and reported with the residual RMS.

    Each N gets its own child stream of ``seed``, so the per-size draws are
    independent and order-insensitive.
    """
    sizes = [int(n) for n in sample_sizes]
    if len(sizes) < 2:
        raise InputError("need at least 2 sample sizes")
    if any(n < 10 for n in sizes):
        raise InputError("sample sizes must be >= 10")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InputError("sample sizes must be strictly increasing")
    if reference.total_words < 1 or not reference.p:
        raise DegenerateInputError("reference distribution is degenerate")

    source = reference if not skew else tilt_word_distribution(reference, skew, seed)
    ref_proj = project_word_to_letter(reference)
    errors = []
    for n in sizes:
        empirical = sample_word_distribution(source, n, derive(seed, "size", n))
        errors.append(ld_score(project_word_to_letter(empirical), ref_proj))

    logs_n = np.log10(np.array(sizes, dtype=float))
    errs = np.array(errors)
    if np.any(errs <= 0.0):
        raise ComputeError("sampled error collapsed to zero; cannot fit a log-log slope")
    logs_e = np.log10(errs)
    slope, intercept = np.polyfit(logs_n, logs_e, 1)
    residuals = logs_e - (slope * logs_n + intercept)
    return ConvergenceCurve(
        sample_sizes=tuple(sizes),
        errors=tuple(float(e) for e in errors),
        fitted_slope=float(slope),
        residual_rms=float(np.sqrt(np.mean(residuals**2))),
    )
