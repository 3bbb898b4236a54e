"""Two-signal fusion: letter-divergence feature plus a base detector score,
classified by an RBF-kernel SVM trained with sequential minimal optimization.

Each sample becomes a 2-D feature vector (base detector score, letter
distribution score against a pooled reference of candidate-model text). The
SVM is trained from scratch here: working pairs are chosen by maximal KKT
violation, a bias-free error cache is kept incrementally, and optimization
stops when the violation drops below tolerance or an iteration cap is hit.
Features are z-scored with training statistics only; the decision threshold
is calibrated on training decision values by F1 maximization rather than
fixed at zero.

Estimators follow the scikit-learn API (fit / decision_function / predict,
get_params) so they compose with the wider ecosystem.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array, check_X_y

from .chardist import LetterDistribution, ld_score, letter_distribution, pooled_letter_distribution
from .errors import ConvergenceError, InputError

FORMAT_VERSION = "lddetect-fusion-model/1"


@dataclass(frozen=True)
class MetricsReport:
    """Detection metrics of one evaluation run."""

    auroc: float
    f1: float
    tpr: float
    fpr: float
    n_pos: int
    n_neg: int


def build_reference(model_texts: Iterable[str]) -> LetterDistribution:
    """Pooled letter distribution of the candidate models' combined output."""
    return pooled_letter_distribution(model_texts)


def featurize(text: str, base_score: float, reference: LetterDistribution) -> np.ndarray:
    """2-D feature vector: (base detector score, letter score to the reference)."""
    if not math.isfinite(base_score):
        raise InputError("base score must be finite")
    return np.array([base_score, ld_score(letter_distribution(text), reference)])


class LetterDivergenceTransformer(TransformerMixin, BaseEstimator):
    """Maps raw texts to their letter-distribution score against a reference.

    ``fit`` pools the reference texts; ``transform`` returns an (n, 1) column
    of scores, ready to be stacked next to a base detector score.
    """

    def fit(self, X: Sequence[str], y=None):
        self.reference_ = build_reference(X)
        return self

    def transform(self, X: Sequence[str]) -> np.ndarray:
        if not hasattr(self, "reference_"):
            raise NotFittedError("fit the transformer on reference texts first")
        return np.array(
            [[ld_score(letter_distribution(text), self.reference_)] for text in X]
        )


def _rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    sq = np.sum(a**2, axis=1)[:, None] + np.sum(b**2, axis=1)[None, :] - 2.0 * (a @ b.T)
    return np.exp(-gamma * np.maximum(sq, 0.0))


class RbfSvm(ClassifierMixin, BaseEstimator):
    """Binary RBF-kernel SVM trained by sequential minimal optimization.

    Labels must be -1/+1 with both classes present. Features are z-scored
    internally with training statistics (a constant feature gets scale 1).
    Training is deterministic: the working pair is always the maximal
    KKT-violating pair, with numpy's first-index tie-breaking. The
    ``random_state`` parameter is accepted for API compatibility and recorded,
    but the solver draws no random numbers.

    Parameters
    ----------
    C : box constraint on the dual coefficients.
    gamma : RBF kernel width on standardized features.
    tol : KKT violation tolerance at which training stops.
    max_iter : cap on pair updates; exceeding it raises ``ConvergenceError``
        carrying the final KKT residual.
    """

    def __init__(
        self,
        C: float = 1.0,
        gamma: float = 1.0,
        tol: float = 1e-3,
        max_iter: int = 1_000_000,
        random_state: int | None = None,
    ):
        self.C = C
        self.gamma = gamma
        self.tol = tol
        self.max_iter = max_iter
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float)
        y = np.asarray(y, dtype=float)
        classes = set(np.unique(y))
        if not classes == {-1.0, 1.0}:
            if classes <= {-1.0} or classes <= {1.0}:
                raise InputError("training data contains a single class")
            raise InputError(f"labels must be -1/+1, got {sorted(classes)}")
        if self.C <= 0 or self.gamma <= 0:
            raise InputError("C and gamma must be positive")

        self.scaler_mean_ = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0.0] = 1.0
        self.scaler_scale_ = scale
        xs = (X - self.scaler_mean_) / self.scaler_scale_

        alpha, b, n_iter, violation = self._smo(xs, y)

        support = alpha > 0.0
        self.support_vectors_ = xs[support]
        self.dual_coef_ = alpha[support] * y[support]
        self.alpha_ = alpha
        self.intercept_ = b
        self.n_iter_ = n_iter
        self.kkt_violation_ = violation
        self.classes_ = np.array([-1.0, 1.0])
        self.threshold_ = calibrate_threshold(self._decision(xs), y)
        return self

    def _smo(self, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float, int, float]:
        n = x.shape[0]
        K = _rbf_kernel(x, x, self.gamma)
        alpha = np.zeros(n)
        f = np.zeros(n)  # bias-free decision values sum_j alpha_j y_j K_ij
        C = float(self.C)

        n_iter = 0
        while True:
            E = f - y
            # I_up: y_i alpha_i can still increase; I_low: y_j alpha_j can decrease.
            up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
            low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
            e_up = np.where(up, E, np.inf)
            e_low = np.where(low, E, -np.inf)
            i = int(np.argmin(e_up))
            j = int(np.argmax(e_low))
            violation = float(e_low[j] - e_up[i])
            if violation <= self.tol:
                break
            if n_iter >= self.max_iter:
                raise ConvergenceError(
                    f"SMO did not converge within {self.max_iter} pair updates "
                    f"(KKT residual {violation:.3e})",
                    kkt_residual=violation,
                )
            eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
            # Step along the feasible direction: y_i alpha_i grows by delta,
            # y_j alpha_j shrinks by delta, keeping sum alpha_i y_i fixed.
            room_i = C - alpha[i] if y[i] > 0 else alpha[i]
            room_j = alpha[j] if y[j] > 0 else C - alpha[j]
            delta = min(violation / eta, room_i, room_j)
            alpha[i] += y[i] * delta
            alpha[j] -= y[j] * delta
            # Exact clipping keeps the I_up / I_low membership tests sharp.
            for k in (i, j):
                if alpha[k] < 1e-12:
                    alpha[k] = 0.0
                elif alpha[k] > C - 1e-12:
                    alpha[k] = C
            # d(alpha_i y_i) = +delta and d(alpha_j y_j) = -delta, so the
            # bias-free decision values shift by delta * (K_i - K_j).
            f += delta * (K[i] - K[j])
            n_iter += 1

        free = (alpha > 0.0) & (alpha < C)
        if np.any(free):
            b = float(np.mean(y[free] - f[free]))
        else:
            E = f - y
            up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
            low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
            b = -0.5 * float(np.min(np.where(up, E, np.inf)) + np.max(np.where(low, E, -np.inf)))
        return alpha, b, n_iter, violation

    def _check_fitted(self):
        if not hasattr(self, "support_vectors_"):
            raise NotFittedError("this RbfSvm instance is not fitted yet")

    def _decision(self, xs: np.ndarray) -> np.ndarray:
        k = _rbf_kernel(xs, self.support_vectors_, self.gamma)
        return k @ self.dual_coef_ + self.intercept_

    def decision_function(self, X) -> np.ndarray:
        """Kernel expansion sum_i alpha_i y_i K(x_i, x) + b on standardized features."""
        self._check_fitted()
        X = check_array(X, dtype=float)
        xs = (X - self.scaler_mean_) / self.scaler_scale_
        return self._decision(xs)

    def predict(self, X) -> np.ndarray:
        """+1 where the decision value clears the calibrated threshold, else -1."""
        return np.where(self.decision_function(X) >= self.threshold_, 1.0, -1.0)

    def to_dict(self) -> dict:
        """Versioned, JSON-ready snapshot of the trained model."""
        self._check_fitted()
        return {
            "format": FORMAT_VERSION,
            "c": float(self.C),
            "gamma": float(self.gamma),
            "tol": float(self.tol),
            "bias": float(self.intercept_),
            "threshold": float(self.threshold_),
            "scaler_mean": [float(v) for v in self.scaler_mean_],
            "scaler_scale": [float(v) for v in self.scaler_scale_],
            "support_vectors": [[float(v) for v in row] for row in self.support_vectors_],
            "dual_coef": [float(v) for v in self.dual_coef_],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RbfSvm":
        if obj.get("format") != FORMAT_VERSION:
            raise InputError(f"unsupported model format {obj.get('format')!r}")
        model = cls(C=obj["c"], gamma=obj["gamma"], tol=obj["tol"])
        model.scaler_mean_ = np.array(obj["scaler_mean"], dtype=float)
        model.scaler_scale_ = np.array(obj["scaler_scale"], dtype=float)
        model.support_vectors_ = np.array(obj["support_vectors"], dtype=float)
        model.dual_coef_ = np.array(obj["dual_coef"], dtype=float)
        model.intercept_ = float(obj["bias"])
        model.threshold_ = float(obj["threshold"])
        model.classes_ = np.array([-1.0, 1.0])
        return model

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "RbfSvm":
        return cls.from_dict(json.loads(Path(path).read_text()))


def kkt_residual(model: RbfSvm, X, y) -> float:
    """Re-derive the final KKT violation of a fitted model on its training data."""
    y = np.asarray(y, dtype=float)
    f = model.decision_function(X) - model.intercept_
    E = f - y
    alpha = model.alpha_
    C = float(model.C)
    up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
    low = ((y < 0) & (alpha < C)) | ((y > 0) & (alpha > 0))
    return float(np.max(np.where(low, E, -np.inf)) - np.min(np.where(up, E, np.inf)))


def train(
    features: Sequence[Sequence[float]],
    labels: Sequence[int],
    c: float = 1.0,
    gamma: float = 1.0,
    seed: int | None = None,
) -> RbfSvm:
    """Convenience wrapper: fit an RbfSvm on a feature matrix and -1/+1 labels."""
    return RbfSvm(C=c, gamma=gamma, random_state=seed).fit(np.asarray(features, dtype=float), labels)


def auroc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Probability that a random positive outranks a random negative, ties at 1/2.

    Computed from average ranks (Mann-Whitney U), which equals the exhaustive
    pairwise comparison exactly, ties included.
    """
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = int(len(y) - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise InputError("AUROC needs both classes present")
    order = np.argsort(s, kind="mergesort")
    ranks = np.empty(len(s))
    sorted_scores = s[order]
    i = 0
    while i < len(s):
        j = i
        while j < len(s) and sorted_scores[j] == sorted_scores[i]:
            j += 1
        ranks[order[i:j]] = (i + j + 1) / 2.0  # average 1-based rank of the tie block
        i = j
    u = float(ranks[pos].sum()) - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def f1_score(scores: Sequence[float], labels: Sequence[int], threshold: float) -> float:
    """F1 of the 'score >= threshold means positive' rule."""
    tp = fp = fn = 0
    for s, y in zip(scores, labels):
        pred = s >= threshold
        if pred and y == 1:
            tp += 1
        elif pred and y != 1:
            fp += 1
        elif not pred and y == 1:
            fn += 1
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def calibrate_threshold(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Decision cutoff maximizing F1 over the finite candidate set.

    Candidates are the smallest unique score (everything predicted positive
    under the >= rule) plus the midpoints of consecutive sorted unique
    scores. Ties go to the smallest candidate, which favors recall.
    """
    y = np.asarray(labels)
    if not ((y == 1).any() and (y != 1).any()):
        raise InputError("threshold calibration needs both classes present")
    uniq = sorted(set(float(s) for s in scores))
    candidates = [uniq[0]] + [(a + b) / 2.0 for a, b in zip(uniq, uniq[1:])]
    best_t, best_f1 = None, -1.0
    for t in candidates:
        f1 = f1_score(scores, labels, t)
        if f1 > best_f1:
            best_t, best_f1 = t, f1
    return best_t


def evaluate_scores(scores: Sequence[float], labels: Sequence[int], threshold: float) -> MetricsReport:
    """AUROC plus thresholded F1/TPR/FPR of decision scores on labeled data."""
    y = np.asarray(labels)
    n_pos = int((y == 1).sum())
    n_neg = int(len(y) - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise InputError("evaluation needs both classes present")
    preds = np.asarray(scores, dtype=float) >= threshold
    tp = int((preds & (y == 1)).sum())
    fp = int((preds & (y != 1)).sum())
    fn = int((~preds & (y == 1)).sum())
    return MetricsReport(
        auroc=auroc(scores, labels),
        f1=f1_score(scores, labels, threshold),
        tpr=tp / n_pos,
        fpr=fp / n_neg,
        n_pos=n_pos,
        n_neg=n_neg,
    )


def evaluate_baseline(
    train_scores: Sequence[float],
    train_labels: Sequence[int],
    eval_scores: Sequence[float],
    eval_labels: Sequence[int],
) -> MetricsReport:
    """Raw-detector evaluation path: calibrate on train scores, score the eval set.

    This is how an unaugmented detector is compared against its fused
    variant; no SVM is involved.
    """
    threshold = calibrate_threshold(train_scores, train_labels)
    return evaluate_scores(eval_scores, eval_labels, threshold)
