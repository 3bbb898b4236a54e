"""Letter-distribution signatures for AI-generated text detection.

The package computes letter and word probability distributions, scores
their divergence (root Jensen-Shannon distance), validates the clustering
structure that separates human from model-generated text, and fuses the
letter signal with external perplexity-detector scores through an RBF-SVM.
"""

from .adversarial import AttackOutcome, aggregate_report, avoidance_success, percent_reduction
from .analysis import (
    ConvergenceCurve,
    DendrogramNode,
    DivergenceMatrix,
    PcaResult,
    SeparationReport,
    agglomerative_cluster,
    convergence_simulation,
    correlation_matrix,
    pairwise_matrix,
    pca,
    pearson,
    sample_word_distribution,
    separation_report,
    tilt_word_distribution,
    zipf_word_distribution,
)
from .chardist import (
    LetterDistribution,
    WordDistribution,
    jsd,
    kl_divergence,
    ld_score,
    letter_distribution,
    pooled_letter_distribution,
    project_word_to_letter,
    wd_score,
    word_distribution,
)
from .corpus import ScoreRecord, SplitSpec, TextSample, load_corpus, load_scores, split, write_corpus
from .errors import ComputeError, ConvergenceError, DegenerateInputError, DetectError, InputError
from .fusion import (
    LetterDivergenceTransformer,
    MetricsReport,
    RbfSvm,
    auroc,
    build_reference,
    calibrate_threshold,
    evaluate_baseline,
    evaluate_scores,
    featurize,
    train,
)
from .stylometry import NgramReport, StylometricProfile, fkgl, lexical_diversity, ngram_report, surface_features

__version__ = "0.1.0"
