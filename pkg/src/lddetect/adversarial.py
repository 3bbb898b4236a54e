"""Effectiveness metrics for letter-avoidance (lipogram) attacks.

Letters are counted after the same fold-to-a-z normalization the
distribution code uses, so attack metrics and letter scores agree on what a
letter occurrence is. Reduction is relative to the original text; negative
values mean the rewrite added occurrences of the letter it was told to
avoid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .chardist import _LETTER_INDEX, letter_counts
from .corpus import TextSample
from .errors import InputError


@dataclass(frozen=True)
class AttackOutcome:
    """Per-pair result of one adversarial rewrite.

    ``model`` and ``attack`` come from the adversarial sample's metadata so
    outcomes can be aggregated by model, letter, or attack type.
    """

    sample_id: str
    model: str
    attack: str
    target_letters: tuple[str, ...]
    percent_reduction: Mapping[str, float]
    fully_avoided: bool


@dataclass(frozen=True)
class AggregateRow:
    group: str
    n: int
    mean_percent_reduction: float
    full_avoidance_rate: float


def _count(text: str, letter: str) -> int:
    idx = _LETTER_INDEX.get(letter)
    if idx is None:
        raise InputError(f"target {letter!r} is not a lowercase letter a-z")
    return int(letter_counts(text)[idx])


def percent_reduction(original: str, adversarial: str, letter: str) -> float:
    """Percent drop of the target letter, 100 * (orig - adv) / orig.

    Exactly 100 means the letter is fully absent from the rewrite; the value
    is undefined (an error) when the original never used the letter.
    """
    n_orig = _count(original, letter)
    if n_orig == 0:
        raise InputError(f"original text has no occurrences of {letter!r}; reduction undefined")
    n_adv = _count(adversarial, letter)
    return 100.0 * (n_orig - n_adv) / n_orig


def avoidance_success(adversarial: str, targets: Iterable[str]) -> bool:
    """True iff every target letter is fully absent from the rewrite."""
    targets = list(targets)
    if not 1 <= len(targets) <= 2:
        raise InputError("expected 1 or 2 target letters")
    return all(_count(adversarial, t) == 0 for t in targets)


def evaluate_pairs(
    pairs: Sequence[tuple[TextSample, TextSample]],
) -> tuple[list[AttackOutcome], list[str]]:
    """Score (original, adversarial) sample pairs.

    Returns outcomes plus a list of problem descriptions for pairs that
    could not be scored (wrong variant, no target letters, or a target the
    original never used). Problems are reported, never silently dropped.
    """
    outcomes: list[AttackOutcome] = []
    problems: list[str] = []
    for original, adv in pairs:
        if adv.variant not in ("avoid_one", "avoid_two"):
            problems.append(f"pair ({original.id}, {adv.id}): variant {adv.variant!r} has no targets")
            continue
        targets = tuple(sorted(adv.avoided_letters))
        reductions: dict[str, float] = {}
        bad = None
        for letter in targets:
            try:
                reductions[letter] = percent_reduction(original.text, adv.text, letter)
            except InputError as exc:
                bad = f"pair ({original.id}, {adv.id}): {exc}"
                break
        if bad:
            problems.append(bad)
            continue
        outcomes.append(
            AttackOutcome(
                sample_id=original.id,
                model=adv.source,
                attack=adv.variant,
                target_letters=targets,
                percent_reduction=reductions,
                fully_avoided=avoidance_success(adv.text, targets),
            )
        )
    return outcomes, problems


def aggregate_report(outcomes: Sequence[AttackOutcome], group_by: str) -> list[AggregateRow]:
    """Mean reduction and full-avoidance rate grouped by model, letter, or attack.

    Every (pair, letter) contributes one row, so a two-letter attack counts
    once per target. Success for a row means that letter was fully removed
    (reduction exactly 100). The per-letter view is sorted by descending
    success rate; other views sort by group key.
    """
    if group_by not in ("model", "letter", "attack"):
        raise InputError(f"unknown grouping {group_by!r}")
    if not outcomes:
        raise InputError("no outcomes to aggregate")
    rows: dict[str, list[tuple[float, bool]]] = {}
    for outcome in outcomes:
        for letter, reduction in sorted(outcome.percent_reduction.items()):
            key = {
                "model": outcome.model,
                "letter": letter,
                "attack": outcome.attack,
            }[group_by]
            rows.setdefault(key, []).append((reduction, reduction == 100.0))
    report = [
        AggregateRow(
            group=key,
            n=len(entries),
            mean_percent_reduction=sum(r for r, _ in entries) / len(entries),
            full_avoidance_rate=sum(1 for _, ok in entries if ok) / len(entries),
        )
        for key, entries in rows.items()
    ]
    if group_by == "letter":
        report.sort(key=lambda row: (-row.full_avoidance_rate, row.group))
    else:
        report.sort(key=lambda row: row.group)
    return report
