"""Corpus ingestion, validation, filtering, and deterministic splitting.

Corpus files are UTF-8 JSON lines, one sample per line, with keys ``id``,
``text``, ``domain``, ``source``, ``temperature`` (number or null),
``variant`` (one of ``original``, ``paraphrase``, ``avoid_one``,
``avoid_two``) and ``avoided_letters`` (array of single-character strings).
Score files are UTF-8 CSV with header ``sample_id,detector,score``.

Text is stored verbatim at ingest; all normalization happens downstream so
the raw sample stays available to stylometric features.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .rng import SplitMix64, derive

VARIANTS = ("original", "paraphrase", "avoid_one", "avoid_two")

_REQUIRED_KEYS = ("id", "text", "domain", "source", "temperature", "variant", "avoided_letters")
_AVOID_COUNT = {"original": 0, "paraphrase": 0, "avoid_one": 1, "avoid_two": 2}


@dataclass(frozen=True)
class TextSample:
    """One labeled text with its corpus metadata."""

    id: str
    text: str
    domain: str
    source: str
    temperature: float | None = None
    variant: str = "original"
    avoided_letters: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.id:
            raise InputError("field 'id': must be a nonempty string")
        if not self.domain:
            raise InputError("field 'domain': must be a nonempty string")
        if not self.source:
            raise InputError("field 'source': must be a nonempty string")
        if self.variant not in VARIANTS:
            raise InputError(f"field 'variant': {self.variant!r} not one of {VARIANTS}")
        if self.temperature is not None:
            if not math.isfinite(self.temperature) or not 0.0 <= self.temperature <= 1.0:
                raise InputError(f"field 'temperature': {self.temperature!r} not in [0, 1]")
        if self.source == "human" and self.temperature is not None:
            raise InputError("field 'temperature': must be absent for human samples")
        letters = frozenset(self.avoided_letters)
        for ch in letters:
            if len(ch) != 1 or not ("a" <= ch <= "z"):
                raise InputError(f"field 'avoided_letters': {ch!r} is not a lowercase letter")
        expected = _AVOID_COUNT[self.variant]
        if len(letters) != expected:
            raise InputError(
                f"field 'avoided_letters': variant {self.variant!r} requires exactly "
                f"{expected} avoided letter(s), got {len(letters)}"
            )
        object.__setattr__(self, "avoided_letters", letters)

    @property
    def is_human(self) -> bool:
        return self.source == "human"


@dataclass(frozen=True)
class ScoreRecord:
    """One externally supplied base-detector score for one sample."""

    sample_id: str
    detector: str
    score: float

    def __post_init__(self):
        if not self.sample_id or not self.detector:
            raise InputError("score record needs nonempty sample_id and detector")
        if not math.isfinite(self.score):
            raise InputError(f"score for ({self.sample_id}, {self.detector}) is not finite")


@dataclass(frozen=True)
class SplitSpec:
    """Deterministic train/eval split request.

    ``filters`` maps a field name (domain, source, temperature, variant) to
    the set of accepted string values; values for the same field are OR-ed,
    distinct fields are AND-ed.
    """

    seed: int
    n_train_human: int
    n_train_ai: int
    filters: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_train_human < 0 or self.n_train_ai < 0:
            raise InputError("requested training counts must be >= 0")


def _sample_from_obj(obj: dict) -> TextSample:
    missing = [k for k in _REQUIRED_KEYS if k not in obj]
    if missing:
        raise InputError(f"field {missing[0]!r}: missing")
    unknown = [k for k in obj if k not in _REQUIRED_KEYS]
    if unknown:
        raise InputError(f"field {unknown[0]!r}: not part of the corpus schema")
    if not isinstance(obj["id"], str):
        raise InputError("field 'id': must be a string")
    if not isinstance(obj["text"], str):
        raise InputError("field 'text': must be a string")
    temperature = obj["temperature"]
    if temperature is not None and not isinstance(temperature, (int, float)):
        raise InputError("field 'temperature': must be a number or null")
    avoided = obj["avoided_letters"]
    if not isinstance(avoided, list) or any(not isinstance(x, str) for x in avoided):
        raise InputError("field 'avoided_letters': must be an array of strings")
    return TextSample(
        id=obj["id"],
        text=obj["text"],
        domain=obj["domain"],
        source=obj["source"],
        temperature=None if temperature is None else float(temperature),
        variant=obj["variant"],
        avoided_letters=frozenset(avoided),
    )


def load_corpus(path: str | Path) -> list[TextSample]:
    """Load and validate a JSONL corpus, preserving file order.

    Errors name the offending line (1-based) and field; a duplicate id names
    both lines where it occurs.
    """
    samples: list[TextSample] = []
    seen: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}: invalid JSON: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise InputError(f"line {lineno}: expected a JSON object")
            try:
                sample = _sample_from_obj(obj)
            except InputError as exc:
                raise InputError(f"line {lineno}: {exc}") from None
            if sample.id in seen:
                raise InputError(
                    f"duplicate id {sample.id!r} on lines {seen[sample.id]} and {lineno}"
                )
            seen[sample.id] = lineno
            samples.append(sample)
    return samples


def write_corpus(samples: Iterable[TextSample], path: str | Path) -> None:
    """Write samples in the canonical JSONL form that ``load_corpus`` reads."""
    seen: set[str] = set()
    with open(path, "w", encoding="utf-8") as fh:
        for sample in samples:
            if sample.id in seen:
                raise InputError(f"duplicate id {sample.id!r} while writing corpus")
            seen.add(sample.id)
            obj = {
                "id": sample.id,
                "text": sample.text,
                "domain": sample.domain,
                "source": sample.source,
                "temperature": sample.temperature,
                "variant": sample.variant,
                "avoided_letters": sorted(sample.avoided_letters),
            }
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")


def load_scores(path: str | Path) -> list[ScoreRecord]:
    """Load a detector score CSV; rejects non-finite scores and duplicate keys."""
    records: list[ScoreRecord] = []
    seen: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("score file is empty") from None
        if [h.strip() for h in header] != ["sample_id", "detector", "score"]:
            raise InputError(f"score file header must be 'sample_id,detector,score', got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise InputError(f"line {lineno}: expected 3 columns, got {len(row)}")
            sample_id, detector, raw = (c.strip() for c in row)
            try:
                score = float(raw)
            except ValueError:
                raise InputError(f"line {lineno}: score {raw!r} is not numeric") from None
            if not math.isfinite(score):
                raise InputError(f"line {lineno}: score {raw!r} is not finite")
            key = (sample_id, detector)
            if key in seen:
                raise InputError(
                    f"duplicate score for ({sample_id}, {detector}) on lines "
                    f"{seen[key]} and {lineno}"
                )
            seen[key] = lineno
            records.append(ScoreRecord(sample_id=sample_id, detector=detector, score=score))
    return records


def score_index(records: Iterable[ScoreRecord]) -> dict[tuple[str, str], float]:
    """Index score records by (sample_id, detector)."""
    return {(r.sample_id, r.detector): r.score for r in records}


def matches(sample: TextSample, filters: Mapping[str, frozenset[str] | set[str]]) -> bool:
    """True when the sample satisfies every filter field."""
    for key, values in filters.items():
        if key == "domain":
            ok = sample.domain in values
        elif key == "source":
            ok = sample.source in values
        elif key == "variant":
            ok = sample.variant in values
        elif key == "temperature":
            ok = sample.temperature is not None and any(
                abs(sample.temperature - float(v)) < 1e-9 for v in values
            )
        else:
            raise InputError(f"unknown filter field {key!r}")
        if not ok:
            return False
    return True


def filter_samples(
    samples: Iterable[TextSample], filters: Mapping[str, frozenset[str] | set[str]]
) -> list[TextSample]:
    return [s for s in samples if matches(s, filters)]


def split(
    samples: Sequence[TextSample],
    scores: Sequence[ScoreRecord] | None,
    spec: SplitSpec,
    detectors: Sequence[str] | None = None,
) -> tuple[list[TextSample], list[TextSample]]:
    """Deterministic train/eval split of the filtered pool.

    Each class (human vs AI) is Fisher-Yates shuffled under its own child
    stream of ``spec.seed`` and the first k samples are taken; train and eval
    are returned in original corpus order. When ``scores`` is given, every
    pooled sample must have a score for every detector under evaluation
    (``detectors``, defaulting to all detectors present); a missing score is
    a hard error rather than a silent exclusion, which would bias metrics.
    """
    pool = filter_samples(samples, spec.filters)
    if scores is not None:
        wanted = sorted(set(detectors)) if detectors else sorted({r.detector for r in scores})
        index = score_index(scores)
        for sample in pool:
            for det in wanted:
                if (sample.id, det) not in index:
                    raise InputError(f"sample {sample.id!r} has no score for detector {det!r}")

    order = {s.id: i for i, s in enumerate(pool)}
    humans = [s for s in pool if s.is_human]
    ais = [s for s in pool if not s.is_human]
    if len(humans) < spec.n_train_human:
        raise InputError(
            f"insufficient human samples after filtering: {len(humans)} < {spec.n_train_human}"
        )
    if len(ais) < spec.n_train_ai:
        raise InputError(
            f"insufficient AI samples after filtering: {len(ais)} < {spec.n_train_ai}"
        )

    SplitMix64(derive(spec.seed, "split", "human")).shuffle(humans)
    SplitMix64(derive(spec.seed, "split", "ai")).shuffle(ais)
    train_ids = {s.id for s in humans[: spec.n_train_human]}
    train_ids |= {s.id for s in ais[: spec.n_train_ai]}

    train = sorted((s for s in pool if s.id in train_ids), key=lambda s: order[s.id])
    eval_ = sorted((s for s in pool if s.id not in train_ids), key=lambda s: order[s.id])
    return train, eval_


def group_samples(samples: Iterable[TextSample], key: str) -> dict[str, list[TextSample]]:
    """Group samples by source, domain, variant, or temperature (sorted keys)."""
    getters = {
        "source": lambda s: s.source,
        "domain": lambda s: s.domain,
        "variant": lambda s: s.variant,
        "temperature": lambda s: "none" if s.temperature is None else repr(s.temperature),
    }
    if key not in getters:
        raise InputError(f"unknown group-by field {key!r}")
    get = getters[key]
    groups: dict[str, list[TextSample]] = {}
    for sample in samples:
        groups.setdefault(get(sample), []).append(sample)
    return {k: groups[k] for k in sorted(groups)}
