"""Adversarial attack metric tests with independent recount oracles."""

import pytest

from lddetect.adversarial import (
    aggregate_report,
    avoidance_success,
    evaluate_pairs,
    percent_reduction,
)
from lddetect.corpus import TextSample
from lddetect.errors import InputError
from lddetect.rng import SplitMix64


def oracle_count(text: str, letter: str) -> int:
    return text.lower().count(letter)


def random_text(rng: SplitMix64, n: int = 80) -> str:
    alphabet = "abcdefghijklmnopqrstuvwxyz AB!?"
    return "".join(alphabet[rng.below(len(alphabet))] for _ in range(n))


class TestPercentReduction:
    def test_full_removal(self):
        assert percent_reduction("e" * 10, "bbb", "e") == 100.0

    def test_negative_when_added(self):
        assert percent_reduction("e" * 10, "e" * 15, "e") == -50.0

    def test_zero_original_undefined(self):
        with pytest.raises(InputError, match="undefined"):
            percent_reduction("bbbb", "eee", "e")

    def test_matches_oracle_on_random_pairs(self):
        rng = SplitMix64(5)
        checked = 0
        for _ in range(300):
            orig, adv = random_text(rng), random_text(rng)
            letter = "abcdefghijklmnopqrstuvwxyz"[rng.below(26)]
            n_orig = oracle_count(orig, letter)
            if n_orig == 0:
                continue
            expected = 100.0 * (n_orig - oracle_count(adv, letter)) / n_orig
            assert percent_reduction(orig, adv, letter) == pytest.approx(expected, abs=1e-12)
            checked += 1
        assert checked > 100

    def test_case_insensitive(self):
        assert percent_reduction("EEee", "xyz", "e") == 100.0


class TestAvoidanceSuccess:
    def test_absent_letter(self):
        assert avoidance_success("no rare letter here", "z")

    def test_present_letter(self):
        assert not avoidance_success("an english sentence", "e")

    def test_two_targets_need_both(self):
        assert not avoidance_success("has e but no q", {"e", "q"})
        assert avoidance_success("but this will burn it", {"e", "q"})

    def test_target_count_validated(self):
        with pytest.raises(InputError):
            avoidance_success("text", set())

    def test_reduction_100_iff_avoided(self):
        rng = SplitMix64(77)
        for _ in range(300):
            orig, adv = random_text(rng), random_text(rng)
            letter = "abcdefghij"[rng.below(10)]
            if oracle_count(orig, letter) == 0:
                continue
            full = percent_reduction(orig, adv, letter) == 100.0
            assert full == avoidance_success(adv, {letter})


def sample(sid, text, source="modelA", variant="original", letters=()):
    return TextSample(
        id=sid,
        text=text,
        domain="alpha",
        source=source,
        temperature=None if source == "human" else 0.5,
        variant=variant,
        avoided_letters=frozenset(letters),
    )


class TestEvaluatePairs:
    def test_outcomes_and_problems(self):
        orig = sample("o1", "every letter here")
        good = sample("a1", "小 without that sign", variant="avoid_one", letters="e")
        leaky = sample("a2", "still has e inside", variant="avoid_one", letters="e")
        wrong = sample("a3", "a paraphrase", variant="paraphrase")
        outcomes, problems = evaluate_pairs([(orig, good), (orig, leaky), (orig, wrong)])
        assert len(outcomes) == 2
        assert outcomes[0].fully_avoided and not outcomes[1].fully_avoided
        assert outcomes[0].percent_reduction["e"] == 100.0
        assert len(problems) == 1 and "a3" in problems[0]

    def test_zero_occurrence_original_reported(self):
        orig = sample("o1", "no target at all")
        adv = sample("a1", "output", variant="avoid_one", letters="z")
        outcomes, problems = evaluate_pairs([(orig, adv)])
        assert outcomes == [] and len(problems) == 1


class TestAggregateReport:
    def make_outcomes(self):
        orig_e = sample("o1", "eeee eeee")
        orig_eo = sample("o2", "echo echo oo")
        pairs = [
            (orig_e, sample("a1", "a blank song", variant="avoid_one", letters="e", source="m1")),
            (orig_e, sample("a2", "blank blank", variant="avoid_one", letters="e", source="m2")),
            (orig_eo, sample("a3", "truly blank", variant="avoid_two", letters="eo", source="m1")),
            (orig_e, sample("a4", "kept eee here", variant="avoid_one", letters="e", source="m2")),
        ]
        outcomes, problems = evaluate_pairs(pairs)
        assert problems == []
        return outcomes

    def test_all_successful_group(self):
        outcomes, _ = evaluate_pairs(
            [(sample("o", "eee"), sample("a", "blank", variant="avoid_one", letters="e"))]
        )
        report = aggregate_report(outcomes, "model")
        assert report[0].full_avoidance_rate == 1.0

    def test_mixed_rate(self):
        rows = {r.group: r for r in aggregate_report(self.make_outcomes(), "model")}
        # m1: a1 (e removed) + a3 (e and o rows, both removed) -> 3 rows, all success
        assert rows["m1"].n == 3 and rows["m1"].full_avoidance_rate == 1.0
        # m2: a2 success, a4 failure -> rate 0.5
        assert rows["m2"].n == 2 and rows["m2"].full_avoidance_rate == 0.5

    def test_letter_view_sorted_descending(self):
        report = aggregate_report(self.make_outcomes(), "letter")
        rates = [r.full_avoidance_rate for r in report]
        assert rates == sorted(rates, reverse=True)

    def test_partition_rate_is_weighted_mean(self):
        outcomes = self.make_outcomes()
        total = aggregate_report(outcomes, "attack")
        overall_n = sum(r.n for r in total)
        overall_success = sum(r.full_avoidance_rate * r.n for r in total)
        by_model = aggregate_report(outcomes, "model")
        assert sum(r.n for r in by_model) == overall_n
        assert sum(r.full_avoidance_rate * r.n for r in by_model) == pytest.approx(overall_success)

    def test_empty_errors(self):
        with pytest.raises(InputError):
            aggregate_report([], "model")
