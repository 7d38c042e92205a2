"""Automatic generation metrics and human rating aggregation.

BLEU is the original corpus-level clipped-precision formulation with a single
reference per candidate and no smoothing; ROUGE-L is LCS-based F1; distinct-n
and repetition-n are per-document type statistics averaged over eligible
documents.  Likert summaries produce boxplot statistics per feature.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass

from ..errors import (
    EmptyCorpusError,
    EmptyListError,
    EmptyRatingsError,
    EmptySequenceError,
    LengthMismatchError,
    NoEligibleDocsError,
    OutOfRangeScoreError,
    PositiveLogProbError,
)
from ..model import TokenSeq, tokenize
from ._lcs import LCS_BACKEND, lcs_length

__all__ = [
    "LCS_BACKEND",
    "LikertRating",
    "LikertSummary",
    "FeatureStats",
    "MetricReport",
    "bleu_n",
    "distinct_n",
    "lcs_length",
    "likert_summary",
    "metric_report",
    "perplexity",
    "repetition_n",
    "rouge_l",
    "LIKERT_FEATURES",
    "REPORT_ROWS",
]


def _ngrams(tokens: TokenSeq, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu_n(candidates: list[TokenSeq], references: list[TokenSeq], max_n: int) -> float:
    """Corpus BLEU with uniform weights up to ``max_n``, as a percentage.

    Clipped n-gram counts pool over the whole corpus; the geometric mean is
    multiplied by the brevity penalty.  Any order with zero pooled precision
    zeroes the score (no smoothing).
    """
    if not 1 <= max_n <= 4:
        raise ValueError("max_n must be in [1, 4]")
    if len(candidates) != len(references):
        raise LengthMismatchError(
            f"{len(candidates)} candidates vs {len(references)} references",
        )
    if not candidates:
        raise EmptyCorpusError("no candidate/reference pairs")

    matched = [0] * max_n
    total = [0] * max_n
    cand_len = 0
    ref_len = 0
    for cand, ref in zip(candidates, references):
        cand_len += len(cand)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            cand_counts = _ngrams(cand, n)
            ref_counts = _ngrams(ref, n)
            total[n - 1] += sum(cand_counts.values())
            matched[n - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in cand_counts.items()
            )

    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(max_n):
        if matched[n] == 0 or total[n] == 0:
            return 0.0
        log_sum += math.log(matched[n] / total[n])
    geo_mean = math.exp(log_sum / max_n)
    bp = min(1.0, math.exp(1.0 - ref_len / cand_len))
    return geo_mean * bp * 100.0


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f: float


def rouge_l(candidate: TokenSeq, reference: TokenSeq) -> RougeScore:
    """LCS-based precision/recall/F1 between one candidate and one reference, as percentages."""
    if not candidate or not reference:
        raise EmptySequenceError("rouge_l needs non-empty token sequences")
    lcs = lcs_length(candidate, reference)
    precision = lcs / len(candidate)
    recall = lcs / len(reference)
    f = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return RougeScore(precision * 100.0, recall * 100.0, f * 100.0)


def rouge_l_corpus(candidates: list[TokenSeq], references: list[TokenSeq]) -> float:
    """Arithmetic mean of per-pair ROUGE-L F1."""
    if len(candidates) != len(references):
        raise LengthMismatchError(
            f"{len(candidates)} candidates vs {len(references)} references",
        )
    if not candidates:
        raise EmptyCorpusError("no candidate/reference pairs")
    return sum(rouge_l(c, r).f for c, r in zip(candidates, references)) / len(candidates)


def perplexity(token_logprobs: list[float]) -> float:
    """Exponential of mean negative natural-log token probability; lower reads as more fluent."""
    if not token_logprobs:
        raise EmptyListError("no token log-probabilities")
    for lp in token_logprobs:
        if lp > 0:
            raise PositiveLogProbError(f"log-probability {lp} is positive")
    return math.exp(-sum(token_logprobs) / len(token_logprobs))


def distinct_n(docs: list[TokenSeq], n: int) -> float:
    """Mean over documents of unique n-gram types per n-gram token, as a percentage."""
    if n < 1:
        raise ValueError("n must be >= 1")
    values = []
    for doc in docs:
        counts = _ngrams(doc, n)
        token_count = sum(counts.values())
        if token_count == 0:
            continue
        values.append(len(counts) / token_count)
    if not values:
        raise NoEligibleDocsError(f"no document has at least {n} tokens")
    return sum(values) / len(values) * 100.0


def repetition_n(docs: list[TokenSeq], n: int) -> float:
    """Mean over documents of the fraction of n-gram types occurring twice or more, as a percentage."""
    if n < 1:
        raise ValueError("n must be >= 1")
    values = []
    for doc in docs:
        counts = _ngrams(doc, n)
        if not counts:
            continue
        repeats = sum(1 for c in counts.values() if c >= 2)
        values.append(repeats / len(counts))
    if not values:
        raise NoEligibleDocsError(f"no document has at least {n} tokens")
    return sum(values) / len(values) * 100.0


# ---------------------------------------------------------------------------
# human ratings

LIKERT_FEATURES = ("fluency", "coherence", "relevance", "likability", "creativity")


@dataclass(frozen=True)
class LikertRating:
    """One rater's five-point scores for one generated item."""

    item_id: str
    rater_id: str
    fluency: int
    coherence: int
    relevance: int
    likability: int
    creativity: int

    def __post_init__(self) -> None:
        for feature in LIKERT_FEATURES:
            score = getattr(self, feature)
            if score not in (1, 2, 3, 4, 5):
                raise OutOfRangeScoreError(f"{feature} score {score} not in 1..5")

    def scores(self) -> dict[str, int]:
        return {feature: getattr(self, feature) for feature in LIKERT_FEATURES}

    def to_dict(self) -> dict:
        return {"item_id": self.item_id, "rater_id": self.rater_id, **self.scores()}

    @classmethod
    def from_dict(cls, d: dict) -> "LikertRating":
        return cls(
            item_id=str(d["item_id"]),
            rater_id=str(d["rater_id"]),
            **{feature: int(d[feature]) for feature in LIKERT_FEATURES},
        )


@dataclass(frozen=True)
class FeatureStats:
    """Boxplot statistics for one rated feature."""

    mean: float
    median: float
    q1: float
    q3: float
    min: int
    max: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean, "median": self.median,
            "q1": self.q1, "q3": self.q3, "min": self.min, "max": self.max,
        }


@dataclass(frozen=True)
class LikertSummary:
    features: dict[str, FeatureStats]
    n_ratings: int

    def to_dict(self) -> dict:
        return {
            "n_ratings": self.n_ratings,
            "features": {name: st.to_dict() for name, st in self.features.items()},
        }


def _tukey_quartiles(sorted_scores: list[int]) -> tuple[float, float]:
    # inclusive-median halves: odd-length data keeps the median in both halves
    n = len(sorted_scores)
    if n == 1:
        only = float(sorted_scores[0])
        return only, only
    half = n // 2
    if n % 2 == 0:
        lower, upper = sorted_scores[:half], sorted_scores[half:]
    else:
        lower, upper = sorted_scores[:half + 1], sorted_scores[half:]
    return float(statistics.median(lower)), float(statistics.median(upper))


def likert_summary(ratings: list[LikertRating]) -> LikertSummary:
    """Per-feature mean, median, inclusive-median quartiles, min, and max."""
    if not ratings:
        raise EmptyRatingsError("no ratings to summarize")
    features = {}
    for feature in LIKERT_FEATURES:
        scores = sorted(getattr(r, feature) for r in ratings)
        q1, q3 = _tukey_quartiles(scores)
        features[feature] = FeatureStats(
            mean=sum(scores) / len(scores),
            median=float(statistics.median(scores)),
            q1=q1,
            q3=q3,
            min=scores[0],
            max=scores[-1],
        )
    return LikertSummary(features=features, n_ratings=len(ratings))


# ---------------------------------------------------------------------------
# combined report

REPORT_ROWS = (
    "Perplexity",
    "BLEU-2 (%)",
    "BLEU-3 (%)",
    "BLEU-4 (%)",
    "ROUGE-L (%)",
    "Distinct 3-gram (%)",
    "Repetition 3-gram (%)",
)


@dataclass(frozen=True)
class MetricReport:
    perplexity: float | None
    bleu: dict[int, float]
    rouge_l: float
    distinct_3: float
    repetition_3: float
    n_candidates: int

    def rows(self) -> list[tuple[str, float | None]]:
        return [
            ("Perplexity", self.perplexity),
            ("BLEU-2 (%)", self.bleu[2]),
            ("BLEU-3 (%)", self.bleu[3]),
            ("BLEU-4 (%)", self.bleu[4]),
            ("ROUGE-L (%)", self.rouge_l),
            ("Distinct 3-gram (%)", self.distinct_3),
            ("Repetition 3-gram (%)", self.repetition_3),
        ]

    def render_table(self) -> str:
        width = max(len(name) for name, _ in self.rows())
        lines = [f"{'Metric'.ljust(width)}  Value"]
        for name, value in self.rows():
            shown = "n/a" if value is None else f"{value:.2f}"
            lines.append(f"{name.ljust(width)}  {shown:>8}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "perplexity": self.perplexity,
            "bleu_2": self.bleu[2],
            "bleu_3": self.bleu[3],
            "bleu_4": self.bleu[4],
            "rouge_l": self.rouge_l,
            "distinct_3": self.distinct_3,
            "repetition_3": self.repetition_3,
            "n_candidates": self.n_candidates,
        }


def metric_report(
    candidates: list[str],
    references: list[str],
    logprobs: list[float] | list[list[float]] | None = None,
) -> MetricReport:
    """Tokenize and score a paired corpus; perplexity only when log-probabilities are supplied.

    ``logprobs`` may be one flat list or one list per candidate.
    """
    if len(candidates) != len(references):
        raise LengthMismatchError(
            f"{len(candidates)} candidates vs {len(references)} references",
        )
    if not candidates:
        raise EmptyCorpusError("no candidate/reference pairs")

    cand_tokens = [tokenize(c) for c in candidates]
    ref_tokens = [tokenize(r) for r in references]

    ppl = None
    if logprobs is not None:
        flat: list[float] = []
        for entry in logprobs:
            if isinstance(entry, (int, float)):
                flat.append(float(entry))
            else:
                flat.extend(float(x) for x in entry)
        ppl = perplexity(flat)

    return MetricReport(
        perplexity=ppl,
        bleu={n: bleu_n(cand_tokens, ref_tokens, n) for n in (2, 3, 4)},
        rouge_l=rouge_l_corpus(cand_tokens, ref_tokens),
        distinct_3=distinct_n(cand_tokens, 3),
        repetition_3=repetition_n(cand_tokens, 3),
        n_candidates=len(candidates),
    )
