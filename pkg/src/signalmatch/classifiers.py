"""Signal-name classifiers: lookup-table and Naive Bayes baselines plus the
token-vote model, with versioned JSON serialization for all three.

The token-vote model keeps a per-token tally of which library names each
token (or n-gram) co-occurred with during training.  At prediction time every
token in the query votes for the names it has been seen with, each token's
vote split proportionally to its co-occurrence counts, and the summed votes
are normalized into a score distribution.  Frequent, unspecific tokens thus
contribute weak votes while rare, discriminative ones can dominate, and a
single characteristic token is enough to pull its library name into the
ranking.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TYPE_CHECKING

from .preprocess import TokenBag, ngrams, normalize, tokenize

if TYPE_CHECKING:
    from .data import Dataset

METHODS = ("tokvote", "nb", "lookup")


@dataclass(frozen=True)
class RankedPredictions:
    """Ordered (label, score) suggestions; scores never increase down the list.

    `fallback` marks rankings produced purely from global label frequency
    because no query token was ever seen in training.
    """

    entries: tuple[tuple[str, float], ...]
    fallback: bool = False

    def labels(self) -> list[str]:
        return [label for label, _ in self.entries]


def _ranked(scored: Iterable[tuple[str, float]], k: int) -> list[tuple[str, float]]:
    """Deterministic top-k: score descending, then label ascending."""
    return sorted(scored, key=lambda e: (-e[1], e[0]))[:k]


def _query_bag(signal: str, max_n: int) -> TokenBag:
    return ngrams(tokenize(normalize(signal)), max_n)


# ---------------------------------------------------------------------------
# Lookup table baseline
# ---------------------------------------------------------------------------


@dataclass
class LookupModel:
    """Exact-match table: normalized customer name -> labels by frequency."""

    table: dict[str, list[tuple[str, int]]]


def train_lookup(train: "Dataset") -> LookupModel:
    counts: dict[str, Counter] = {}
    for pair in train.pairs:
        key = normalize(pair.customer_signal)
        counts.setdefault(key, Counter())[normalize(pair.library_signal)] += 1
    table = {
        key: sorted(c.items(), key=lambda e: (-e[1], e[0])) for key, c in counts.items()
    }
    return LookupModel(table)


def predict_lookup(m: LookupModel, signal: str, k: int) -> RankedPredictions:
    """First min(k, stored) labels for the verbatim normalized signal.

    Unknown signals yield an empty ranking (not a fallback: the table simply
    has no opinion).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    stored = m.table.get(normalize(signal), [])
    entries = tuple((label, float(count)) for label, count in stored[:k])
    return RankedPredictions(entries, fallback=False)


# ---------------------------------------------------------------------------
# Multinomial Naive Bayes baseline
# ---------------------------------------------------------------------------


@dataclass
class NaiveBayesModel:
    """Multinomial NB over unigram token counts with Laplace smoothing."""

    alpha: float
    class_prior_counts: dict[str, int]
    token_class_counts: dict[str, dict[str, int]]  # token -> label -> count
    class_token_totals: dict[str, int]

    @property
    def vocabulary(self) -> set[str]:
        return set(self.token_class_counts)


def train_nb(train: "Dataset", alpha: float = 1.0) -> NaiveBayesModel:
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    priors: dict[str, int] = {}
    token_counts: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    for pair in train.pairs:
        label = normalize(pair.library_signal)
        priors[label] = priors.get(label, 0) + 1
        bag = _query_bag(pair.customer_signal, 1)
        for token, count in bag.items():
            per_label = token_counts.setdefault(token, {})
            per_label[label] = per_label.get(label, 0) + count
            totals[label] = totals.get(label, 0) + count
    return NaiveBayesModel(alpha, priors, token_counts, totals)


def predict_nb(m: NaiveBayesModel, signal: str, k: int) -> RankedPredictions:
    """Top-k labels by posterior probability.

    Log-space likelihoods avoid underflow on long names; tokens outside the
    training vocabulary are skipped.  Scores are the posteriors normalized
    over all labels.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not m.class_prior_counts:
        raise ValueError("cannot predict with an empty model")
    bag = _query_bag(signal, 1)
    # canonical token order: the ranking depends only on the bag, not on the
    # order tokens appeared in the query
    known = sorted(
        (tok, cnt) for tok, cnt in bag.items() if tok in m.token_class_counts
    )
    n_pairs = sum(m.class_prior_counts.values())
    vocab_size = len(m.token_class_counts)
    log_posts: dict[str, float] = {}
    for label, prior_count in m.class_prior_counts.items():
        logp = math.log(prior_count / n_pairs)
        denom = m.class_token_totals.get(label, 0) + m.alpha * vocab_size
        for token, count in known:
            numer = m.token_class_counts[token].get(label, 0) + m.alpha
            logp += count * math.log(numer / denom)
        log_posts[label] = logp
    # rank on the log posterior itself; the normalized probability is only
    # the reported score (normalization cannot reorder, but it can round)
    order = sorted(log_posts.items(), key=lambda e: (-e[1], e[0]))
    peak = order[0][1]
    unnorm = [(label, math.exp(logp - peak)) for label, logp in order]
    total = sum(p for _, p in unnorm)
    entries = tuple((label, p / total) for label, p in unnorm[:k])
    return RankedPredictions(entries, fallback=False)


# ---------------------------------------------------------------------------
# Token-vote model
# ---------------------------------------------------------------------------


@dataclass
class TokenVoteModel:
    """Co-occurrence counts between query tokens/n-grams and library names."""

    max_n: int
    cooccurrence: dict[str, dict[str, int]]  # token -> label -> count
    token_totals: dict[str, int]  # token -> total count across labels
    label_frequency: dict[str, int]  # label -> training pair count

    @property
    def labels(self) -> set[str]:
        return set(self.label_frequency)


def train_tokvote(train: "Dataset", max_n: int = 3) -> TokenVoteModel:
    """Count token/label co-occurrences over every pair's n-gram bag."""
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    cooc: dict[str, dict[str, int]] = {}
    totals: dict[str, int] = {}
    label_freq: dict[str, int] = {}
    for pair in train.pairs:
        label = normalize(pair.library_signal)
        label_freq[label] = label_freq.get(label, 0) + 1
        for token, count in _query_bag(pair.customer_signal, max_n).items():
            per_label = cooc.setdefault(token, {})
            per_label[label] = per_label.get(label, 0) + count
            totals[token] = totals.get(token, 0) + count
    return TokenVoteModel(max_n, cooc, totals, label_freq)


def token_vote(m: TokenVoteModel, token: str) -> dict[str, float]:
    """One token's vote, split over the labels it co-occurred with.

    The weights for a known token sum to 1; an unseen token votes for
    nothing and returns an empty map.
    """
    per_label = m.cooccurrence.get(token)
    if not per_label:
        return {}
    total = m.token_totals[token]
    return {label: count / total for label, count in per_label.items()}


def aggregate_votes(m: TokenVoteModel, tokens: Iterable[str]) -> dict[str, float]:
    """Sum single-token votes over a token sequence, one occurrence at a time.

    Left-to-right accumulation makes the aggregate exactly additive: voting
    on a sequence with one more token appended equals the previous aggregate
    plus that token's vote, bit for bit.
    """
    votes: dict[str, float] = {}
    for token in tokens:
        per_label = m.cooccurrence.get(token)
        if not per_label:
            continue
        total = m.token_totals[token]
        for label, count in per_label.items():
            votes[label] = votes.get(label, 0.0) + count / total
    return votes


def predict_tokvote(m: TokenVoteModel, signal: str, k: int) -> RankedPredictions:
    """Top-k labels by accumulated token votes.

    Scores are the votes normalized into a distribution over all labels that
    received any vote.  When every query token is unseen there is nothing to
    vote with; the k globally most frequent training labels are returned with
    score 0 and the fallback flag set.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not m.label_frequency:
        raise ValueError("cannot predict with an empty model")
    bag = _query_bag(signal, m.max_n)
    # canonical occurrence order keeps the result a function of the bag alone
    votes = aggregate_votes(m, sorted(bag.elements()))
    if not votes:
        most_frequent = _ranked(
            ((label, float(n)) for label, n in m.label_frequency.items()), k
        )
        return RankedPredictions(
            tuple((label, 0.0) for label, _ in most_frequent), fallback=True
        )
    total = sum(votes.values())
    top = _ranked(votes.items(), k)
    entries = tuple((label, vote / total) for label, vote in top)
    return RankedPredictions(entries, fallback=False)


# ---------------------------------------------------------------------------
# Method registry
# ---------------------------------------------------------------------------

Model = LookupModel | NaiveBayesModel | TokenVoteModel


def train_model(
    method: str, train: "Dataset", *, alpha: float = 1.0, max_n: int = 3
) -> Model:
    if method == "tokvote":
        return train_tokvote(train, max_n=max_n)
    if method == "nb":
        return train_nb(train, alpha=alpha)
    if method == "lookup":
        return train_lookup(train)
    raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")


def predict(model: Model, signal: str, k: int) -> RankedPredictions:
    if isinstance(model, TokenVoteModel):
        return predict_tokvote(model, signal, k)
    if isinstance(model, NaiveBayesModel):
        return predict_nb(model, signal, k)
    if isinstance(model, LookupModel):
        return predict_lookup(model, signal, k)
    raise TypeError(f"not a model: {type(model).__name__}")


def method_of(model: Model) -> str:
    if isinstance(model, TokenVoteModel):
        return "tokvote"
    if isinstance(model, NaiveBayesModel):
        return "nb"
    if isinstance(model, LookupModel):
        return "lookup"
    raise TypeError(f"not a model: {type(model).__name__}")


# ---------------------------------------------------------------------------
# Serialization: versioned JSON, keys sorted so equal models serialize
# byte-identically
# ---------------------------------------------------------------------------

FORMAT_TAGS = {"tokvote-v1": TokenVoteModel, "nb-v1": NaiveBayesModel, "lookup-v1": LookupModel}


def serialize_model(model: Model) -> str:
    if isinstance(model, TokenVoteModel):
        doc = {
            "format": "tokvote-v1",
            "max_n": model.max_n,
            "cooccurrence": model.cooccurrence,
            "label_frequency": model.label_frequency,
        }
    elif isinstance(model, NaiveBayesModel):
        doc = {
            "format": "nb-v1",
            "alpha": model.alpha,
            "class_prior_counts": model.class_prior_counts,
            "token_class_counts": model.token_class_counts,
            "class_token_totals": model.class_token_totals,
        }
    elif isinstance(model, LookupModel):
        doc = {
            "format": "lookup-v1",
            "table": {key: [[label, count] for label, count in rows] for key, rows in model.table.items()},
        }
    else:
        raise TypeError(f"not a model: {type(model).__name__}")
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _check_count_map(mapping: dict, what: str, minimum: int = 1) -> None:
    for key, value in mapping.items():
        if not isinstance(key, str) or not key:
            raise ValueError(f"invalid {what}: empty or non-string key")
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            raise ValueError(f"invalid {what}: count for {key!r} must be an int >= {minimum}")


def deserialize_model(text: str) -> Model:
    """Parse a serialized model, validating its structural invariants."""
    doc = json.loads(text)
    if not isinstance(doc, dict) or "format" not in doc:
        raise ValueError("not a serialized model: missing format tag")
    tag = doc["format"]
    if tag == "tokvote-v1":
        max_n = doc["max_n"]
        if not isinstance(max_n, int) or max_n < 1:
            raise ValueError("invalid tokvote model: max_n must be an int >= 1")
        cooc = doc["cooccurrence"]
        label_freq = doc["label_frequency"]
        _check_count_map(label_freq, "label_frequency")
        totals: dict[str, int] = {}
        for token, per_label in cooc.items():
            if not token:
                raise ValueError("invalid tokvote model: empty token")
            _check_count_map(per_label, f"cooccurrence[{token!r}]")
            for label in per_label:
                if label not in label_freq:
                    raise ValueError(
                        f"invalid tokvote model: label {label!r} has counts but no frequency"
                    )
            totals[token] = sum(per_label.values())
        return TokenVoteModel(max_n, cooc, totals, label_freq)
    if tag == "nb-v1":
        alpha = doc["alpha"]
        if not isinstance(alpha, (int, float)) or alpha <= 0:
            raise ValueError("invalid nb model: alpha must be > 0")
        priors = doc["class_prior_counts"]
        _check_count_map(priors, "class_prior_counts")
        token_counts = doc["token_class_counts"]
        recomputed: dict[str, int] = {}
        for token, per_label in token_counts.items():
            _check_count_map(per_label, f"token_class_counts[{token!r}]")
            for label, count in per_label.items():
                if label not in priors:
                    raise ValueError(f"invalid nb model: unknown label {label!r}")
                recomputed[label] = recomputed.get(label, 0) + count
        totals = doc["class_token_totals"]
        _check_count_map(totals, "class_token_totals", minimum=0)
        if totals != recomputed:
            raise ValueError(
                "invalid nb model: class_token_totals disagree with token_class_counts"
            )
        return NaiveBayesModel(float(alpha), priors, token_counts, totals)
    if tag == "lookup-v1":
        table: dict[str, list[tuple[str, int]]] = {}
        for key, rows in doc["table"].items():
            entries = [(label, count) for label, count in rows]
            _check_count_map(dict(entries), f"table[{key!r}]")
            if entries != sorted(entries, key=lambda e: (-e[1], e[0])):
                raise ValueError(f"invalid lookup model: table[{key!r}] not sorted")
            if len({label for label, _ in entries}) != len(entries):
                raise ValueError(f"invalid lookup model: duplicate label under {key!r}")
            table[key] = entries
        return LookupModel(table)
    raise ValueError(f"unknown model format tag {tag!r}")


def save_model(model: Model, path: str | Path) -> None:
    Path(path).write_text(serialize_model(model), encoding="utf-8")


def load_model(path: str | Path) -> Model:
    return deserialize_model(Path(path).read_text(encoding="utf-8"))
