"""Reorder a suggestion list with curated antonym and keyword rules.

Two successive stable passes: suggestions whose label contains a token
forbidden by the query's antonym triggers sink to the back, then suggestions
sharing a keyword with the query float to the front.  Nothing is added,
dropped or rescored, so a rewarded entry outranks a penalized one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .classifiers import RankedPredictions
from .preprocess import normalize, tokenize


@dataclass(frozen=True)
class AntonymTable:
    """Trigger token -> tokens that must not appear in a suggested label."""

    forbidden: dict[str, tuple[str, ...]]

    @classmethod
    def empty(cls) -> "AntonymTable":
        return cls({})

    @classmethod
    def from_dict(cls, mapping: Mapping[str, Iterable[str]]) -> "AntonymTable":
        table: dict[str, tuple[str, ...]] = {}
        for trigger, words in mapping.items():
            trigger = normalize(trigger)
            if not trigger:
                raise ValueError("antonym trigger must be nonempty")
            targets = tuple(dict.fromkeys(normalize(w) for w in words))
            if trigger in targets:
                raise ValueError(f"antonym trigger {trigger!r} maps to itself")
            table[trigger] = targets
        return cls(table)

    @classmethod
    def load(cls, path: str | Path) -> "AntonymTable":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise ValueError(f"{path}: antonym file must be a JSON object")
        return cls.from_dict(doc)

    def save(self, path: str | Path) -> None:
        doc = {k: list(v) for k, v in sorted(self.forbidden.items())}
        Path(path).write_text(
            json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )

    def forbidden_for(self, customer_tokens: Iterable[str]) -> set[str]:
        """Union of forbidden tokens over the triggers present in the query."""
        words: set[str] = set()
        for token in set(customer_tokens) & self.forbidden.keys():
            words.update(self.forbidden[token])
        return words


@dataclass(frozen=True)
class KeywordSet:
    """Tokens that should appear on both the customer and the library side."""

    tokens: frozenset[str]

    @classmethod
    def empty(cls) -> "KeywordSet":
        return cls(frozenset())

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "KeywordSet":
        cleaned = frozenset(normalize(t) for t in tokens if t.strip())
        return cls(cleaned)

    @classmethod
    def load(cls, path: str | Path) -> "KeywordSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_tokens(line.strip() for line in fh)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            "".join(t + "\n" for t in sorted(self.tokens)), encoding="utf-8"
        )


def label_tokens(label: str) -> set[str]:
    """Base tokens of a library name, for rule matching."""
    return set(tokenize(normalize(label)))


def rerank(
    customer_tokens: Sequence[str],
    preds: RankedPredictions,
    antonyms: AntonymTable,
    keywords: KeywordSet,
) -> RankedPredictions:
    """Apply the antonym penalty, then the keyword reward.

    Each pass is a stable partition, so entries with equal penalty and reward
    status keep their relative order and the whole operation is idempotent.
    """
    if not antonyms.forbidden and not keywords.tokens:
        return preds

    tokens_by_label = {label: label_tokens(label) for label, _ in preds.entries}

    forbidden = antonyms.forbidden_for(customer_tokens)
    if forbidden:
        allowed = [e for e in preds.entries if not (tokens_by_label[e[0]] & forbidden)]
        penalized = [e for e in preds.entries if tokens_by_label[e[0]] & forbidden]
        entries = allowed + penalized
    else:
        entries = list(preds.entries)

    matched = keywords.tokens & set(customer_tokens)
    if matched:
        rewarded = [e for e in entries if tokens_by_label[e[0]] & matched]
        rest = [e for e in entries if not (tokens_by_label[e[0]] & matched)]
        entries = rewarded + rest

    return RankedPredictions(tuple(entries), fallback=preds.fallback)
