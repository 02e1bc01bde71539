"""Normalization, cleaning, tokenization and n-gram expansion for signal names."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence, TYPE_CHECKING

if TYPE_CHECKING:
    from .data import Dataset, SignalLibrary

logger = logging.getLogger(__name__)

# A token is a maximal run of alphanumeric characters (Unicode-aware);
# every other character, underscore included, acts as a separator.
_SEPARATORS = re.compile(r"[\W_]+")

TokenSequence = list[str]
TokenBag = Counter  # token or n-gram string -> positive count


def normalize(raw: str) -> str:
    """Lowercase the name; no other transformation."""
    return raw.lower()


def tokenize(normalized: str) -> TokenSequence:
    """Split a normalized name into base tokens.

    Splits on maximal runs of non-alphanumeric characters and discards empty
    pieces.  A purely numeric token directly after a token containing letters
    is folded into a merged "word number" token: the digits disappear as a
    standalone token and the merged form is appended after the word, so e.g.
    "dist. zone 2 trip" becomes [dist, zone, zone 2, trip].  Digits with no
    word in front of them (or following another number) stay as they are.
    Mixed tokens such as "l1" are never split.
    """
    out: TokenSequence = []
    prev: str | None = None
    for part in _SEPARATORS.split(normalized):
        if not part:
            continue
        if part.isdecimal() and prev is not None and any(ch.isalpha() for ch in prev):
            out.append(f"{prev} {part}")
        else:
            out.append(part)
        prev = part
    return out


def ngrams(tokens: Sequence[str], max_n: int = 3) -> TokenBag:
    """Multiset of all contiguous runs of 1..max_n base tokens.

    Runs are joined by single spaces and counted with multiplicity; with
    max_n=1 this is the plain token multiset.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")
    bag: TokenBag = Counter()
    length = len(tokens)
    for n in range(1, min(max_n, length) + 1):
        for i in range(length - n + 1):
            bag[" ".join(tokens[i : i + n])] += 1
    return bag


@dataclass(frozen=True)
class CleanStats:
    """How many pairs each cleaning rule removed."""

    removed_unknown_library: int
    removed_identical: int


def clean(ds: "Dataset", lib: "SignalLibrary") -> tuple["Dataset", CleanStats]:
    """Drop training pairs that cannot or should not be learned.

    Removes pairs whose normalized library name is not in the library
    (non-standard naming) and pairs whose customer and library names are
    identical after normalization (trivially matchable).  Survivor order is
    preserved; the returned stats report the count removed per rule.
    """
    from .data import Dataset

    kept = []
    removed_unknown = 0
    removed_identical = 0
    for pair in ds.pairs:
        lib_name = normalize(pair.library_signal)
        if lib_name not in lib:
            removed_unknown += 1
            continue
        if normalize(pair.customer_signal) == lib_name:
            removed_identical += 1
            continue
        kept.append(pair)
    stats = CleanStats(removed_unknown, removed_identical)
    if removed_unknown or removed_identical:
        logger.info(
            "clean: removed %d pairs with library names outside the library, "
            "%d pairs with identical names",
            removed_unknown,
            removed_identical,
        )
    return Dataset(kept), stats
