"""Dataset ingestion, project-wise splitting and synthetic corpus generation."""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .preprocess import normalize
from .rerank import AntonymTable, KeywordSet

PAIRS_HEADER = ("project_id", "customer_signal", "library_signal")


@dataclass(frozen=True)
class SignalPair:
    """One customer-name / library-name example from a past project."""

    project_id: str
    customer_signal: str
    library_signal: str

    def __post_init__(self) -> None:
        if not self.project_id:
            raise ValueError("project_id must be nonempty")
        if not normalize(self.customer_signal):
            raise ValueError("customer_signal must be nonempty")


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of signal pairs."""

    pairs: tuple[SignalPair, ...]

    def __init__(self, pairs: Iterable[SignalPair]) -> None:
        object.__setattr__(self, "pairs", tuple(pairs))

    @cached_property
    def projects(self) -> frozenset[str]:
        return frozenset(p.project_id for p in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def restrict_to_projects(self, projects: Iterable[str]) -> "Dataset":
        wanted = set(projects)
        return Dataset(p for p in self.pairs if p.project_id in wanted)


@dataclass(frozen=True)
class SignalLibrary:
    """The provider's fixed set of normalized signal names."""

    names: frozenset[str]

    @classmethod
    def from_names(cls, names: Iterable[str]) -> "SignalLibrary":
        cleaned = frozenset(normalize(n) for n in names if n.strip())
        return cls(cleaned)

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(sorted(self.names))


def load_pairs(path: str | Path) -> Dataset:
    """Read a pairs CSV (header `project_id,customer_signal,library_signal`).

    Raises ValueError naming the offending row for malformed content.
    """
    pairs = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: missing header row") from None
        if tuple(header) != PAIRS_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(PAIRS_HEADER)!r}, got {','.join(header)!r}"
            )
        for row_number, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ValueError(
                    f"{path}: row {row_number}: expected 3 columns, got {len(row)}"
                )
            try:
                pairs.append(SignalPair(*row))
            except ValueError as exc:
                raise ValueError(f"{path}: row {row_number}: {exc}") from None
    return Dataset(pairs)


def save_pairs(ds: Dataset, path: str | Path) -> None:
    """Write a Dataset in the pairs CSV format (round-trips with load_pairs)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(PAIRS_HEADER)
        for pair in ds.pairs:
            writer.writerow([pair.project_id, pair.customer_signal, pair.library_signal])


def load_library(path: str | Path) -> SignalLibrary:
    """Read a library file: one signal name per line, blank lines ignored."""
    with open(path, encoding="utf-8") as fh:
        return SignalLibrary.from_names(line.strip() for line in fh)


def save_library(lib: SignalLibrary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for name in lib:
            fh.write(name + "\n")


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def split_by_project(
    ds: Dataset, test_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Partition a dataset into train/test along project boundaries.

    No project ends up on both sides.  The test side receives
    round(test_fraction * n_projects) projects (half-up), clamped so both
    sides keep at least one project.  Deterministic for a fixed seed.
    """
    projects = sorted(ds.projects)
    if len(projects) < 2:
        raise ValueError(f"need at least 2 projects to split, have {len(projects)}")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    n_test = _round_half_up(test_fraction * len(projects))
    n_test = max(1, min(n_test, len(projects) - 1))
    rng = random.Random(seed)
    rng.shuffle(projects)
    test_projects = set(projects[:n_test])
    train_pairs = [p for p in ds.pairs if p.project_id not in test_projects]
    test_pairs = [p for p in ds.pairs if p.project_id in test_projects]
    return Dataset(train_pairs), Dataset(test_pairs)


@dataclass(frozen=True)
class SynthConfig:
    """Shape of a generated corpus."""

    n_classes: int
    n_projects: int
    pairs_per_project: int
    vocab_size: int
    noise_rate: float
    seed: int

    def __post_init__(self) -> None:
        for name in ("n_classes", "n_projects", "pairs_per_project", "vocab_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise ValueError(f"noise_rate must be in [0, 1], got {self.noise_rate}")


@dataclass(frozen=True)
class SyntheticCorpus:
    """A generated corpus plus the ground truth used to build it."""

    dataset: Dataset
    library: SignalLibrary
    antonyms: AntonymTable
    keywords: KeywordSet
    class_tokens: dict[str, list[str]]  # label -> its indicative tokens
    n_corrupted: int  # labels flipped by noise injection


# Planted so that rerank has something to act on: one antonym pair split
# across two classes and one keyword shared by a class's names and its label.
_KEYWORD_TOKEN = "interlocked"
_ANTONYM_TOKENS = ("underfreq", "overfreq")

_CASINGS = (str.lower, str.upper, str.capitalize)


def generate_synthetic(cfg: SynthConfig) -> SyntheticCorpus:
    """Generate a labeled corpus with per-class indicative tokens.

    Every class label owns 1-3 vocabulary tokens that appear in each of its
    customer names; shared filler tokens and random casing provide noise.
    With probability noise_rate a pair's label is flipped to a random other
    class.  Pure function of the config: equal configs generate byte-equal
    corpora.
    """
    rng = random.Random(cfg.seed)

    class_tokens_list: list[list[str]] = []
    for c in range(cfg.n_classes):
        count = rng.randint(1, 3)
        class_tokens_list.append([f"sig{c:03d}{'abc'[j]}" for j in range(count)])
    # plant the rerank triggers as extra indicative tokens
    class_tokens_list[0 % cfg.n_classes].append(_KEYWORD_TOKEN)
    class_tokens_list[1 % cfg.n_classes].append(_ANTONYM_TOKENS[0])
    class_tokens_list[2 % cfg.n_classes].append(_ANTONYM_TOKENS[1])

    labels = [" ".join(tokens) for tokens in class_tokens_list]
    fillers = [f"flt{i:03d}" for i in range(cfg.vocab_size)]

    pairs = []
    n_corrupted = 0
    for p in range(cfg.n_projects):
        project_id = f"proj{p:03d}"
        for _ in range(cfg.pairs_per_project):
            c = rng.randrange(cfg.n_classes)
            name_tokens = list(class_tokens_list[c])
            name_tokens += rng.sample(fillers, k=rng.randint(1, min(3, len(fillers))))
            rng.shuffle(name_tokens)
            customer = " ".join(rng.choice(_CASINGS)(tok) for tok in name_tokens)
            label = labels[c]
            if cfg.n_classes > 1 and rng.random() < cfg.noise_rate:
                other = rng.randrange(cfg.n_classes - 1)
                if other >= c:
                    other += 1
                label = labels[other]
                n_corrupted += 1
            pairs.append(SignalPair(project_id, customer, label))

    antonyms = AntonymTable.from_dict(
        {
            _ANTONYM_TOKENS[0]: [_ANTONYM_TOKENS[1]],
            _ANTONYM_TOKENS[1]: [_ANTONYM_TOKENS[0]],
        }
    )
    keywords = KeywordSet.from_tokens([_KEYWORD_TOKEN])
    return SyntheticCorpus(
        dataset=Dataset(pairs),
        library=SignalLibrary.from_names(labels),
        antonyms=antonyms,
        keywords=keywords,
        class_tokens=dict(zip(labels, class_tokens_list)),
        n_corrupted=n_corrupted,
    )
