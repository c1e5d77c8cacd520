"""Semantic core words: extraction, stemming, and clipped matching.

A word is a semantic core word when its lowest UCCA edge label is
Process, State, Participant, or Center; such words are expected to
survive in every good translation. Matching between two bags is
one-to-one under stem identity, which decomposes per stem into clipped
counts (the same way n-gram clipping works in BLEU).
"""

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from .porter import stem as porter_stem
from .ucca_graph import Category, UccaGraph

__all__ = [
    "CORE_CATEGORIES",
    "CoreWord",
    "CoreWordBag",
    "MatchResult",
    "extract_core_words",
    "match_bags",
    "porter_stem",
]

CORE_CATEGORIES = frozenset(
    {Category.PROCESS, Category.STATE, Category.PARTICIPANT, Category.CENTER}
)


@dataclass(frozen=True)
class CoreWord:
    surface: str
    stem: str
    position: int
    label: Category


@dataclass(frozen=True)
class CoreWordBag:
    """Multiset of stemmed core words from one sentence, in position order.

    May be empty; downstream scoring then falls back to a fixed score.
    """

    words: tuple[CoreWord, ...]

    @classmethod
    def from_stems(cls, stems, label: Category = Category.CENTER) -> "CoreWordBag":
        """Build a bag directly from stem strings (handy in tests and tools)."""
        words = tuple(
            CoreWord(surface=s, stem=s, position=i, label=label)
            for i, s in enumerate(stems, start=1)
        )
        return cls(words)

    @cached_property
    def stem_counts(self) -> Counter:
        return Counter(w.stem for w in self.words)

    @property
    def total(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class MatchResult:
    """Outcome of the one-to-one matching between two bags.

    With stem-identity matching the two matched counts are always equal;
    they are kept separate so graded matching could be added without an
    interface change.
    """

    matched_candidate: int
    matched_reference: int
    candidate_total: int
    reference_total: int


def extract_core_words(graph: UccaGraph) -> CoreWordBag:
    """Collect the graph's core words, stemmed and ordered by position."""
    words = []
    for t in graph.terminals:
        label = graph.lowest_label(t.id)
        if label in CORE_CATEGORIES:
            words.append(CoreWord(surface=t.text, stem=porter_stem(t.text), position=t.position, label=label))
    return CoreWordBag(tuple(words))


def match_bags(candidate: CoreWordBag, reference: CoreWordBag) -> MatchResult:
    """Maximum one-to-one matching between the bags under stem identity.

    Because eligibility is stem equality, the maximum matching size is the
    sum over stems of min(candidate count, reference count).
    """
    ref_counts = reference.stem_counts
    matched = sum(min(count, ref_counts[s]) for s, count in candidate.stem_counts.items())
    return MatchResult(
        matched_candidate=matched,
        matched_reference=matched,
        candidate_total=candidate.total,
        reference_total=reference.total,
    )
