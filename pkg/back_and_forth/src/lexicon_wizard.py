"""Base-word bilingual dictionary, general fallback dictionary and abbreviation table."""

from __future__ import annotations

import functools
import re
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING

from loguru import logger

from back_and_forth.src.path_wizard import (
    ParseError,
    data_path,
    parse_count,
    read_tsv_rows,
    write_tsv_rows,
)
from back_and_forth.src.text_wizard import EnglishTokenizer, classify_char

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterable, Mapping, Sequence

_PARENTHETICAL = re.compile(r"\(([^()]*)\)")
_ABBREVIATION = re.compile(r"^[A-Z0-9](?:[A-Z0-9\-]*[A-Z0-9])?s?$")
_WORD = re.compile(r"[A-Za-z0-9]+")


class ProbabilityDirection(str, Enum):
    """Which side of a lexicon pair is conditioned on."""

    TARGET_GIVEN_SOURCE = "target_given_source"
    SOURCE_GIVEN_TARGET = "source_given_target"


class Unsegmentable(ValueError):
    """A bilingual entry whose Japanese side has no admissible split point."""


class UnknownWord(KeyError):
    """A conditioning word with zero total count."""


@dataclass(frozen=True, order=True)
class LexiconEntry:
    source_word: str
    target_word: str
    count: int


@dataclass
class BuildTally:
    """Entries used and skipped while building a dictionary."""

    used: int = 0
    wrong_arity: int = 0
    unsegmentable: int = 0

    @property
    def skipped(self) -> int:
        return self.wrong_arity + self.unsegmentable


class Lexicon:
    """Japanese (source) to English (target) word pairs with correspondence counts.

    The same object serves both translation directions: the Japanese word is always
    stored as ``source_word`` and the direction is chosen at lookup time.
    """

    def __init__(
        self, counts: Mapping[tuple[str, str], int] | None = None, fallback: bool = False
    ) -> None:
        self.fallback = fallback
        self.tally: BuildTally | None = None
        self._by_source: dict[str, Counter[str]] = defaultdict(Counter)
        self._by_target: dict[str, Counter[str]] = defaultdict(Counter)
        self.totals_by_source: Counter[str] = Counter()
        self.totals_by_target: Counter[str] = Counter()
        for (source, target), count in (counts or {}).items():
            self.add(source, target, count)

    def add(self, source_word: str, target_word: str, count: int = 1) -> None:
        if count < 1:
            raise ValueError(f"Lexicon counts must be positive, got {count}")
        if not source_word or not target_word:
            raise ValueError("Lexicon words must be non-empty")
        self._by_source[source_word][target_word] += count
        self._by_target[target_word][source_word] += count
        self.totals_by_source[source_word] += count
        self.totals_by_target[target_word] += count

    @property
    def entries(self) -> list[LexiconEntry]:
        return sorted(
            LexiconEntry(source, target, count)
            for source, targets in self._by_source.items()
            for target, count in targets.items()
        )

    def count(self, source_word: str, target_word: str) -> int:
        targets = self._by_source.get(source_word)
        return targets.get(target_word, 0) if targets else 0

    def source_words(self) -> frozenset[str]:
        return frozenset(self._by_source)

    def target_words(self) -> frozenset[str]:
        return frozenset(self._by_target)

    def targets_for(self, source_word: str) -> list[tuple[str, int]]:
        return sorted(self._by_source.get(source_word, Counter()).items())

    def sources_for(self, target_word: str) -> list[tuple[str, int]]:
        return sorted(self._by_target.get(target_word, Counter()).items())

    def __len__(self) -> int:
        return sum(len(targets) for targets in self._by_source.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return self.fallback == other.fallback and self.entries == other.entries

    def __repr__(self) -> str:
        return f"Lexicon({len(self)} pairs, fallback={self.fallback})"

    def save(self, path: str | pathlib.Path) -> int:
        """Write ``source<TAB>target<TAB>count`` rows in sorted order."""
        return write_tsv_rows(
            path,
            ((entry.source_word, entry.target_word, entry.count) for entry in self.entries),
            header="# source\ttarget\tcount",
        )

    @classmethod
    def load(cls, path: str | pathlib.Path, fallback: bool = False) -> Lexicon:
        lexicon = cls(fallback=fallback)
        for line_number, fields in read_tsv_rows(path, 3):
            source, target, count = fields
            lexicon.add(
                unicodedata.normalize("NFKC", source),
                target,
                parse_count(path, line_number, count),
            )
        logger.debug(f"Loaded {len(lexicon)} lexicon pairs from {path}")
        return lexicon


def conditional_probability(
    lexicon: Lexicon,
    given: str,
    candidate: str,
    direction: ProbabilityDirection = ProbabilityDirection.TARGET_GIVEN_SOURCE,
) -> Fraction:
    """Exact relative frequency of ``candidate`` among the pairs of ``given``.

    With ``TARGET_GIVEN_SOURCE``, ``given`` is a Japanese word and ``candidate`` an
    English word: count(given, candidate) / total_by_source(given). The other
    direction conditions on the English word.

    Raises:
        UnknownWord: If ``given`` has no pairs on the conditioning side.

    Example:
        >>> conditional_probability(lexicon, "相関", "correlation")
        Fraction(2, 3)
    """
    if direction is ProbabilityDirection.TARGET_GIVEN_SOURCE:
        total = lexicon.totals_by_source.get(given, 0)
        joint = lexicon.count(given, candidate)
    else:
        total = lexicon.totals_by_target.get(given, 0)
        joint = lexicon.count(candidate, given)
    if total == 0:
        raise UnknownWord(f"{given!r} has no {direction.value} statistics")
    return Fraction(joint, total)


@dataclass(frozen=True)
class SegmentationRules:
    """Characters that cannot begin or end a segment of a Japanese word."""

    forbidden_initial: frozenset[str] = frozenset()
    forbidden_final: frozenset[str] = frozenset()

    @classmethod
    def load(cls, path: str | pathlib.Path) -> SegmentationRules:
        initial: set[str] = set()
        final: set[str] = set()
        for line_number, (kind, char) in read_tsv_rows(path, 2):
            if kind == "initial":
                initial.add(char)
            elif kind == "final":
                final.add(char)
            else:
                raise ParseError(path, line_number, f"unknown rule kind {kind!r}")
        return cls(frozenset(initial), frozenset(final))

    @classmethod
    def default(cls) -> SegmentationRules:
        return _default_rules()


@functools.lru_cache(maxsize=1)
def _default_rules() -> SegmentationRules:
    return SegmentationRules.load(data_path("segmentation_chars.tsv"))


def segment_bilingual_entry(
    japanese: str,
    english_base_words: Sequence[str],
    rules: SegmentationRules | None = None,
) -> tuple[str, str]:
    """Split a Japanese compound into the two halves matching two English base words.

    The split goes at the leftmost character-type boundary, or left of the middle
    character for single-script words, and then moves right while the right half
    would start with a forbidden word-initial character or the left half would end
    with a forbidden word-final one.

    Raises:
        ValueError: If the English side does not have exactly two base words or the
            Japanese side is empty.
        Unsegmentable: If moving right runs off the end of the word.

    Example:
        >>> segment_bilingual_entry("CCDメモリー", ("ccd", "memory"))
        ('CCD', 'メモリー')
    """
    if len(english_base_words) != 2:
        raise ValueError(f"Expected two English base words, got {list(english_base_words)}")
    word = unicodedata.normalize("NFKC", japanese).strip()
    if not word:
        raise ValueError("Japanese side of a bilingual entry is empty")
    rules = rules if rules is not None else SegmentationRules.default()

    boundaries = [
        position
        for position in range(1, len(word))
        if classify_char(word[position]) is not classify_char(word[position - 1])
    ]
    split = boundaries[0] if boundaries else len(word) // 2
    while split < len(word) and (
        split == 0
        or word[split] in rules.forbidden_initial
        or word[split - 1] in rules.forbidden_final
    ):
        split += 1
    if not 0 < split < len(word):
        raise Unsegmentable(f"No admissible split point in {word!r}")
    return word[:split], word[split:]


def build_base_word_dictionary(
    compound_entries: Iterable[tuple[str, str]],
    tokenizer: EnglishTokenizer | None = None,
    rules: SegmentationRules | None = None,
) -> Lexicon:
    """Count base-word correspondences from two-base-word compound entries.

    Each English side must tokenize to exactly two base words; the Japanese side is
    split with :func:`segment_bilingual_entry` and the halves are paired with the
    English words in order. Entries that fail either step are tallied on
    ``lexicon.tally`` and skipped.

    Args:
        compound_entries: ``(japanese, english)`` pairs.
        tokenizer: English tokenizer for the root forms. Defaults to shipped tables.
        rules: Forbidden-character rules. Defaults to the shipped set.

    Returns:
        The populated Lexicon.
    """
    tokenizer = tokenizer if tokenizer is not None else EnglishTokenizer()
    rules = rules if rules is not None else SegmentationRules.default()
    lexicon = Lexicon()
    tally = BuildTally()
    for japanese, english in compound_entries:
        base_words = [token.root for token in tokenizer.tokenize(english)]
        if len(base_words) != 2:
            tally.wrong_arity += 1
            logger.debug(f"Skipping {english!r}: {len(base_words)} base words")
            continue
        try:
            left, right = segment_bilingual_entry(japanese, base_words, rules)
        except Unsegmentable as error:
            tally.unsegmentable += 1
            logger.debug(f"Skipping {japanese!r}: {error}")
            continue
        lexicon.add(left, base_words[0])
        lexicon.add(right, base_words[1])
        tally.used += 1
    if tally.skipped:
        logger.warning(
            f"Skipped {tally.wrong_arity} entries without two base words and "
            f"{tally.unsegmentable} unsegmentable entries"
        )
    logger.info(f"Base word dictionary: {len(lexicon)} pairs from {tally.used} entries")
    lexicon.tally = tally
    return lexicon


def load_bilingual_entries(path: str | pathlib.Path) -> list[tuple[str, str]]:
    """Read ``japanese<TAB>english`` compound entries."""
    return [(japanese, english) for _, (japanese, english) in read_tsv_rows(path, 2)]


def load_general_dictionary(path: str | pathlib.Path) -> Lexicon:
    """Load the single-word fallback dictionary.

    Rows are ``japanese<TAB>english`` with an optional third count column; rows
    without a count add 1, so duplicates accumulate. Multi-word English sides are
    skipped.

    Raises:
        ParseError: On malformed rows, with the offending line number.
    """
    lexicon = Lexicon(fallback=True)
    multiword = 0
    for line_number, fields in read_tsv_rows(path, 2, 3):
        japanese = unicodedata.normalize("NFKC", fields[0])
        english = fields[1].lower()
        if len(english.split()) != 1 or len(japanese.split()) != 1:
            multiword += 1
            continue
        count = parse_count(path, line_number, fields[2]) if len(fields) == 3 else 1
        lexicon.add(japanese, english, count)
    if multiword:
        logger.warning(f"Skipped {multiword} multi-word rows in general dictionary {path}")
    return lexicon


@dataclass(frozen=True, order=True)
class AbbreviationEntry:
    abbreviation: str
    complete_form: str
    frequency: int


@dataclass
class AbbreviationTable:
    """Abbreviations with their complete forms and corpus frequencies."""

    forms: dict[str, dict[str, int]] = field(default_factory=dict)

    @classmethod
    def from_entries(cls, entries: Iterable[AbbreviationEntry]) -> AbbreviationTable:
        table = cls()
        for entry in entries:
            forms = table.forms.setdefault(entry.abbreviation.upper(), {})
            forms[entry.complete_form] = forms.get(entry.complete_form, 0) + entry.frequency
        return table

    @property
    def entries(self) -> list[AbbreviationEntry]:
        return sorted(
            AbbreviationEntry(abbreviation, form, frequency)
            for abbreviation, forms in self.forms.items()
            for form, frequency in forms.items()
        )

    def __contains__(self, abbreviation: object) -> bool:
        return isinstance(abbreviation, str) and abbreviation.upper() in self.forms

    def complete_forms(self, abbreviation: str) -> list[tuple[str, int]]:
        """Complete forms of an abbreviation, most frequent first."""
        forms = self.forms.get(abbreviation.upper(), {})
        return sorted(forms.items(), key=lambda item: (-item[1], item[0]))

    def save(self, path: str | pathlib.Path) -> int:
        return write_tsv_rows(
            path,
            ((e.abbreviation, e.complete_form, e.frequency) for e in self.entries),
            header="# abbr\tcomplete form\tfreq",
        )

    @classmethod
    def load(cls, path: str | pathlib.Path) -> AbbreviationTable:
        return cls.from_entries(
            AbbreviationEntry(abbr, form.lower(), parse_count(path, line_number, frequency))
            for line_number, (abbr, form, frequency) in read_tsv_rows(path, 3)
        )


def normalize_abbreviation(candidate: str) -> str | None:
    """Letters an abbreviation stands for, or None if it does not look like one.

    Hyphens are removed, one trailing lowercase ``s`` is dropped and the rest is
    lowercased: ``MRDs`` gives ``mrd``.
    """
    if not _ABBREVIATION.match(candidate) or not any("A" <= ch <= "Z" for ch in candidate):
        return None
    letters = candidate.replace("-", "")
    if letters.endswith("s"):
        letters = letters[:-1]
    letters = letters.lower()
    return letters if len(letters) >= 2 else None


def _initials_match(letters: str, words: Sequence[str]) -> bool:
    return len(words) == len(letters) and all(
        word[0].lower() == letter for word, letter in zip(words, letters, strict=True)
    )


def _abbreviations_in(text: str) -> Iterable[tuple[str, str]]:
    for match in _PARENTHETICAL.finditer(text):
        inner = match.group(1).strip()
        before = _WORD.findall(text[: match.start()])
        inner_letters = normalize_abbreviation(inner)
        if inner_letters is not None:
            # CompleteForm (ABBR)
            words = before[-len(inner_letters) :]
            if _initials_match(inner_letters, words):
                yield inner_letters.upper(), " ".join(words).lower()
            continue
        inner_words = _WORD.findall(inner)
        if len(inner_words) < 2 or not before:
            continue
        # ABBR (complete form)
        head = text[: match.start()].rstrip().split()
        outer_letters = normalize_abbreviation(head[-1]) if head else None
        if outer_letters is not None and _initials_match(outer_letters, inner_words):
            yield outer_letters.upper(), " ".join(inner_words).lower()


def extract_abbreviations(
    corpus: Iterable[str], min_frequency: int = 1
) -> list[AbbreviationEntry]:
    """Mine abbreviation/complete-form pairs from parentheticals in English text.

    Both ``Complete Form (CF)`` and ``CF (complete form)`` are recognised. A pair is
    kept when the normalized abbreviation letters equal the initial letters of the
    complete-form words in order; frequencies aggregate over the whole corpus.

    Args:
        corpus: English text passages (titles, abstracts, ...).
        min_frequency: Optional cut-off; pairs seen fewer times are dropped.

    Example:
        >>> entries = extract_abbreviations(["Natural Language Processing (NLP)"])
        >>> [(e.abbreviation, e.complete_form) for e in entries]
        [('NLP', 'natural language processing')]
    """
    if min_frequency < 1:
        raise ValueError(f"min_frequency must be at least 1, got {min_frequency}")
    counts: Counter[tuple[str, str]] = Counter()
    for text in corpus:
        counts.update(_abbreviations_in(text))
    entries = sorted(
        AbbreviationEntry(abbreviation, form, frequency)
        for (abbreviation, form), frequency in counts.items()
        if frequency >= min_frequency
    )
    logger.info(f"Extracted {len(entries)} abbreviations ({len(counts)} before cut-off)")
    return entries
