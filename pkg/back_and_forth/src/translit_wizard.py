"""Transliteration between English words and katakana.

A symbol dictionary is learned by aligning English letters with romanized katakana
letters on a similarity matrix; unseen words are then transliterated by segmenting
them into known symbols and keeping only candidates that occur in the target
collection.
"""

from __future__ import annotations

import functools
import math
import unicodedata
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from back_and_forth.src.path_wizard import (
    ParseError,
    data_path,
    parse_count,
    read_tsv_rows,
    write_tsv_rows,
)
from back_and_forth.src.text_wizard import (
    Direction,
    RomanizationTable,
    UnsupportedCharacter,
    is_katakana_word,
    romanize_katakana,
)

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterable, Mapping, Sequence

    from numpy.typing import NDArray

TERMINATOR = "$"
TERMINATOR_SIMILARITY = 3


class DegenerateAlignment(ValueError):
    """No letter of the pair matched anything."""


class NoSegmentation(LookupError):
    """The source word cannot be covered by known symbols."""


class NoCandidate(LookupError):
    """Every composed candidate is absent from the target vocabulary."""


@dataclass(frozen=True)
class SimilarityTable:
    """Letter classes behind the 3/2/1/0 similarity scale."""

    similar_pairs: frozenset[frozenset[str]]
    vowels: frozenset[str]
    consonants: frozenset[str]

    @classmethod
    def load(cls, path: str | pathlib.Path) -> SimilarityTable:
        """Read ``similar<TAB>a<TAB>b``, ``vowel<TAB>a`` and ``consonant<TAB>b`` rows."""
        pairs: set[frozenset[str]] = set()
        vowels: set[str] = set()
        consonants: set[str] = set()
        for line_number, fields in read_tsv_rows(path, 2, 3):
            kind, letters = fields[0], [letter.lower() for letter in fields[1:]]
            if any(len(letter) != 1 or not letter.isalpha() for letter in letters):
                raise ParseError(path, line_number, f"expected single letters, got {letters}")
            if kind == "similar" and len(letters) == 2:
                pairs.add(frozenset(letters))
            elif kind == "vowel" and len(letters) == 1:
                vowels.add(letters[0])
            elif kind == "consonant" and len(letters) == 1:
                consonants.add(letters[0])
            else:
                raise ParseError(path, line_number, f"malformed {kind!r} row")
        return cls(frozenset(pairs), frozenset(vowels), frozenset(consonants))

    @classmethod
    def default(cls) -> SimilarityTable:
        return _default_similarity()


@functools.lru_cache(maxsize=1)
def _default_similarity() -> SimilarityTable:
    return SimilarityTable.load(data_path("similarity.tsv"))


def letter_similarity(e: str, j: str, table: SimilarityTable | None = None) -> int:
    """Similarity of an English letter and a romaji letter.

    3 if identical, 2 if phonetically similar, 1 if both are vowels or both are
    consonants, 0 otherwise. The terminator ``$`` only matches itself.

    Example:
        >>> letter_similarity("l", "r")
        2
    """
    if e == TERMINATOR or j == TERMINATOR:
        return TERMINATOR_SIMILARITY if e == j else 0
    if e == j:
        return 3
    table = table if table is not None else SimilarityTable.default()
    if frozenset((e, j)) in table.similar_pairs:
        return 2
    both_vowels = e in table.vowels and j in table.vowels
    if both_vowels or (e in table.consonants and j in table.consonants):
        return 1
    return 0


@dataclass(frozen=True)
class Alignment:
    """Best monotone path through the similarity matrix and its symbol pairs.

    ``path`` holds ``(row, column)`` cells, rows being romaji letters and columns
    English letters, both followed by the terminator.
    """

    correspondences: tuple[tuple[str, str], ...]
    score: int
    path: tuple[tuple[int, int], ...]


def _best_totals(similarity: NDArray[np.int64]) -> NDArray[np.int64]:
    n_rows, n_columns = similarity.shape
    total = np.zeros_like(similarity)
    for row in range(n_rows):
        for column in range(n_columns):
            predecessors = []
            if row and column:
                predecessors.append(int(total[row - 1, column - 1]))
            if column:
                predecessors.append(int(total[row, column - 1]))
            if row:
                predecessors.append(int(total[row - 1, column]))
            total[row, column] = similarity[row, column] + max(predecessors, default=0)
    return total


def _best_path(
    similarity: NDArray[np.int64], total: NDArray[np.int64]
) -> list[tuple[int, int]]:
    row, column = total.shape[0] - 1, total.shape[1] - 1
    path = [(row, column)]
    while (row, column) != (0, 0):
        needed = total[row, column] - similarity[row, column]
        if row and column and total[row - 1, column - 1] == needed:
            row, column = row - 1, column - 1
        elif column and total[row, column - 1] == needed:
            column -= 1
        else:
            row -= 1
        path.append((row, column))
    path.reverse()
    return path


def _segment_path(
    path: Sequence[tuple[int, int]], word: str, morae: Sequence[str], row_mora: Sequence[int]
) -> list[tuple[str, str]]:
    first_row: dict[int, int] = {}
    for row, column in path:
        first_row.setdefault(column, row)
    letters_by_mora: list[list[str]] = [[] for _ in range(len(morae) + 1)]
    for column, letter in enumerate(word):
        letters_by_mora[row_mora[first_row[column]]].append(letter)

    groups: list[tuple[list[str], list[str]]] = []
    for index, mora in enumerate(morae):
        letters = letters_by_mora[index]
        if letters or not groups:
            groups.append(([mora], list(letters)))
        else:
            groups[-1][0].append(mora)
    groups[-1][1].extend(letters_by_mora[len(morae)])
    return [("".join(letters), "".join(group_morae)) for group_morae, letters in groups]


def align_word_pair(
    english: str, katakana_morae: Sequence[str], table: SimilarityTable | None = None
) -> Alignment:
    """Align an English word with a romanized katakana word.

    Both sides get a terminator, then a dynamic program finds the monotone path
    (diagonal, right or down moves, each adding the similarity of the cell it
    enters, the first cell included) with the highest total. Each English letter
    belongs to the mora whose rows the path is in when it first reaches that
    letter's column; morae that receive no letter merge into the preceding symbol.

    Args:
        english: English word (letters only).
        katakana_morae: Output of :func:`romanize_katakana`.
        table: Letter similarity classes. Defaults to the shipped table.

    Raises:
        ValueError: If either side is empty or the English word is not alphabetic.
        DegenerateAlignment: If no letter contributes to the best score.

    Example:
        >>> align_word_pair("text", ["te", "ki", "su", "to"]).correspondences
        (('te', 'te'), ('x', 'kisu'), ('t', 'to'))
    """
    word = english.lower()
    if not word or not katakana_morae:
        raise ValueError("Both sides of a word pair must be non-empty")
    if not (word.isascii() and word.isalpha()):
        raise ValueError(f"English side must be letters only, got {english!r}")
    table = table if table is not None else SimilarityTable.default()

    columns = [*word, TERMINATOR]
    rows = [letter for mora in katakana_morae for letter in mora] + [TERMINATOR]
    row_mora = [index for index, mora in enumerate(katakana_morae) for _ in mora]
    row_mora.append(len(katakana_morae))

    similarity = np.array(
        [[letter_similarity(e, j, table) for e in columns] for j in rows], dtype=np.int64
    )
    total = _best_totals(similarity)
    score = int(total[-1, -1])
    if score <= TERMINATOR_SIMILARITY:
        raise DegenerateAlignment(f"Nothing in {english!r} aligns with {list(katakana_morae)}")
    path = _best_path(similarity, total)
    correspondences = _segment_path(path, word, katakana_morae, row_mora)
    return Alignment(tuple(correspondences), score, tuple(path))


@dataclass(frozen=True, order=True)
class SymbolPair:
    english_symbol: str
    japanese_symbol: str
    count: int


class TranslitModel:
    """Counts of English/Japanese symbol correspondences."""

    def __init__(
        self,
        pair_counts: Mapping[tuple[str, str], int] | None = None,
        threshold: float | None = None,
    ) -> None:
        self.threshold = threshold
        self.aligned = 0
        self.discarded = 0
        self._by_english: dict[str, Counter[str]] = defaultdict(Counter)
        self._by_japanese: dict[str, Counter[str]] = defaultdict(Counter)
        self.totals_by_english: Counter[str] = Counter()
        self.totals_by_japanese: Counter[str] = Counter()
        for (english, japanese), count in (pair_counts or {}).items():
            self.add(english, japanese, count)

    def add(self, english_symbol: str, japanese_symbol: str, count: int = 1) -> None:
        if not english_symbol or not japanese_symbol:
            raise ValueError("Symbols must be non-empty")
        if count < 1:
            raise ValueError(f"Symbol counts must be positive, got {count}")
        self._by_english[english_symbol][japanese_symbol] += count
        self._by_japanese[japanese_symbol][english_symbol] += count
        self.totals_by_english[english_symbol] += count
        self.totals_by_japanese[japanese_symbol] += count

    @property
    def pairs(self) -> list[SymbolPair]:
        return sorted(
            SymbolPair(english, japanese, count)
            for english, japanese_counts in self._by_english.items()
            for japanese, count in japanese_counts.items()
        )

    @property
    def english_symbols(self) -> frozenset[str]:
        return frozenset(self._by_english)

    @property
    def japanese_symbols(self) -> frozenset[str]:
        return frozenset(self._by_japanese)

    def count(self, english_symbol: str, japanese_symbol: str) -> int:
        japanese_counts = self._by_english.get(english_symbol)
        return japanese_counts.get(japanese_symbol, 0) if japanese_counts else 0

    def candidates(self, source_symbol: str, direction: Direction) -> list[tuple[str, float]]:
        """Target symbols for a source symbol with P(source symbol | target symbol)."""
        if direction is Direction.JA_EN:
            counts = self._by_japanese.get(source_symbol, Counter())
            totals = self.totals_by_english
        else:
            counts = self._by_english.get(source_symbol, Counter())
            totals = self.totals_by_japanese
        return [(target, count / totals[target]) for target, count in sorted(counts.items())]

    def __len__(self) -> int:
        return sum(len(japanese_counts) for japanese_counts in self._by_english.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TranslitModel):
            return NotImplemented
        return self.pairs == other.pairs

    def __repr__(self) -> str:
        return f"TranslitModel({len(self)} symbol pairs)"

    def save(self, path: str | pathlib.Path) -> int:
        return write_tsv_rows(
            path,
            ((pair.english_symbol, pair.japanese_symbol, pair.count) for pair in self.pairs),
            header="# english_symbol\tjapanese_symbol\tcount",
        )

    @classmethod
    def load(cls, path: str | pathlib.Path) -> TranslitModel:
        model = cls()
        for line_number, (english, japanese, count) in read_tsv_rows(path, 3):
            model.add(english.lower(), japanese.lower(), parse_count(path, line_number, count))
        return model


def default_threshold(english: str, katakana_morae: Sequence[str]) -> int:
    """Acceptance threshold that grows with the longer side of the pair."""
    return 2 * max(len(english), len(katakana_morae))


def build_translit_dictionary(
    word_pairs: Iterable[tuple[str, str]],
    table: SimilarityTable | None = None,
    threshold: float | None = None,
    romanization: RomanizationTable | None = None,
) -> TranslitModel:
    """Learn symbol correspondences from ``(english, katakana)`` word pairs.

    Pairs whose best alignment score does not exceed the threshold (or that cannot
    be romanized or aligned) are discarded and counted on ``model.discarded``.

    Args:
        word_pairs: English word with its katakana transliteration.
        table: Letter similarity classes.
        threshold: Score a pair must exceed. None uses :func:`default_threshold`.
        romanization: Katakana romanization table.
    """
    table = table if table is not None else SimilarityTable.default()
    model = TranslitModel(threshold=threshold)
    for english, katakana in word_pairs:
        try:
            morae = romanize_katakana(unicodedata.normalize("NFKC", katakana), romanization)
            alignment = align_word_pair(english, morae, table)
        except (UnsupportedCharacter, DegenerateAlignment, ValueError) as error:
            logger.debug(f"Discarding <{english}, {katakana}>: {error}")
            model.discarded += 1
            continue
        limit = threshold if threshold is not None else default_threshold(english, morae)
        if alignment.score <= limit:
            logger.debug(f"Discarding <{english}, {katakana}>: score {alignment.score} <= {limit}")
            model.discarded += 1
            continue
        for english_symbol, japanese_symbol in alignment.correspondences:
            model.add(english_symbol, japanese_symbol)
        model.aligned += 1
    if model.discarded:
        logger.warning(f"Discarded {model.discarded} word pairs below the similarity threshold")
    logger.info(
        f"Transliteration dictionary: {len(model.english_symbols)} English and "
        f"{len(model.japanese_symbols)} Japanese symbols from {model.aligned} pairs"
    )
    return model


class TargetVocabulary:
    """Indexed target-language words with occurrence counts.

    For a Japanese target, pass a romanization table: katakana words are then
    matched through their romaji spelling.
    """

    def __init__(
        self, counts: Mapping[str, int], romanization: RomanizationTable | None = None
    ) -> None:
        self.counts = {word: count for word, count in sorted(counts.items()) if count > 0}
        self.total = sum(self.counts.values())
        self.romanization = romanization

    def __contains__(self, word: object) -> bool:
        return word in self.counts

    def __len__(self) -> int:
        return len(self.counts)

    def probability(self, word: str) -> float:
        return self.counts.get(word, 0) / self.total if self.total else 0.0

    @functools.cached_property
    def spellings(self) -> dict[str, tuple[str, ...]]:
        """Comparable spelling to the vocabulary words written that way."""
        if self.romanization is None:
            return {word: (word,) for word in self.counts}
        spellings: dict[str, list[str]] = defaultdict(list)
        for word in self.counts:
            if not is_katakana_word(word):
                continue
            try:
                spellings["".join(romanize_katakana(word, self.romanization))].append(word)
            except UnsupportedCharacter:
                continue
        return {spelling: tuple(words) for spelling, words in spellings.items()}

    @functools.cached_property
    def prefixes(self) -> frozenset[str]:
        return frozenset(
            spelling[:end] for spelling in self.spellings for end in range(1, len(spelling) + 1)
        )


def minimal_segmentations(units: Sequence[str], symbols: frozenset[str]) -> list[tuple[str, ...]]:
    """All coverings of ``units`` by known symbols that use the fewest symbols.

    A symbol covers a contiguous span of units (letters or morae) whose
    concatenation is in ``symbols``.
    """
    n = len(units)
    fewest: list[float] = [math.inf] * (n + 1)
    fewest[n] = 0
    for start in reversed(range(n)):
        for end in range(start + 1, n + 1):
            if "".join(units[start:end]) in symbols:
                fewest[start] = min(fewest[start], fewest[end] + 1)
    if math.isinf(fewest[0]):
        return []

    segmentations: list[tuple[str, ...]] = []

    def walk(start: int, pieces: tuple[str, ...]) -> None:
        if start == n:
            segmentations.append(pieces)
            return
        for end in range(start + 1, n + 1):
            piece = "".join(units[start:end])
            if piece in symbols and fewest[end] == fewest[start] - 1:
                walk(end, (*pieces, piece))

    walk(0, ())
    return segmentations


def _compose(
    options: Sequence[Sequence[tuple[str, float]]], prefixes: frozenset[str]
) -> list[tuple[str, tuple[float, ...]]]:
    composed: list[tuple[str, tuple[float, ...]]] = []

    def extend(position: int, spelling: str, factors: tuple[float, ...]) -> None:
        if position == len(options):
            composed.append((spelling, factors))
            return
        for symbol, probability in options[position]:
            candidate = spelling + symbol
            if candidate in prefixes:
                extend(position + 1, candidate, (*factors, probability))

    extend(0, "", ())
    return composed


def transliterate(
    source: str,
    direction: Direction,
    model: TranslitModel,
    target_vocabulary: TargetVocabulary,
    k: int = 5,
    romanization: RomanizationTable | None = None,
) -> list[tuple[str, float]]:
    """Rank indexed target words that the source word may be a transliteration of.

    The source (romanized first when it is katakana) is segmented into the fewest
    known source symbols; every minimal segmentation is expanded into target
    spellings through the symbol dictionary, spellings absent from the vocabulary
    are dropped, and each survivor T is scored P(T) times the product of
    P(s_i|t_i). A word reached through several segmentations keeps its best score.
    Scores are normalized over all survivors before the top ``k`` are returned.

    Raises:
        ValueError: If the source is empty or in the wrong script, or ``k`` < 1.
        UnsupportedCharacter: If a katakana source cannot be romanized.
        NoSegmentation: If no covering by known symbols exists.
        NoCandidate: If no composed candidate is in the vocabulary.

    Example:
        >>> transliterate("マイニング", Direction.JA_EN, model, vocabulary)
        [('mining', 1.0)]
    """
    if not source:
        raise ValueError("Cannot transliterate an empty word")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if direction is Direction.JA_EN:
        if not is_katakana_word(source):
            raise ValueError(f"Japanese-to-English transliteration needs katakana, got {source!r}")
        units: Sequence[str] = romanize_katakana(source, romanization)
        symbols = model.japanese_symbols
    else:
        word = source.lower()
        if not (word.isascii() and word.isalpha()):
            raise ValueError(f"English-to-Japanese transliteration needs letters, got {source!r}")
        units = list(word)
        symbols = model.english_symbols

    segmentations = minimal_segmentations(units, symbols)
    if not segmentations:
        raise NoSegmentation(f"{source!r} cannot be covered by known symbols")

    scores: dict[str, float] = {}
    prefixes = target_vocabulary.prefixes
    for segmentation in segmentations:
        options = [model.candidates(symbol, direction) for symbol in segmentation]
        for spelling, factors in _compose(options, prefixes):
            for target in target_vocabulary.spellings.get(spelling, ()):
                score = target_vocabulary.probability(target)
                for factor in factors:
                    score *= factor
                if score > scores.get(target, 0.0):
                    scores[target] = score
    if not scores:
        raise NoCandidate(f"No transliteration of {source!r} is in the target vocabulary")

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    total = math.fsum(score for _, score in ranked)
    return [(target, score / total) for target, score in ranked[:k]]


@dataclass(eq=False)
class Transliterator:
    """Transliteration resources bundled for the translation lattice.

    Calls return an empty list instead of raising when nothing can be produced.
    """

    model: TranslitModel
    vocabulary: TargetVocabulary
    romanization: RomanizationTable = field(default_factory=RomanizationTable.default)
    k: int = 5
    _cache: dict[tuple[str, Direction], list[tuple[str, float]]] = field(
        default_factory=dict, init=False, repr=False
    )

    def __call__(self, source: str, direction: Direction) -> list[tuple[str, float]]:
        key = (source, direction)
        if key not in self._cache:
            try:
                self._cache[key] = transliterate(
                    source, direction, self.model, self.vocabulary, self.k, self.romanization
                )
            except (NoSegmentation, NoCandidate, ValueError) as error:
                logger.debug(f"No transliteration for {source!r}: {error}")
                self._cache[key] = []
        return self._cache[key]
