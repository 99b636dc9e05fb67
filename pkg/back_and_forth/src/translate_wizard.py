"""Compound-word query translation.

A compound is segmented into the fewest base words the resources know, each base
word gets weighted candidates (dictionary, transliteration, general dictionary,
abbreviation expansion or passthrough), and the candidate lattice is decoded with
target-language bigram statistics into k-best translations.
"""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any

from loguru import logger

from back_and_forth.src.lexicon_wizard import (
    AbbreviationTable,
    Lexicon,
    ProbabilityDirection,
    conditional_probability,
)
from back_and_forth.src.path_wizard import ParseError, parse_count, read_tsv_rows, write_tsv_rows
from back_and_forth.src.text_wizard import (
    Direction,
    EnglishTokenizer,
    ScriptClass,
    is_katakana_word,
    script_runs,
    split_japanese_compounds,
)

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterable, Sequence

    from back_and_forth.src.translit_wizard import Transliterator


class TranslationMode(str, Enum):
    """How katakana words and candidate selection are handled."""

    TRL = "trl"
    CWT = "cwt"
    ALL = "all"
    DISCARD_KATAKANA = "discard_katakana"
    TRANSLITERATE_KATAKANA = "transliterate_katakana"


class Provenance(str, Enum):
    LEXICON = "lexicon"
    TRANSLITERABLE = "transliterable"
    GENERAL = "general"
    ABBREVIATION = "abbreviation"
    PASSTHROUGH = "passthrough"


class NoCover(LookupError):
    """No segmentation of the compound uses known base words only."""


@dataclass(frozen=True)
class CompoundSegmentation:
    base_words: tuple[str, ...]
    provenance: tuple[Provenance, ...]

    def __post_init__(self) -> None:
        if not self.base_words or len(self.base_words) != len(self.provenance):
            raise ValueError("A segmentation needs one provenance per base word")

    @property
    def passthrough_count(self) -> int:
        return sum(provenance is Provenance.PASSTHROUGH for provenance in self.provenance)


@dataclass(frozen=True)
class Candidate:
    """One possible translation of a base word with its P(s|t)-style weight."""

    target: str
    weight: float
    provenance: Provenance


@dataclass(frozen=True)
class TranslationCandidate:
    target_words: tuple[str, ...]
    score: float
    segmentation: CompoundSegmentation | None = field(default=None, compare=False)


@dataclass
class BigramTable:
    """Adjacent content-word counts from the target-language corpus."""

    bigrams: Counter[tuple[str, str]] = field(default_factory=Counter)
    unigrams: Counter[str] = field(default_factory=Counter)
    total: int = 0
    lam: float = 0.9
    epsilon: float = 1e-9

    def __post_init__(self) -> None:
        if not 0 < self.lam <= 1:
            raise ValueError(f"lam must be in (0, 1], got {self.lam}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    def save(self, path: str | pathlib.Path) -> int:
        """Write ``total``, ``unigram`` and ``bigram`` records in sorted order."""
        rows: list[tuple[object, ...]] = [("total", self.total)]
        rows.extend(("unigram", word, count) for word, count in sorted(self.unigrams.items()))
        rows.extend(
            ("bigram", previous, following, count)
            for (previous, following), count in sorted(self.bigrams.items())
        )
        return write_tsv_rows(path, rows, header="# kind\tfields...\tcount")

    @classmethod
    def load(
        cls, path: str | pathlib.Path, lam: float = 0.9, epsilon: float = 1e-9
    ) -> BigramTable:
        table = cls(lam=lam, epsilon=epsilon)
        for line_number, fields in read_tsv_rows(path, 2, 4):
            kind = fields[0]
            if kind == "total" and len(fields) == 2:
                table.total = 0 if fields[1] == "0" else parse_count(path, line_number, fields[1])
            elif kind == "unigram" and len(fields) == 3:
                table.unigrams[fields[1]] = parse_count(path, line_number, fields[2])
            elif kind == "bigram" and len(fields) == 4:
                table.bigrams[(fields[1], fields[2])] = parse_count(path, line_number, fields[3])
            else:
                raise ParseError(path, line_number, f"malformed {kind!r} record")
        return table


def collect_bigram_stats(
    documents: Iterable[Sequence[Sequence[str]]], lam: float = 0.9, epsilon: float = 1e-9
) -> BigramTable:
    """Count content words and adjacent pairs, one document being a list of fields.

    Pairs never span a field boundary.

    Example:
        >>> table = collect_bigram_stats([[["data", "mining"], ["mining", "method"]]])
        >>> table.bigrams[("mining", "mining")]
        0
    """
    table = BigramTable(lam=lam, epsilon=epsilon)
    for document in documents:
        for words in document:
            table.unigrams.update(words)
            table.total += len(words)
            table.bigrams.update(zip(words, words[1:]))
    logger.info(
        f"Bigram statistics: {len(table.unigrams)} words, {len(table.bigrams)} pairs, "
        f"{table.total} tokens"
    )
    return table


def bigram_probability(table: BigramTable, previous: str, following: str) -> float:
    """Interpolated P(following | previous), floored at ``table.epsilon``."""
    unigram = table.unigrams.get(following, 0) / table.total if table.total else 0.0
    previous_count = table.unigrams.get(previous, 0)
    if previous_count:
        pair = table.bigrams.get((previous, following), 0) / previous_count
        probability = table.lam * pair + (1 - table.lam) * unigram
    else:
        probability = (1 - table.lam) * unigram
    return max(probability, table.epsilon)


def _transliterable_spans(word: str, transliterator: Transliterator) -> set[tuple[int, int]]:
    """Spans of katakana runs whose text transliterates to an indexed word."""
    spans: set[tuple[int, int]] = set()
    offset = 0
    for script, run in script_runs(word):
        if script is ScriptClass.KATAKANA:
            for start in range(len(run)):
                for end in range(start + 1, len(run) + 1):
                    if transliterator(run[start:end], Direction.JA_EN):
                        spans.add((offset + start, offset + end))
        offset += len(run)
    return spans


def _boundaries(
    word: str,
    dictionary_words: Iterable[frozenset[str]],
    spans: Iterable[tuple[int, int]] = (),
) -> dict[int, int]:
    """Map every boundary position to the next one.

    Boundaries are script-run edges, the edges of every dictionary word
    occurrence and the edges of the given spans.
    """
    positions = {0, len(word)}
    for span in spans:
        positions.update(span)
    offset = 0
    for _, run in script_runs(word):
        offset += len(run)
        positions.add(offset)
    for words in dictionary_words:
        longest = max(map(len, words), default=0)
        for start in range(len(word)):
            for end in range(start + 1, min(len(word), start + longest) + 1):
                if word[start:end] in words:
                    positions.update((start, end))
    ordered = sorted(positions)
    return dict(zip(ordered, ordered[1:]))


def _japanese_provenance(
    piece: str,
    elementary: bool,
    *,
    lexicon_words: frozenset[str],
    general_words: frozenset[str],
    abbreviations: AbbreviationTable | None,
    latin_run: bool,
    transliterable: bool,
    mode: TranslationMode,
    allow_passthrough: bool,
) -> Provenance | None:
    katakana = is_katakana_word(piece)
    katakana_only = mode is TranslationMode.TRANSLITERATE_KATAKANA
    if transliterable and katakana_only:
        return Provenance.TRANSLITERABLE
    if piece in lexicon_words and not (katakana and katakana_only):
        return Provenance.LEXICON
    if transliterable:
        return Provenance.TRANSLITERABLE
    if piece in general_words:
        return Provenance.GENERAL
    if latin_run and abbreviations is not None and piece in abbreviations:
        return Provenance.ABBREVIATION
    if allow_passthrough and elementary and len(script_runs(piece)) == 1:
        return Provenance.PASSTHROUGH
    return None


def _english_provenance(
    word: str,
    lexicon: Lexicon,
    transliterable: bool,
    general: Lexicon | None,
    allow_passthrough: bool,
) -> Provenance | None:
    if word in lexicon.target_words():
        return Provenance.LEXICON
    if transliterable and word.isascii() and word.isalpha():
        return Provenance.TRANSLITERABLE
    if general is not None and word in general.target_words():
        return Provenance.GENERAL
    return Provenance.PASSTHROUGH if allow_passthrough else None


def segment_compound(
    word: str,
    lexicon: Lexicon,
    transliterator: Transliterator | None = None,
    general: Lexicon | None = None,
    *,
    abbreviations: AbbreviationTable | None = None,
    mode: TranslationMode = TranslationMode.TRL,
    direction: Direction = Direction.JA_EN,
    allow_passthrough: bool = False,
) -> list[CompoundSegmentation]:
    """All segmentations of a compound into the fewest known base words.

    Japanese parts are lexicon words, katakana substrings the transliterator maps
    to an indexed word (transliterable), general-dictionary words or abbreviations.
    Any katakana substring may be transliterable, so an unlisted loanword compound
    splits into its loanwords. With ``allow_passthrough`` a single-script stretch
    between boundaries may also pass through untranslated; segmentations then
    minimise the number of passthrough parts before the number of parts.
    An English word is always a single base word.

    Raises:
        ValueError: If ``word`` is empty.
        NoCover: If no segmentation covers the word.

    Example:
        >>> lexicon = Lexicon({("相関", "correlation"): 1, ("関数", "function"): 1})
        >>> [s.base_words for s in segment_compound("相関関数", lexicon)]
        [('相関', '関数')]
    """
    if not word:
        raise ValueError("Cannot segment an empty compound")
    transliterable = transliterator is not None and mode is not TranslationMode.CWT

    if direction is Direction.EN_JA:
        provenance = _english_provenance(word, lexicon, transliterable, general, allow_passthrough)
        if provenance is None:
            raise NoCover(f"{word!r} is not covered by any dictionary")
        return [CompoundSegmentation((word,), (provenance,))]

    lexicon_words = lexicon.source_words()
    general_words = general.source_words() if general is not None else frozenset()
    spans = (
        _transliterable_spans(word, transliterator)
        if transliterable and transliterator is not None
        else set()
    )
    next_boundary = _boundaries(word, (lexicon_words, general_words), spans)
    latin_runs: set[tuple[int, int]] = set()
    offset = 0
    for script, run in script_runs(word):
        if script is ScriptClass.LATIN:
            latin_runs.add((offset, offset + len(run)))
        offset += len(run)

    n = len(word)
    options: list[list[tuple[int, Provenance]]] = [[] for _ in range(n)]
    for start in range(n):
        for end in range(start + 1, n + 1):
            provenance = _japanese_provenance(
                word[start:end],
                next_boundary.get(start) == end,
                lexicon_words=lexicon_words,
                general_words=general_words,
                abbreviations=abbreviations,
                latin_run=(start, end) in latin_runs,
                transliterable=(start, end) in spans,
                mode=mode,
                allow_passthrough=allow_passthrough,
            )
            if provenance is not None:
                options[start].append((end, provenance))

    # best[i]: (passthrough parts, parts) of the cheapest cover of word[i:]
    best: list[tuple[int, int] | None] = [None] * (n + 1)
    best[n] = (0, 0)
    for start in reversed(range(n)):
        for end, provenance in options[start]:
            rest = best[end]
            if rest is None:
                continue
            key = (rest[0] + (provenance is Provenance.PASSTHROUGH), rest[1] + 1)
            current = best[start]
            if current is None or key < current:
                best[start] = key
    if best[0] is None:
        raise NoCover(f"No segmentation of {word!r} uses known base words only")

    segmentations: list[CompoundSegmentation] = []

    def walk(start: int, words: tuple[str, ...], provenances: tuple[Provenance, ...]) -> None:
        if start == n:
            segmentations.append(CompoundSegmentation(words, provenances))
            return
        target = best[start]
        for end, provenance in options[start]:
            rest = best[end]
            if rest is None or target is None:
                continue
            if (rest[0] + (provenance is Provenance.PASSTHROUGH), rest[1] + 1) == target:
                walk(end, (*words, word[start:end]), (*provenances, provenance))

    walk(0, (), ())
    return segmentations


def _lexicon_weight(
    lexicon: Lexicon, source: str, target: str, direction: Direction, condition_on_source: bool
) -> float:
    japanese, english = (source, target) if direction is Direction.JA_EN else (target, source)
    if condition_on_source == (direction is Direction.JA_EN):
        probability = conditional_probability(
            lexicon, japanese, english, ProbabilityDirection.TARGET_GIVEN_SOURCE
        )
    else:
        probability = conditional_probability(
            lexicon, english, japanese, ProbabilityDirection.SOURCE_GIVEN_TARGET
        )
    return float(probability)


def _dictionary_targets(lexicon: Lexicon, word: str, direction: Direction) -> list[str]:
    pairs = lexicon.targets_for(word) if direction is Direction.JA_EN else lexicon.sources_for(word)
    return [target for target, _ in pairs]


def derive_candidates(
    segmentation: CompoundSegmentation,
    lexicon: Lexicon,
    transliterator: Transliterator | None = None,
    general: Lexicon | None = None,
    *,
    abbreviations: AbbreviationTable | None = None,
    direction: Direction = Direction.JA_EN,
    condition_on_source: bool = True,
) -> list[list[Candidate]]:
    """Weighted translation candidates for every base word of a segmentation.

    Tiers per position: lexicon translations, then transliteration, then uniform
    general-dictionary translations, then the surface form itself. Abbreviation
    positions offer the abbreviation and its complete forms. Lists are never empty
    and hold each target at most once.

    Args:
        condition_on_source: Weight lexicon candidates by P(target | source word)
            instead of P(source word | target).
    """
    lattice: list[list[Candidate]] = []
    for word, provenance in zip(segmentation.base_words, segmentation.provenance, strict=True):
        candidates: list[Candidate] = []
        if provenance is Provenance.LEXICON:
            candidates = [
                Candidate(
                    target,
                    _lexicon_weight(lexicon, word, target, direction, condition_on_source),
                    Provenance.LEXICON,
                )
                for target in _dictionary_targets(lexicon, word, direction)
            ]
        elif provenance is Provenance.TRANSLITERABLE and transliterator is not None:
            candidates = [
                Candidate(target, probability, Provenance.TRANSLITERABLE)
                for target, probability in transliterator(word, direction)
            ]
        elif provenance is Provenance.ABBREVIATION and abbreviations is not None:
            forms = abbreviations.complete_forms(word)
            total = sum(frequency for _, frequency in forms)
            candidates = [Candidate(word, 1.0, Provenance.ABBREVIATION)]
            candidates.extend(
                Candidate(form, frequency / total, Provenance.ABBREVIATION)
                for form, frequency in forms
            )
        if not candidates and general is not None:
            targets = _dictionary_targets(general, word, direction)
            candidates = [Candidate(t, 1 / len(targets), Provenance.GENERAL) for t in targets]
        if not candidates:
            logger.debug(f"Passing {word!r} through untranslated")
            candidates = [Candidate(word, 1.0, Provenance.PASSTHROUGH)]

        seen: set[str] = set()
        unique = []
        for candidate in candidates:
            if candidate.target not in seen:
                seen.add(candidate.target)
                unique.append(candidate)
        lattice.append(unique)
    return lattice


def _first_word(target: str) -> str:
    return target.split()[0].lower()


def _last_word(target: str) -> str:
    return target.split()[-1].lower()


def _rank_key(path: tuple[float, tuple[str, ...]]) -> tuple[float, tuple[str, ...]]:
    return -path[0], path[1]


def disambiguate(
    candidate_lists: Sequence[Sequence[Candidate]], table: BigramTable, k: int = 1
) -> list[TranslationCandidate]:
    """Exact k-best target sequences of a candidate lattice.

    A sequence scores the sum of log candidate weights plus the sum of log bigram
    probabilities between neighbours (last word of one candidate to the first word
    of the next). Each candidate keeps its k best partial paths, which is enough
    for the k best complete paths. Ties are broken by the target sequence.

    Raises:
        ValueError: If ``k`` < 1, the lattice is empty or a position has no candidate.
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if not candidate_lists or any(not position for position in candidate_lists):
        raise ValueError("Every lattice position needs at least one candidate")

    previous = candidate_lists[0]
    beams = [[(math.log(c.weight), (c.target,))] for c in previous]
    for position in candidate_lists[1:]:
        next_beams = []
        for candidate in position:
            log_weight = math.log(candidate.weight)
            extended = []
            for before, beam in zip(previous, beams, strict=True):
                log_bigram = math.log(
                    bigram_probability(
                        table, _last_word(before.target), _first_word(candidate.target)
                    )
                )
                extended.extend(
                    (score + log_bigram + log_weight, (*sequence, candidate.target))
                    for score, sequence in beam
                )
            extended.sort(key=_rank_key)
            next_beams.append(extended[:k])
        previous, beams = position, next_beams

    best = sorted((path for beam in beams for path in beam), key=_rank_key)[:k]
    return [TranslationCandidate(sequence, score) for score, sequence in best]


@dataclass
class TranslationResources:
    """Everything query translation consults, for one direction."""

    lexicon: Lexicon
    bigrams: BigramTable = field(default_factory=BigramTable)
    transliterator: Transliterator | None = None
    general: Lexicon | None = None
    abbreviations: AbbreviationTable | None = None
    english_tokenizer: EnglishTokenizer = field(default_factory=EnglishTokenizer)
    condition_on_source: bool = True


@dataclass(frozen=True)
class CompoundTranslation:
    source: str
    candidates: tuple[TranslationCandidate, ...]
    lattices: tuple[tuple[CompoundSegmentation, tuple[tuple[Candidate, ...], ...]], ...]
    terms: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "candidates": [
                {
                    "target_words": list(candidate.target_words),
                    "score": candidate.score,
                    "base_words": list(candidate.segmentation.base_words)
                    if candidate.segmentation
                    else [],
                    "provenance": [p.value for p in candidate.segmentation.provenance]
                    if candidate.segmentation
                    else [],
                }
                for candidate in self.candidates
            ],
            "lattices": [
                {
                    "base_words": list(segmentation.base_words),
                    "positions": [
                        [
                            {
                                "target": c.target,
                                "weight": c.weight,
                                "provenance": c.provenance.value,
                            }
                            for c in position
                        ]
                        for position in lattice
                    ],
                }
                for segmentation, lattice in self.lattices
            ],
            "terms": list(self.terms),
        }


def _segment_or_passthrough(
    word: str, resources: TranslationResources, **options: Any
) -> list[CompoundSegmentation]:
    arguments = (word, resources.lexicon, resources.transliterator, resources.general)
    try:
        return segment_compound(*arguments, **options)
    except NoCover as error:
        logger.debug(f"{error}; allowing passthrough parts")
        return segment_compound(*arguments, **options, allow_passthrough=True)


def _distinct(words: Iterable[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(words))


def translate_compound(
    compound: str | Sequence[str],
    direction: Direction,
    resources: TranslationResources,
    mode: TranslationMode = TranslationMode.TRL,
    k: int = 1,
) -> CompoundTranslation:
    """Translate one compound into its k-best target sequences and query terms.

    A Japanese compound is a string segmented with :func:`segment_compound`; an
    English compound is a sequence of root words, each a base word. All minimal
    segmentations are decoded and their candidates merged.
    """
    options: dict[str, Any] = {"abbreviations": resources.abbreviations, "mode": mode}
    if direction is Direction.JA_EN:
        if not isinstance(compound, str):
            raise TypeError(f"Japanese compounds are strings, got {type(compound)}")
        source = compound
        segmentations = _segment_or_passthrough(compound, resources, **options)
    else:
        words = [compound] if isinstance(compound, str) else list(compound)
        source = " ".join(words)
        parts = [
            _segment_or_passthrough(word, resources, **options, direction=direction)[0]
            for word in words
        ]
        segmentations = [
            CompoundSegmentation(
                tuple(w for part in parts for w in part.base_words),
                tuple(p for part in parts for p in part.provenance),
            )
        ]

    lattices = []
    merged: dict[tuple[str, ...], TranslationCandidate] = {}
    for segmentation in segmentations:
        lattice = derive_candidates(
            segmentation,
            resources.lexicon,
            resources.transliterator,
            resources.general,
            abbreviations=resources.abbreviations,
            direction=direction,
            condition_on_source=resources.condition_on_source,
        )
        lattices.append((segmentation, tuple(tuple(position) for position in lattice)))
        for best in disambiguate(lattice, resources.bigrams, k):
            known = merged.get(best.target_words)
            if known is None or best.score > known.score:
                merged[best.target_words] = TranslationCandidate(
                    best.target_words, best.score, segmentation
                )
    candidates = sorted(merged.values(), key=lambda c: (-c.score, c.target_words))[:k]

    if mode is TranslationMode.ALL:
        terms = _distinct(
            c.target for _, lattice in lattices for position in lattice for c in position
        )
    else:
        by_segmentation = dict(lattices)
        expansions = [
            c.target
            for candidate in candidates
            if candidate.segmentation is not None
            for position, provenance in zip(
                by_segmentation[candidate.segmentation],
                candidate.segmentation.provenance,
                strict=True,
            )
            if provenance is Provenance.ABBREVIATION
            for c in position
        ]
        terms = _distinct([*(w for c in candidates for w in c.target_words), *expansions])
    return CompoundTranslation(source, tuple(candidates), tuple(lattices), terms)


@dataclass(frozen=True)
class QueryTranslation:
    query_id: str
    text: str
    direction: Direction
    mode: TranslationMode
    compounds: tuple[CompoundTranslation, ...]

    @property
    def terms(self) -> list[str]:
        """Target terms of every compound, in source order."""
        return [term for compound in self.compounds for term in compound.terms]

    def to_dict(self) -> dict[str, Any]:
        return {
            "query_id": self.query_id,
            "text": self.text,
            "direction": self.direction.value,
            "mode": self.mode.value,
            "compounds": [compound.to_dict() for compound in self.compounds],
            "terms": self.terms,
        }


def _without_katakana(text: str) -> str:
    return "".join(
        " " if script is ScriptClass.KATAKANA else run for script, run in script_runs(text)
    )


def translate_query(
    query: str,
    direction: Direction,
    resources: TranslationResources,
    k: int = 1,
    mode: TranslationMode = TranslationMode.TRL,
    query_id: str = "",
) -> QueryTranslation:
    """Translate a query compound by compound, preserving source order.

    English compounds are maximal runs of non-stopword tokens; Japanese compounds
    are maximal runs of content-script characters. Untranslatable material passes
    through.

    Japanese compounds come from :func:`split_japanese_compounds` on the raw text,
    not from the Japanese tokenizer, whose longest-match output would pre-split them.

    Example:
        >>> translate_query("データマイニング", Direction.JA_EN, resources).terms
        ['data', 'mining']
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    compounds: list[str] | list[list[str]]
    if direction is Direction.JA_EN:
        text = unicodedata.normalize("NFKC", query)
        if mode is TranslationMode.DISCARD_KATAKANA:
            text = _without_katakana(text)
        compounds = split_japanese_compounds(text)
    else:
        compounds = [
            [token.root for token in compound]
            for compound in resources.english_tokenizer.compounds(query)
        ]
    translations = tuple(
        translate_compound(compound, direction, resources, mode, k) for compound in compounds
    )
    logger.debug(f"Query {query_id or query!r}: {len(translations)} compounds")
    return QueryTranslation(query_id, query, direction, mode, translations)
