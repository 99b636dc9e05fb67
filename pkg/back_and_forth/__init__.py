"""back-and-forth: Japanese/English cross-language retrieval for technical documents."""

from importlib.metadata import version

from back_and_forth.src.config_wizard import (
    PipelineConfig,
    load_pipeline_config,
    require_inputs,
    validate_pipeline_config,
)
from back_and_forth.src.eval_wizard import (
    PartialPolicy,
    Qrels,
    Relevance,
    Run,
    average_precision,
    evaluate_run,
    mean_average_precision,
    read_qrels,
    read_run,
    recall_precision_curve,
    write_run,
)
from back_and_forth.src.index_wizard import (
    Document,
    IndexStats,
    WeightingScheme,
    author_keywords,
    build_index,
    read_corpus,
    search,
    term_weight,
)
from back_and_forth.src.lexicon_wizard import (
    AbbreviationTable,
    Lexicon,
    build_base_word_dictionary,
    conditional_probability,
    extract_abbreviations,
    segment_bilingual_entry,
)
from back_and_forth.src.log_wizard import logging_setup, reset_logging
from back_and_forth.src.path_wizard import ParseError, normalize_file_path
from back_and_forth.src.text_wizard import (
    Direction,
    EnglishTokenizer,
    JapaneseTokenizer,
    Language,
    classify_char,
    romanize_katakana,
    tokenize_english,
    tokenize_japanese,
)
from back_and_forth.src.translate_wizard import (
    BigramTable,
    TranslationMode,
    TranslationResources,
    bigram_probability,
    collect_bigram_stats,
    derive_candidates,
    disambiguate,
    segment_compound,
    translate_query,
)
from back_and_forth.src.translit_wizard import (
    TargetVocabulary,
    Transliterator,
    TranslitModel,
    align_word_pair,
    build_translit_dictionary,
    letter_similarity,
    transliterate,
)

__version__ = version("back-and-forth")

__all__ = [
    "__version__",
    "normalize_file_path",
    "ParseError",
    "logging_setup",
    "reset_logging",
    "PipelineConfig",
    "load_pipeline_config",
    "validate_pipeline_config",
    "require_inputs",
    "Language",
    "Direction",
    "classify_char",
    "romanize_katakana",
    "tokenize_english",
    "tokenize_japanese",
    "EnglishTokenizer",
    "JapaneseTokenizer",
    "Lexicon",
    "AbbreviationTable",
    "segment_bilingual_entry",
    "build_base_word_dictionary",
    "conditional_probability",
    "extract_abbreviations",
    "TranslitModel",
    "TargetVocabulary",
    "Transliterator",
    "letter_similarity",
    "align_word_pair",
    "build_translit_dictionary",
    "transliterate",
    "TranslationMode",
    "TranslationResources",
    "BigramTable",
    "collect_bigram_stats",
    "bigram_probability",
    "segment_compound",
    "derive_candidates",
    "disambiguate",
    "translate_query",
    "Document",
    "IndexStats",
    "WeightingScheme",
    "read_corpus",
    "build_index",
    "term_weight",
    "search",
    "author_keywords",
    "Relevance",
    "PartialPolicy",
    "Qrels",
    "Run",
    "read_qrels",
    "read_run",
    "write_run",
    "average_precision",
    "mean_average_precision",
    "recall_precision_curve",
    "evaluate_run",
]
