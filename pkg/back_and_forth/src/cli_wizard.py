"""Command-line front end: one subcommand per pipeline stage.

Every subcommand reads its inputs from the merged :class:`PipelineConfig`, writes
one output file and prints a single summary line on stdout. Logs go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import TYPE_CHECKING, Any

from loguru import logger
from omegaconf.errors import OmegaConfBaseException

from back_and_forth.src.config_wizard import (
    PipelineConfig,
    load_pipeline_config,
    optional_input,
    require_inputs,
)
from back_and_forth.src.eval_wizard import (
    PartialPolicy,
    evaluate_run,
    read_qrels,
    read_run,
    run_from_results,
    write_average_precision,
    write_curves_csv,
    write_run,
)
from back_and_forth.src.index_wizard import (
    IndexStats,
    WeightingScheme,
    author_keywords,
    build_index,
    document_fields,
    query_terms,
    read_corpus,
    search,
)
from back_and_forth.src.lexicon_wizard import (
    AbbreviationTable,
    Lexicon,
    SegmentationRules,
    build_base_word_dictionary,
    extract_abbreviations,
    load_bilingual_entries,
    load_general_dictionary,
)
from back_and_forth.src.log_wizard import logging_setup
from back_and_forth.src.path_wizard import ParseError, read_jsonl, read_tsv_rows, write_jsonl
from back_and_forth.src.text_wizard import (
    Direction,
    EnglishTokenizer,
    JapaneseTokenizer,
    Language,
    RomanizationTable,
)
from back_and_forth.src.translate_wizard import (
    BigramTable,
    TranslationMode,
    TranslationResources,
    collect_bigram_stats,
    translate_query,
)
from back_and_forth.src.translit_wizard import (
    SimilarityTable,
    TargetVocabulary,
    Transliterator,
    TranslitModel,
    build_translit_dictionary,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from back_and_forth.src.text_wizard import Tokenizer

    Command = Callable[[PipelineConfig, argparse.Namespace], str]

# flag name -> argparse keyword arguments; dest is the PipelineConfig key
_FLAGS: dict[str, dict[str, Any]] = {
    "corpus": {"help": "JSON Lines corpus"},
    "entries": {"help": "japanese<TAB>english compound entries"},
    "pairs": {"help": "english<TAB>katakana word pairs"},
    "lexicon": {"help": "base word dictionary TSV"},
    "general_dictionary": {"help": "single-word fallback dictionary TSV"},
    "abbreviations": {"help": "abbreviation table TSV"},
    "translit_model": {"help": "transliteration symbol dictionary TSV"},
    "bigrams": {"help": "target-language bigram statistics TSV"},
    "index": {"help": "index file written by the index subcommand"},
    "queries": {"help": "qid<TAB>text queries, or translations JSONL from translate"},
    "run": {"help": "TREC run file"},
    "qrels": {"help": "TREC qrels file"},
    "similarity": {"help": "letter similarity table TSV"},
    "stopwords": {"help": "English stopword list"},
    "root_table": {"help": "irregular English root forms TSV"},
    "romanization": {"help": "katakana romanization table TSV"},
    "forbidden_chars": {"help": "forbidden segmentation characters TSV"},
    "language": {"choices": [language.value for language in Language]},
    "direction": {"choices": [direction.value for direction in Direction]},
    "mode": {"choices": [mode.value for mode in TranslationMode]},
    "scheme": {"choices": [scheme.value for scheme in WeightingScheme]},
    "policy": {"choices": [policy.value for policy in PartialPolicy]},
    "k": {"type": int, "help": "translations kept per compound"},
    "translit_k": {"type": int, "help": "transliterations kept per word"},
    "lam": {"type": float, "help": "bigram interpolation weight"},
    "epsilon": {"type": float, "help": "probability floor"},
    "threshold": {"type": float, "help": "alignment score threshold"},
    "min_abbrev_frequency": {"type": int},
    "top_k": {"type": int, "help": "documents retrieved per query"},
    "top_docs": {"type": int, "help": "documents per query whose keywords are shown"},
    "runtag": {},
}

# Extra option strings per flag
_FLAG_ALIASES: dict[str, tuple[str, ...]] = {"queries": ("--query",)}

_TOKENIZER_FLAGS = ("stopwords", "root_table")
_TRANSLATION_FLAGS = (
    *_TOKENIZER_FLAGS,
    "lexicon",
    "general_dictionary",
    "abbreviations",
    "translit_model",
    "bigrams",
    "romanization",
    "direction",
    "mode",
    "k",
    "translit_k",
    "lam",
    "epsilon",
)


def _add_flags(parser: argparse.ArgumentParser, *names: str) -> None:
    for name in names:
        parser.add_argument(
            f"--{name.replace('_', '-')}",
            *_FLAG_ALIASES.get(name, ()),
            dest=name,
            default=argparse.SUPPRESS,
            **_FLAGS[name],
        )


def _english_tokenizer(config: PipelineConfig) -> EnglishTokenizer:
    return EnglishTokenizer.from_files(
        optional_input(config, "stopwords"), optional_input(config, "root_table")
    )


def _japanese_tokenizer(config: PipelineConfig) -> JapaneseTokenizer:
    """Tokenizer whose vocabulary is the Japanese side of the dictionaries."""
    vocabulary: set[str] = set()
    lexicon_path = optional_input(config, "lexicon")
    if lexicon_path is not None:
        vocabulary |= Lexicon.load(lexicon_path).source_words()
    general_path = optional_input(config, "general_dictionary")
    if config.use_general and general_path is not None:
        vocabulary |= load_general_dictionary(general_path).source_words()
    return JapaneseTokenizer(frozenset(vocabulary))


def _tokenizers(config: PipelineConfig) -> dict[Language, Tokenizer]:
    return {
        Language.ENGLISH: _english_tokenizer(config),
        Language.JAPANESE: _japanese_tokenizer(config),
    }


def _romanization(config: PipelineConfig) -> RomanizationTable:
    path = optional_input(config, "romanization")
    return RomanizationTable.load(path) if path is not None else RomanizationTable.default()


def _translation_resources(config: PipelineConfig, direction: Direction) -> TranslationResources:
    paths = require_inputs(config, "lexicon")
    bigram_path = optional_input(config, "bigrams")
    bigrams = (
        BigramTable.load(bigram_path, config.lam, config.epsilon)
        if bigram_path is not None
        else BigramTable(lam=config.lam, epsilon=config.epsilon)
    )
    transliterator = None
    model_path = optional_input(config, "translit_model")
    if model_path is not None:
        romanization = _romanization(config)
        vocabulary = TargetVocabulary(
            bigrams.unigrams,
            romanization if direction.target is Language.JAPANESE else None,
        )
        transliterator = Transliterator(
            TranslitModel.load(model_path), vocabulary, romanization, config.translit_k
        )
    general_path = optional_input(config, "general_dictionary")
    abbreviation_path = optional_input(config, "abbreviations")
    return TranslationResources(
        lexicon=Lexicon.load(paths["lexicon"]),
        bigrams=bigrams,
        transliterator=transliterator,
        general=load_general_dictionary(general_path)
        if config.use_general and general_path is not None
        else None,
        abbreviations=AbbreviationTable.load(abbreviation_path)
        if config.use_abbreviations and abbreviation_path is not None
        else None,
        english_tokenizer=_english_tokenizer(config),
        condition_on_source=config.condition_on_source,
    )


def _build_lexicon(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "entries")
    rules_path = optional_input(config, "forbidden_chars")
    rules = SegmentationRules.load(rules_path) if rules_path else SegmentationRules.default()
    lexicon = build_base_word_dictionary(
        load_bilingual_entries(paths["entries"]), _english_tokenizer(config), rules
    )
    lexicon.save(args.output)
    tally = lexicon.tally
    used, skipped = (tally.used, tally.skipped) if tally else (0, 0)
    return (
        f"build-lexicon: {len(lexicon)} pairs from {used} entries "
        f"({skipped} skipped) -> {args.output}"
    )


def _build_translit(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "pairs")
    similarity_path = optional_input(config, "similarity")
    table = SimilarityTable.load(similarity_path) if similarity_path else SimilarityTable.default()
    word_pairs = [(fields[0], fields[1]) for _, fields in read_tsv_rows(paths["pairs"], 2)]
    model = build_translit_dictionary(word_pairs, table, config.threshold, _romanization(config))
    model.save(args.output)
    return (
        f"build-translit: {len(model)} symbol pairs from {model.aligned} word pairs "
        f"({model.discarded} discarded) -> {args.output}"
    )


def _extract_abbrev(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "corpus")
    texts = [
        text
        for document in read_corpus(paths["corpus"])
        for text in (document.title, document.abstract, *document.keywords)
    ]
    entries = extract_abbreviations(texts, config.min_abbrev_frequency)
    written = AbbreviationTable.from_entries(entries).save(args.output)
    return f"extract-abbrev: {written} abbreviation pairs -> {args.output}"


def _collect_bigrams(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "corpus")
    language = Language(config.language)
    tokenizer = _tokenizers(config)[language]
    documents = [
        document_fields(document, tokenizer)
        for document in read_corpus(paths["corpus"])
        if document.language is language
    ]
    table = collect_bigram_stats(documents, config.lam, config.epsilon)
    table.save(args.output)
    return (
        f"collect-bigrams: {len(table.unigrams)} words, {len(table.bigrams)} pairs "
        f"from {len(documents)} {language.value} documents -> {args.output}"
    )


def _index(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "corpus")
    index = build_index(read_corpus(paths["corpus"]), _tokenizers(config))
    index.save(args.output)
    return f"index: {index.document_count} documents, {len(index.postings)} terms -> {args.output}"


def _read_queries(config: PipelineConfig) -> list[tuple[str, str]]:
    paths = require_inputs(config, "queries")
    return [(query_id, text) for _, (query_id, text) in read_tsv_rows(paths["queries"], 2)]


def _translate(config: PipelineConfig, args: argparse.Namespace) -> str:
    direction = Direction(config.direction)
    resources = _translation_resources(config, direction)
    mode = TranslationMode(config.mode)
    translations = [
        translate_query(text, direction, resources, config.k, mode, query_id)
        for query_id, text in _read_queries(config)
    ]
    write_jsonl(args.output, (translation.to_dict() for translation in translations))
    terms = sum(len(translation.terms) for translation in translations)
    return f"translate: {len(translations)} queries, {terms} terms -> {args.output}"


def _search(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "index", "queries")
    index = IndexStats.load(paths["index"])
    tokenizers = _tokenizers(config)
    scheme = WeightingScheme(config.scheme)
    bags: list[tuple[str, list[str]]] = []
    if paths["queries"].suffix == ".jsonl":
        for line_number, record in read_jsonl(paths["queries"]):
            try:
                target = Direction(record["direction"]).target
                bags.append((record["query_id"], query_terms(record["terms"], tokenizers[target])))
            except (KeyError, ValueError) as error:
                message = f"bad translation record: {error}"
                raise ParseError(paths["queries"], line_number, message) from None
    else:
        tokenizer = tokenizers[Language(config.language)]
        bags = [(qid, query_terms([text], tokenizer)) for qid, text in _read_queries(config)]
    results = {qid: search(terms, index, scheme, config.top_k) for qid, terms in bags}
    written = write_run(args.output, run_from_results(results, config.runtag))
    return f"search: {len(bags)} queries, {written} run lines ({scheme.value}) -> {args.output}"


def _eval(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "run", "qrels")
    report = evaluate_run(
        read_run(paths["run"]), read_qrels(paths["qrels"]), PartialPolicy(config.policy)
    )
    if args.curves is not None:
        write_curves_csv(args.curves, report)
    if args.per_query is not None:
        write_average_precision(args.per_query, report)
    return (
        f"MAP {report.mean_average_precision:.4f} over {len(report.average_precision)} "
        f"queries ({len(report.excluded)} excluded)"
    )


def _keywords(config: PipelineConfig, args: argparse.Namespace) -> str:
    paths = require_inputs(config, "run", "index")
    direction = Direction(config.direction)
    resources = _translation_resources(config, direction)
    mode = TranslationMode(config.mode)
    run = read_run(paths["run"])
    index = IndexStats.load(paths["index"])
    records = []
    for query_id in run.query_ids:
        for doc_id in run.ranking(query_id)[: config.top_docs]:
            keywords = author_keywords(doc_id, index)
            records.append(
                {
                    "query_id": query_id,
                    "doc_id": doc_id,
                    "keywords": keywords,
                    "translations": [
                        translate_query(keyword, direction, resources, config.k, mode).terms
                        for keyword in keywords
                    ],
                }
            )
    written = write_jsonl(args.output, records)
    return f"keywords: {written} documents from {len(run.query_ids)} queries -> {args.output}"


_SUBCOMMANDS: dict[str, tuple[Command, tuple[str, ...]]] = {
    "build-lexicon": (_build_lexicon, ("entries", *_TOKENIZER_FLAGS, "forbidden_chars")),
    "build-translit": (_build_translit, ("pairs", "similarity", "romanization", "threshold")),
    "extract-abbrev": (_extract_abbrev, ("corpus", "min_abbrev_frequency")),
    "collect-bigrams": (
        _collect_bigrams,
        ("corpus", "language", "lexicon", "general_dictionary", "lam", "epsilon")
        + _TOKENIZER_FLAGS,
    ),
    "index": (_index, ("corpus", *_TOKENIZER_FLAGS, "lexicon", "general_dictionary")),
    "translate": (_translate, ("queries", *_TRANSLATION_FLAGS)),
    "search": (
        _search,
        (
            "index",
            "queries",
            "language",
            "scheme",
            "top_k",
            "runtag",
            "lexicon",
            "general_dictionary",
            *_TOKENIZER_FLAGS,
        ),
    ),
    "eval": (_eval, ("run", "qrels", "policy")),
    "keywords": (_keywords, ("run", "index", "top_docs", *_TRANSLATION_FLAGS)),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="key=value or YAML config file")
    common.add_argument("--log-level", default="INFO")
    common.add_argument("--log-file", default=None)
    common.add_argument(
        "overrides", nargs="*", metavar="KEY=VALUE", help="extra configuration overrides"
    )

    parser = argparse.ArgumentParser(
        prog="back-and-forth",
        description="Japanese/English cross-language retrieval pipeline.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, flags) in _SUBCOMMANDS.items():
        subparser = subparsers.add_parser(name, parents=[common])
        _add_flags(subparser, *flags)
        if name == "eval":
            subparser.add_argument("--curves", default=None, help="recall-precision CSV output")
            subparser.add_argument("--per-query", default=None, help="per-query AP TSV output")
        else:
            subparser.add_argument("--output", required=True)
        if name in ("translate", "keywords"):
            subparser.add_argument(
                "--no-general", dest="use_general", action="store_false", default=argparse.SUPPRESS
            )
            subparser.add_argument(
                "--no-abbreviations",
                dest="use_abbreviations",
                action="store_false",
                default=argparse.SUPPRESS,
            )
            subparser.add_argument(
                "--condition-on-target",
                dest="condition_on_source",
                action="store_false",
                default=argparse.SUPPRESS,
                help="weight dictionary candidates by P(source | target)",
            )
    return parser


_CONFIG_KEYS = frozenset(PipelineConfig.__dataclass_fields__)


def run_subcommand(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit status.

    0 on success, 1 when an input is missing or invalid, 2 on usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else 2

    logging_setup(log_file=args.log_file, log_level=args.log_level.upper(), stage=args.command)
    flags = {key: value for key, value in vars(args).items() if key in _CONFIG_KEYS}
    command, _ = _SUBCOMMANDS[args.command]
    try:
        config = load_pipeline_config(args.config, args.overrides, flags)
        summary = command(config, args)
    except (FileNotFoundError, ValueError, LookupError, ImportError) as error:
        logger.error(f"{args.command}: {error}")
        return 1
    except OmegaConfBaseException as error:
        logger.error(f"{args.command}: invalid configuration: {error}")
        return 1
    print(summary)
    return 0


def main() -> None:
    sys.exit(run_subcommand())
