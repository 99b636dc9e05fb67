"""Inverted index over bilingual documents with cosine vector-space ranking."""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any

from loguru import logger

from back_and_forth.src.path_wizard import (
    ParseError,
    normalize_file_path,
    read_jsonl,
    read_tsv_rows,
    write_jsonl,
    write_tsv_rows,
)
from back_and_forth.src.text_wizard import Language

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterable, Mapping

    from back_and_forth.src.text_wizard import Tokenizer

INDEX_HEADER = "#back-and-forth-index\t1"
_RECORD_SHAPES = {("documents", 2), ("document", 6), ("posting", 4)}


class DuplicateId(ValueError):
    """Two documents share an id."""


class UnknownDocument(KeyError):
    """The id is not in the index."""


class WeightingScheme(str, Enum):
    """Term-frequency formulation; IDF is always log(N / n_t)."""

    STANDARD = "standard"
    LOGARITHMIC = "logarithmic"


@dataclass(frozen=True)
class Document:
    id: str
    title: str = ""
    abstract: str = ""
    keywords: tuple[str, ...] = ()
    language: Language = Language.ENGLISH

    @classmethod
    def from_dict(cls, record: Mapping[str, Any]) -> Document:
        """Build a document from a corpus record, validating every field."""
        doc_id = record.get("id")
        if not isinstance(doc_id, str) or not doc_id or "\t" in doc_id:
            raise ValueError(f"document id must be a non-empty string without tabs, got {doc_id!r}")
        title, abstract = record.get("title", ""), record.get("abstract", "")
        if not isinstance(title, str) or not isinstance(abstract, str):
            raise ValueError(f"title and abstract of {doc_id} must be strings")
        keywords = record.get("keywords", [])
        if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
            raise ValueError(f"keywords of {doc_id} must be a list of strings")
        try:
            language = Language(record.get("language"))
        except ValueError:
            raise ValueError(f"unknown language {record.get('language')!r} for {doc_id}") from None
        return cls(doc_id, title, abstract, tuple(keywords), language)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "keywords": list(self.keywords),
            "language": self.language.value,
        }


def read_corpus(path: str | pathlib.Path) -> list[Document]:
    """Read a JSON Lines corpus.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: If a line is not a valid document record.
    """
    documents = []
    for line_number, record in read_jsonl(path):
        try:
            documents.append(Document.from_dict(record))
        except ValueError as error:
            raise ParseError(path, line_number, str(error)) from None
    logger.debug(f"Read {len(documents)} documents from {path}")
    return documents


def write_corpus(path: str | pathlib.Path, documents: Iterable[Document]) -> int:
    return write_jsonl(path, (document.to_dict() for document in documents))


def document_fields(document: Document, tokenizer: Tokenizer) -> list[list[str]]:
    """Root forms of the title, the abstract and each keyword, field by field."""
    texts = [document.title, document.abstract, *document.keywords]
    return [[token.root for token in tokenizer.tokenize(text)] for text in texts]


def query_terms(terms: Iterable[str], tokenizer: Tokenizer) -> list[str]:
    """Index terms for (possibly multi-word) query terms."""
    return [token.root for term in terms for token in tokenizer.tokenize(term)]


def term_weight(f: int, n: int, n_t: int, scheme: WeightingScheme) -> float:
    """TF-IDF weight of a term occurring ``f`` times, natural log throughout.

    Example:
        >>> round(term_weight(10, 100, 10, WeightingScheme.LOGARITHMIC), 5)
        7.60448
    """
    if f < 0:
        raise ValueError(f"term frequency must be non-negative, got {f}")
    if f == 0:
        return 0.0
    if not 1 <= n_t <= n:
        raise ValueError(f"document frequency {n_t} outside 1..{n}")
    idf = math.log(n / n_t)
    if scheme is WeightingScheme.STANDARD:
        return f * idf
    return (1 + math.log(f)) * idf


@dataclass
class IndexStats:
    """Postings, collection statistics and precomputed document norms."""

    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    languages: dict[str, Language] = field(default_factory=dict)
    keywords: dict[str, tuple[str, ...]] = field(default_factory=dict)
    norms: dict[WeightingScheme, dict[str, float]] = field(
        default_factory=lambda: {scheme: {} for scheme in WeightingScheme}
    )

    @property
    def document_count(self) -> int:
        return len(self.languages)

    @property
    def doc_ids(self) -> list[str]:
        return sorted(self.languages)

    def document_frequency(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def compute_norms(self) -> None:
        """Fill ``norms`` for every scheme from the current postings."""
        squares: dict[WeightingScheme, dict[str, list[float]]] = {
            scheme: defaultdict(list) for scheme in WeightingScheme
        }
        n = self.document_count
        for term in sorted(self.postings):
            postings = self.postings[term]
            for scheme in WeightingScheme:
                for doc_id, f in postings:
                    squares[scheme][doc_id].append(term_weight(f, n, len(postings), scheme) ** 2)
        self.norms = {
            scheme: {
                doc_id: math.sqrt(math.fsum(squares[scheme][doc_id])) for doc_id in self.doc_ids
            }
            for scheme in WeightingScheme
        }

    def save(self, path: str | pathlib.Path) -> int:
        """Write the versioned TSV layout; float norms use ``repr`` so loading is exact."""
        rows: list[tuple[object, ...]] = [("documents", self.document_count)]
        rows.extend(
            (
                "document",
                doc_id,
                self.languages[doc_id].value,
                repr(self.norms[WeightingScheme.STANDARD][doc_id]),
                repr(self.norms[WeightingScheme.LOGARITHMIC][doc_id]),
                json.dumps(list(self.keywords.get(doc_id, ())), ensure_ascii=False),
            )
            for doc_id in self.doc_ids
        )
        rows.extend(
            ("posting", term, doc_id, f)
            for term in sorted(self.postings)
            for doc_id, f in self.postings[term]
        )
        return write_tsv_rows(path, rows, header=INDEX_HEADER)

    @classmethod
    def load(cls, path: str | pathlib.Path) -> IndexStats:
        file_path = normalize_file_path(path, path_should_exist=True, make_parent_path=False)
        with file_path.open(encoding="utf-8") as handle:
            if handle.readline().rstrip("\r\n") != INDEX_HEADER:
                raise ParseError(file_path, 1, "not a version 1 index file")
        index = cls()
        expected = None
        for line_number, fields in read_tsv_rows(file_path, 2, 6):
            kind = fields[0]
            if (kind, len(fields)) not in _RECORD_SHAPES:
                raise ParseError(file_path, line_number, f"malformed {kind!r} record")
            try:
                if kind == "documents":
                    expected = int(fields[1])
                elif kind == "document":
                    doc_id = fields[1]
                    index.languages[doc_id] = Language(fields[2])
                    index.norms[WeightingScheme.STANDARD][doc_id] = float(fields[3])
                    index.norms[WeightingScheme.LOGARITHMIC][doc_id] = float(fields[4])
                    index.keywords[doc_id] = tuple(json.loads(fields[5]))
                else:
                    index.postings.setdefault(fields[1], []).append((fields[2], int(fields[3])))
            except ValueError as error:
                raise ParseError(file_path, line_number, str(error)) from None
        if expected != index.document_count:
            raise ParseError(
                file_path, 1, f"declares {expected} documents, holds {index.document_count}"
            )
        return index


def build_index(
    documents: Iterable[Document], tokenizers: Mapping[Language, Tokenizer]
) -> IndexStats:
    """Index title, abstract and keyword content words of every document.

    Each document is tokenized with the tokenizer of its language.

    Raises:
        DuplicateId: If two documents share an id.
        KeyError: If no tokenizer is given for a document's language.
    """
    index = IndexStats()
    frequencies: dict[str, Counter[str]] = defaultdict(Counter)
    for document in documents:
        if document.id in index.languages:
            raise DuplicateId(f"Document id {document.id!r} occurs twice")
        index.languages[document.id] = document.language
        index.keywords[document.id] = document.keywords
        for words in document_fields(document, tokenizers[document.language]):
            for word in words:
                frequencies[word][document.id] += 1
    index.postings = {
        term: sorted(per_document.items()) for term, per_document in sorted(frequencies.items())
    }
    index.compute_norms()
    logger.info(f"Indexed {index.document_count} documents, {len(index.postings)} terms")
    return index


def search(
    terms: Iterable[str],
    index: IndexStats,
    scheme: WeightingScheme = WeightingScheme.STANDARD,
    top_k: int = 1000,
) -> list[tuple[str, float]]:
    """Rank documents by cosine similarity with the query term bag.

    The query is weighted like documents, its term frequency being the term's
    multiplicity. Documents with a zero norm or no positive score are left out;
    equal scores order by document id.

    Example:
        >>> search(["apple", "banana"], index)[0][0]
        'd1'
    """
    if top_k < 1:
        raise ValueError(f"top_k must be at least 1, got {top_k}")
    n = index.document_count
    query_weights = {
        term: term_weight(f, n, index.document_frequency(term), scheme)
        for term, f in sorted(Counter(terms).items())
        if index.document_frequency(term)
    }
    query_norm = math.sqrt(math.fsum(weight**2 for weight in query_weights.values()))
    if query_norm == 0:
        return []

    dot: dict[str, float] = defaultdict(float)
    for term, query_weight in query_weights.items():
        if query_weight == 0:
            continue
        postings = index.postings[term]
        for doc_id, f in postings:
            dot[doc_id] += query_weight * term_weight(f, n, len(postings), scheme)

    norms = index.norms[scheme]
    scores = [
        (doc_id, value / (query_norm * norms[doc_id]))
        for doc_id, value in dot.items()
        if value > 0 and norms[doc_id] > 0
    ]
    scores.sort(key=lambda item: (-item[1], item[0]))
    return scores[:top_k]


def author_keywords(doc_id: str, index: IndexStats) -> list[str]:
    """Stored author keywords of a document, verbatim."""
    if doc_id not in index.languages:
        raise UnknownDocument(doc_id)
    return list(index.keywords.get(doc_id, ()))
