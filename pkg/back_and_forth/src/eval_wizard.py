"""TREC-style run and judgment files, average precision and recall-precision curves."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import TYPE_CHECKING

import numpy as np
from loguru import logger

from back_and_forth.src.path_wizard import ParseError, normalize_file_path, write_tsv_rows

if TYPE_CHECKING:
    import pathlib
    from collections.abc import Iterator, Mapping, Sequence

MAX_RUN_DEPTH = 1000
RECALL_LEVELS = np.arange(11) / 10


class NoRelevant(ValueError):
    """The query has no relevant document under the chosen policy."""


class NoEvaluableQuery(ValueError):
    """No query of the run can be scored."""


class Relevance(IntEnum):
    IRRELEVANT = 0
    PARTIALLY_RELEVANT = 1
    RELEVANT = 2


class PartialPolicy(str, Enum):
    """Whether partially relevant documents count as relevant."""

    STRICT = "strict"
    LENIENT = "lenient"

    def counts(self, relevance: Relevance) -> bool:
        if self is PartialPolicy.LENIENT:
            return relevance >= Relevance.PARTIALLY_RELEVANT
        return relevance is Relevance.RELEVANT


@dataclass(frozen=True)
class RunEntry:
    query_id: str
    doc_id: str
    rank: int
    score: float
    runtag: str


@dataclass
class Qrels:
    judgments: dict[str, dict[str, Relevance]] = field(default_factory=dict)

    @property
    def query_ids(self) -> list[str]:
        return sorted(self.judgments)

    def relevant(self, query_id: str, policy: PartialPolicy = PartialPolicy.STRICT) -> set[str]:
        return {
            doc_id
            for doc_id, relevance in self.judgments.get(query_id, {}).items()
            if policy.counts(relevance)
        }


@dataclass
class Run:
    entries: dict[str, list[RunEntry]] = field(default_factory=dict)

    @property
    def query_ids(self) -> list[str]:
        return sorted(self.entries)

    def ranking(self, query_id: str) -> list[str]:
        return [entry.doc_id for entry in self.entries.get(query_id, [])]


def _whitespace_rows(
    path: str | pathlib.Path, fields: int
) -> Iterator[tuple[pathlib.Path, int, list[str]]]:
    file_path = normalize_file_path(path, path_should_exist=True, make_parent_path=False)
    with file_path.open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != fields:
                raise ParseError(file_path, line_number, f"expected {fields} columns")
            yield file_path, line_number, parts


def read_qrels(path: str | pathlib.Path) -> Qrels:
    """Read ``qid 0 docid judgment`` lines, judgment being 0, 1 or 2."""
    qrels = Qrels()
    for file_path, line_number, (query_id, _, doc_id, judgment) in _whitespace_rows(path, 4):
        try:
            relevance = Relevance(int(judgment))
        except ValueError:
            message = f"judgment {judgment!r} not in 0/1/2"
            raise ParseError(file_path, line_number, message) from None
        judged = qrels.judgments.setdefault(query_id, {})
        if doc_id in judged:
            raise ParseError(file_path, line_number, f"second judgment for {query_id}/{doc_id}")
        judged[doc_id] = relevance
    return qrels


def read_run(path: str | pathlib.Path) -> Run:
    """Read ``qid Q0 docid rank score runtag`` lines.

    Raises:
        ParseError: If ranks of a query are not 1..m in order, scores increase with
            rank, or a query has more than 1000 entries.
    """
    run = Run()
    for file_path, line_number, parts in _whitespace_rows(path, 6):
        query_id, _, doc_id, rank_text, score_text, runtag = parts
        try:
            rank, score = int(rank_text), float(score_text)
        except ValueError:
            raise ParseError(file_path, line_number, "rank or score is not a number") from None
        entries = run.entries.setdefault(query_id, [])
        if rank != len(entries) + 1:
            raise ParseError(file_path, line_number, f"rank {rank} follows rank {len(entries)}")
        if entries and score > entries[-1].score:
            raise ParseError(file_path, line_number, "scores must not increase with rank")
        if rank > MAX_RUN_DEPTH:
            raise ParseError(file_path, line_number, f"more than {MAX_RUN_DEPTH} entries")
        entries.append(RunEntry(query_id, doc_id, rank, score, runtag))
    return run


def run_from_results(results: Mapping[str, Sequence[tuple[str, float]]], runtag: str) -> Run:
    """Turn ranked ``(doc_id, score)`` lists into a run, keeping at most 1000 per query."""
    return Run(
        {
            query_id: [
                RunEntry(query_id, doc_id, rank, score, runtag)
                for rank, (doc_id, score) in enumerate(ranked[:MAX_RUN_DEPTH], start=1)
            ]
            for query_id, ranked in results.items()
        }
    )


def write_run(path: str | pathlib.Path, run: Run) -> int:
    file_path = normalize_file_path(path)
    written = 0
    with file_path.open("w", encoding="utf-8", newline="\n") as handle:
        for query_id in run.query_ids:
            for entry in run.entries[query_id]:
                handle.write(
                    f"{query_id} Q0 {entry.doc_id} {entry.rank} {entry.score:.10f} {entry.runtag}\n"
                )
                written += 1
    return written


def average_precision(
    ranking: Sequence[str],
    judgments: Mapping[str, Relevance],
    policy: PartialPolicy = PartialPolicy.STRICT,
) -> float:
    """Non-interpolated average precision of one ranked list.

    Relevant documents that were not retrieved contribute zero.

    Raises:
        NoRelevant: If no judged document is relevant under ``policy``.

    Example:
        >>> judgments = {"a": Relevance.RELEVANT, "b": Relevance.RELEVANT}
        >>> round(average_precision(["a", "x", "b"], judgments), 4)
        0.8333
    """
    relevant = {doc_id for doc_id, relevance in judgments.items() if policy.counts(relevance)}
    if not relevant:
        raise NoRelevant("Query has no relevant documents")
    hits = 0
    precisions = []
    for rank, doc_id in enumerate(ranking, start=1):
        if doc_id in relevant:
            hits += 1
            precisions.append(hits / rank)
    return math.fsum(precisions) / len(relevant)


def recall_precision_curve(
    ranking: Sequence[str],
    judgments: Mapping[str, Relevance],
    policy: PartialPolicy = PartialPolicy.STRICT,
) -> list[float]:
    """Interpolated precision at recall 0.0, 0.1, ..., 1.0.

    The precision at level r is the highest precision observed at any recall of
    at least r, or 0 when that recall is never reached.

    Raises:
        NoRelevant: If no judged document is relevant under ``policy``.
    """
    relevant = {doc_id for doc_id, relevance in judgments.items() if policy.counts(relevance)}
    if not relevant:
        raise NoRelevant("Query has no relevant documents")
    if not ranking:
        return [0.0] * len(RECALL_LEVELS)
    flags = np.fromiter((doc_id in relevant for doc_id in ranking), dtype=bool)
    hits = np.cumsum(flags)
    precision = hits / np.arange(1, len(ranking) + 1)
    recall = hits / len(relevant)
    best_from = np.maximum.accumulate(precision[::-1])[::-1]
    starts = np.searchsorted(recall, RECALL_LEVELS - 1e-12, side="left")
    return [float(best_from[i]) if i < len(ranking) else 0.0 for i in starts]


def average_curve(curves: Sequence[Sequence[float]]) -> list[float]:
    """Pointwise mean of 11-point curves."""
    if not curves:
        return [0.0] * len(RECALL_LEVELS)
    return [float(value) for value in np.mean(np.asarray(curves, dtype=float), axis=0)]


@dataclass
class EvaluationReport:
    average_precision: dict[str, float]
    mean_average_precision: float
    curves: dict[str, list[float]]
    pooled_curve: list[float]
    excluded: list[str]


def evaluate_run(
    run: Run, qrels: Qrels, policy: PartialPolicy = PartialPolicy.STRICT
) -> EvaluationReport:
    """Score every query that has at least one relevant document.

    Queries judged in the qrels but missing from the run score zero. Queries
    without relevant documents are excluded and reported.

    Raises:
        NoEvaluableQuery: If no query can be scored.
    """
    evaluable = [qid for qid in qrels.query_ids if qrels.relevant(qid, policy)]
    excluded = sorted((set(run.query_ids) | set(qrels.query_ids)) - set(evaluable))
    if not evaluable:
        raise NoEvaluableQuery("No query in the qrels has a relevant document")
    if excluded:
        logger.warning(f"Excluded {len(excluded)} queries without relevant documents")

    per_query = {}
    curves = {}
    for query_id in evaluable:
        ranking = run.ranking(query_id)
        judgments = qrels.judgments[query_id]
        per_query[query_id] = average_precision(ranking, judgments, policy)
        curves[query_id] = recall_precision_curve(ranking, judgments, policy)
    return EvaluationReport(
        average_precision=per_query,
        mean_average_precision=math.fsum(per_query.values()) / len(per_query),
        curves=curves,
        pooled_curve=average_curve(list(curves.values())),
        excluded=excluded,
    )


def mean_average_precision(
    run: Run, qrels: Qrels, policy: PartialPolicy = PartialPolicy.STRICT
) -> float:
    return evaluate_run(run, qrels, policy).mean_average_precision


def write_curves_csv(path: str | pathlib.Path, report: EvaluationReport) -> int:
    """Write ``query,recall,precision`` rows, the pooled curve under ``all``."""
    file_path = normalize_file_path(path)
    curves = [*sorted(report.curves.items()), ("all", report.pooled_curve)]
    with file_path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["query", "recall", "precision"])
        for query_id, curve in curves:
            for level, precision in zip(RECALL_LEVELS, curve, strict=True):
                writer.writerow([query_id, f"{level:.1f}", f"{precision:.4f}"])
    return len(curves) * len(RECALL_LEVELS)


def write_average_precision(path: str | pathlib.Path, report: EvaluationReport) -> int:
    rows = [(qid, f"{ap:.4f}") for qid, ap in sorted(report.average_precision.items())]
    rows.append(("all", f"{report.mean_average_precision:.4f}"))
    return write_tsv_rows(path, rows, header="# query\taverage_precision")
