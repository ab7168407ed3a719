"""Period-bucketed corpus tree and the operation-dispatch contract.

A corpus is a tree: ``PeriodCorpus`` leaves hold the documents of one time
period, ``DiachronicCorpus`` composites group children covering disjoint,
ascending periods. Analyses are ``Operation`` objects dispatched through
``node.perform(op)``: the node calls back into ``op.on_period`` or
``op.on_diachronic`` according to its own type, so an operation defines one
behavior per node kind and composites recurse over their children.

The tree is immutable after ``build_corpus_tree``; query operations are
read-only. Creator helpers (vocabulary, matrices, embeddings) cache their
result on the leaf and must be serialized externally per leaf.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from abc import ABC, abstractmethod
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterator, Sequence

from .errors import IngestError, MissingArtifactError, ParameterError
from .preprocess import (
    FilterConfig,
    MorphAnalyzer,
    filter_vocabulary,
    lemma_surfaces,
    normalize_text,
    token_surfaces,
    turkish_lower,
)

if TYPE_CHECKING:  # pragma: no cover - import cycle guard for annotations only
    from .embeddings import CooccurrenceMatrix, EmbeddingSet, PPMIMatrix
    from .lexicon import NgramTable, Vocabulary

_PERIOD_LABEL = re.compile(r"^(\d{1,4})-(\d{1,4})$")


@dataclass(frozen=True, order=True)
class TimePeriod:
    """An inclusive span of Gregorian years, e.g. 1930-1939."""

    start_year: int
    end_year: int

    def __post_init__(self) -> None:
        if self.start_year > self.end_year:
            raise ParameterError(
                f"period start {self.start_year} is after end {self.end_year}"
            )

    @property
    def label(self) -> str:
        return f"{self.start_year}-{self.end_year}"

    def contains(self, year: int) -> bool:
        return self.start_year <= year <= self.end_year

    def overlaps(self, other: "TimePeriod") -> bool:
        return self.start_year <= other.end_year and other.start_year <= self.end_year

    @classmethod
    def parse(cls, label: str) -> "TimePeriod":
        m = _PERIOD_LABEL.match(label)
        if not m:
            raise ParameterError(f"cannot parse period label {label!r} (expected START-END)")
        return cls(int(m.group(1)), int(m.group(2)))


@dataclass(frozen=True)
class DocumentRecord:
    """Manifest entry for one plain-text document."""

    doc_id: str
    date: dt.date
    source: str
    path: str


@dataclass
class CorpusStats:
    """Descriptive statistics of one period leaf, filled during ingestion."""

    document_count: int = 0
    token_count_raw: int = 0
    token_count_filtered: int = 0
    unique_surface_count: int = 0
    unique_lemma_count: int = 0
    unique_lemma_count_filtered: int = 0
    avg_tokens_per_document: float = 0.0


@dataclass
class TimeSeriesResult:
    """Uniform result shape of diachronic operations: one value per period.

    ``value_kind`` is one of count | ratio | frequency | set | matrix-row.
    Entries are kept sorted by period start year; a value of None marks a
    period where the quantity is undefined (e.g. an out-of-vocabulary word).
    """

    entries: list[tuple[TimePeriod, Any]]
    value_kind: str = "count"

    def periods(self) -> list[TimePeriod]:
        return [p for p, _ in self.entries]

    def values(self) -> list[Any]:
        return [v for _, v in self.entries]

    def value_for(self, period: TimePeriod) -> Any:
        for p, v in self.entries:
            if p == period:
                return v
        raise ParameterError(f"no entry for period {period.label}")

    def __iter__(self) -> Iterator[tuple[TimePeriod, Any]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


class Operation(ABC):
    """Base class for analyses run through the corpus tree.

    Subclasses implement one behavior per node kind. ``value_kind`` labels
    the entries of time-series results assembled by the default composite
    traversal.
    """

    value_kind = "count"

    @abstractmethod
    def on_period(self, corpus: "PeriodCorpus") -> Any:
        ...

    @abstractmethod
    def on_diachronic(self, corpus: "DiachronicCorpus") -> Any:
        ...


class PerPeriodOperation(Operation):
    """An operation whose composite behavior is per-leaf concatenation in period order."""

    def on_diachronic(self, corpus: "DiachronicCorpus") -> TimeSeriesResult:
        entries: list[tuple[TimePeriod, Any]] = []
        for child in corpus.children:
            result = child.perform(self)
            if isinstance(result, TimeSeriesResult):
                entries.extend(result.entries)
            else:
                entries.append((child.period, result))
        return TimeSeriesResult(entries=entries, value_kind=self.value_kind)


class CorpusNode(ABC):
    """Common interface of leaves and composites."""

    period: TimePeriod

    @abstractmethod
    def perform(self, op: Operation) -> Any:
        ...

    @abstractmethod
    def leaves(self) -> list["PeriodCorpus"]:
        ...


class PeriodCorpus(CorpusNode):
    """Leaf corpus: the documents of one time period plus cached artifacts."""

    def __init__(self, period: TimePeriod, documents: Sequence[DocumentRecord] = ()):
        self.period = period
        self.documents: list[DocumentRecord] = list(documents)
        self.stats: CorpusStats | None = None
        self.filter_config: FilterConfig | None = None
        # Per-document token sequences; surfaces are case-folded, lemmas are
        # analyzer output or F5 stems. Both include every raw token.
        self.surface_sequences: list[list[str]] | None = None
        self.lemma_sequences: list[list[str]] | None = None
        self.vocabulary: "Vocabulary | None" = None
        self.surface_vocabulary: "Vocabulary | None" = None
        self.ngram_tables: dict[tuple[int, str], "NgramTable"] = {}
        self.cooccurrence: dict[int, "CooccurrenceMatrix"] = {}
        self.ppmi: dict[tuple[int, float], "PPMIMatrix"] = {}
        self.embedding_sets: dict[str, "EmbeddingSet"] = {}

    def perform(self, op: Operation) -> Any:
        return op.on_period(self)

    def leaves(self) -> list["PeriodCorpus"]:
        return [self]

    @property
    def is_preprocessed(self) -> bool:
        return self.lemma_sequences is not None

    def require_preprocessed(self) -> None:
        if not self.is_preprocessed:
            raise MissingArtifactError(
                f"period {self.period.label} has not been preprocessed", needed_command="ingest"
            )

    def require_vocabulary(self) -> "Vocabulary":
        if self.vocabulary is None:
            raise MissingArtifactError(
                f"no vocabulary built for period {self.period.label}", needed_command="ingest"
            )
        return self.vocabulary

    @classmethod
    def from_texts(
        cls,
        period: TimePeriod,
        texts: dict[str, str],
        filter_config: FilterConfig = FilterConfig(),
        analyzer: MorphAnalyzer | None = None,
    ) -> "PeriodCorpus":
        """Build and ingest a leaf directly from in-memory document texts."""
        docs = [
            DocumentRecord(doc_id=doc_id, date=dt.date(period.start_year, 1, 1), source="inline", path="")
            for doc_id in texts
        ]
        leaf = cls(period, docs)
        _ingest_leaf(leaf, [texts[d.doc_id] for d in docs], filter_config, analyzer)
        return leaf


class DiachronicCorpus(CorpusNode):
    """Composite node spanning the union of its children's periods."""

    def __init__(self, children: Sequence[CorpusNode]):
        if not children:
            raise ParameterError("a diachronic corpus needs at least one child")
        ordered = sorted(children, key=lambda c: (c.period.start_year, c.period.end_year))
        for left, right in zip(ordered, ordered[1:]):
            if left.period.overlaps(right.period):
                raise ParameterError(
                    f"child periods overlap: {left.period.label} and {right.period.label}"
                )
        self.children: list[CorpusNode] = list(ordered)
        self.period = TimePeriod(ordered[0].period.start_year, ordered[-1].period.end_year)
        self.unbucketed_documents: list[DocumentRecord] = []

    def perform(self, op: Operation) -> Any:
        return op.on_diachronic(self)

    def leaves(self) -> list[PeriodCorpus]:
        out: list[PeriodCorpus] = []
        for child in self.children:
            out.extend(child.leaves())
        return out

    def __iter__(self) -> Iterator[CorpusNode]:
        return iter(self.children)

    def select(self, periods: Sequence[TimePeriod]) -> "DiachronicCorpus":
        """A view composite over the leaves matching the given periods."""
        return DiachronicCorpus(select_leaves(self, periods))


def select_leaves(
    node: CorpusNode, periods: Sequence[TimePeriod] | None = None
) -> list[PeriodCorpus]:
    """Leaves of ``node`` restricted to ``periods`` (all leaves when None).

    Raises ParameterError if a requested period has no leaf.
    """
    leaves = node.leaves()
    if periods is None:
        return leaves
    by_period = {leaf.period: leaf for leaf in leaves}
    out = []
    for period in periods:
        if period not in by_period:
            raise ParameterError(f"no corpus leaf for period {period.label}")
        out.append(by_period[period])
    return sorted(out, key=lambda l: l.period)


def decade_bucket(year: int) -> TimePeriod:
    """The calendar decade containing ``year``: floor(year/10)*10 .. +9."""
    start = (year // 10) * 10
    return TimePeriod(start, start + 9)


def parse_manifest(content: str | list[dict]) -> list[DocumentRecord]:
    """Parse manifest JSON (text or already-parsed list) into document records."""
    if isinstance(content, str):
        try:
            raw = json.loads(content)
        except json.JSONDecodeError as exc:
            raise IngestError(f"manifest is not valid JSON: {exc}") from exc
    else:
        raw = content
    if not isinstance(raw, list):
        raise IngestError("manifest must be a JSON array of document entries")
    records: list[DocumentRecord] = []
    seen: set[str] = set()
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise IngestError(f"manifest entry {i} is not an object")
        try:
            doc_id = entry["id"]
            date_text = entry["date"]
            source = entry.get("source", "")
            path = entry["path"]
        except KeyError as exc:
            raise IngestError(f"manifest entry {i} misses required key {exc}") from exc
        if doc_id in seen:
            raise IngestError(f"duplicate document id {doc_id!r} in manifest")
        seen.add(doc_id)
        try:
            date = dt.date.fromisoformat(date_text)
        except ValueError as exc:
            raise IngestError(f"document {doc_id!r}: cannot parse date {date_text!r}") from exc
        records.append(DocumentRecord(doc_id=doc_id, date=date, source=source, path=path))
    if not records:
        raise IngestError("manifest lists no documents")
    return records


def load_manifest(corpus_root: str | Path) -> list[DocumentRecord]:
    """Read ``manifest.json`` from a corpus root directory."""
    root = Path(corpus_root)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise IngestError(f"no manifest.json under {root}")
    return parse_manifest(manifest_path.read_text(encoding="utf-8"))


def _preprocess_document(raw: str, analyzer: MorphAnalyzer | None) -> tuple[list[str], list[str], list[str]]:
    """One document's (raw surfaces, folded surfaces, lemmas)."""
    surfaces = token_surfaces(normalize_text(raw))
    folded = [turkish_lower(s) for s in surfaces]
    lemmas = lemma_surfaces(surfaces, analyzer)
    return surfaces, folded, lemmas


def _ingest_leaf(
    leaf: PeriodCorpus,
    raw_texts: Sequence[str],
    filter_config: FilterConfig,
    analyzer: MorphAnalyzer | None,
    workers: int = 1,
) -> None:
    """Preprocess a leaf's documents and populate stats, sequences and vocabularies."""
    from .lexicon import Vocabulary  # deferred: lexicon imports corpus types

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            processed = list(pool.map(lambda t: _preprocess_document(t, analyzer), raw_texts))
    else:
        processed = [_preprocess_document(t, analyzer) for t in raw_texts]

    raw_surface_types: set[str] = set()
    folded_sequences: list[list[str]] = []
    lemma_sequences: list[list[str]] = []
    lemma_counts: Counter[str] = Counter()
    surface_counts: Counter[str] = Counter()
    n_raw = 0
    for surfaces, folded, lemmas in processed:
        raw_surface_types.update(surfaces)
        folded_sequences.append(folded)
        lemma_sequences.append(lemmas)
        lemma_counts.update(lemmas)
        surface_counts.update(folded)
        n_raw += len(surfaces)

    filtered_lemmas = filter_vocabulary(lemma_counts, n_raw, filter_config)
    filtered_surfaces = filter_vocabulary(surface_counts, n_raw, filter_config)

    leaf.filter_config = filter_config
    leaf.surface_sequences = folded_sequences
    leaf.lemma_sequences = lemma_sequences
    leaf.vocabulary = Vocabulary(
        period=leaf.period,
        entries=filtered_lemmas,
        token_total=sum(filtered_lemmas.values()),
        level="lemma",
    )
    leaf.surface_vocabulary = Vocabulary(
        period=leaf.period,
        entries=filtered_surfaces,
        token_total=sum(filtered_surfaces.values()),
        level="surface",
    )
    docs = len(raw_texts)
    leaf.stats = CorpusStats(
        document_count=docs,
        token_count_raw=n_raw,
        token_count_filtered=leaf.vocabulary.token_total,
        unique_surface_count=len(raw_surface_types),
        unique_lemma_count=len(lemma_counts),
        unique_lemma_count_filtered=len(filtered_lemmas),
        avg_tokens_per_document=(n_raw / docs) if docs else 0.0,
    )


def build_corpus_tree(
    manifest: Sequence[DocumentRecord] | str | list[dict],
    bucketing: Sequence[TimePeriod] | None = None,
    *,
    corpus_root: str | Path | None = None,
    filter_config: FilterConfig = FilterConfig(),
    analyzer: MorphAnalyzer | None = None,
    workers: int = 1,
) -> DiachronicCorpus:
    """Ingest documents into a preprocessed two-level corpus tree.

    Documents are assigned to buckets by publication year. With the default
    bucketing, each observed year falls into its calendar decade; an explicit
    bucket list may leave documents unassigned, which are collected on the
    returned root's ``unbucketed_documents`` rather than silently dropped.
    Leaves carry populated stats and filtered vocabularies on return.
    """
    if isinstance(manifest, (str, list)) and not (
        manifest and isinstance(manifest[0], DocumentRecord)
    ):
        records = parse_manifest(manifest)  # type: ignore[arg-type]
    else:
        records = list(manifest)  # type: ignore[arg-type]
    if not records:
        raise IngestError("manifest lists no documents")

    if bucketing is None:
        buckets = sorted({decade_bucket(r.date.year) for r in records})
    else:
        buckets = sorted(bucketing)
        for left, right in zip(buckets, buckets[1:]):
            if left.overlaps(right):
                raise ParameterError(
                    f"bucketing periods overlap: {left.label} and {right.label}"
                )

    assigned: dict[TimePeriod, list[DocumentRecord]] = {b: [] for b in buckets}
    unbucketed: list[DocumentRecord] = []
    for record in records:
        for bucket in buckets:
            if bucket.contains(record.date.year):
                assigned[bucket].append(record)
                break
        else:
            unbucketed.append(record)

    root_dir = Path(corpus_root) if corpus_root is not None else None
    children: list[PeriodCorpus] = []
    for bucket in buckets:
        docs = assigned[bucket]
        if not docs:
            continue
        leaf = PeriodCorpus(bucket, docs)
        texts = []
        for doc in docs:
            path = Path(doc.path)
            if root_dir is not None:
                path = root_dir / path
            try:
                texts.append(path.read_text(encoding="utf-8"))
            except OSError as exc:
                raise IngestError(f"cannot read document {doc.doc_id!r}: {exc}") from exc
        _ingest_leaf(leaf, texts, filter_config, analyzer, workers=workers)
        children.append(leaf)

    if not children:
        raise IngestError("no document fell into any bucket")
    tree = DiachronicCorpus(children)
    tree.unbucketed_documents = unbucketed
    return tree
