"""Per-period vocabularies, n-gram tables, and count/frequency/pattern queries.

Vocabularies are lemma-level by default; a case-folded surface-level table is
kept alongside for n-grams and the writing-convention analyses. All queries
here are read-only over tables created at ingest time.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import (
    CorpusNode,
    DiachronicCorpus,
    PeriodCorpus,
    PerPeriodOperation,
    TimePeriod,
    TimeSeriesResult,
    select_leaves,
)
from .errors import MissingArtifactError, ParameterError

NGRAM_ORDERS = (1, 2, 3)
LEVELS = ("surface", "lemma")


@dataclass
class Vocabulary:
    """Filtered word-frequency table of one period.

    ``token_total`` is the number of corpus tokens whose word survived
    filtering, so normalized frequencies over the entries sum to one.
    """

    period: TimePeriod
    entries: dict[str, int]
    token_total: int
    level: str = "lemma"

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def frequency(self, word: str) -> int:
        return self.entries.get(word, 0)

    def normalized_frequency(self, word: str) -> float:
        if self.token_total == 0:
            return 0.0
        return self.entries.get(word, 0) / self.token_total

    def merged_with(self, other: "Vocabulary") -> "Vocabulary":
        if other.level != self.level:
            raise ParameterError("cannot merge vocabularies of different levels")
        merged = Counter(self.entries)
        merged.update(other.entries)
        period = TimePeriod(
            min(self.period.start_year, other.period.start_year),
            max(self.period.end_year, other.period.end_year),
        )
        return Vocabulary(
            period=period,
            entries=dict(merged),
            token_total=self.token_total + other.token_total,
            level=self.level,
        )


@dataclass
class NgramTable:
    """Exact n-gram counts of one period at one level (surface or lemma)."""

    period: TimePeriod
    order: int
    entries: dict[tuple[str, ...], int]
    level: str = "lemma"

    def total(self) -> int:
        return sum(self.entries.values())


def _vocabulary_for_level(leaf: PeriodCorpus, level: str) -> Vocabulary:
    if level == "lemma":
        return leaf.require_vocabulary()
    if level == "surface":
        if leaf.surface_vocabulary is None:
            raise MissingArtifactError(
                f"no surface vocabulary for period {leaf.period.label}", needed_command="ingest"
            )
        return leaf.surface_vocabulary
    raise ParameterError(f"unknown level {level!r} (expected surface or lemma)")


def create_vocabulary(leaf: PeriodCorpus, level: str = "lemma") -> Vocabulary:
    """Return the leaf's filtered vocabulary, requiring prior preprocessing."""
    leaf.require_preprocessed()
    return _vocabulary_for_level(leaf, level)


def create_ngrams(leaf: PeriodCorpus, order: int, level: str = "lemma") -> NgramTable:
    """Build (and cache) the sliding-window n-gram table of one leaf.

    Windows never cross document boundaries, and an n-gram is counted only if
    every member survived vocabulary filtering.
    """
    if order not in NGRAM_ORDERS:
        raise ParameterError(f"n-gram order must be one of {NGRAM_ORDERS}, got {order}")
    leaf.require_preprocessed()
    cached = leaf.ngram_tables.get((order, level))
    if cached is not None:
        return cached
    vocab = _vocabulary_for_level(leaf, level).entries
    sequences = leaf.lemma_sequences if level == "lemma" else leaf.surface_sequences
    counts: Counter[tuple[str, ...]] = Counter()
    for seq in sequences or []:
        for i in range(len(seq) - order + 1):
            gram = tuple(seq[i : i + order])
            if all(w in vocab for w in gram):
                counts[gram] += 1
    table = NgramTable(period=leaf.period, order=order, entries=dict(counts), level=level)
    leaf.ngram_tables[(order, level)] = table
    return table


# ---------------------------------------------------------------------------
# Operations (dispatched through the corpus tree)
# ---------------------------------------------------------------------------


class Exists(PerPeriodOperation):
    """Per-period membership of a word in the filtered vocabulary."""

    value_kind = "count"

    def __init__(self, word: str, level: str = "lemma"):
        self.word = word
        self.level = level

    def on_period(self, corpus: PeriodCorpus) -> bool:
        return self.word in _vocabulary_for_level(corpus, self.level).entries


class Frequency(PerPeriodOperation):
    """Per-period frequency of a word, raw or normalized by the token total."""

    def __init__(self, word: str, normalize: bool = False, level: str = "lemma"):
        self.word = word
        self.normalize = normalize
        self.level = level
        self.value_kind = "frequency" if normalize else "count"

    def on_period(self, corpus: PeriodCorpus):
        vocab = _vocabulary_for_level(corpus, self.level)
        if self.normalize:
            return vocab.normalized_frequency(self.word)
        return vocab.frequency(self.word)


class UniqueWordCount(PerPeriodOperation):
    value_kind = "count"

    def __init__(self, level: str = "lemma"):
        self.level = level

    def on_period(self, corpus: PeriodCorpus) -> int:
        return len(_vocabulary_for_level(corpus, self.level).entries)


class AverageWordLength(PerPeriodOperation):
    """Mean character length over the unique words of each period (type-level)."""

    value_kind = "ratio"

    def __init__(self, level: str = "lemma"):
        self.level = level

    def on_period(self, corpus: PeriodCorpus) -> float:
        entries = _vocabulary_for_level(corpus, self.level).entries
        if not entries:
            return 0.0
        return sum(len(w) for w in entries) / len(entries)


class NgramCount(PerPeriodOperation):
    """Per-period total n-gram occurrences (sum of table frequencies)."""

    value_kind = "count"

    def __init__(self, order: int, level: str = "lemma"):
        if order not in NGRAM_ORDERS:
            raise ParameterError(f"n-gram order must be one of {NGRAM_ORDERS}, got {order}")
        self.order = order
        self.level = level

    def on_period(self, corpus: PeriodCorpus) -> int:
        table = corpus.ngram_tables.get((self.order, self.level))
        if table is None:
            raise MissingArtifactError(
                f"no order-{self.order} {self.level} n-gram table for period "
                f"{corpus.period.label}",
                needed_command="ingest",
            )
        return table.total()


class WordsMatching(PerPeriodOperation):
    """Per-period sets of vocabulary words matching a prefix/suffix/substring pattern."""

    value_kind = "set"

    def __init__(self, kind: str, pattern: str, level: str = "lemma"):
        if kind not in ("prefix", "suffix", "substring"):
            raise ParameterError(f"unknown match kind {kind!r}")
        if not pattern:
            raise ParameterError("match pattern must be non-empty")
        self.kind = kind
        self.pattern = pattern
        self.level = level

    def on_period(self, corpus: PeriodCorpus) -> set[str]:
        entries = _vocabulary_for_level(corpus, self.level).entries
        if self.kind == "prefix":
            return {w for w in entries if w.startswith(self.pattern)}
        if self.kind == "suffix":
            return {w for w in entries if w.endswith(self.pattern)}
        return {w for w in entries if self.pattern in w}


class MorphemeFrequency(PerPeriodOperation):
    """Per-period usage rate of a character pattern, per million filtered tokens.

    Occurrences are counted inside each vocabulary word (non-overlapping) and
    weighted by the word's token frequency.
    """

    value_kind = "frequency"

    def __init__(self, pattern: str, level: str = "lemma", per_million: bool = True):
        if not pattern:
            raise ParameterError("morpheme pattern must be non-empty")
        self.pattern = pattern
        self.level = level
        self.per_million = per_million
        self.value_kind = "frequency" if per_million else "count"

    def on_period(self, corpus: PeriodCorpus):
        vocab = _vocabulary_for_level(corpus, self.level)
        raw = sum(word.count(self.pattern) * freq for word, freq in vocab.entries.items())
        if not self.per_million:
            return raw
        if vocab.token_total == 0:
            return None
        return raw / vocab.token_total * 1_000_000


class CoFrequency(PerPeriodOperation):
    """Per-period co-occurrence count of a word pair under the window rule."""

    value_kind = "count"

    def __init__(self, word_u: str, word_v: str, window: int = 2):
        self.word_u = word_u
        self.word_v = word_v
        self.window = window

    def on_period(self, corpus: PeriodCorpus) -> int:
        matrix = corpus.cooccurrence.get(self.window)
        if matrix is None:
            raise MissingArtifactError(
                f"no window-{self.window} co-occurrence matrix for period "
                f"{corpus.period.label}",
                needed_command="embed ppmi",
            )
        return matrix.pair_count(self.word_u, self.word_v)


class MergeVocabulary(PerPeriodOperation):
    """Entry-wise merge of the vocabularies under a node."""

    def __init__(self, level: str = "lemma"):
        self.level = level

    def on_period(self, corpus: PeriodCorpus) -> Vocabulary:
        return _vocabulary_for_level(corpus, self.level)

    def on_diachronic(self, corpus: DiachronicCorpus) -> Vocabulary:
        merged: Vocabulary | None = None
        for child in corpus.children:
            vocab = child.perform(self)
            merged = vocab if merged is None else merged.merged_with(vocab)
        assert merged is not None  # composites are non-empty by construction
        return merged


# ---------------------------------------------------------------------------
# Range-query helpers (thin wrappers over the operations above)
# ---------------------------------------------------------------------------


def _ranged(node: CorpusNode, periods: Sequence[TimePeriod] | None) -> CorpusNode:
    if periods is None:
        return node
    return DiachronicCorpus(select_leaves(node, periods))


def exists(
    node: CorpusNode, word: str, periods: Sequence[TimePeriod] | None = None
) -> TimeSeriesResult:
    result = _ranged(node, periods).perform(Exists(word))
    if not isinstance(result, TimeSeriesResult):
        result = TimeSeriesResult([(node.period, result)], value_kind="count")
    return result


def frequency(
    node: CorpusNode,
    word: str,
    periods: Sequence[TimePeriod] | None = None,
    normalize: bool = False,
) -> TimeSeriesResult:
    op = Frequency(word, normalize=normalize)
    result = _ranged(node, periods).perform(op)
    if not isinstance(result, TimeSeriesResult):
        result = TimeSeriesResult([(node.period, result)], value_kind=op.value_kind)
    return result


def merge_vocabulary(
    node: CorpusNode, periods: Sequence[TimePeriod] | None = None, level: str = "lemma"
) -> Vocabulary:
    return _ranged(node, periods).perform(MergeVocabulary(level))


def common_words(
    node: CorpusNode, periods: Sequence[TimePeriod] | None = None, level: str = "lemma"
) -> set[str]:
    """Words present in every period of the range (set intersection)."""
    leaves = select_leaves(node, periods)
    sets = [set(_vocabulary_for_level(leaf, level).entries) for leaf in leaves]
    out = sets[0].copy()
    for s in sets[1:]:
        out &= s
    return out


def vocab_metrics(
    node: CorpusNode,
    periods: Sequence[TimePeriod] | None = None,
    ngram_order: int = 1,
    level: str = "lemma",
) -> dict:
    """Bundle of per-period vocabulary metrics plus range-wide common words."""
    scoped = _ranged(node, periods)
    return {
        "unique_word_count": scoped.perform(UniqueWordCount(level)),
        "average_word_length": scoped.perform(AverageWordLength(level)),
        "ngram_count": scoped.perform(NgramCount(ngram_order, level)),
        "common_words": common_words(node, periods, level),
    }


def words_matching(
    node: CorpusNode,
    kind: str,
    pattern: str,
    periods: Sequence[TimePeriod] | None = None,
    level: str = "lemma",
) -> TimeSeriesResult:
    result = _ranged(node, periods).perform(WordsMatching(kind, pattern, level))
    if not isinstance(result, TimeSeriesResult):
        result = TimeSeriesResult([(node.period, result)], value_kind="set")
    return result


def morpheme_frequency(
    node: CorpusNode,
    pattern: str,
    periods: Sequence[TimePeriod] | None = None,
    per_million: bool = True,
    level: str = "lemma",
) -> TimeSeriesResult:
    op = MorphemeFrequency(pattern, level=level, per_million=per_million)
    result = _ranged(node, periods).perform(op)
    if not isinstance(result, TimeSeriesResult):
        result = TimeSeriesResult([(node.period, result)], value_kind=op.value_kind)
    return result


def cofrequency(
    node: CorpusNode,
    word_u: str,
    word_v: str,
    periods: Sequence[TimePeriod] | None = None,
    window: int = 2,
) -> TimeSeriesResult:
    result = _ranged(node, periods).perform(CoFrequency(word_u, word_v, window))
    if not isinstance(result, TimeSeriesResult):
        result = TimeSeriesResult([(node.period, result)], value_kind="count")
    return result


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def _header_line(period: TimePeriod, token_total: int) -> str:
    return f"#period={period.label} #tokens={token_total}"


def write_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    """TSV export: header line, then lemma<TAB>frequency, frequency-descending."""
    lines = [_header_line(vocab.period, vocab.token_total)]
    for word, freq in sorted(vocab.entries.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"{word}\t{freq}")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_vocabulary(path: str | Path, level: str = "lemma") -> Vocabulary:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#period="):
        raise ParameterError(f"{path}: not a vocabulary file (missing header)")
    head = dict(part.split("=", 1) for part in lines[0].lstrip("#").split(" #"))
    period = TimePeriod.parse(head["period"])
    token_total = int(head["tokens"])
    entries: dict[str, int] = {}
    for line in lines[1:]:
        if not line:
            continue
        word, freq = line.split("\t")
        entries[word] = int(freq)
    return Vocabulary(period=period, entries=entries, token_total=token_total, level=level)


def write_ngrams(table: NgramTable, path: str | Path) -> None:
    """TSV export: header line, then space-joined gram<TAB>frequency."""
    lines = [_header_line(table.period, table.total())]
    for gram, freq in sorted(table.entries.items(), key=lambda kv: (-kv[1], kv[0])):
        lines.append(f"{' '.join(gram)}\t{freq}")
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_ngrams(path: str | Path, order: int, level: str = "lemma") -> NgramTable:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#period="):
        raise ParameterError(f"{path}: not an n-gram file (missing header)")
    head = dict(part.split("=", 1) for part in lines[0].lstrip("#").split(" #"))
    period = TimePeriod.parse(head["period"])
    entries: dict[tuple[str, ...], int] = {}
    for line in lines[1:]:
        if not line:
            continue
        gram_text, freq = line.split("\t")
        gram = tuple(gram_text.split(" "))
        if len(gram) != order:
            raise ParameterError(f"{path}: gram {gram_text!r} does not have order {order}")
        entries[gram] = int(freq)
    return NgramTable(period=period, order=order, entries=entries, level=level)
