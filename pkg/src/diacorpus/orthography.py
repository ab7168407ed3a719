"""Writing-convention trends: final-consonant variant ratios and circumflex use.

Loanwords may be spelled with a soft final consonant (-b, -d) or its hard
counterpart (-p, -t). Pairs are detected in the merged all-period vocabulary
so a form extinct in one period still pairs, and the per-period ratio of
soft-form to hard-form token frequency tracks the spelling shift. The -c/-ç
and -g/-k classes exist but are not part of the default analysis set because
such endings are rare.

The ending analysis runs over surface forms by default, since stemming can
canonicalize final consonants and mask exactly the variation being measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .corpus import CorpusNode, TimePeriod, TimeSeriesResult, select_leaves
from .errors import ComputationUndefinedError, ParameterError
from .lexicon import Vocabulary, create_vocabulary, merge_vocabulary

PAIR_CLASSES: dict[str, tuple[str, str]] = {
    "b-p": ("b", "p"),
    "d-t": ("d", "t"),
    "c-ç": ("c", "ç"),
    "g-k": ("g", "k"),
    "g-ğ": ("g", "ğ"),
}
DEFAULT_CLASSES = ("b-p", "d-t")

# "et" is an auxiliary verb whose sheer frequency would swamp the d-t ratio.
DEFAULT_EXCLUSIONS = frozenset({"et"})

CIRCUMFLEX_LETTERS = frozenset("âîûÂÎÛ")


@dataclass(frozen=True)
class VariantPair:
    """Two spellings identical except for the final soft/hard consonant."""

    soft_form: str
    hard_form: str
    pair_class: str

    def __post_init__(self) -> None:
        soft, hard = PAIR_CLASSES[self.pair_class]
        if not self.soft_form.endswith(soft) or not self.hard_form.endswith(hard):
            raise ParameterError(
                f"pair ({self.soft_form}, {self.hard_form}) does not match class {self.pair_class}"
            )
        if self.soft_form[:-1] != self.hard_form[:-1]:
            raise ParameterError(
                f"pair ({self.soft_form}, {self.hard_form}) differs beyond the final letter"
            )


def detect_variant_pairs(
    vocab: Vocabulary,
    pair_class: str,
    exclusions: frozenset[str] = DEFAULT_EXCLUSIONS,
) -> list[VariantPair]:
    """Find soft/hard spelling pairs present in a (merged) vocabulary.

    Each pair is emitted exactly once, soft form first. A pair is skipped
    when either of its forms is excluded.
    """
    if pair_class not in PAIR_CLASSES:
        raise ParameterError(
            f"unknown pair class {pair_class!r}; expected one of {sorted(PAIR_CLASSES)}"
        )
    soft_letter, hard_letter = PAIR_CLASSES[pair_class]
    words = vocab.entries
    pairs = []
    for word in sorted(words):
        if not word.endswith(soft_letter):
            continue
        counterpart = word[:-1] + hard_letter
        if counterpart not in words:
            continue
        if word in exclusions or counterpart in exclusions:
            continue
        pairs.append(VariantPair(soft_form=word, hard_form=counterpart, pair_class=pair_class))
    return pairs


def ending_ratio_rows(
    node: CorpusNode,
    pair_class: str,
    periods: Sequence[TimePeriod] | None = None,
    level: str = "surface",
    weighting: str = "tokens",
    exclusions: frozenset[str] = DEFAULT_EXCLUSIONS,
) -> list[tuple[TimePeriod, int, int, float | None]]:
    """Per-period (soft_total, hard_total, ratio) over the detected pairs.

    With ``weighting`` "tokens" the totals sum token frequencies; "types"
    counts how many pair members occur at all. Ratio is None where the hard
    side is absent.
    """
    if weighting not in ("tokens", "types"):
        raise ParameterError(f"unknown weighting {weighting!r}")
    merged = merge_vocabulary(node, periods=None, level=level)
    pairs = detect_variant_pairs(merged, pair_class, exclusions)
    if not pairs:
        raise ComputationUndefinedError(
            f"no {pair_class} variant pairs detected in the merged vocabulary"
        )
    rows = []
    for leaf in select_leaves(node, periods):
        vocab = create_vocabulary(leaf, level=level)
        if weighting == "tokens":
            soft_total = sum(vocab.frequency(p.soft_form) for p in pairs)
            hard_total = sum(vocab.frequency(p.hard_form) for p in pairs)
        else:
            soft_total = sum(1 for p in pairs if p.soft_form in vocab)
            hard_total = sum(1 for p in pairs if p.hard_form in vocab)
        ratio = soft_total / hard_total if hard_total else None
        rows.append((leaf.period, soft_total, hard_total, ratio))
    return rows


def ending_ratio(
    node: CorpusNode,
    pair_class: str,
    periods: Sequence[TimePeriod] | None = None,
    level: str = "surface",
    weighting: str = "tokens",
    exclusions: frozenset[str] = DEFAULT_EXCLUSIONS,
) -> TimeSeriesResult:
    rows = ending_ratio_rows(node, pair_class, periods, level, weighting, exclusions)
    return TimeSeriesResult(
        entries=[(period, ratio) for period, _, _, ratio in rows], value_kind="ratio"
    )


def ending_ratio_csv(
    node: CorpusNode,
    pair_class: str,
    periods: Sequence[TimePeriod] | None = None,
    level: str = "surface",
    weighting: str = "tokens",
    exclusions: frozenset[str] = DEFAULT_EXCLUSIONS,
) -> str:
    lines = ["period,class,soft_total,hard_total,ratio"]
    for period, soft_total, hard_total, ratio in ending_ratio_rows(
        node, pair_class, periods, level, weighting, exclusions
    ):
        rendered = "" if ratio is None else repr(ratio)
        lines.append(f"{period.label},{pair_class},{soft_total},{hard_total},{rendered}")
    return "\n".join(lines) + "\n"


def circumflex_frequency(
    node: CorpusNode,
    periods: Sequence[TimePeriod] | None = None,
    letters: frozenset[str] = CIRCUMFLEX_LETTERS,
    level: str = "lemma",
) -> tuple[TimeSeriesResult, TimeSeriesResult]:
    """Circumflexed-letter occurrences per period: (raw counts, per million tokens).

    Occurrences inside each vocabulary word are weighted by the word's token
    frequency. The per-million series is None for a period with no tokens.
    """
    raw_entries: list[tuple[TimePeriod, int]] = []
    rate_entries: list[tuple[TimePeriod, float | None]] = []
    for leaf in select_leaves(node, periods):
        vocab = create_vocabulary(leaf, level=level)
        raw = sum(
            sum(1 for ch in word if ch in letters) * freq
            for word, freq in vocab.entries.items()
        )
        raw_entries.append((leaf.period, raw))
        if vocab.token_total:
            rate_entries.append((leaf.period, raw / vocab.token_total * 1_000_000))
        else:
            rate_entries.append((leaf.period, None))
    return (
        TimeSeriesResult(entries=raw_entries, value_kind="count"),
        TimeSeriesResult(entries=rate_entries, value_kind="frequency"),
    )


def circumflex_csv(
    node: CorpusNode,
    periods: Sequence[TimePeriod] | None = None,
    letters: frozenset[str] = CIRCUMFLEX_LETTERS,
    level: str = "lemma",
) -> str:
    raw, per_million = circumflex_frequency(node, periods, letters, level)
    lines = ["period,circumflex_raw,circumflex_per_million"]
    for (period, count), (_, rate) in zip(raw, per_million):
        rendered = "" if rate is None else repr(rate)
        lines.append(f"{period.label},{count},{rendered}")
    return "\n".join(lines) + "\n"
