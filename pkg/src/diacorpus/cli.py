"""Command-line surface: ingest, analyze, embed, align, query, dict.

The CLI is a thin shell over the library: every report is produced by the
same functions a library caller would use, serialized with the same helpers,
so command output and library output are byte-identical. Reports carry no
timestamps and all iteration is ordered, so re-running a command over
unchanged inputs rewrites identical bytes.

Exit codes: 0 success, 1 internal error, 2 usage/parameter error,
3 missing artifact. Failures print a machine-readable JSON object
{"error": code, "message": ..., "context": {...}} on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import alignment as alignment_mod
from . import cbow as cbow_mod
from . import divergence as divergence_mod
from . import embeddings as embeddings_mod
from . import lexicon as lexicon_mod
from . import orthography as orthography_mod
from .corpus import (
    DiachronicCorpus,
    PeriodCorpus,
    TimePeriod,
    build_corpus_tree,
    load_manifest,
)
from .dictionary import (
    crossover_period,
    load_dictionary,
    load_sample_dictionary,
)
from .errors import (
    DiacorpusError,
    IngestError,
    MissingArtifactError,
    OutOfVocabularyError,
    ParameterError,
)
from .preprocess import FilterConfig, LookupAnalyzer, load_analyzer_tsv

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_MISSING_ARTIFACT = 3

STATS_FIELDS = (
    "The number of documents",
    "The number of words before filtering",
    "The number of words after filtering",
    "The number of unique surface level words",
    "The number of unique stems",
    "The number of unique stems after filtering",
    "Average token count per document",
)


@dataclass
class EmbeddingConfig:
    dim: int = 300
    window: int = 2
    alpha: float = 0.75
    negatives: int = 5
    downsample: float = 1e-5
    epochs: int = 5
    seed: int = 1


@dataclass
class RunConfig:
    """Resolved configuration of one CLI invocation."""

    corpus_root: Path
    output_dir: Path
    bucketing: list[TimePeriod] | None = None
    filter: FilterConfig = field(default_factory=FilterConfig)
    analyzer_tsv: Path | None = None
    ngram_orders: tuple[int, ...] = (1, 2, 3)
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    workers: int = 1

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParameterError(f"config {path} is not valid JSON: {exc}") from exc
        base = Path(path).parent
        if "corpus_root" not in raw or "output_dir" not in raw:
            raise ParameterError("config must set corpus_root and output_dir")

        def _resolve(p: str) -> Path:
            candidate = Path(p)
            return candidate if candidate.is_absolute() else base / candidate

        bucketing = None
        if raw.get("bucketing") not in (None, "decades"):
            bucketing = [TimePeriod(int(a), int(b)) for a, b in raw["bucketing"]]
        filter_cfg = FilterConfig(**raw.get("filter", {}))
        embedding = EmbeddingConfig(**raw.get("embedding", {}))
        analyzer_tsv = raw.get("analyzer_tsv")
        return cls(
            corpus_root=_resolve(raw["corpus_root"]),
            output_dir=_resolve(raw["output_dir"]),
            bucketing=bucketing,
            filter=filter_cfg,
            analyzer_tsv=_resolve(analyzer_tsv) if analyzer_tsv else None,
            ngram_orders=tuple(raw.get("ngram_orders", (1, 2, 3))),
            embedding=embedding,
            workers=int(raw.get("workers", 1)),
        )

    def analyzer(self) -> LookupAnalyzer | None:
        if self.analyzer_tsv is None:
            return None
        return load_analyzer_tsv(self.analyzer_tsv)


class _Lock:
    """One command at a time per output directory."""

    def __init__(self, output_dir: Path):
        self._path = output_dir / ".lock"
        self._acquired = False

    def __enter__(self) -> "_Lock":
        self._path.parent.mkdir(parents=True, exist_ok=True)
        try:
            fd = os.open(self._path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise DiacorpusError(
                f"another command holds the lock {self._path}; "
                "remove the file if no command is running"
            ) from None
        with os.fdopen(fd, "w") as fh:
            fh.write(str(os.getpid()))
        self._acquired = True
        return self

    def __exit__(self, *exc_info) -> None:
        if self._acquired:
            self._path.unlink(missing_ok=True)


def _write_text(path: Path, content: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")


def to_json(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=False) + "\n"


def ranking_to_json(ranking: list[tuple[str, float]]) -> str:
    return to_json([{"lemma": w, "cosine": v} for w, v in ranking])


def series_to_json(series) -> str:
    rows = []
    for period, value in series:
        row = {"period": period.label, "value": value}
        if value is None:
            row["oov"] = True
        rows.append(row)
    return to_json(rows)


def matrix_to_json(matrix) -> str:
    return to_json(
        {
            "metric": matrix.metric,
            "periods": [p.label for p in matrix.periods],
            "values": [[float(v) for v in row] for row in matrix.values],
        }
    )


def contributions_to_json(ranking) -> str:
    return to_json(
        [
            {
                "lemma": lemma,
                "contribution": value,
                "side": (ranking.period_a if value < 0 else ranking.period_b).label,
            }
            for lemma, value in ranking.pairs
        ]
    )


def _ingest_tree(config: RunConfig) -> DiachronicCorpus:
    records = load_manifest(config.corpus_root)
    return build_corpus_tree(
        records,
        config.bucketing,
        corpus_root=config.corpus_root,
        filter_config=config.filter,
        analyzer=config.analyzer(),
        workers=config.workers,
    )


def _stats_payload(tree: DiachronicCorpus) -> dict:
    periods = {}
    for leaf in tree.leaves():
        stats = leaf.stats
        assert stats is not None
        periods[leaf.period.label] = {
            STATS_FIELDS[0]: stats.document_count,
            STATS_FIELDS[1]: stats.token_count_raw,
            STATS_FIELDS[2]: stats.token_count_filtered,
            STATS_FIELDS[3]: stats.unique_surface_count,
            STATS_FIELDS[4]: stats.unique_lemma_count,
            STATS_FIELDS[5]: stats.unique_lemma_count_filtered,
            STATS_FIELDS[6]: stats.avg_tokens_per_document,
        }
    total_docs = sum(p[STATS_FIELDS[0]] for p in periods.values())
    total_raw = sum(p[STATS_FIELDS[1]] for p in periods.values())
    merged = lexicon_mod.merge_vocabulary(tree)
    total = {
        STATS_FIELDS[0]: total_docs,
        STATS_FIELDS[1]: total_raw,
        STATS_FIELDS[2]: sum(p[STATS_FIELDS[2]] for p in periods.values()),
        STATS_FIELDS[3]: sum(p[STATS_FIELDS[3]] for p in periods.values()),
        STATS_FIELDS[4]: sum(p[STATS_FIELDS[4]] for p in periods.values()),
        STATS_FIELDS[5]: len(merged.entries),
        STATS_FIELDS[6]: (total_raw / total_docs) if total_docs else 0.0,
    }
    return {
        "periods": periods,
        "total": total,
        "unbucketed_documents": [d.doc_id for d in tree.unbucketed_documents],
    }


def _stats_csv(payload: dict) -> str:
    lines = ["period," + ",".join(STATS_FIELDS)]
    rows = list(payload["periods"].items()) + [("total", payload["total"])]
    for label, fields in rows:
        rendered = [
            repr(fields[name]) if isinstance(fields[name], float) else str(fields[name])
            for name in STATS_FIELDS
        ]
        lines.append(f"{label}," + ",".join(rendered))
    return "\n".join(lines) + "\n"


def cmd_ingest(config: RunConfig, args: argparse.Namespace) -> int:
    tree = _ingest_tree(config)
    out = config.output_dir
    for leaf in tree.leaves():
        label = leaf.period.label
        lexicon_mod.write_vocabulary(leaf.vocabulary, out / "vocab" / f"{label}.lemma.tsv")
        lexicon_mod.write_vocabulary(
            leaf.surface_vocabulary, out / "vocab" / f"{label}.surface.tsv"
        )
        for order in config.ngram_orders:
            for level in lexicon_mod.LEVELS:
                table = lexicon_mod.create_ngrams(leaf, order, level)
                lexicon_mod.write_ngrams(
                    table, out / "ngrams" / f"{label}.n{order}.{level}.tsv"
                )
    payload = _stats_payload(tree)
    _write_text(out / "stats.json", to_json(payload))
    _write_text(out / "stats.csv", _stats_csv(payload))
    print(to_json({"ingested_periods": [l.period.label for l in tree.leaves()]}), end="")
    return EXIT_OK


def _load_vocab_artifacts(config: RunConfig, level: str = "lemma") -> DiachronicCorpus:
    """Rebuild a query-ready tree from the vocabulary files written by ingest."""
    vocab_dir = config.output_dir / "vocab"
    files = sorted(vocab_dir.glob(f"*.{level}.tsv")) if vocab_dir.is_dir() else []
    if not files:
        raise MissingArtifactError(
            f"no {level} vocabulary artifacts under {vocab_dir}", needed_command="ingest"
        )
    leaves = []
    for path in files:
        vocab = lexicon_mod.read_vocabulary(path, level=level)
        leaf = PeriodCorpus(vocab.period)
        leaf.lemma_sequences = []  # mark preprocessed; queries only need tables
        leaf.surface_sequences = []
        if level == "lemma":
            leaf.vocabulary = vocab
            surface_path = vocab_dir / f"{vocab.period.label}.surface.tsv"
            if surface_path.is_file():
                leaf.surface_vocabulary = lexicon_mod.read_vocabulary(
                    surface_path, level="surface"
                )
        else:
            leaf.surface_vocabulary = vocab
            lemma_path = vocab_dir / f"{vocab.period.label}.lemma.tsv"
            if lemma_path.is_file():
                leaf.vocabulary = lexicon_mod.read_vocabulary(lemma_path, level="lemma")
        leaves.append(leaf)
    return DiachronicCorpus(leaves)


def _parse_periods(labels: list[str] | None) -> list[TimePeriod] | None:
    if not labels:
        return None
    return [TimePeriod.parse(label) for label in labels]


def cmd_analyze(config: RunConfig, args: argparse.Namespace) -> int:
    reports = config.output_dir / "reports"
    periods = _parse_periods(args.periods)
    tree = _load_vocab_artifacts(config)
    if args.analysis == "divergence":
        jaccard = divergence_mod.jaccard_matrix(tree, periods)
        jsd = divergence_mod.jsd_matrix(tree, periods)
        written = []
        for matrix, name in ((jaccard, "jaccard"), (jsd, "jsd")):
            _write_text(reports / f"{name}.csv", matrix.to_csv())
            _write_text(reports / f"{name}.json", matrix_to_json(matrix))
            written += [f"{name}.csv", f"{name}.json"]
        if args.pair:
            a, b = (TimePeriod.parse(p) for p in args.pair)
            ranking = divergence_mod.contributions_between(tree, a, b, args.top_k)
            name = f"jsd_contributions_{a.label}_{b.label}"
            _write_text(reports / f"{name}.csv", ranking.to_csv())
            _write_text(reports / f"{name}.json", contributions_to_json(ranking))
            written += [f"{name}.csv", f"{name}.json"]
        print(to_json({"written": [reports.joinpath(n).as_posix() for n in written]}), end="")
    elif args.analysis == "survived":
        if not args.base_period:
            raise ParameterError("survived analysis needs --base-period")
        base = TimePeriod.parse(args.base_period)
        series = divergence_mod.survived_words(tree, base, periods)
        csv_text = divergence_mod.series_to_csv(series, "survived_words")
        _write_text(reports / f"survived_{base.label}.csv", csv_text)
        _write_text(reports / f"survived_{base.label}.json", series_to_json(series))
        print(series_to_json(series), end="")
    elif args.analysis == "ortho":
        for pair_class in args.classes:
            csv_text = orthography_mod.ending_ratio_csv(tree, pair_class, periods)
            _write_text(reports / f"ortho_ratio_{pair_class}.csv", csv_text)
            rows = orthography_mod.ending_ratio_rows(tree, pair_class, periods)
            _write_text(
                reports / f"ortho_ratio_{pair_class}.json",
                to_json(
                    [
                        {
                            "period": period.label,
                            "class": pair_class,
                            "soft_total": soft,
                            "hard_total": hard,
                            "ratio": ratio,
                        }
                        for period, soft, hard, ratio in rows
                    ]
                ),
            )
        _write_text(
            reports / "circumflex.csv", orthography_mod.circumflex_csv(tree, periods)
        )
        raw, per_million = orthography_mod.circumflex_frequency(tree, periods)
        _write_text(
            reports / "circumflex.json",
            to_json(
                [
                    {"period": period.label, "raw": count, "per_million": rate}
                    for (period, count), (_, rate) in zip(raw, per_million)
                ]
            ),
        )
        print(to_json({"classes": list(args.classes)}), end="")
    elif args.analysis == "dict-crossover":
        entries = (
            load_dictionary(Path(args.dictionary))
            if args.dictionary
            else load_sample_dictionary()
        )
        lines = ["modern,old,crossover_period"]
        results = []
        for entry in entries:
            for old in entry.old_forms:
                period = crossover_period(tree, entry.modern, old, periods, mode=args.mode)
                label = period.label if period else "none"
                lines.append(f"{entry.modern},{old},{label}")
                results.append({"modern": entry.modern, "old": old, "crossover": label})
        _write_text(reports / "crossover.csv", "\n".join(lines) + "\n")
        _write_text(reports / "crossover.json", to_json(results))
        print(to_json(results), end="")
    elif args.analysis == "freq":
        if not args.word:
            raise ParameterError("freq analysis needs --word")
        series = lexicon_mod.frequency(tree, args.word, periods, normalize=args.normalize)
        column = "normalized_frequency" if args.normalize else "frequency"
        csv_text = divergence_mod.series_to_csv(series, column)
        _write_text(reports / f"freq_{args.word}.csv", csv_text)
        _write_text(reports / f"freq_{args.word}.json", series_to_json(series))
        print(series_to_json(series), end="")
    else:  # pragma: no cover - argparse restricts choices
        raise ParameterError(f"unknown analysis {args.analysis!r}")
    return EXIT_OK


def _embedding_path(config: RunConfig, period: TimePeriod, kind: str) -> Path:
    return config.output_dir / "embeddings" / f"{period.label}.{kind}.vec"


def cmd_embed(config: RunConfig, args: argparse.Namespace) -> int:
    tree = _ingest_tree(config)
    cfg = config.embedding
    out = config.output_dir
    written = []
    for leaf in tree.leaves():
        label = leaf.period.label
        if args.kind == "ppmi":
            ppmi = embeddings_mod.ensure_ppmi(leaf, cfg.window, cfg.alpha)
            path = out / "ppmi" / f"{label}.tsv"
            path.parent.mkdir(parents=True, exist_ok=True)
            embeddings_mod.write_ppmi(ppmi, path)
        elif args.kind == "svd":
            ppmi = embeddings_mod.ensure_ppmi(leaf, cfg.window, cfg.alpha)
            word_set, _ = embeddings_mod.svd_embeddings(ppmi, cfg.dim)
            path = _embedding_path(config, leaf.period, "svd")
            path.parent.mkdir(parents=True, exist_ok=True)
            embeddings_mod.write_embeddings(word_set, path)
        elif args.kind == "cbow":
            seed = args.seed if args.seed is not None else cfg.seed
            word_set = cbow_mod.train_cbow(
                leaf,
                dim=cfg.dim,
                window=cfg.window,
                negatives=cfg.negatives,
                downsample=cfg.downsample,
                smoothing_alpha=cfg.alpha,
                seed=seed,
                epochs=cfg.epochs,
            )
            path = _embedding_path(config, leaf.period, "cbow")
            path.parent.mkdir(parents=True, exist_ok=True)
            embeddings_mod.write_embeddings(word_set, path)
        else:  # pragma: no cover - argparse restricts choices
            raise ParameterError(f"unknown embedding kind {args.kind!r}")
        written.append(path.as_posix())
    print(to_json({"written": written}), end="")
    return EXIT_OK


def _read_embedding_artifact(config: RunConfig, period: TimePeriod, kind: str):
    path = _embedding_path(config, period, kind)
    if not path.is_file():
        raise MissingArtifactError(
            f"no {kind} embeddings for period {period.label} at {path}",
            needed_command=f"embed {kind}",
        )
    return embeddings_mod.read_embeddings(path)


def _transform_path(config: RunConfig, source: TimePeriod, target: TimePeriod, kind: str) -> Path:
    return (
        config.output_dir
        / "transforms"
        / f"{source.label}__to__{target.label}.{kind}.txt"
    )


def cmd_align(config: RunConfig, args: argparse.Namespace) -> int:
    source = TimePeriod.parse(args.source)
    target = TimePeriod.parse(args.target)
    if source == target:
        raise ParameterError("alignment needs two distinct periods")
    source_set = _read_embedding_artifact(config, source, args.kind)
    target_set = _read_embedding_artifact(config, target, args.kind)
    transform = alignment_mod.procrustes_align(source_set, target_set)
    path = _transform_path(config, source, target, args.kind)
    path.parent.mkdir(parents=True, exist_ok=True)
    alignment_mod.write_transform(transform, path)
    print(to_json({"written": path.as_posix(), "shared_words": len(transform.shared_vocab)}), end="")
    return EXIT_OK


def _read_transform_artifact(config: RunConfig, source: TimePeriod, target: TimePeriod, kind: str):
    path = _transform_path(config, source, target, kind)
    if not path.is_file():
        raise MissingArtifactError(
            f"no transform {source.label}->{target.label} at {path}",
            needed_command=f"align --from {source.label} --to {target.label}",
        )
    return alignment_mod.read_transform(path)


def cmd_query(config: RunConfig, args: argparse.Namespace) -> int:
    reports = config.output_dir / "reports"
    if args.query in ("most-similar", "collocations") and not args.period:
        raise ParameterError(f"{args.query} needs --period")
    if args.query == "aligned-most-similar" and not (args.target and args.base):
        raise ParameterError("aligned-most-similar needs --target and --base")
    if args.query == "most-similar":
        period = TimePeriod.parse(args.period)
        embedding_set = _read_embedding_artifact(config, period, args.kind)
        ranking = embeddings_mod.most_similar(args.word, args.top_k, embedding_set)
        text = ranking_to_json(ranking)
        _write_text(reports / f"most_similar_{args.word}_{period.label}.json", text)
        print(text, end="")
    elif args.query == "aligned-most-similar":
        target = TimePeriod.parse(args.target)
        base = TimePeriod.parse(args.base)
        target_set = _read_embedding_artifact(config, target, args.kind)
        base_set = _read_embedding_artifact(config, base, args.kind)
        transform = _read_transform_artifact(config, target, base, args.kind)
        ranking = alignment_mod.aligned_most_similar(
            args.word, args.top_k, target_set, base_set, transform
        )
        text = ranking_to_json(ranking)
        _write_text(
            reports / f"aligned_most_similar_{args.word}_{target.label}_{base.label}.json",
            text,
        )
        print(text, end="")
    elif args.query == "semantic-change":
        periods = _parse_periods(args.periods)
        if not periods:
            raise ParameterError("semantic-change needs --periods")
        sets = [_read_embedding_artifact(config, p, args.kind) for p in periods]
        ordered = sorted(sets, key=lambda s: s.period)
        transforms = [
            _read_transform_artifact(config, ordered[i + 1].period, ordered[i].period, args.kind)
            for i in range(len(ordered) - 1)
        ]
        series = alignment_mod.semantic_change(args.word, ordered, transforms)
        text = series_to_json(series)
        _write_text(reports / f"semantic_change_{args.word}.json", text)
        print(text, end="")
    elif args.query == "collocations":
        period = TimePeriod.parse(args.period)
        ppmi_path = config.output_dir / "ppmi" / f"{period.label}.tsv"
        if not ppmi_path.is_file():
            raise MissingArtifactError(
                f"no association matrix for period {period.label} at {ppmi_path}",
                needed_command="embed ppmi",
            )
        vocab_path = config.output_dir / "vocab" / f"{period.label}.lemma.tsv"
        if not vocab_path.is_file():
            raise MissingArtifactError(
                f"no vocabulary for period {period.label} at {vocab_path}",
                needed_command="ingest",
            )
        vocab = lexicon_mod.read_vocabulary(vocab_path)
        ppmi = embeddings_mod.read_ppmi(ppmi_path, vocab)
        ranking = embeddings_mod.collocations(args.word, args.top_k, ppmi)
        text = to_json([{"lemma": w, "association": v} for w, v in ranking])
        _write_text(reports / f"collocations_{args.word}_{period.label}.json", text)
        print(text, end="")
    else:  # pragma: no cover - argparse restricts choices
        raise ParameterError(f"unknown query {args.query!r}")
    return EXIT_OK


def cmd_dict(config: RunConfig, args: argparse.Namespace) -> int:
    entries = (
        load_dictionary(Path(args.dictionary)) if args.dictionary else load_sample_dictionary()
    )
    payload = {
        "entries": len(entries),
        "pairs": sum(len(e.old_forms) for e in entries),
        "headwords": [e.modern for e in entries],
    }
    print(to_json(payload), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diacorpus", description="Diachronic corpus analytics toolkit"
    )
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--output-dir", help="override the configured output directory")
    parser.add_argument("--seed", type=int, default=None, help="override the embedding seed")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", help="build the corpus tree and write vocabularies and stats")

    analyze = sub.add_parser("analyze", help="run a vocabulary-level analysis")
    analyze.add_argument(
        "analysis", choices=["divergence", "survived", "ortho", "dict-crossover", "freq"]
    )
    analyze.add_argument("--periods", nargs="*", help="period labels restricting the range")
    analyze.add_argument("--base-period", help="base period for survived-word counts")
    analyze.add_argument("--word", help="word for freq analysis")
    analyze.add_argument("--normalize", action="store_true", help="normalize frequencies")
    analyze.add_argument(
        "--classes", nargs="*", default=list(orthography_mod.DEFAULT_CLASSES),
        help="variant pair classes for ortho analysis",
    )
    analyze.add_argument("--dictionary", help="replacement dictionary JSON (default: bundled sample)")
    analyze.add_argument(
        "--mode", choices=["sustained", "first-touch"], default="sustained",
        help="crossover definition",
    )
    analyze.add_argument("--pair", nargs=2, metavar=("PERIOD_A", "PERIOD_B"),
                         help="emit per-word divergence contributions for this period pair")
    analyze.add_argument("--top-k", type=int, default=20)

    embed = sub.add_parser("embed", help="build embedding artifacts per period")
    embed.add_argument("kind", choices=["ppmi", "svd", "cbow"])

    align = sub.add_parser("align", help="fit a cross-period alignment transform")
    align.add_argument("--from", dest="source", required=True, help="source period label")
    align.add_argument("--to", dest="target", required=True, help="target period label")
    align.add_argument("--kind", choices=["svd", "cbow"], default="svd")

    query = sub.add_parser("query", help="ranked similarity and change queries")
    query.add_argument(
        "query",
        choices=["most-similar", "aligned-most-similar", "semantic-change", "collocations"],
    )
    query.add_argument("--word", required=True)
    query.add_argument("--top-k", type=int, default=10)
    query.add_argument("--period", help="period label for single-period queries")
    query.add_argument("--target", help="target period for aligned queries")
    query.add_argument("--base", help="base period for aligned queries")
    query.add_argument("--periods", nargs="*", help="period labels for semantic change")
    query.add_argument("--kind", choices=["svd", "cbow"], default="svd")

    dict_cmd = sub.add_parser("dict", help="validate and summarize a replacement dictionary")
    dict_cmd.add_argument("--dictionary", help="dictionary JSON path (default: bundled sample)")

    return parser


_COMMANDS = {
    "ingest": cmd_ingest,
    "analyze": cmd_analyze,
    "embed": cmd_embed,
    "align": cmd_align,
    "query": cmd_query,
    "dict": cmd_dict,
}


def _error_json(code: int, message: str, context: dict) -> str:
    return json.dumps(
        {"error": code, "message": message, "context": context}, ensure_ascii=False
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        config = RunConfig.from_file(args.config)
        if args.output_dir:
            config.output_dir = Path(args.output_dir)
        handler = _COMMANDS[args.command]
        with _Lock(config.output_dir):
            return handler(config, args)
    except MissingArtifactError as exc:
        context = {"command": args.command}
        if exc.needed_command:
            context["run_first"] = exc.needed_command
        print(_error_json(EXIT_MISSING_ARTIFACT, str(exc), context), file=sys.stderr)
        return EXIT_MISSING_ARTIFACT
    except (ParameterError, IngestError, OutOfVocabularyError) as exc:
        print(
            _error_json(EXIT_USAGE, str(exc), {"command": args.command}), file=sys.stderr
        )
        return EXIT_USAGE
    except DiacorpusError as exc:
        print(
            _error_json(EXIT_INTERNAL, str(exc), {"command": args.command}), file=sys.stderr
        )
        return EXIT_INTERNAL


def console_main() -> None:  # pragma: no cover - thin process wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    console_main()
