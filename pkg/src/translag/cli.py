"""Command-line pipeline: ingest, classify, link, analyze, plot, pipeline.

Each stage reads its predecessor's artifact from the output directory and
writes its own through a temp file renamed into place on success, so a
failed stage leaves the previous artifact untouched and its partial output
quarantined under the .tmp name. Reruns over unchanged inputs are
byte-identical: every iteration order is fixed and no stage uses the clock
or unseeded randomness.

Exit codes: 0 success, 1 usage or configuration, 2 data error, 3 I/O.
"""

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from . import analytics, classify, ingest, linker, triangle
from .config import CONFIG_KEYS, ConfigError, PipelineConfig, build_config, load_config_file
from .ingest import BaselineParseError, IngestStats, RecordFormatError, RecordWriteError
from .linker import LexiconFormatError, PairFormatError
from .mesh import MeshCodeError, MeshFormatError, load_descriptors

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

ARTIFACTS = {
    "articles": "articles.jsonl",
    "classifications": "classifications.jsonl",
    "pairs": "pairs.tsv",
    "distribution": "distribution.tsv",
    "annual_articles": "annual_articles.tsv",
    "annual_drugs": "annual_drugs.tsv",
    "timelines": "timelines.tsv",
    "summary": "summary.json",
    "triangle": "triangle.svg",
}

_PRODUCED_BY = {
    "articles.jsonl": "ingest",
    "classifications.jsonl": "classify",
    "pairs.tsv": "link",
}


class MissingArtifactError(Exception):
    """A stage input that an earlier subcommand should have produced is absent."""


def _artifact(config: PipelineConfig, name: str) -> Path:
    return config.out_dir / ARTIFACTS[name]


def _require_artifact(config: PipelineConfig, name: str) -> Path:
    path = _artifact(config, name)
    if not path.is_file():
        producer = _PRODUCED_BY[ARTIFACTS[name]]
        raise MissingArtifactError(
            f"missing {path}; run `translag {producer}` first to produce it"
        )
    return path


@contextmanager
def _atomic_write(path: Path, mode: str = "w"):
    """Write to path.tmp, renaming over path only on success.

    On failure the partial .tmp file is left behind for inspection and the
    previous artifact, if any, stays intact.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    handle = open(tmp, mode, encoding="utf-8", newline="\n")
    try:
        yield handle
    except BaseException:
        handle.close()
        raise
    handle.close()
    os.replace(tmp, path)


def _require_config_paths(config: PipelineConfig, *names: str) -> None:
    for name in names:
        value = getattr(config, name)
        if value is None or (name == "inputs" and not value):
            flag = name.replace("_", "-")
            raise ConfigError(f"{name} is required for this command (set it in the config file or pass --{flag})")


def _status(message: str) -> None:
    print(message, file=sys.stderr)


# --- stages ------------------------------------------------------------------


def cmd_ingest(config: PipelineConfig) -> None:
    _require_config_paths(config, "inputs")
    out_path = _artifact(config, "articles")
    stats = IngestStats()
    written = 0
    with _atomic_write(out_path) as sink:
        if config.workers > 1 and len(config.inputs) > 1:
            # File-level parallelism buffers whole files; the default
            # single-worker path streams record by record instead.
            def parse_one(path: Path):
                local = IngestStats()
                return list(ingest.parse_baseline_file(path, stats=local)), local

            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                for records, local in pool.map(parse_one, config.inputs):
                    written += ingest.write_records(records, sink)
                    stats.merge(local)
        else:
            for path in config.inputs:
                written += ingest.write_records(
                    ingest.parse_baseline_file(path, stats=stats), sink
                )
    _status(
        f"ingest: {written} records from {len(config.inputs)} file(s), "
        f"{stats.skipped_missing_pmid} skipped -> {out_path}"
    )


def cmd_classify(config: PipelineConfig) -> None:
    _require_config_paths(config, "mesh_file")
    articles_path = _require_artifact(config, "articles")
    index = load_descriptors(config.mesh_file, rules=config.rules)
    out_path = _artifact(config, "classifications")
    stats = classify.ClassificationStats()
    with open(articles_path, "r", encoding="utf-8") as source:
        with _atomic_write(out_path) as sink:
            classifications = classify.classify_corpus(
                ingest.read_records(source), index, stats, config.normalized_coords
            )
            written = classify.write_classifications(classifications, sink)
    _status(
        f"classify: {written} articles against {len(index)} descriptors, "
        f"{stats.unknown_descriptors} unknown descriptor references -> {out_path}"
    )


def cmd_link(config: PipelineConfig) -> None:
    out_path = _artifact(config, "pairs")
    if config.pairs is not None:
        # Drop-in pair file from an external extractor: validate and normalize.
        pairs = list(linker.read_pairs(config.pairs))
        with _atomic_write(out_path) as sink:
            written = linker.write_pairs(pairs, sink)
        _status(f"link: adopted {written} pairs from {config.pairs} -> {out_path}")
        return
    _require_config_paths(config, "lexicon")
    articles_path = _require_artifact(config, "articles")
    lexicon = linker.load_lexicon(config.lexicon)
    stats = linker.LinkStats()
    with open(articles_path, "r", encoding="utf-8") as source:
        with _atomic_write(out_path) as sink:
            written = linker.write_pairs(
                linker.link_corpus(ingest.read_records(source), lexicon, stats), sink
            )
    _status(
        f"link: {written} pairs across {stats.linked_articles} of {stats.articles} "
        f"articles ({len(lexicon)} lexicon entries) -> {out_path}"
    )


def cmd_analyze(config: PipelineConfig) -> None:
    classifications_path = _require_artifact(config, "classifications")
    pairs_path = _require_artifact(config, "pairs")
    with open(classifications_path, "r", encoding="utf-8") as source:
        classifications = list(classify.read_classifications(source))
    pairs = list(linker.read_pairs(pairs_path))

    drug_pmids = {pmid for pmid, _ in pairs}
    drug_related = [cls for cls in classifications if cls.pmid in drug_pmids]
    whole_corpus_size = config.corpus_size or len(classifications)
    distribution = analytics.corpus_distribution(drug_related, whole_corpus_size)

    timeline_stats = analytics.TimelineStats()
    timelines = analytics.drug_timelines(
        pairs, classifications, config.basic_set, config.clinical_set, timeline_stats
    )
    lags = analytics.translated_lags(timelines)
    lag_summary: Optional[analytics.LagStats] = None
    if len(lags) >= 2:
        lag_summary = analytics.lag_stats(lags)

    with _atomic_write(_artifact(config, "distribution")) as sink:
        analytics.write_distribution_tsv(distribution, sink)
    with _atomic_write(_artifact(config, "annual_articles")) as sink:
        analytics.write_annual_articles_tsv(
            analytics.annual_series(drug_related, config.window), sink
        )
    with _atomic_write(_artifact(config, "annual_drugs")) as sink:
        analytics.write_annual_drugs_tsv(
            analytics.annual_drug_series(timelines, config.window), sink
        )
    with _atomic_write(_artifact(config, "timelines")) as sink:
        analytics.write_timelines_tsv(timelines, sink)

    summary = analytics.build_summary(timelines, lag_summary, timeline_stats)
    summary["articles"] = {
        "classified": len(classifications),
        "drug_related": len(drug_related),
        "whole_corpus_size": whole_corpus_size,
    }
    with _atomic_write(_artifact(config, "summary")) as sink:
        json.dump(summary, sink, indent=2)
        sink.write("\n")
    _status(
        f"analyze: {len(timelines)} drugs, {len(lags)} translated, "
        f"{len(drug_related)} drug-related articles -> {config.out_dir}"
    )


def cmd_plot(config: PipelineConfig) -> None:
    classifications_path = _require_artifact(config, "classifications")
    with open(classifications_path, "r", encoding="utf-8") as source:
        points = list(triangle.classification_points(classify.read_classifications(source)))
    bins = triangle.bin_points(points, resolution=config.resolution)
    svg = triangle.render_svg(bins, config.plot_options)
    out_path = _artifact(config, "triangle")
    with _atomic_write(out_path) as sink:
        sink.write(svg)
    _status(f"plot: {len(bins)} bins from {len(points)} articles -> {out_path}")


def cmd_pipeline(config: PipelineConfig) -> None:
    cmd_ingest(config)
    cmd_classify(config)
    cmd_link(config)
    cmd_analyze(config)
    cmd_plot(config)


COMMANDS = {
    "ingest": cmd_ingest,
    "classify": cmd_classify,
    "link": cmd_link,
    "analyze": cmd_analyze,
    "plot": cmd_plot,
    "pipeline": cmd_pipeline,
}

_STAGE_HELP = {
    "ingest": "parse baseline XML files into articles.jsonl",
    "classify": "label articles and compute triangle coordinates",
    "link": "match drug mentions (or adopt --pairs) into pairs.tsv",
    "analyze": "write distribution, annual series, timelines, and summary",
    "plot": "render classifications as triangle.svg",
    "pipeline": "run every stage in order",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, metavar="FILE", help="key = value configuration file")
    paths = common.add_argument_group("paths")
    paths.add_argument("--input", action="append", dest="inputs", metavar="XML", help="baseline XML file (repeatable)")
    paths.add_argument("--mesh-file", dest="mesh_file", metavar="FILE", help="MeSH descriptor file (XML or ASCII)")
    paths.add_argument("--lexicon", metavar="TSV", help="drug lexicon: drug_id<TAB>form1|form2|...")
    paths.add_argument("--pairs", metavar="TSV", help="adopt an existing pmid<TAB>drug_id pair file")
    paths.add_argument("--out-dir", dest="out_dir", metavar="DIR", help="artifact directory (default: out)")
    analysis = common.add_argument_group("analysis")
    analysis.add_argument("--year-start", dest="year_start", metavar="YEAR")
    analysis.add_argument("--year-end", dest="year_end", metavar="YEAR")
    analysis.add_argument("--basic-set", dest="basic_set", metavar="LABELS", help="comma-separated basic labels")
    analysis.add_argument("--clinical-set", dest="clinical_set", metavar="LABELS", help="comma-separated clinical labels")
    analysis.add_argument("--corpus-size", dest="corpus_size", metavar="N", help="whole-corpus denominator for percentages")
    rules = common.add_argument_group("category rules")
    for key in ("c-prefixes", "h-prefixes", "a-prefixes", "a-exceptions"):
        rules.add_argument(f"--{key}", dest=key.replace("-", "_"), metavar="CODES", help="comma-separated tree numbers")
    plot = common.add_argument_group("plot")
    plot.add_argument("--resolution", metavar="N", help="grid cells per unit (default 100)")
    plot.add_argument("--r-min", dest="r_min", metavar="PX")
    plot.add_argument("--r-max", dest="r_max", metavar="PX")
    plot.add_argument("--width", metavar="PX")
    plot.add_argument("--height", metavar="PX")
    plot.add_argument("--margin", metavar="PX")
    common.add_argument("--normalized-coords", dest="normalized_coords", metavar="BOOL",
                        help="true (count fractions, default) or false (raw count sums)")
    common.add_argument("--workers", metavar="N", help="file-level parallelism for ingest")

    parser = argparse.ArgumentParser(
        prog="translag",
        description="Classify articles along the basic-to-clinical continuum, "
        "link them to drugs, and measure translational lag.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="subcommand")
    for name, handler in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=_STAGE_HELP[name])
    return parser


def _effective_config(args: argparse.Namespace) -> PipelineConfig:
    file_values = load_config_file(args.config) if args.config else {}
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key in CONFIG_KEYS and value is not None
    }
    return build_config(file_values, overrides)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return EXIT_OK if code == 0 else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        config = _effective_config(args)
        COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"translag: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MissingArtifactError, BaselineParseError, MeshFormatError, MeshCodeError,
            RecordFormatError, LexiconFormatError, PairFormatError, ValueError) as exc:
        print(f"translag: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except RecordWriteError as exc:
        print(f"translag: I/O error after {exc.written} records: {exc.cause}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"translag: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
