"""Corpus analysis along the basic-to-clinical continuum.

The package streams PubMed baseline XML into light article records, labels
each article by which MeSH-derived term categories it mixes (animal, cell or
molecule, human), places it in a ternary triangle, links articles to drugs
by dictionary matching, and measures each drug's translational lag from its
earliest basic article to its earliest clinical one.

The usual flow mirrors the command-line stages:

    ingest  -> parse_baseline_file / write_records
    classify-> load_descriptors + classify_corpus
    link    -> load_lexicon + link_corpus
    analyze -> drug_timelines, lag_stats, corpus_distribution, annual series
    plot    -> classification_points + bin_points + render_svg
"""

from .analytics import (
    BASIC_LABELS,
    CLINICAL_LABELS,
    AnnualDrugSeries,
    AnnualSeries,
    CorpusDistribution,
    DrugTimeline,
    EmptyCorpusError,
    InsufficientDataError,
    LagStats,
    TimelineStats,
    annual_drug_series,
    annual_series,
    corpus_distribution,
    drug_timelines,
    lag_stats,
    status_counts,
    translated_lags,
    translation_rate,
)
from .classify import (
    LABELS,
    ArticleClassification,
    ClassificationStats,
    classify_article,
    classify_corpus,
    read_classifications,
    triangle_coords,
    type_label,
    write_classifications,
)
from .config import ConfigError, PipelineConfig, build_config, load_config_file
from .ingest import (
    ArticleRecord,
    BaselineParseError,
    DescriptorRef,
    IngestStats,
    parse_baseline_file,
    parse_baseline_stream,
    read_records,
    write_records,
)
from .linker import (
    DrugLexicon,
    DrugMention,
    LinkStats,
    article_mentions,
    find_mentions,
    link_corpus,
    load_lexicon,
    read_pairs,
    write_pairs,
)
from .mesh import (
    DEFAULT_RULES,
    CategoryRuleSet,
    MeshDescriptor,
    MeshIndex,
    descriptor_categories,
    load_descriptors,
    tree_number_categories,
)
from .triangle import (
    PlotOptions,
    TriangleBin,
    bin_points,
    classification_points,
    render_svg,
)

__version__ = "0.1.0"

__all__ = [
    "ArticleClassification",
    "ArticleRecord",
    "AnnualDrugSeries",
    "AnnualSeries",
    "BASIC_LABELS",
    "BaselineParseError",
    "CLINICAL_LABELS",
    "CategoryRuleSet",
    "ClassificationStats",
    "ConfigError",
    "CorpusDistribution",
    "DEFAULT_RULES",
    "DescriptorRef",
    "DrugLexicon",
    "DrugMention",
    "DrugTimeline",
    "EmptyCorpusError",
    "IngestStats",
    "InsufficientDataError",
    "LABELS",
    "LagStats",
    "LinkStats",
    "MeshDescriptor",
    "MeshIndex",
    "PipelineConfig",
    "PlotOptions",
    "TimelineStats",
    "TriangleBin",
    "annual_drug_series",
    "annual_series",
    "article_mentions",
    "bin_points",
    "build_config",
    "classification_points",
    "classify_article",
    "classify_corpus",
    "corpus_distribution",
    "descriptor_categories",
    "drug_timelines",
    "find_mentions",
    "lag_stats",
    "link_corpus",
    "load_config_file",
    "load_descriptors",
    "load_lexicon",
    "parse_baseline_file",
    "parse_baseline_stream",
    "read_classifications",
    "read_pairs",
    "read_records",
    "render_svg",
    "status_counts",
    "translated_lags",
    "translation_rate",
    "tree_number_categories",
    "triangle_coords",
    "type_label",
    "write_classifications",
    "write_pairs",
    "write_records",
]
