"""docfacets: faceted exploration of heterogeneous document collections.

Ingests a directory tree, tags every document along topic, mention, format,
location, time and author axes (keyword extraction, LDA topic clusters,
linear classifiers, information-gain term mining, expression matching), and
answers combined text+facet queries with per-facet value counts.
"""

__version__ = "0.1.0"

from .facetindex import FacetIndex, FacetQuery, FacetResult
from .ingest import Document, IngestConfig, IngestReport, walk_and_extract
from .kera import KeraOptions, build_tag_cloud, extract_keywords
from .mentions import MentionSpec, parse_mention_spec, scan_document
from .supervised import LabeledSet, LinearModel, information_gain
from .textproc import Phrase, Token, tag_pos, tokenize
from .topics import TopicModelState, assign_topics, fit_lda

__all__ = [
    "__version__",
    "Document",
    "FacetIndex",
    "FacetQuery",
    "FacetResult",
    "IngestConfig",
    "IngestReport",
    "KeraOptions",
    "LabeledSet",
    "LinearModel",
    "MentionSpec",
    "Phrase",
    "Token",
    "TopicModelState",
    "assign_topics",
    "build_tag_cloud",
    "extract_keywords",
    "fit_lda",
    "information_gain",
    "parse_mention_spec",
    "scan_document",
    "tag_pos",
    "tokenize",
    "walk_and_extract",
]
