"""Template extraction from mutually linked pages of a website.

Starting from a key page, find a small set of pages that link to each other
(usually the pages behind the site menu), then keep the part of the key
page's DOM that maps top-down onto every one of them.
"""

from .cs import CliqueResult, SiteGraph, find_n_cs, maximal_cs_with
from .dom import DomNode, DomTree, ParseError, SliceError, extract_links, parse_html, serialize_slice
from .equality import ConfigError, EqualityConfig, nodes_equal, similarity
from .etdm import Mapping, PreconditionError, Template, compute_etdm, extract_template, refine
from .loaders import CorpusLoader, HttpLoader, LoadError, MemoryLoader, PageLoader
from .pipeline import RunReport, run
from .urls import normalize_url, registrable_domain

__version__ = "0.1.0"

__all__ = [
    "CliqueResult",
    "ConfigError",
    "CorpusLoader",
    "DomNode",
    "DomTree",
    "EqualityConfig",
    "HttpLoader",
    "LoadError",
    "Mapping",
    "MemoryLoader",
    "PageLoader",
    "ParseError",
    "PreconditionError",
    "RunReport",
    "SiteGraph",
    "SliceError",
    "Template",
    "compute_etdm",
    "extract_links",
    "extract_template",
    "find_n_cs",
    "maximal_cs_with",
    "nodes_equal",
    "normalize_url",
    "parse_html",
    "refine",
    "registrable_domain",
    "run",
    "serialize_slice",
    "similarity",
]
