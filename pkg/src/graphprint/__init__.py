"""Graph fingerprints from walk counts and anchored label refinement."""

from __future__ import annotations

from .formats import FormatError, UnsupportedFeatureError, parse_graph, serialize_graph
from .graph import Graph, GraphError, NamedGraph, complement, glue_pair
from .slabel import (
    Fingerprint,
    Interner,
    fingerprint,
    fingerprint_s,
    fingerprint_t,
    refine,
    s_equivalent,
    t_equivalent,
    tuple_label,
)
from .walks import canonical_w_label, cospectral, trace_vector, w_equivalent

__version__ = "0.1.0"

__all__ = [
    "FormatError",
    "UnsupportedFeatureError",
    "parse_graph",
    "serialize_graph",
    "Graph",
    "GraphError",
    "NamedGraph",
    "complement",
    "glue_pair",
    "Fingerprint",
    "Interner",
    "fingerprint",
    "fingerprint_s",
    "fingerprint_t",
    "refine",
    "s_equivalent",
    "t_equivalent",
    "tuple_label",
    "canonical_w_label",
    "cospectral",
    "trace_vector",
    "w_equivalent",
]
