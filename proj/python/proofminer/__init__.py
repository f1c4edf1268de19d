"""Recurrent clustering and clustering-based premiss selection for proof libraries.

Library arguments are JSON documents as text (see docs/format.md); results
are plain dicts and lists.
"""

from ._core import (
    CheckerFailure,
    Error,
    GranularityRange,
    ParseError,
    TargetNotClustered,
    TypeResolutionError,
    canonical_library,
    choose_k,
    cluster,
    features,
    inspect,
    kmeans,
    object_value,
    sort_value,
    suggest,
    suggest_with_command,
)

__all__ = [
    "CheckerFailure",
    "Error",
    "GranularityRange",
    "ParseError",
    "TargetNotClustered",
    "TypeResolutionError",
    "canonical_library",
    "choose_k",
    "cluster",
    "features",
    "inspect",
    "kmeans",
    "object_value",
    "sort_value",
    "suggest",
    "suggest_with_command",
]
