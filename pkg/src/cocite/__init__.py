"""Data co-citation networks: bipartite citation graphs, weighted projections,
structural metrics, overlapping and disjoint communities, and
crossroads/subdivision roles."""

__version__ = "0.1.0"

from .errors import (CociteError, InfeasibleError, ParameterError, ParseError,  # noqa: E402
                     UndefinedMetricError, UnknownNodeError, ValidationError)
from .graph import BipartiteGraph, Graph  # noqa: E402

__all__ = [
    "BipartiteGraph", "CociteError", "Graph", "InfeasibleError", "ParameterError", "ParseError",
    "UndefinedMetricError", "UnknownNodeError", "ValidationError", "__version__",
]
