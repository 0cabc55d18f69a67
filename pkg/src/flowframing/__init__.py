"""Framing triangulations and framing posets of strongly planar flow polytopes."""

from .embedded_dag import EmbeddedDag, Edge, Vertex, validate_strong_planarity
from .errors import FramingError, InternalInvariantViolated, InvalidInput, LimitExceeded, StructuralError
from .layerings import decompose_flow, enumerate_layerings, enumerate_maximal_layering_cliques
from .mutation import build_framing_poset
from .reduction import decontract, two_point_extend
from .triangulation import build_triangulation

__all__ = [
    "EmbeddedDag",
    "Edge",
    "FramingError",
    "InternalInvariantViolated",
    "InvalidInput",
    "LimitExceeded",
    "StructuralError",
    "Vertex",
    "build_framing_poset",
    "build_triangulation",
    "decompose_flow",
    "decontract",
    "enumerate_layerings",
    "enumerate_maximal_layering_cliques",
    "two_point_extend",
    "validate_strong_planarity",
]
