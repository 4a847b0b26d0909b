"""Deterministic fully dynamic approximate vertex cover and matching."""

from .graph import DynamicGraph, edge_key
from .levelcover import CoverParams, LevelPartition, WorkLedger
from .degmatch import (FreeNeighborIndex, MatchState, ap5_delete, ap5_insert,
                       find_mate, mm_delete, mm_insert, resolve,
                       verify_short_paths)
from .kernel import EPOCH, PHASE, SQRT_CAP, ChangeEvent, Kernel, build_static
from .matchers import PhasedMatcher, SqrtNMatcher, WorstCaseMatcher
from .oracle import (ExactResult, OracleCapError, build_tightness_fixture,
                     is_maximal_matching, is_valid_cover,
                     max_matching_bruteforce, max_matching_exact,
                     min_vertex_cover_exact)
from .report import AuditReport
from .streams import (StreamFormatError, UpdateStream, format_stream,
                      generate_stream, parse_stream)
from .harness import RunConfig, RunResult, run_experiment

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "ChangeEvent",
    "CoverParams",
    "DynamicGraph",
    "EPOCH",
    "ExactResult",
    "FreeNeighborIndex",
    "Kernel",
    "LevelPartition",
    "MatchState",
    "OracleCapError",
    "PHASE",
    "PhasedMatcher",
    "RunConfig",
    "RunResult",
    "SQRT_CAP",
    "SqrtNMatcher",
    "StreamFormatError",
    "UpdateStream",
    "WorkLedger",
    "WorstCaseMatcher",
    "ap5_delete",
    "ap5_insert",
    "build_static",
    "build_tightness_fixture",
    "edge_key",
    "find_mate",
    "format_stream",
    "generate_stream",
    "is_maximal_matching",
    "is_valid_cover",
    "max_matching_bruteforce",
    "max_matching_exact",
    "min_vertex_cover_exact",
    "mm_delete",
    "mm_insert",
    "parse_stream",
    "resolve",
    "run_experiment",
    "verify_short_paths",
]
