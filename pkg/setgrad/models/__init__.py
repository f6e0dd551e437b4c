"""Domain types shared across services."""
from .regions import BallRegion, BoxRegion, Region, SegmentRegion
from .hull import HullSet, Provenance, deduplicate
from .results import (
    ApproxQualityReport,
    CandidateDirection,
    DescentCertificate,
    MinNormResult,
)
from .trajectory import IterateRecord, Trajectory

__all__ = [
    "BallRegion",
    "BoxRegion",
    "Region",
    "SegmentRegion",
    "HullSet",
    "Provenance",
    "deduplicate",
    "ApproxQualityReport",
    "CandidateDirection",
    "DescentCertificate",
    "MinNormResult",
    "IterateRecord",
    "Trajectory",
]
