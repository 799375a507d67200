from app.ea.extraction import extract_journey_stateless
from app.ea.journey import Journey, JourneyPointer, Leg, check_journey
from app.ea.scan import (
    EaOptions,
    EaScanResult,
    earliest_arrival,
    earliest_arrival_with_pointers,
    reconstruct_journey,
    scan_earliest_arrival,
)
from app.ea.state import EaScanState

__all__ = [
    "EaOptions",
    "EaScanResult",
    "EaScanState",
    "Journey",
    "JourneyPointer",
    "Leg",
    "check_journey",
    "earliest_arrival",
    "earliest_arrival_with_pointers",
    "extract_journey_stateless",
    "reconstruct_journey",
    "scan_earliest_arrival",
]
