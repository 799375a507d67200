from app.profile.extraction import extract_profile_journey
from app.profile.packed import LEG_BITS, MAX_LEGS, TimeEncoding, pack, unpack
from app.profile.scan import (
    ProfileOptions,
    RangeResult,
    ea_profile,
    filter_range,
    merge_source_profile,
    pareto_profile,
    pareto_tuples,
    range_query,
)
from app.profile.store import ProfileEntry, ProfileStore, StopProfile, evaluate_profile
from app.profile.vectors import as_tuple, broadcast, infinite_vector, vector_shift

__all__ = [
    "LEG_BITS",
    "MAX_LEGS",
    "ProfileEntry",
    "ProfileOptions",
    "ProfileStore",
    "RangeResult",
    "StopProfile",
    "TimeEncoding",
    "as_tuple",
    "broadcast",
    "ea_profile",
    "evaluate_profile",
    "extract_profile_journey",
    "filter_range",
    "infinite_vector",
    "merge_source_profile",
    "pack",
    "pareto_profile",
    "pareto_tuples",
    "range_query",
    "unpack",
    "vector_shift",
]
