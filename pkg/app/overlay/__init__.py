from app.overlay.customize import OverlayIndex, customize
from app.overlay.merge import assemble_connection_subset, merge_two, query_cells
from app.overlay.partition import (
    MultilevelPartition,
    check_partition,
    cut_weight,
    format_partition,
    parse_partition,
    partition_stops,
    single_cell_partition,
    stop_graph,
)
from app.overlay.query import QUERY_KINDS, accel_earliest_arrival, accel_query, accel_range
from app.overlay.storage import load_overlay, save_overlay
from app.overlay.transfers import MinTransferResult, min_transfer_profiles

__all__ = [
    "MinTransferResult",
    "MultilevelPartition",
    "OverlayIndex",
    "QUERY_KINDS",
    "accel_earliest_arrival",
    "accel_query",
    "accel_range",
    "assemble_connection_subset",
    "check_partition",
    "customize",
    "cut_weight",
    "format_partition",
    "load_overlay",
    "merge_two",
    "min_transfer_profiles",
    "parse_partition",
    "partition_stops",
    "query_cells",
    "save_overlay",
    "single_cell_partition",
    "stop_graph",
]
