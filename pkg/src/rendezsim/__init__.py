"""Slot-synchronous Monte-Carlo simulator for multihop cognitive-radio rendezvous.

Provides random connected deployments, ON/OFF primary-radio activity,
dual-modular-clock and baseline channel-hopping engines, a coordinate-assisted
neighbour-discovery protocol with pluggable termination, and the ATTR/ATM/PTDD
metric pipeline.
"""

from .topology import (
    GroundTopology,
    ChannelAssignment,
    DeploymentError,
    deploy,
    assign_channels,
    split_primality,
    export_deployment,
    load_deployment,
)
from .pr_activity import PrParams, ChannelOccupancy
from .hopping import DualModularClock, RandomClock, ModularClock, make_clock
from .protocol import NodeState, HandshakeMessage, process_handshake, check_termination
from .engine import RunConfig, RunRecord, run_once, resolve_half_slot, default_area_side
from .metrics import ptm, ctm, attr, ptdd, aggregate, AggregateMetrics, AGGREGATE_COLUMNS
from .experiments import ScenarioGrid, run_grid, paper_grid, parse_grid_config

__version__ = "0.1.0"
