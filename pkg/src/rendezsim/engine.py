"""Slot-synchronous simulation loop with half-slot rendezvous resolution."""

import math
import random
from dataclasses import dataclass, field, replace
from itertools import combinations

from . import protocol as proto
from .hopping import make_clock, PROTOCOLS
from .pr_activity import PrParams, ChannelOccupancy
from .topology import deploy, assign_channels

DEFAULT_MAX_SLOTS = 50_000
DEFAULT_RANGE_M = 100.0


def default_area_side(n_nodes, range_m=DEFAULT_RANGE_M):
    """Square side for the default deployment area.

    Grows superlinearly for small networks (keeping a 3-node deployment dense
    enough to be mostly triangles) and switches to a square-root law past ten
    nodes so the mean unit-disk degree stays above ~3 and connected uniform
    deployments remain cheap to sample by rejection.
    """
    return range_m * min(0.5 * n_nodes ** 0.8, 0.99 * math.sqrt(n_nodes))


@dataclass(frozen=True)
class RunConfig:
    protocol: str
    termination: str
    n_nodes: int
    pool_size: int
    similarity: int
    pr: PrParams
    range_m: float = DEFAULT_RANGE_M
    area: tuple = None          # (width, height); None = auto from n_nodes
    max_slots: int = DEFAULT_MAX_SLOTS
    seed: int = 0
    topo_seed: int = None       # None = derive from seed
    chan_seed: int = None

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if self.termination not in proto.TERMINATION_MODES:
            raise ValueError(f"unknown termination mode {self.termination!r}")
        if self.max_slots <= 0:
            raise ValueError("max_slots must be positive")
        if self.area is None:
            side = default_area_side(self.n_nodes, self.range_m)
            object.__setattr__(self, "area", (side, side))

    @property
    def validate_coords(self):
        # coordinate validation is the MR- enhancement; it is always on for
        # mrdmca and switched on for every protocol under controlled
        # termination (the MR- variants of the controlled scenario)
        return self.protocol == "mrdmca" or self.termination == proto.CONTROLLED

    def scenario_key(self):
        return (self.protocol, self.termination, self.n_nodes, self.pool_size,
                self.similarity, self.pr.name, self.range_m, self.area)


@dataclass
class RunRecord:
    """Timing marks and correctness of one replication.

    Times are in slots at half-slot resolution (multiples of 0.5). t_n1 is the
    first time |DNL u INL| = N-1 held; t_full the first time that condition
    held with DNL equal to ground truth; t_term the policy termination time
    (None under run_to_full). ptm/ctm are evaluated on the DNL frozen at each
    node's termination (at t_full when the policy never fires).
    """

    scenario: tuple
    seed: int
    completed: bool
    slots_used: int
    t_n1: list
    t_full: list
    t_term: list
    ptm: list
    ctm: float
    final_dnl: list

    def node_mean(self, which):
        marks = {"n1": self.t_n1, "full": self.t_full, "policy": self.t_term}[which]
        if any(t is None for t in marks):
            return None
        return sum(marks) / len(marks)


def resolve_half_slot(selections, occupancy, half_slot_index):
    """Group attempting nodes by channel after PR deferral.

    selections maps node id -> channel. Nodes defer when their channel is
    PR-busy at any point in the half-slot: a handshake needs the channel for
    the whole exchange, so a primary arriving mid-way disrupts it too.
    Returns {channel: sorted node list} for channels with at least two nodes.
    """
    groups = {}
    busy_cache = {}
    for node in sorted(selections):
        ch = selections[node]
        if ch not in busy_cache:
            busy_cache[ch] = occupancy.busy_during(ch, half_slot_index)
        if not busy_cache[ch]:
            groups.setdefault(ch, []).append(node)
    return {ch: nodes for ch, nodes in groups.items() if len(nodes) >= 2}


def handshake_pairs(group, neighbour_sets):
    """Handshaking pairs within one co-channel group.

    A pair completes its three-way handshake only when neither endpoint hears
    another co-channel node: a third group member within range of either one
    collides with the exchange. Applied uniformly to every protocol.
    """
    if len(group) == 2:
        i, j = group
        return [(i, j)] if j in neighbour_sets[i] else []
    members = set(group)
    degree = {i: len(neighbour_sets[i] & members) for i in group}
    return [(i, j) for i, j in combinations(group, 2)
            if degree[i] == 1 and degree[j] == 1 and j in neighbour_sets[i]]


class IncompleteRun(RuntimeError):
    """Safety cap reached before the run finished."""


def run_once(cfg, topo=None, chans=None, trace=None):
    """Simulate one replication; deterministic given cfg and its seeds.

    topo/chans may be supplied to replay a fixed deployment; otherwise they
    are drawn from seeds derived from cfg. trace, when given, is a writable
    text stream receiving `slot half node channel event detail` lines.
    """
    master = random.Random(cfg.seed)
    topo_seed = cfg.topo_seed if cfg.topo_seed is not None else master.getrandbits(63)
    chan_seed = cfg.chan_seed if cfg.chan_seed is not None else master.getrandbits(63)
    occ_seed = master.getrandbits(63)
    clock_seed = master.getrandbits(63)

    if topo is None:
        topo = deploy(cfg.n_nodes, cfg.area, cfg.range_m, topo_seed)
    if chans is None:
        chans = assign_channels(cfg.n_nodes, cfg.pool_size, cfg.similarity, chan_seed)
    n = cfg.n_nodes
    occupancy = ChannelOccupancy(cfg.pr, cfg.pool_size, occ_seed)
    clock_rng = random.Random(clock_seed)
    pool = list(range(1, cfg.pool_size + 1))
    clocks = [make_clock(cfg.protocol, chans.sets[i],
                         random.Random(clock_rng.getrandbits(63)), pool=pool)
              for i in range(n)]
    usable = [frozenset(chans.sets[i]) for i in range(n)]
    states = [proto.NodeState(i, topo.coords[i], cfg.range_m, cfg.validate_coords)
              for i in range(n)]
    neighbour_sets = topo.dnl_star

    t_n1 = [None] * n
    t_full = [None] * n
    t_term = [None] * n
    dnl_at_term = [None] * n
    run_to_full = cfg.termination == proto.RUN_TO_FULL
    pending = set(range(n))  # nodes still missing their stop mark

    def update_marks(i, tnow, slot, half):
        st = states[i]
        n1 = len(st.dnl) + len(st.inl) == n - 1
        if n1 and t_n1[i] is None:
            t_n1[i] = tnow
        if t_full[i] is None and n1 and st.dnl == neighbour_sets[i]:
            t_full[i] = tnow
            if run_to_full:
                pending.discard(i)
        if not st.terminated and proto.check_termination(st, cfg.termination, n):
            st.terminated = True
            st.t_term = tnow
            t_term[i] = tnow
            dnl_at_term[i] = frozenset(st.dnl)
            if not run_to_full:
                pending.discard(i)
            if trace is not None:
                trace.write(f"{slot} {half} {i} - terminate dnl={sorted(st.dnl)}\n")

    slot = 0
    half_index = 0
    while pending:
        if slot >= cfg.max_slots:
            raise IncompleteRun(
                f"safety cap of {cfg.max_slots} slots reached with "
                f"{len(pending)} node(s) unfinished (seed {cfg.seed})"
            )
        for half in (0, 1):
            selections = {i: clocks[i].select(half) for i in range(n)}
            if trace is not None:
                for i in sorted(selections):
                    trace.write(f"{slot} {half} {i} {selections[i]} select -\n")
            # a node can only transact on a channel in its usable set; blind
            # searchers that tuned elsewhere listen without effect
            attempts = {i: c for i, c in selections.items() if c in usable[i]}
            groups = resolve_half_slot(attempts, occupancy, half_index)
            touched = set()
            for ch in sorted(groups):
                for i, j in handshake_pairs(groups[ch], neighbour_sets):
                    proto.process_handshake(states[i], states[j])
                    touched.add(i)
                    touched.add(j)
                    if trace is not None:
                        trace.write(f"{slot} {half} {i} {ch} handshake peer={j}\n")
            tnow = (half_index + 1) * 0.5
            for i in sorted(touched):
                update_marks(i, tnow, slot, half)
            half_index += 1
        for clk in clocks:
            clk.end_slot()
        slot += 1

    ptm_values = []
    for i in range(n):
        dnl = dnl_at_term[i] if dnl_at_term[i] is not None else frozenset(states[i].dnl)
        truth = neighbour_sets[i]
        ptm_values.append(100.0 * len(dnl & truth) / len(truth) if truth else 100.0)
    ctm = sum(ptm_values) / n

    return RunRecord(
        scenario=cfg.scenario_key(),
        seed=cfg.seed,
        completed=True,
        slots_used=slot,
        t_n1=t_n1,
        t_full=t_full,
        t_term=t_term,
        ptm=ptm_values,
        ctm=ctm,
        final_dnl=[frozenset(st.dnl) for st in states],
    )
