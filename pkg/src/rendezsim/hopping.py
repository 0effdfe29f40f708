"""Channel-selection engines: dual modular clocks and the 2RATS baselines.

Every clock exposes select(half) returning the channel for the given half-slot
(half 0 or 1) and end_slot() called once per whole slot. All protocols make
exactly two rendezvous attempts per slot.
"""

import random

from .topology import split_primality, _is_prime


def smallest_prime_geq(n):
    p = max(2, n)
    while not _is_prime(p):
        p += 1
    return p


class DualModularClock:
    """Two independent modular clocks over prime / non-prime channel subsets.

    The first half-slot hops over the prime-labelled channels, the second over
    the non-prime ones; an empty subset falls back to the full set. Rates are
    redrawn after every window of len(channels) slots; indices are redrawn
    only every RESEED_INDEX_EVERY windows (see reseed_rates for why they
    cannot be preserved forever).
    """

    # How many rate windows pass between index redraws. The window spans a
    # multiple of the index modulus, so a rate-only reseed leaves the offset
    # between two clocks invariant at every window boundary; a pair whose
    # common channels sit at an unreachable offset would then never meet.
    # Occasional index redraws break that lockstep while keeping the
    # characteristic slow mixing of rate-only reseeds in between.
    RESEED_INDEX_EVERY = 30

    def __init__(self, channels, rng):
        self.mi = sorted(channels)
        self.mp, self.np_ = split_primality(self.mi)
        self._rng = rng
        self.j1 = rng.randrange(len(self.mi))
        self.j2 = rng.randrange(len(self.mi))
        self.r1 = self._draw_rate()
        self.r2 = self._draw_rate()
        self.t = 0
        self._windows = 0
        self._c1 = None

    def _draw_rate(self):
        size = len(self.mi)
        if size < 2:
            return 1
        return self._rng.randrange(1, size)

    def reseed_rates(self):
        """Fresh rates after an inner window completes; indices usually survive.

        Indices are redrawn every RESEED_INDEX_EVERY windows, and in every
        window when the set has fewer than three channels (there every rate
        draw is 1, so two such clocks advance in permanent lockstep and a
        rate reseed alone can never change their relative offset).
        """
        self.r1 = self._draw_rate()
        self.r2 = self._draw_rate()
        self._windows += 1
        if len(self.mi) < 3 or self._windows % self.RESEED_INDEX_EVERY == 0:
            self.j1 = self._rng.randrange(len(self.mi))
            self.j2 = self._rng.randrange(len(self.mi))
        self.t = 0

    def first_half(self):
        size = len(self.mi)
        self.j1 = (self.j1 + self.r1) % size
        if self.mp:
            c1 = self.mp[self.j1 % len(self.mp)]
        else:
            c1 = self.mi[self.j1]
        self._c1 = c1
        return c1

    def second_half(self, c1):
        size = len(self.mi)
        self.j2 = (self.j2 + self.r2) % size
        if self.np_:
            c2 = self.np_[self.j2 % len(self.np_)]
        else:
            c2 = self.mi[self.j2]
        if c2 == c1:
            # only reachable when one subset is empty
            self.j2 = (self.j2 + 1) % size
            c2 = self.mi[self.j2]
        return c2

    def select(self, half):
        if half == 0:
            return self.first_half()
        return self.second_half(self._c1)

    def end_slot(self):
        self.t += 1
        if self.t >= len(self.mi):
            self.reseed_rates()


class RandomClock:
    """RCS: a uniform random channel from the whole pool each half-slot.

    The blind searcher ranges over every channel label, not just the node's
    usable set, so many attempts land on channels where the node cannot
    complete a handshake (the engine drops those attempts).
    """

    def __init__(self, pool, rng):
        self.pool = sorted(pool)
        self._rng = rng

    def select(self, half):
        return self.pool[self._rng.randrange(len(self.pool))]

    def end_slot(self):
        pass


class ModularClock:
    """Classic single modular clock over the node's usable set (MCA, EMCA).

    The modulus is the smallest prime >= len(channels); an index overflowing
    the channel list triggers a uniform random pick. Rate and index are
    resampled every 2p steps: 2p is a multiple of p, so resampling only
    the rate would freeze the index offset between two same-modulus clocks and
    can lock a pair out of its common channels permanently.

    MCA (per_slot=True) advances the clock once per slot, dwelling on one
    channel for both half-slots; EMCA's enhancement is a full-rate clock that
    visits a fresh channel every half-slot.
    """

    def __init__(self, channels, rng, per_slot=False):
        self.mi = sorted(channels)
        self._rng = rng
        self.p = smallest_prime_geq(len(self.mi))
        self.j = rng.randrange(self.p)
        self.r = rng.randrange(1, self.p)
        self._steps = 0
        self.per_slot = per_slot
        self._dwell = None

    def _advance(self):
        self.j = (self.j + self.r) % self.p
        self._steps += 1
        if self._steps >= 2 * self.p:
            self.r = self._rng.randrange(1, self.p)
            self.j = self._rng.randrange(self.p)
            self._steps = 0
        if self.j >= len(self.mi):
            return self.mi[self._rng.randrange(len(self.mi))]
        return self.mi[self.j]

    def select(self, half):
        if not self.per_slot:
            return self._advance()
        if half == 0:
            self._dwell = self._advance()
        return self._dwell

    def end_slot(self):
        pass


PROTOCOLS = ("rcs", "mca", "emca", "mdmca", "mrdmca")


def make_clock(protocol, channels, rng, pool=None):
    """Clock for a protocol tag; mdmca and mrdmca share the dual clock.

    pool is the full channel label list; it defaults to the node's own set
    and only matters for the blind random searcher.
    """
    if protocol == "rcs":
        return RandomClock(pool if pool is not None else channels, rng)
    if protocol == "mca":
        return ModularClock(channels, rng, per_slot=True)
    if protocol == "emca":
        return ModularClock(channels, rng)
    if protocol in ("mdmca", "mrdmca"):
        return DualModularClock(channels, rng)
    raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
