"""Channel-selection clock tests, including exhaustive modular-arithmetic oracles."""

import math
import random
from collections import Counter
from itertools import combinations

import pytest

from rendezsim.hopping import (
    DualModularClock,
    ModularClock,
    RandomClock,
    make_clock,
    smallest_prime_geq,
)
from rendezsim.topology import split_primality


def dual_clock_oracle(channels, j1, r1, j2, r2, steps):
    """Direct modular-arithmetic prediction of the dual clock's channel pairs.

    Replays the index recurrences j += r (mod |m_i|) with the prime subset
    used in the first half-slot, the non-prime subset in the second, the full
    set as fallback, and the step-one shift when both halves would coincide.
    Rate reseeds are outside the oracle's scope, so steps must stay within one
    reseed window (|m_i| slots).
    """
    mi = sorted(channels)
    mp, np_ = split_primality(mi)
    size = len(mi)
    out = []
    for _ in range(steps):
        j1 = (j1 + r1) % size
        c1 = mp[j1 % len(mp)] if mp else mi[j1]
        j2 = (j2 + r2) % size
        c2 = np_[j2 % len(np_)] if np_ else mi[j2]
        if c2 == c1:
            j2 = (j2 + 1) % size
            c2 = mi[j2]
        out.append((c1, c2))
    return out


def set_dual_state(clock, j1, r1, j2, r2):
    clock.j1, clock.r1, clock.j2, clock.r2 = j1, r1, j2, r2


def test_smallest_prime_geq():
    assert smallest_prime_geq(4) == 5
    assert smallest_prime_geq(5) == 5
    assert smallest_prime_geq(1) == 2
    assert smallest_prime_geq(10) == 11


def test_first_half_prime_subset_arithmetic():
    # m_i = {1..10}: prime subset [2,3,5,7]; from j1=3 a rate of 2 lands on
    # index 5, i.e. channel [2,3,5,7][5 mod 4] = 3
    clock = DualModularClock(range(1, 11), random.Random(0))
    set_dual_state(clock, j1=3, r1=2, j2=0, r2=1)
    assert clock.select(0) == 3
    assert clock.j1 == 5


def test_first_half_falls_back_to_full_set_without_primes():
    clock = DualModularClock({4, 6, 8}, random.Random(0))
    set_dual_state(clock, j1=2, r1=1, j2=0, r2=1)
    assert clock.select(0) == 4  # j1 wraps to 0; channel m_i[0]
    assert clock.j1 == 0


def test_second_half_non_prime_subset_arithmetic():
    # non-prime subset of {1..10} is [1,4,6,8,9,10]; j2=0 with rate 3 lands
    # on index 3, i.e. channel 8
    clock = DualModularClock(range(1, 11), random.Random(0))
    set_dual_state(clock, j1=0, r1=1, j2=0, r2=3)
    clock.select(0)
    assert clock.select(1) == 8


def test_second_half_shifts_off_a_first_half_collision():
    # all-prime set: the second half falls back to the full set and must not
    # repeat the first half's channel; it steps one index further instead
    clock = DualModularClock({2, 3, 5}, random.Random(0))
    set_dual_state(clock, j1=0, r1=1, j2=0, r2=1)
    c1 = clock.select(0)
    assert c1 == 3  # j1 -> 1
    c2 = clock.select(1)
    assert c2 == 5  # j2 -> 1 collides with c1, shifted to index 2
    assert c2 != c1


def test_halves_never_collide_when_both_subsets_exist():
    # prime and non-prime subsets are disjoint, so c2 != c1 must hold for
    # every channel set and every initial state; check exhaustively
    for size in range(2, 8):
        for chans in combinations(range(1, 13), size):
            mp, np_ = split_primality(chans)
            if not mp or not np_:
                continue
            for j1 in range(size):
                for r1 in range(1, size):
                    clock = DualModularClock(chans, random.Random(0))
                    set_dual_state(clock, j1=j1, r1=r1, j2=(j1 + 1) % size, r2=r1)
                    c1 = clock.select(0)
                    assert clock.select(1) != c1


def test_dual_clock_matches_modular_oracle_within_a_window():
    rng = random.Random(99)
    for chans in (tuple(range(1, 11)), (2, 3, 5, 7, 11), (1, 4, 6, 8),
                  (2, 4, 5, 9, 10, 11, 12)):
        size = len(chans)
        for _ in range(20):
            j1, j2 = rng.randrange(size), rng.randrange(size)
            r1 = rng.randrange(1, size)
            r2 = rng.randrange(1, size)
            clock = DualModularClock(chans, random.Random(0))
            set_dual_state(clock, j1, r1, j2, r2)
            expected = dual_clock_oracle(chans, j1, r1, j2, r2, size)
            got = []
            for _ in range(size):  # one reseed window
                c1 = clock.select(0)
                got.append((c1, clock.select(1)))
            assert got == expected


def test_rates_and_indices_stay_in_range_across_reseeds():
    clock = DualModularClock(range(1, 11), random.Random(5))
    for _ in range(300):
        clock.select(0)
        clock.select(1)
        clock.end_slot()
        assert 0 <= clock.j1 < 10 and 0 <= clock.j2 < 10
        assert 1 <= clock.r1 < 10 and 1 <= clock.r2 < 10


def test_reseed_breaks_index_lockstep_between_clocks():
    # The reseed window spans a multiple of the index modulus, so if the
    # indices survived a reseed the offset between two clocks would be frozen
    # at every window boundary and pairs whose only common channel sits at an
    # unreachable offset could never meet. With indices redrawn each window,
    # any two clocks sharing a channel must select it simultaneously soon.
    a = DualModularClock((3, 4, 5), random.Random(11))
    b = DualModularClock((1, 2, 5), random.Random(12))
    met = False
    for _ in range(400):
        for half in (0, 1):
            if a.select(half) == b.select(half):
                met = True
        a.end_slot()
        b.end_slot()
    assert met


def test_two_channel_set_forces_unit_rates():
    clock = DualModularClock({3, 5}, random.Random(1))
    for _ in range(50):
        clock.select(0)
        clock.select(1)
        clock.end_slot()
        assert clock.r1 == 1 and clock.r2 == 1


def test_dual_clock_first_half_cycles_with_modular_period():
    # with a fixed rate the index sequence has period size/gcd(r, size)
    chans = tuple(range(1, 11))
    clock = DualModularClock(chans, random.Random(0))
    set_dual_state(clock, j1=0, r1=4, j2=0, r2=1)
    period = 10 // math.gcd(4, 10)
    seq = []
    for _ in range(2 * period):
        seq.append(clock.select(0))
        clock.j2 = 0  # keep the second clock out of the way
    assert seq[:period] == seq[period:2 * period]


def test_random_searcher_covers_the_whole_pool_uniformly():
    pool = range(1, 11)
    clock = RandomClock(pool, random.Random(3))
    counts = Counter(clock.select(h % 2) for h in range(100_000))
    assert set(counts) == set(pool)
    for c in pool:
        assert abs(counts[c] / 100_000 - 0.1) < 0.01


def test_random_searcher_single_channel():
    clock = RandomClock([4], random.Random(0))
    assert all(clock.select(h % 2) == 4 for h in range(20))


def test_modular_clock_prime_modulus_and_overflow():
    clock = ModularClock([1, 2, 3, 4], random.Random(0))
    assert clock.p == 5
    # force the overflow index: j=4 exceeds the channel list and triggers a
    # uniform random pick from the set
    clock.j, clock.r = 3, 1
    c = clock.select(0)
    assert c in (1, 2, 3, 4)
    assert clock.j == 4


def test_modular_clock_resamples_index_and_rate_each_window():
    # after 2p steps both r and j are redrawn; a rate-only resample would
    # freeze the offset between two same-modulus clocks forever
    clock = ModularClock(range(1, 11), random.Random(0))
    p = clock.p
    states = set()
    for _ in range(40 * p):
        clock.select(0)
        states.add((clock.j - 0) % p)
    assert len(states) > p // 2  # the index offset keeps moving across windows


def test_per_slot_clock_dwells_for_both_halves():
    dwell = ModularClock(range(1, 11), random.Random(2), per_slot=True)
    for _ in range(100):
        c1 = dwell.select(0)
        assert dwell.select(1) == c1
        dwell.end_slot()


def test_half_slot_clock_advances_every_half():
    clock = ModularClock(range(1, 11), random.Random(2))
    j0 = clock.j
    clock.select(0)
    j1 = clock.j
    clock.select(1)
    assert clock.j != j1 or clock.j != j0


def test_make_clock_dispatch():
    rng = random.Random(0)
    assert isinstance(make_clock("rcs", [1, 2], rng, pool=[1, 2, 3]), RandomClock)
    mca = make_clock("mca", [1, 2, 3], rng)
    emca = make_clock("emca", [1, 2, 3], rng)
    assert isinstance(mca, ModularClock) and mca.per_slot
    assert isinstance(emca, ModularClock) and not emca.per_slot
    assert isinstance(make_clock("mdmca", [1, 2, 3], rng), DualModularClock)
    assert isinstance(make_clock("mrdmca", [1, 2, 3], rng), DualModularClock)
    with pytest.raises(ValueError):
        make_clock("nope", [1], rng)


def test_rcs_clock_uses_the_pool_not_the_node_set():
    clock = make_clock("rcs", [1, 2], random.Random(1), pool=list(range(1, 11)))
    seen = {clock.select(h % 2) for h in range(2000)}
    assert seen == set(range(1, 11))


def test_seeded_clock_sequences_are_reproducible():
    for proto in ("rcs", "mca", "emca", "mrdmca"):
        a = make_clock(proto, range(1, 11), random.Random(77), pool=list(range(1, 11)))
        b = make_clock(proto, range(1, 11), random.Random(77), pool=list(range(1, 11)))
        seq_a, seq_b = [], []
        for slot in range(200):
            seq_a += [a.select(0), a.select(1)]
            seq_b += [b.select(0), b.select(1)]
            a.end_slot()
            b.end_slot()
        assert seq_a == seq_b
