"""Per-channel primary-radio occupancy: alternating exponential ON/OFF process."""

import math
import random
from dataclasses import dataclass

# High PR activity: mean ON sojourn 8.5 slots, mean OFF sojourn 1.5 slots,
# giving a stationary busy fraction of 0.85.
HIGH_MEAN_ON = 8.5
HIGH_MEAN_OFF = 1.5


@dataclass(frozen=True)
class PrParams:
    """Rates of the ON/OFF renewal process, in 1/slots.

    lambda_x drives OFF->ON (mean OFF duration 1/lambda_x); lambda_y drives
    ON->OFF (mean ON duration 1/lambda_y). With enabled=False every channel is
    permanently idle.
    """

    lambda_x: float = 1.0
    lambda_y: float = 1.0
    enabled: bool = True

    def __post_init__(self):
        if self.enabled and (self.lambda_x <= 0 or self.lambda_y <= 0):
            raise ValueError("rates must be strictly positive when enabled")

    @property
    def utilization(self):
        """Stationary busy fraction E[ON] / (E[ON] + E[OFF]).

        With mean ON sojourn 1/lambda_y and mean OFF sojourn 1/lambda_x this
        is lambda_x / (lambda_x + lambda_y).
        """
        if not self.enabled:
            return 0.0
        return self.lambda_x / (self.lambda_x + self.lambda_y)

    @classmethod
    def off(cls):
        return cls(enabled=False)

    @classmethod
    def high(cls):
        return cls(lambda_x=1.0 / HIGH_MEAN_OFF, lambda_y=1.0 / HIGH_MEAN_ON)

    @classmethod
    def from_name(cls, name):
        name = name.strip().lower()
        if name == "off":
            return cls.off()
        if name == "high":
            return cls.high()
        if ":" in name:
            lx, ly = name.split(":")
            return cls(lambda_x=float(lx), lambda_y=float(ly))
        raise ValueError(f"unknown PR level {name!r}; use off, high or lx:ly")

    @property
    def name(self):
        if not self.enabled:
            return "off"
        if (math.isclose(self.lambda_x, 1.0 / HIGH_MEAN_OFF)
                and math.isclose(self.lambda_y, 1.0 / HIGH_MEAN_ON)):
            return "high"
        return f"{self.lambda_x:g}:{self.lambda_y:g}"


class ChannelOccupancy:
    """Lazy per-channel ON/OFF sampler, queried at half-slot boundaries.

    Channels are labelled 1..n_channels. Initial states are drawn from the
    stationary distribution; sojourns are exponential, and memorylessness makes
    the stationary residual time another exponential, so the first transition
    is sampled from the same law. State is constant within a half-slot.
    """

    def __init__(self, params, n_channels, rng_seed):
        self.params = params
        self.n_channels = n_channels
        self._rng = random.Random(rng_seed)
        self._on = [False] * n_channels
        self._next = [math.inf] * n_channels
        self._last_query = [-math.inf] * n_channels
        if params.enabled:
            u = params.utilization
            for c in range(n_channels):
                self._on[c] = self._rng.random() < u
                self._next[c] = self._sojourn(self._on[c])

    def _sojourn(self, on):
        rate = self.params.lambda_y if on else self.params.lambda_x
        return self._rng.expovariate(rate)

    def is_busy(self, channel, half_slot_index):
        """Process state at the start of the given half-slot (time in slots).

        Queries per channel must move forward in time; a backwards query
        signals an engine ordering bug and is rejected.
        """
        if not 1 <= channel <= self.n_channels:
            raise ValueError(f"channel {channel} outside pool 1..{self.n_channels}")
        if not self.params.enabled:
            return False
        t = half_slot_index * 0.5
        idx = channel - 1
        if t < self._last_query[idx]:
            raise ValueError(
                f"time went backwards on channel {channel}: "
                f"{t} < {self._last_query[idx]}"
            )
        self._last_query[idx] = t
        while self._next[idx] <= t:
            self._on[idx] = not self._on[idx]
            self._next[idx] += self._sojourn(self._on[idx])
        return self._on[idx]

    def busy_during(self, channel, half_slot_index):
        """Whether the channel is occupied at any point in the half-slot.

        A handshake needs the channel for the whole half-slot, so a primary
        arrival inside the interval disrupts it just like one already present
        at the start. Peeks at the next scheduled transition without
        advancing the process, so later queries at the same boundary are
        unaffected.
        """
        if self.is_busy(channel, half_slot_index):
            return True
        if not self.params.enabled:
            return False
        return self._next[channel - 1] <= (half_slot_index + 1) * 0.5
