"""Per-run and cross-run correctness/timing metrics: PTM, CTM, ATTR, ATM, PTDD."""

import math
from dataclasses import dataclass

# exact aggregate CSV column order; floats with 4 decimal places
AGGREGATE_COLUMNS = [
    "scenario", "protocol", "termination", "N", "C", "m", "pr", "runs",
    "attr_policy", "attr_n1", "attr_full", "atm", "ptdd",
    "attr_ci95", "atm_ci95",
]

Z95 = 1.96


class AggregationError(ValueError):
    """Mixed scenarios or missing time marks in an aggregation."""


def ptm(discovered_dnl, ground_dnl):
    """Percentage of ground direct neighbours present in the discovered DNL.

    Defined as 100 for an empty ground list (unreachable for connected
    deployments with N >= 2).
    """
    if not ground_dnl:
        return 100.0
    hit = len(set(discovered_dnl) & set(ground_dnl))
    return 100.0 * hit / len(ground_dnl)


def ctm(ptm_values):
    """Arithmetic mean of per-node PTM values."""
    values = list(ptm_values)
    if not values:
        raise ValueError("need at least one PTM value")
    return sum(values) / len(values)


def _check_same_scenario(records):
    if not records:
        raise AggregationError("no run records to aggregate")
    keys = {r.scenario for r in records}
    if len(keys) > 1:
        raise AggregationError(f"mixed scenarios in aggregation: {sorted(keys)}")


def attr(records, which="policy"):
    """Mean over runs of the per-run node-mean of a time mark (in slots).

    which selects the mark: 'policy' (termination time), 'n1' (first N-1
    point) or 'full' (first fully correct point).
    """
    _check_same_scenario(records)
    means = []
    for r in records:
        m = r.node_mean(which)
        if m is None:
            raise AggregationError(f"run seed {r.seed} is missing the {which!r} mark")
        means.append(m)
    return sum(means) / len(means)


def ptdd(records):
    """Post-termination discovery delay: attr(full) - attr(n1).

    Requires records produced in run-to-full mode so both marks exist.
    """
    return attr(records, "full") - attr(records, "n1")


def _ci95(values):
    n = len(values)
    if n < 2:
        return 0.0
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    return Z95 * math.sqrt(var / n)


@dataclass(frozen=True)
class AggregateMetrics:
    runs: int
    attr_policy: float   # None when no policy terminated the runs
    attr_n1: float
    attr_full: float     # None when runs stopped before full discovery
    atm: float
    ptdd: float          # None unless both n1 and full marks exist
    attr_ci95: float
    atm_ci95: float


def aggregate(records):
    """ATTR/ATM/PTDD with 95% half-widths over one scenario's records."""
    _check_same_scenario(records)

    def try_attr(which):
        try:
            return attr(records, which)
        except AggregationError:
            return None

    attr_policy = try_attr("policy")
    attr_n1 = try_attr("n1")
    attr_full = try_attr("full")
    ctm_values = [r.ctm for r in records]
    atm = sum(ctm_values) / len(ctm_values)
    delay = (attr_full - attr_n1
             if attr_full is not None and attr_n1 is not None else None)
    primary = "policy" if attr_policy is not None else "full"
    primary_means = [r.node_mean(primary) for r in records]
    return AggregateMetrics(
        runs=len(records),
        attr_policy=attr_policy,
        attr_n1=attr_n1,
        attr_full=attr_full,
        atm=atm,
        ptdd=delay,
        attr_ci95=_ci95(primary_means),
        atm_ci95=_ci95(ctm_values),
    )


def fmt(value):
    """Float cell with 4 decimal places; empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def aggregate_row(scenario, cfg, agg):
    """One aggregate CSV row (list of strings) in AGGREGATE_COLUMNS order."""
    return [
        scenario, cfg.protocol, cfg.termination, str(cfg.n_nodes),
        str(cfg.pool_size), str(cfg.similarity), cfg.pr.name, str(agg.runs),
        fmt(agg.attr_policy), fmt(agg.attr_n1), fmt(agg.attr_full),
        fmt(agg.atm), fmt(agg.ptdd), fmt(agg.attr_ci95), fmt(agg.atm_ci95),
    ]
