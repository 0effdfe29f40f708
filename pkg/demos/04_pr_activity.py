"""Visualise the primary-radio ON/OFF occupancy process.

Prints a text timeline of a few channels under heavy incumbent activity and
checks the long-run busy fraction against the closed-form stationary value.
"""

from rendezsim.pr_activity import ChannelOccupancy, PrParams


def main():
    params = PrParams.high()
    print(f"ON/OFF process: mean ON {1 / params.lambda_y} slots, "
          f"mean OFF {1 / params.lambda_x} slots, "
          f"stationary busy fraction {params.utilization:.2f}\n")

    occ = ChannelOccupancy(params, 4, rng_seed=12)
    width = 90
    print(f"first {width // 2} slots ('#' busy, '.' idle, one column per half-slot):")
    rows = {ch: "" for ch in range(1, 5)}
    for half in range(width):
        for ch in range(1, 5):
            rows[ch] += "#" if occ.is_busy(ch, half) else "."
    for ch, line in rows.items():
        print(f"  ch{ch} {line}")

    long_occ = ChannelOccupancy(params, 1, rng_seed=99)
    halves = 200_000
    busy = sum(long_occ.is_busy(1, h) for h in range(halves))
    print(f"\nempirical busy fraction over {halves // 2} slots: "
          f"{busy / halves:.3f} (target {params.utilization:.2f})")


if __name__ == "__main__":
    main()
