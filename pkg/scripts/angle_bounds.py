"""Angle between the field and the boundary curve on either side of nu = 4/3."""

import argparse
import math

from wallach_flow.analysis import A_TANGENT, angle_minimum_below, angle_supremum_beyond


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--a", type=float, default=A_TANGENT)
    args = p.parse_args()
    lo = angle_minimum_below(args.a)
    hi = angle_supremum_beyond(args.a)
    print(f"min on (1, 4/3):   alpha = {lo.alpha:.10f} rad at t = {lo.t:.6f}")
    print(f"sup on (4/3, inf): alpha = {hi.alpha:.10f} rad = {math.degrees(hi.alpha):.4f} deg at t = {hi.t:.6f}")


if __name__ == "__main__":
    main()
