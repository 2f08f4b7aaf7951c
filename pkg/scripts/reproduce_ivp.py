"""Backward RK4 run in the edge chart at a = 0.26 and its power-law asymptote."""

import argparse

from wallach_flow.flow import reproduce_ivp_026


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--a", type=float, default=0.26)
    p.add_argument("--n", type=int, default=5000, help="number of RK4 steps")
    args = p.parse_args()
    r = reproduce_ivp_026(N=args.n, a=args.a)
    print(f"a                = {r.a}")
    print(f"first mesh index = {r.mesh_index}")
    print(f"crossing         = ({r.crossing[0]:.10f}, {r.crossing[1]:.4f})")
    print(f"boundary y_b     = {r.y_boundary:.4f}")
    print(f"constant C       = {r.constant:.10f}")
    print(f"asymptote hit    = ({r.asymptote_hit[0]:.10f}, {r.asymptote_hit[1]:.4f})")


if __name__ == "__main__":
    main()
