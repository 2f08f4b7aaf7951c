"""Sample trajectories in every flux regime and print the crossing verdicts."""

import argparse

from wallach_flow.experiments import run_regime_experiment


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--a", type=float, nargs="+", default=[1 / 9, 1 / 8, 1 / 6, 3 / 14, 0.22, 0.25, 0.3])
    p.add_argument("--n", type=int, default=50, help="starts per side")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    bad = 0
    for a in args.a:
        rep = run_regime_experiment(a, n=args.n, seed=args.seed)
        print(f"a={a:.6f} case={rep.case} {rep.verdict}")
        for kind in ("interior", "exterior", "aimed"):
            counts = rep.counts(kind)
            if counts:
                print(f"    {kind:9s} {dict(sorted(counts.items()))}")
        bad += not rep.consistent
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
