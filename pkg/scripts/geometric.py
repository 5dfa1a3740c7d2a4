"""Lower bounds of the geometric program against 1 - 2^-k."""
import argparse

from probneed.convergence import fmt
from probneed.experiments import GeometricConfig, geometric_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=10)
    ap.add_argument("--fuel", type=int, default=GeometricConfig.fuel)
    args = ap.parse_args()
    cfg = GeometricConfig(ks=tuple(range(1, args.max_k + 1)), fuel=args.fuel)
    print("k  lo  hi  matches")
    for k, b, ok in geometric_table(cfg):
        print(f"{k:2} {fmt(b.lo)} {fmt(b.hi)} {'yes' if ok else 'NO'}")


if __name__ == "__main__":
    main()
