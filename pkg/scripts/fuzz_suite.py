"""Soundness fuzzing over every law, plus the refuted probassoc run."""
import argparse

from probneed.experiments import FuzzSuiteConfig, describe, fuzz_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=FuzzSuiteConfig.trials)
    ap.add_argument("--seed", type=int, default=FuzzSuiteConfig.seed)
    ap.add_argument("--rules", nargs="*", default=None)
    args = ap.parse_args()
    cfg = FuzzSuiteConfig(trials=args.trials, seed=args.seed)
    if args.rules:
        cfg.rules = tuple(args.rules)
    print(describe(cfg))
    for row in fuzz_suite(cfg):
        print(row.line(), flush=True)


if __name__ == "__main__":
    main()
