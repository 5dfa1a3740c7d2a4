"""Empirical completeness of every diagram set on seeded random overlaps."""
import argparse

from probneed.experiments import DiagramSuiteConfig, describe, diagram_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--core-trials", type=int, default=DiagramSuiteConfig.core_trials)
    ap.add_argument("--extended-trials", type=int, default=DiagramSuiteConfig.extended_trials)
    ap.add_argument("--seed", type=int, default=DiagramSuiteConfig.seed)
    args = ap.parse_args()
    cfg = DiagramSuiteConfig(core_trials=args.core_trials, extended_trials=args.extended_trials,
                             seed=args.seed)
    print(describe(cfg))
    for row in diagram_suite(cfg):
        print(row.line(), flush=True)


if __name__ == "__main__":
    main()
