"""Run every identity suite over several seeds and report the worst residual per identity.

    python3 scripts/identity_sweep.py --seeds 0 1 2 --samples 30
"""
import argparse
from collections import defaultdict

import numpy as np

from chfsectors.checks import SUITES, TOLERANCES, run_suite


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--samples", type=int, default=30)
    parser.add_argument("--suite", choices=SUITES, nargs="+", default=list(SUITES))
    args = parser.parse_args(argv)

    failures = 0
    with np.errstate(all="ignore"):
        for name in args.suite:
            worst = defaultdict(float)
            for seed in args.seeds:
                for row in run_suite(name, args.samples, seed):
                    worst[row.identity] = max(worst[row.identity], row.max_residual)
            for identity, value in worst.items():
                ok = value <= TOLERANCES[name]
                failures += not ok
                print(f"{name:<14}{identity:<36}{value:>12.2e}  {'ok' if ok else 'FAIL'}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
