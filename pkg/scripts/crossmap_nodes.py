"""Map oscillator states onto Morse and Coulomb states and compare node counts.

    python3 scripts/crossmap_nodes.py --max-n 6
"""
import argparse

import numpy as np

from chfsectors.errors import LabelConstraint
from chfsectors.schrodinger import (
    count_nodes,
    cross_map_oscillator_coulomb,
    cross_map_oscillator_morse,
    oscillator_state,
    schrodinger_residual,
)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=4, help="largest oscillator label n_O")
    parser.add_argument("--alpha", type=float, default=1.0, help="Morse range parameter")
    args = parser.parse_args(argv)

    targets = {"morse": lambda s: cross_map_oscillator_morse(s, args.alpha), "coulomb": cross_map_oscillator_coulomb}
    print(f"{'n_O':>4}{'l_O':>5}  {'target':<9}{'labels':<52}{'nodes':>9}{'residual':>12}")
    with np.errstate(all="ignore"):
        for n_o in range(args.max_n + 1):
            for ell_o in range(n_o):
                try:
                    src = oscillator_state(n_o, ell_o)
                except LabelConstraint:
                    continue
                for target, build in targets.items():
                    try:
                        img = build(src)
                    except LabelConstraint as exc:
                        print(f"{n_o:>4}{ell_o:>5}  {target:<9}skipped: {exc}")
                        continue
                    nodes = f"{count_nodes(src)}->{count_nodes(img)}"
                    labels = ", ".join(f"{k}={v}" for k, v in img.labels.items())
                    print(f"{n_o:>4}{ell_o:>5}  {target:<9}{labels:<52}{nodes:>9}{schrodinger_residual(img):>12.2e}")


if __name__ == "__main__":
    main()
