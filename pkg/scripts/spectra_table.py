"""Print the lowest bound-state energies, node counts and residuals for each potential.

    python3 scripts/spectra_table.py --levels 4
"""
import argparse
from dataclasses import astuple

import numpy as np

from chfsectors.schrodinger import (
    CoulombN,
    Morse,
    Oscillator1D,
    OscillatorN,
    bound_states,
    count_nodes,
    schrodinger_residual,
)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--levels", type=int, default=3)
    parser.add_argument("--branch", choices=("plus", "minus"), default="plus")
    parser.add_argument("--alpha", type=float, default=1.0, help="Morse range parameter")
    parser.add_argument("--lam", type=float, default=8.0, help="Morse depth parameter")
    args = parser.parse_args(argv)

    specs = [Oscillator1D(), OscillatorN(3, 0), OscillatorN(3, 1), CoulombN(3, 0), CoulombN(3, 1), Morse(args.alpha, args.lam)]
    print(f"{'potential':<24}{'level':>6}{'energy':>22}{'nodes':>7}{'residual':>12}")
    with np.errstate(all="ignore"):
        for spec in specs:
            label = f"{spec.name}{astuple(spec)}" if astuple(spec) else spec.name
            for w in bound_states(spec, args.branch, args.levels):
                print(f"{label:<24}{w.level:>6}{w.energy:>22.15g}{count_nodes(w):>7}{schrodinger_residual(w):>12.2e}")


if __name__ == "__main__":
    main()
