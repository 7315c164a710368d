"""Confluent hypergeometric intertwiners, their parameter lattices, and the
Schrodinger bound states they map to."""

__version__ = "0.1.0"

from .core import ChfParams, KernelElement, SeriesConfig, eval_derivative, eval_kernel, kummer_m, kummer_u2
from .errors import ChfError
from .lattice import PrimedParams, classify, orbit, sector_function
from .operators import Kind, apply_numeric, apply_symbolic
from .schrodinger import (
    CoulombN,
    Morse,
    Oscillator1D,
    OscillatorN,
    Wavefunction,
    count_nodes,
    ladder_on_wavefunction,
    schrodinger_residual,
    wavefunction,
)

__all__ = [
    "ChfError", "ChfParams", "CoulombN", "KernelElement", "Kind", "Morse", "Oscillator1D",
    "OscillatorN", "PrimedParams", "SeriesConfig", "Wavefunction", "apply_numeric",
    "apply_symbolic", "classify", "count_nodes", "eval_derivative", "eval_kernel", "kummer_m",
    "kummer_u2", "ladder_on_wavefunction", "orbit", "schrodinger_residual", "sector_function",
    "wavefunction",
]
