"""Seeded identity suites shared by the command line and the test suite.

Each suite draws (a, c, x) samples from a seeded generator and returns one
:class:`CheckRow` per identity with the worst relative deviation seen.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_CONFIG, ChfParams, KernelElement, SeriesConfig, eval_kernel
from .errors import CoefficientPole, PhaseNotReal
from .operators import (
    FACTORIZATION_FORMS,
    RELATIONS,
    Kind,
    KernelFn,
    PolyFn,
    check_composition,
    check_factorization,
    check_intertwining,
    check_kummer,
    compose_literal,
    compose_symbolic,
    factorized_value,
)

TOLERANCES = {"intertwining": 1e-9, "factorization": 1e-9, "composition": 1e-10, "kummer": 1e-12}
SUITES = tuple(TOLERANCES)


@dataclass(frozen=True)
class CheckRow:
    identity: str
    max_residual: float
    tolerance: float
    samples: int
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


def draw_params(rng: np.random.Generator, bound: float = 10.0, gap: float = 0.05) -> ChfParams:
    """Random (a, c) with |a|, |c| <= bound and c at least ``gap`` from any integer."""
    a = rng.uniform(-bound, bound)
    while True:
        c = rng.uniform(-bound, bound)
        if abs(c - round(c)) > gap:
            return ChfParams(a, c)


def draw_x(rng: np.random.Generator, lo: float = 0.25, hi: float = 10.0) -> float:
    return float(rng.uniform(lo, hi))


def _elements(p: ChfParams):
    return (KernelElement.first(p.a, p.c), KernelElement.second(p.a, p.c))


def intertwining_suite(samples: int, seed: int, cfg: SeriesConfig = DEFAULT_CONFIG) -> list[CheckRow]:
    rows = []
    for k, kind in enumerate(Kind):
        rng = np.random.default_rng([seed, k])
        worst, skipped = 0.0, 0
        for _ in range(samples):
            p, x = draw_params(rng), draw_x(rng)
            try:
                worst = max(worst, check_intertwining(kind, p, [x], cfg))
            except (CoefficientPole, PhaseNotReal):
                skipped += 1
        rows.append(CheckRow(kind.value, worst, TOLERANCES["intertwining"], samples, skipped))
    return rows


def factorization_suite(samples: int, seed: int, cfg: SeriesConfig = DEFAULT_CONFIG) -> list[CheckRow]:
    rows = []
    for i in range(1, 5):
        for form in FACTORIZATION_FORMS:
            rng = np.random.default_rng([seed, 10 * i + FACTORIZATION_FORMS.index(form)])
            worst = 0.0
            for _ in range(samples):
                p, x = draw_params(rng), draw_x(rng)
                for f in _elements(p):
                    worst = max(worst, check_factorization(i, p, f, x, form, cfg))
            name = f"L=B{i}A{i}-q{i}" if form == "BA" else f"L=A{i}B{i}-q{i}'"
            rows.append(CheckRow(name, worst, TOLERANCES["factorization"], samples))
    return rows


def probe_residual(i: int, form: str, p: ChfParams, x: float) -> float:
    """Factorized operator on the non-kernel probe x**2 against the closed form
    ``L x^2 = (2 + 2c) x - (2 + a) x^2``."""
    a, c = p.as_float()
    expected = (2 + 2 * c) * x - (2 + a) * x**2
    got, mag = factorized_value(i, p, PolyFn((0.0, 0.0, 1.0)), x, form)
    return abs(got - expected) / max(mag, abs(expected))


def _symbolic_gap(lhs, rhs, f: KernelElement, x: float, cfg: SeriesConfig) -> float:
    # left side applied literally against the right side composed through the basis action
    num, mag = compose_literal(lhs, f.params, KernelFn(f, cfg)).jet(x, 0)
    sym = eval_kernel(compose_symbolic(rhs, f), x, cfg)
    return abs(num[0] - sym) / max(mag[0], abs(sym), 1e-300)


def composition_suite(samples: int, seed: int, cfg: SeriesConfig = DEFAULT_CONFIG) -> list[CheckRow]:
    rows = []
    for k, (name, (lhs, rhs)) in enumerate(RELATIONS.items()):
        # the reflection in V and W needs the entire 1F1, not u
        reflects = bool({Kind.V, Kind.W} & set(lhs + rhs))
        rng = np.random.default_rng([seed, 100 + k])
        worst = 0.0
        for _ in range(samples):
            p, x = draw_params(rng), draw_x(rng)
            for f in _elements(p)[: 1 if reflects else 2]:
                worst = max(worst, check_composition(name, p, f, x, cfg), _symbolic_gap(lhs, rhs, f, x, cfg))
        rows.append(CheckRow(name, worst, TOLERANCES["composition"], samples))
    return rows


def kummer_suite(samples: int, seed: int, cfg: SeriesConfig = DEFAULT_CONFIG) -> list[CheckRow]:
    rng = np.random.default_rng([seed, 200])
    worst = 0.0
    for _ in range(samples):
        p = draw_params(rng)
        x = float(rng.uniform(-10, 10))
        worst = max(worst, check_kummer(p, x, cfg))
    return [CheckRow("1F1(a,c;x)=e^x 1F1(c-a,c;-x)", worst, TOLERANCES["kummer"], samples)]


_RUNNERS = {
    "intertwining": intertwining_suite,
    "factorization": factorization_suite,
    "composition": composition_suite,
    "kummer": kummer_suite,
}


def run_suite(name: str, samples: int = 50, seed: int = 0, cfg: SeriesConfig = DEFAULT_CONFIG) -> list[CheckRow]:
    try:
        runner = _RUNNERS[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return runner(samples, seed, cfg)
