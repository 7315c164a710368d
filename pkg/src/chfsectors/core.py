"""Kummer basis evaluation, exact derivatives and the Kummer-operator residual.

The kernel of ``L_(a,c) = x d2/dx2 + (c - x) d/dx - a`` is spanned (for
non-integer ``c``) by ``1F1(a, c; x)`` and
``u(a, c; x) = x**(1 - c) * 1F1(a - c + 1, 2 - c; x)``.  Derivatives never use
finite differences: both basis functions differentiate into shifted basis
functions,

    d/dx 1F1(a, c; x) = (a / c) 1F1(a + 1, c + 1; x)
    d/dx u(a, c; x)   = (1 - c) u(a + 1, c + 1; x)
"""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from .errors import DomainX, IntegerC, NoConvergence, PoleAtC, SaturatedWarning

EPS_INT = 1e-9
GUARANTEED_PARAM = 50.0
# Largest |term| / |sum| ratio accepted from the double-precision pass before
# the series is re-summed in exact rational arithmetic.
CANCELLATION_RATIO = 8.0
# Terms below this fraction of the largest term are beyond double roundoff;
# they floor the stopping scale so a sum that is exactly zero still stops.
ROUNDOFF = 2.0**-53


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-14
    max_terms: int = 10000
    x_domain: float = 50.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    @classmethod
    def from_env(cls, **overrides) -> "SeriesConfig":
        """Default config, with ``CHF_MAX_TERMS`` overriding ``max_terms``."""
        env = os.environ.get("CHF_MAX_TERMS")
        if env is not None and "max_terms" not in overrides:
            overrides["max_terms"] = int(env)
        return cls(**overrides)


DEFAULT_CONFIG = SeriesConfig()


def _is_near_int(v, eps=EPS_INT) -> bool:
    v = float(v)
    return abs(v - round(v)) <= eps


@dataclass(frozen=True)
class ChfParams:
    """A point (a, c) of the parameter plane. Values may be floats or Fractions."""

    a: Real
    c: Real

    def __post_init__(self):
        for name in ("a", "c"):
            v = getattr(self, name)
            if not math.isfinite(float(v)):
                raise ValueError(f"parameter {name}={v!r} is not finite")

    @property
    def integer_c(self) -> bool:
        return _is_near_int(self.c)

    def as_float(self) -> tuple[float, float]:
        return float(self.a), float(self.c)


@dataclass(frozen=True)
class KernelElement:
    """``alpha * 1F1(a, c; x) + beta * u(a, c; x)``."""

    params: ChfParams
    alpha: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("kernel coefficients must be finite")
        if self.beta != 0 and self.params.integer_c:
            raise IntegerC(
                f"u-branch needs non-integer c (|c - round(c)| > {EPS_INT}), got c={self.params.c}"
            )

    @classmethod
    def first(cls, a, c, coeff=1.0) -> "KernelElement":
        return cls(ChfParams(a, c), coeff, 0.0)

    @classmethod
    def second(cls, a, c, coeff=1.0) -> "KernelElement":
        return cls(ChfParams(a, c), 0.0, coeff)

    @classmethod
    def zero(cls, params: ChfParams) -> "KernelElement":
        return cls(params, 0.0, 0.0)

    @property
    def is_zero(self) -> bool:
        return self.alpha == 0 and self.beta == 0


def _check_saturation(a, c, x, cfg):
    if abs(x) > cfg.x_domain or abs(a) > GUARANTEED_PARAM or abs(c) > GUARANTEED_PARAM:
        warnings.warn(
            f"1F1({a}, {c}; {x}) is outside the guaranteed domain; result is best-effort",
            SaturatedWarning,
            stacklevel=3,
        )


def _tail_shrinks(a, c, x, j):
    """True once every ratio from term j on is below 1/2.

    Past -a and -c both Pochhammer factors are positive and
    |x| max(1, (a+j)/(c+j)) / (j+1) only decreases, so the test latches.
    Before that point a run of small terms can precede growth.
    """
    if a + j <= 0 or c + j <= 0:
        return False
    return abs(x) * max(1, (a + j) / (c + j)) < (j + 1) / 2


def _sum_float(a, c, x, cfg):
    s = term = biggest = 1.0
    quiet, settled = 0, False
    for k in range(cfg.max_terms):
        term *= (a + k) * x / ((c + k) * (k + 1))
        s += term
        biggest = max(biggest, abs(term))
        settled = settled or _tail_shrinks(a, c, x, k + 1)
        if term == 0 or (settled and abs(term) < cfg.rel_tol * max(abs(s), ROUNDOFF * biggest)):
            quiet += 1
            if quiet == 3:
                return s, biggest
        else:
            quiet = 0
    raise NoConvergence(f"1F1({a}, {c}; {x}) not converged after {cfg.max_terms} terms")


def _sum_exact(a, c, x, cfg):
    a, c, x = Fraction(a), Fraction(c), Fraction(x)
    tol = Fraction(cfg.rel_tol)
    s = term = biggest = Fraction(1)
    quiet, settled = 0, False
    for k in range(cfg.max_terms):
        term = term * (a + k) * x / ((c + k) * (k + 1))
        s += term
        biggest = max(biggest, abs(term))
        settled = settled or _tail_shrinks(a, c, x, k + 1)
        if term == 0 or (settled and abs(term) < tol * max(abs(s), Fraction(ROUNDOFF) * biggest)):
            quiet += 1
            if quiet == 3:
                return float(s)
        else:
            quiet = 0
    raise NoConvergence(f"1F1({a}, {c}; {x}) not converged after {cfg.max_terms} terms")


def _terms_terminating(n, a, c, x):
    # a = -n: the series is a degree-n polynomial
    term = 1.0
    yield term
    for k in range(n):
        term *= (a + k) * x / ((c + k) * (k + 1))
        yield term


def _sum_terminating_exact(n, a, c, x):
    a, c, x = Fraction(a), Fraction(c), Fraction(x)
    s = term = Fraction(1)
    for k in range(n):
        term = term * (a + k) * x / ((c + k) * (k + 1))
        s += term
    return float(s)


def kummer_m(a, c, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Kummer's function ``1F1(a, c; x) = sum_k (a)_k x^k / ((c)_k k!)``.

    The power series is summed until three consecutive terms fall below
    ``cfg.rel_tol`` times the partial sum, counting only terms past the point
    where the remaining tail must shrink geometrically.  When the double-precision pass
    shows heavy cancellation (largest term more than ``CANCELLATION_RATIO``
    times the result) the same series is re-summed exactly over the rationals
    represented by the float inputs.
    """
    a, c, x = float(a), float(c), float(x)
    if not all(map(math.isfinite, (a, c, x))):
        raise ValueError("1F1 arguments must be finite")
    terminating = a <= 0 and a == round(a)
    if c <= EPS_INT and _is_near_int(c):
        # only a polynomial that stops before the pole is defined
        if not (terminating and -a < -round(c) + 1):
            raise PoleAtC(f"1F1 has a pole at c={c} (non-positive integer)")
    _check_saturation(a, c, x, cfg)
    if x == 0 or a == 0:
        return 1.0
    if terminating:
        terms = list(_terms_terminating(int(-a), a, c, x))
        s = math.fsum(terms)
        if max(map(abs, terms)) <= CANCELLATION_RATIO * abs(s):
            return s
        return _sum_terminating_exact(int(-a), a, c, x)
    s, biggest = _sum_float(a, c, x, cfg)
    if biggest <= CANCELLATION_RATIO * abs(s):
        return s
    return _sum_exact(a, c, x, cfg)


def series_scale(a, c, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Largest term magnitude of the 1F1 series, the size roundoff is measured against."""
    a, c, x = float(a), float(c), float(x)
    if x == 0 or a == 0:
        return 1.0
    if a < 0 and a == round(a):
        return max(map(abs, _terms_terminating(int(-a), a, c, x)))
    return _sum_float(a, c, x, cfg)[1]


def kummer_u2(a, c, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Second Kummer solution ``u(a, c; x) = x**(1 - c) 1F1(a - c + 1, 2 - c; x)``, x > 0."""
    x = float(x)
    if not x > 0:
        raise DomainX(f"u(a, c; x) needs x > 0 for the real power x**(1 - c), got x={x}")
    if _is_near_int(c):
        raise IntegerC(f"u(a, c; x) is excluded for integer c (got c={c})")
    # form the shifted parameters before rounding so exact inputs stay exact
    return x ** (1.0 - float(c)) * kummer_m(a - c + 1, 2 - c, x, cfg)


# -- exact derivatives -------------------------------------------------------

def _basis_terms(f: KernelElement):
    a, c = f.params.a, f.params.c
    terms = []
    if f.alpha != 0:
        terms.append((f.alpha, "F", a, c))
    if f.beta != 0:
        terms.append((f.beta, "u", a, c))
    return terms


def _differentiate(terms):
    out = []
    for coef, branch, a, c in terms:
        if branch == "F":
            if float(c) == 0.0:
                raise PoleAtC("d/dx 1F1(a, 0; x): coefficient a/c has a pole")
            k = coef * float(a) / float(c)
        else:
            k = coef * (1.0 - float(c))
        if k != 0:
            out.append((k, branch, a + 1, c + 1))
    return out


def _eval_terms(terms, x, cfg):
    vals = [
        coef * (kummer_m(a, c, x, cfg) if branch == "F" else kummer_u2(a, c, x, cfg))
        for coef, branch, a, c in terms
    ]
    return math.fsum(vals), math.fsum(abs(v) for v in vals)


def eval_kernel(f: KernelElement, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    return _eval_terms(_basis_terms(f), x, cfg)[0]


def eval_derivative(f: KernelElement, x, order: int = 1, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Derivative of a kernel element via basis parameter shifts (no differencing)."""
    if order < 0:
        raise ValueError("order must be non-negative")
    terms = _basis_terms(f)
    for _ in range(order):
        terms = _differentiate(terms)
    return _eval_terms(terms, x, cfg)[0]


def kernel_jet(f: KernelElement, x, n: int, cfg: SeriesConfig = DEFAULT_CONFIG):
    """Values and magnitudes of ``f, f', ..., f^(n)`` at x.

    The magnitude of each entry is the sum of absolute values of the basis
    contributions, used as the scale for relative comparisons.
    """
    vals = np.zeros(n + 1)
    mags = np.zeros(n + 1)
    terms = _basis_terms(f)
    for k in range(n + 1):
        vals[k], mags[k] = _eval_terms(terms, x, cfg)
        if k < n:
            terms = _differentiate(terms)
    return vals, mags


def kernel_residual(
    f: KernelElement,
    x,
    cfg: SeriesConfig = DEFAULT_CONFIG,
    operator_params: ChfParams | None = None,
) -> float:
    """``x f'' + (c - x) f' - a f`` evaluated with exact derivatives.

    ``operator_params`` replaces (a, c) in the operator only, which is how a
    mismatched element/operator pair is probed.
    """
    p = operator_params or f.params
    a, c = p.as_float()
    (f0, f1, f2), _ = kernel_jet(f, x, 2, cfg)
    x = float(x)
    return x * f2 + (c - x) * f1 - a * f0


def residual_scale(f: KernelElement, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """``|x f''| + |(c - x) f'| + |a f|``, the natural size of the residual terms."""
    a, c = f.params.as_float()
    (f0, f1, f2), _ = kernel_jet(f, x, 2, cfg)
    x = float(x)
    return abs(x * f2) + abs((c - x) * f1) + abs(a * f0)
