"""The eleven confluent-hypergeometric intertwiners.

Each operator exists in two independent forms:

* a *symbolic* basis action: a coefficient times a Kummer basis function at
  the induced parameters (``apply_symbolic``), and
* a *literal* differential/reflection expression evaluated with exact
  derivatives (``apply_numeric``), built from small jet combinators.

Agreement between the two is what ``check_intertwining`` measures.  The same
combinators evaluate the factorizations ``L = B A - q`` and the composition
relations through Q.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

import numpy as np

from .core import (
    DEFAULT_CONFIG,
    EPS_INT,
    ChfParams,
    KernelElement,
    SeriesConfig,
    eval_kernel,
    kernel_jet,
)
from .errors import CoefficientPole, DomainX, PhaseNotReal, ReflectionDomain


class Kind(str, Enum):
    Q = "Q"
    V = "V"
    W = "W"
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"

    @classmethod
    def parse(cls, name) -> "Kind":
        if isinstance(name, cls):
            return name
        return cls(str(name).upper().replace("^", ""))

    @property
    def index(self) -> int | None:
        return int(self.value[1]) if self.value[0] in "AB" else None


ALL_KINDS = tuple(Kind)


def ladder(prefix: str, i: int) -> Kind:
    return Kind(f"{prefix}{i}")


# -- induced parameter action ------------------------------------------------

_INDUCED = {
    Kind.Q: lambda a, c: (a - c + 1, 2 - c),
    Kind.A1: lambda a, c: (a, c + 1),
    Kind.B1: lambda a, c: (a, c - 1),
    Kind.A2: lambda a, c: (a - 1, c - 1),
    Kind.B2: lambda a, c: (a + 1, c + 1),
    Kind.A3: lambda a, c: (a - c, 1 - c),
    Kind.B3: lambda a, c: (a - c + 1, 1 - c),
    Kind.A4: lambda a, c: (a - c + 1, 3 - c),
    Kind.B4: lambda a, c: (a - c + 2, 3 - c),
    Kind.V: lambda a, c: (c - a, c),
    Kind.W: lambda a, c: (1 - a, 2 - c),
}


def induced_params(op, p: ChfParams) -> ChfParams:
    """Parameters (a~, c~) of the kernel that ``op`` maps K_(a,c) into."""
    return ChfParams(*_INDUCED[Kind.parse(op)](p.a, p.c))


def q_constant(i: int, p: ChfParams):
    """Factorization constant q^i_(a,c): a - c for i = 1, 3 and a - 1 for i = 2, 4."""
    if i in (1, 3):
        return p.a - p.c
    if i in (2, 4):
        return p.a - 1
    raise ValueError(f"factorization index must be 1..4, got {i}")


# -- symbolic basis action ---------------------------------------------------

_SWAPS = {Kind.Q, Kind.A3, Kind.B3, Kind.A4, Kind.B4, Kind.W}

# (numerator, denominator) of the coefficient multiplying the image of 1F1 and
# of u respectively; None marks the (-1)**(1 - c) phase of V and W.
_COEFFS = {
    Kind.Q: (lambda a, c: (1, 1), lambda a, c: (1, 1)),
    Kind.A1: (lambda a, c: (a - c, c), lambda a, c: (1 - c, 1)),
    Kind.B1: (lambda a, c: (c - 1, 1), lambda a, c: (a - c + 1, 2 - c)),
    Kind.A2: (lambda a, c: (c - 1, 1), lambda a, c: (a - 1, 2 - c)),
    Kind.B2: (lambda a, c: (a, c), lambda a, c: (1 - c, 1)),
    Kind.A3: (lambda a, c: (a - c, c), lambda a, c: (1 - c, 1)),
    Kind.B3: (lambda a, c: (a, c), lambda a, c: (1 - c, 1)),
    Kind.A4: (lambda a, c: (c - 1, 1), lambda a, c: (a - 1, 2 - c)),
    Kind.B4: (lambda a, c: (c - 1, 1), lambda a, c: (a - c + 1, 2 - c)),
    Kind.V: (lambda a, c: (1, 1), None),
    Kind.W: (lambda a, c: (1, 1), None),
}


@dataclass(frozen=True)
class BasisAction:
    """Basis action of one operator evaluated at a point (a, c)."""

    kind: Kind
    source: ChfParams
    target_params: ChfParams
    coeff_on_F: object  # number, or None at a coefficient pole
    coeff_on_u: object  # number, None at a pole; for V, W see phase_exponent
    swaps_basis: bool
    phase_exponent: object = None  # u-column factor is (-1)**phase_exponent


def _ratio(kind, column, num, den):
    if abs(float(den)) <= EPS_INT:
        raise CoefficientPole(
            f"{kind.value} on the {column} branch: denominator {den} vanishes at this point"
        )
    return num if den == 1 else num / den


def table_coefficient(op, branch: str, a, c):
    """Coefficient of the basis-action image of one basis function.

    ``branch`` is ``"F"`` or ``"u"``.  Returns ``(coefficient, target_branch,
    (a~, c~))``.  Raises CoefficientPole / PhaseNotReal where the entry is not
    a finite real number.
    """
    kind = Kind.parse(op)
    target = _INDUCED[kind](a, c)
    swapped = kind in _SWAPS
    new_branch = {"F": "u", "u": "F"}[branch] if swapped else branch
    col = 0 if branch == "F" else 1
    entry = _COEFFS[kind][col]
    if entry is None:
        e = 1 - c
        if abs(float(e) - round(float(e))) > EPS_INT:
            raise PhaseNotReal(
                f"{kind.value} on the u branch carries (-1)**(1 - c) with 1 - c = {float(e)!r}, "
                "which is not real"
            )
        return (-1) ** int(round(float(e))), new_branch, target
    num, den = entry(a, c)
    return _ratio(kind, branch, num, den), new_branch, target


def basis_action(op, p: ChfParams) -> BasisAction:
    kind = Kind.parse(op)
    a, c = p.a, p.c

    def safe(col):
        entry = _COEFFS[kind][col]
        if entry is None:
            return None
        num, den = entry(a, c)
        return None if abs(float(den)) <= EPS_INT else num / den

    return BasisAction(
        kind=kind,
        source=p,
        target_params=induced_params(kind, p),
        coeff_on_F=safe(0),
        coeff_on_u=safe(1),
        swaps_basis=kind in _SWAPS,
        phase_exponent=(1 - c) if kind in (Kind.V, Kind.W) else None,
    )


def apply_symbolic(op, f: KernelElement) -> KernelElement:
    """Image of a kernel element under ``op`` using the exact basis actions."""
    kind = Kind.parse(op)
    a, c = f.params.a, f.params.c
    # exact target parameters keep combinations such as a - c + 1 = 0 exact
    target = induced_params(kind, ChfParams(Fraction(a), Fraction(c)))
    alpha = beta = 0.0
    for coef, branch in ((f.alpha, "F"), (f.beta, "u")):
        if coef == 0:
            continue
        k, new_branch, _ = table_coefficient(kind, branch, a, c)
        if new_branch == "F":
            alpha += coef * float(k)
        else:
            beta += coef * float(k)
    return KernelElement(target, alpha, beta)


# -- literal operators on jets ------------------------------------------------

class Fn(Protocol):
    def jet(self, x: float, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Values and magnitudes of the first n derivatives at x."""


@dataclass(frozen=True)
class KernelFn:
    element: KernelElement
    cfg: SeriesConfig = DEFAULT_CONFIG

    def jet(self, x, n):
        return kernel_jet(self.element, x, n, self.cfg)


@dataclass(frozen=True)
class PolyFn:
    coeffs: tuple  # ascending powers

    def jet(self, x, n):
        c = np.polynomial.polynomial.Polynomial(np.asarray(self.coeffs, dtype=float))
        a = np.polynomial.polynomial.Polynomial(np.abs(np.asarray(self.coeffs, dtype=float)))
        vals = np.array([c.deriv(k)(x) if k else c(x) for k in range(n + 1)])
        mags = np.array([a.deriv(k)(abs(x)) if k else a(abs(x)) for k in range(n + 1)])
        return vals, mags


@dataclass(frozen=True)
class Deriv:
    inner: Fn

    def jet(self, x, n):
        v, m = self.inner.jet(x, n + 1)
        return v[1:], m[1:]


def _leibniz(g, ga, v, m):
    n = len(v) - 1
    vals = np.zeros(n + 1)
    mags = np.zeros(n + 1)
    for k in range(n + 1):
        for j in range(k + 1):
            b = math.comb(k, j)
            vals[k] += b * g[j] * v[k - j]
            mags[k] += b * ga[j] * m[k - j]
    return vals, mags


@dataclass(frozen=True)
class MulPower:
    """x**p times the inner function."""

    inner: Fn
    p: float

    def jet(self, x, n):
        p = float(self.p)
        integral = p == round(p)
        if x <= 0 and not (integral and p >= 0):
            raise DomainX(f"x**{p} needs x > 0, got x={x}")
        g = np.zeros(n + 1)
        falling = 1.0
        for j in range(n + 1):
            if falling == 0.0:
                break
            g[j] = falling * x ** (p - j)
            falling *= p - j
        v, m = self.inner.jet(x, n)
        return _leibniz(g, np.abs(g), v, m)


@dataclass(frozen=True)
class MulExp:
    inner: Fn

    def jet(self, x, n):
        g = np.full(n + 1, math.exp(x))
        v, m = self.inner.jet(x, n)
        return _leibniz(g, g, v, m)


@dataclass(frozen=True)
class Reflect:
    """R_x: x -> -x."""

    inner: Fn

    def jet(self, x, n):
        v, m = self.inner.jet(-x, n)
        signs = np.array([(-1.0) ** k for k in range(n + 1)])
        return v * signs, m


@dataclass(frozen=True)
class Lin:
    terms: tuple  # ((coefficient, Fn), ...)

    def jet(self, x, n):
        vals = np.zeros(n + 1)
        mags = np.zeros(n + 1)
        for coef, fn in self.terms:
            v, m = fn.jet(x, n)
            vals += float(coef) * v
            mags += abs(float(coef)) * m
        return vals, mags


def _d_minus_1(fn):
    return Lin(((1, Deriv(fn)), (-1, fn)))


def literal(op, p: ChfParams, fn: Fn) -> Fn:
    """The literal differential expression of ``op`` at (a, c) applied to ``fn``."""
    kind = Kind.parse(op)
    c = float(p.c)
    if kind is Kind.Q:
        return MulPower(fn, c - 1)
    if kind is Kind.A1:
        return _d_minus_1(fn)
    if kind is Kind.B1:
        return Lin(((1, MulPower(Deriv(fn), 1)), (c - 1, fn)))
    if kind is Kind.A2:
        return Lin(((1, MulPower(_d_minus_1(fn), 1)), (c - 1, fn)))
    if kind is Kind.B2:
        return Deriv(fn)
    if kind is Kind.A3:
        return MulPower(_d_minus_1(fn), c)
    if kind is Kind.B3:
        return MulPower(Deriv(fn), c)
    if kind is Kind.A4:
        return MulPower(literal(Kind.A2, p, fn), c - 2)
    if kind is Kind.B4:
        return MulPower(literal(Kind.B1, p, fn), c - 2)
    if kind is Kind.V:
        return MulExp(Reflect(fn))
    if kind is Kind.W:
        return MulPower(MulExp(Reflect(fn)), c - 1)
    raise ValueError(kind)


def kummer_operator(p: ChfParams, fn: Fn) -> Fn:
    """L_(a,c) = x d2/dx2 + (c - x) d/dx - a as a literal operator."""
    a, c = p.as_float()
    return Lin(
        (
            (1, MulPower(Deriv(Deriv(fn)), 1)),
            (c, Deriv(fn)),
            (-1, MulPower(Deriv(fn), 1)),
            (-a, fn),
        )
    )


def _as_fn(f, cfg) -> Fn:
    return KernelFn(f, cfg) if isinstance(f, KernelElement) else f


def evaluate_literal(op, f, x, cfg: SeriesConfig = DEFAULT_CONFIG, params: ChfParams | None = None):
    """(value, magnitude) of the literal expression of ``op`` on ``f`` at x."""
    kind = Kind.parse(op)
    if isinstance(f, KernelElement):
        params = f.params
        if kind in (Kind.V, Kind.W) and f.beta != 0:
            raise ReflectionDomain(
                f"{kind.value} reflects x -> -x; the u branch is not real there"
            )
    if params is None:
        raise ValueError("params are required for a non-kernel function")
    v, m = literal(kind, params, _as_fn(f, cfg)).jet(float(x), 0)
    return v[0], m[0]


def apply_numeric(op, f, x, cfg: SeriesConfig = DEFAULT_CONFIG, params: ChfParams | None = None) -> float:
    """Evaluate the literal operator expression on ``f`` at x."""
    return evaluate_literal(op, f, x, cfg, params)[0]


def _rel(dev, *scales):
    return abs(dev) / max(max(scales), 1e-300)


def check_intertwining(op, p: ChfParams, x_grid, cfg: SeriesConfig = DEFAULT_CONFIG, branches=("F", "u")) -> float:
    """Max relative deviation between literal and symbolic actions of ``op``.

    Runs over the basis elements named in ``branches``; the u branch is
    skipped where it does not exist (integer c) or cannot be reflected (V, W).
    """
    kind = Kind.parse(op)
    worst = 0.0
    for branch in branches:
        if branch == "u" and (p.integer_c or kind in (Kind.V, Kind.W)):
            continue
        f = KernelElement.first(p.a, p.c) if branch == "F" else KernelElement.second(p.a, p.c)
        image = apply_symbolic(kind, f)
        for x in x_grid:
            num, mag = evaluate_literal(kind, f, x, cfg)
            sym = eval_kernel(image, x, cfg)
            worst = max(worst, _rel(num - sym, mag, abs(sym)))
    return worst


# -- factorizations ------------------------------------------------------------

FACTORIZATION_FORMS = ("BA", "AB")


def factorized_value(i: int, p: ChfParams, f, x, form: str = "BA", cfg: SeriesConfig = DEFAULT_CONFIG):
    """(value, magnitude) of the factorized operator applied to f at x.

    ``"BA"``: B^i_(A^i(a,c)) A^i_(a,c) - q^i_(a,c)
    ``"AB"``: A^i_(B^i(a,c)) B^i_(a,c) - q^i_(B^i(a,c))
    Both equal L_(a,c).
    """
    fn = _as_fn(f, cfg)
    A, B = ladder("A", i), ladder("B", i)
    if form == "BA":
        inner_kind, outer_kind, q_at = A, B, p
    elif form == "AB":
        inner_kind, outer_kind, q_at = B, A, induced_params(B, p)
    else:
        raise ValueError(f"form must be one of {FACTORIZATION_FORMS}")
    mid = induced_params(inner_kind, p)
    composed = literal(outer_kind, mid, literal(inner_kind, p, fn))
    q = float(q_constant(i, q_at))
    v, m = Lin(((1, composed), (-q, fn))).jet(float(x), 0)
    return v[0], m[0]


def check_factorization(i: int, p: ChfParams, f, x, form: str = "BA", cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Relative deviation of the factorized operator from L_(a,c) on f at x."""
    fac, fac_mag = factorized_value(i, p, f, x, form, cfg)
    v, m = kummer_operator(p, _as_fn(f, cfg)).jet(float(x), 0)
    return _rel(fac - v[0], fac_mag, m[0])


# -- compositions --------------------------------------------------------------

# relation name -> (left chain, right chain); chains list operators in the
# order they act (rightmost factor first)
RELATIONS = {
    "W=QV": ((Kind.W,), (Kind.V, Kind.Q)),
    "A2=QA1Q": ((Kind.A2,), (Kind.Q, Kind.A1, Kind.Q)),
    "A3=QA1": ((Kind.A3,), (Kind.A1, Kind.Q)),
    "A4=QA2": ((Kind.A4,), (Kind.A2, Kind.Q)),
    "B2=QB1Q": ((Kind.B2,), (Kind.Q, Kind.B1, Kind.Q)),
    "B3=QB2": ((Kind.B3,), (Kind.B2, Kind.Q)),
    "B4=QB1": ((Kind.B4,), (Kind.B1, Kind.Q)),
    "Q2=1": ((Kind.Q, Kind.Q), ()),
}


def thread(chain, p: ChfParams) -> list[ChfParams]:
    """Parameters at which each factor of ``chain`` acts; last entry is the target."""
    out = [p]
    for kind in chain:
        out.append(induced_params(kind, out[-1]))
    return out


def compose_literal(chain, p: ChfParams, fn: Fn) -> Fn:
    for kind, at in zip(chain, thread(chain, p)):
        fn = literal(kind, at, fn)
    return fn


def compose_symbolic(chain, f: KernelElement) -> KernelElement:
    for kind in chain:
        f = apply_symbolic(kind, f)
    return f


def check_composition(relation: str, p: ChfParams, f, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Relative deviation between both sides of a composition relation on f at x."""
    lhs_chain, rhs_chain = RELATIONS[relation]
    lt, rt = thread(lhs_chain, p)[-1], thread(rhs_chain, p)[-1]
    if not (math.isclose(float(lt.a), float(rt.a), abs_tol=1e-12)
            and math.isclose(float(lt.c), float(rt.c), abs_tol=1e-12)):
        raise AssertionError(f"{relation}: the two sides land on different kernels")
    fn = _as_fn(f, cfg)
    lv, lm = compose_literal(lhs_chain, p, fn).jet(float(x), 0)
    rv, rm = compose_literal(rhs_chain, p, fn).jet(float(x), 0)
    return _rel(lv[0] - rv[0], lm[0], rm[0])


def check_kummer(p: ChfParams, x, cfg: SeriesConfig = DEFAULT_CONFIG) -> float:
    """Kummer's first formula through V: 1F1(a,c;x) against e^x 1F1(c-a,c;-x).

    The deviation is relative to the larger series term scale of the two
    sides, so zeros of 1F1 do not inflate it.
    """
    from .core import kummer_m, series_scale

    a, c = p.a, p.c
    lhs = kummer_m(a, c, x, cfg)
    rhs, mag = evaluate_literal(Kind.V, KernelElement.first(c - a, c), x, cfg)
    terms = max(series_scale(a, c, x, cfg), math.exp(x) * series_scale(c - a, c, -x, cfg))
    return _rel(lhs - rhs, abs(lhs), mag, terms)
