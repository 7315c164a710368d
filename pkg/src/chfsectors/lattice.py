"""Primed parameter plane: a' = 2a - c, c' = c - 1.

In primed coordinates Q and V act as the reflections c' -> -c' and
a' -> -a', and the first-order intertwiners as unit diagonal shifts (A3, B3,
A4, B4 combine a shift with Q).  Everything here is exact: coordinates are
``Fraction`` and membership tests are integer arithmetic.

Sector indexing used throughout::

    left sector  (L.I.S.):  (a', c') = (-1 - m - n, m - n),  m, n >= 0
    right sector (R.I.S.):  (a', c') = ( 1 + m + n, m - n),  m, n >= 0

so ``m`` counts A1 (resp. B2) steps and ``n`` counts A2 (resp. B1) steps away
from the corner.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .core import ChfParams, KernelElement
from .errors import NotInSector
from .operators import Kind

HALF = Fraction(1, 2)


def exact(v) -> Fraction:
    """Exact rational value of an int, Fraction, float (its binary value) or 'p/q' string."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


@dataclass(frozen=True)
class PrimedParams:
    a_p: Fraction
    c_p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a_p", exact(self.a_p))
        object.__setattr__(self, "c_p", exact(self.c_p))

    def __iter__(self):
        return iter((self.a_p, self.c_p))

    def __str__(self):
        return f"({self.a_p}, {self.c_p})"


def to_primed(p: ChfParams) -> PrimedParams:
    a, c = exact(p.a), exact(p.c)
    return PrimedParams(2 * a - c, c - 1)


def from_primed(q: PrimedParams) -> ChfParams:
    return ChfParams((q.a_p + q.c_p + 1) / 2, q.c_p + 1)


_PRIMED = {
    Kind.Q: lambda a, c: (a, -c),
    Kind.V: lambda a, c: (-a, c),
    Kind.W: lambda a, c: (-a, -c),
    Kind.A1: lambda a, c: (a - 1, c + 1),
    Kind.B1: lambda a, c: (a + 1, c - 1),
    Kind.A2: lambda a, c: (a - 1, c - 1),
    Kind.B2: lambda a, c: (a + 1, c + 1),
    Kind.A3: lambda a, c: (a - 1, -c - 1),
    Kind.B3: lambda a, c: (a + 1, -c - 1),
    Kind.A4: lambda a, c: (a - 1, -c + 1),
    Kind.B4: lambda a, c: (a + 1, -c + 1),
}


def induced_primed(op, q: PrimedParams) -> PrimedParams:
    return PrimedParams(*_PRIMED[Kind.parse(op)](q.a_p, q.c_p))


# -- annihilation lines ----------------------------------------------------------

@dataclass(frozen=True)
class LineSpec:
    """The line c' = slope * a' + intercept on which ``kind`` annihilates."""

    kind: Kind
    slope: int
    intercept: int
    alias_of: Kind | None = None

    def contains(self, q: PrimedParams) -> bool:
        return q.c_p == self.slope * q.a_p + self.intercept

    def __str__(self):
        sign = "+" if self.intercept >= 0 else "-"
        lead = "a'" if self.slope == 1 else "-a'"
        return f"al[{self.kind.value}]: c' = {lead} {sign} {abs(self.intercept)}"


_LINES = {Kind.A1: (1, -1), Kind.A2: (-1, 1), Kind.B1: (1, 1), Kind.B2: (-1, -1)}
_ALIASES = {Kind.A3: Kind.A1, Kind.A4: Kind.A2, Kind.B3: Kind.B2, Kind.B4: Kind.B1}


def annihilation_line(op) -> LineSpec:
    kind = Kind.parse(op)
    base = _ALIASES.get(kind, kind)
    if base not in _LINES:
        raise ValueError(f"{kind.value} has no annihilation line")
    slope, intercept = _LINES[base]
    return LineSpec(kind, slope, intercept, base if base is not kind else None)


LADDER_KINDS = tuple(k for k in Kind if k.index is not None)


# -- classification --------------------------------------------------------------

class Sector(str, Enum):
    LIS_upper = "LIS_upper"
    LIS_lower = "LIS_lower"
    RIS_upper = "RIS_upper"
    RIS_lower = "RIS_lower"
    InvLineMinusHalf_left = "InvLineMinusHalf_left"
    InvLineMinusHalf_right = "InvLineMinusHalf_right"
    InvLinePlusHalf = "InvLinePlusHalf"
    CriticalPoint = "CriticalPoint"
    Generic = "Generic"


CRITICAL_POINTS = {
    (Fraction(-1), Fraction(0)): "left corner",
    (Fraction(1), Fraction(0)): "right corner",
    (Fraction(0), Fraction(1)): "upper critical point",
    (Fraction(0), Fraction(-1)): "lower critical point",
}


@dataclass(frozen=True)
class SectorClass:
    variant: Sector
    indices: tuple | None = None
    label: str = ""
    on_spine: bool = False  # c' = 0: both parts meet, reported as upper
    lines: tuple = ()  # ladder kinds whose annihilation line holds the point

    @property
    def sector(self) -> str | None:
        if self.variant.value.startswith("LIS") or self.label == "left corner":
            return "LIS"
        if self.variant.value.startswith("RIS") or self.label == "right corner":
            return "RIS"
        return None

    def __str__(self):
        out = self.variant.value
        if self.label:
            out += f"({self.label})"
        if self.indices is not None:
            names = ("m", "n") if len(self.indices) == 2 else ("n",)
            out += " " + " ".join(f"{k}={v}" for k, v in zip(names, self.indices))
        return out


def sector_indices(q: PrimedParams, side: str):
    """(m, n) of q in the left ("LIS") or right ("RIS") sector, or None."""
    a, c = q.a_p, q.c_p
    if side == "LIS":
        m2, n2 = c - a - 1, -a - c - 1
    else:
        m2, n2 = a + c - 1, a - c - 1
    if m2.denominator != 1 or n2.denominator != 1 or m2 % 2 or n2 % 2:
        return None
    m, n = int(m2) // 2, int(n2) // 2
    if m < 0 or n < 0:
        return None
    return m, n


def classify(q: PrimedParams) -> SectorClass:
    q = PrimedParams(q.a_p, q.c_p)
    a, c = q.a_p, q.c_p
    lines = tuple(k for k in LADDER_KINDS if annihilation_line(k).contains(q))
    if (a, c) in CRITICAL_POINTS:
        return SectorClass(Sector.CriticalPoint, None, CRITICAL_POINTS[(a, c)], c == 0, lines)
    for side in ("LIS", "RIS"):
        idx = sector_indices(q, side)
        if idx is not None:
            part = "lower" if c < 0 else "upper"
            return SectorClass(Sector(f"{side}_{part}"), idx, "", c == 0, lines)
    if c == -HALF or c == HALF:
        left = a + HALF
        right = a - HALF
        for n, side in ((-left, "left"), (right, "right")):
            if n.denominator == 1 and n >= 0:
                if c == -HALF:
                    variant = Sector(f"InvLineMinusHalf_{side}")
                    return SectorClass(variant, (int(n),), "", False, lines)
                return SectorClass(Sector.InvLinePlusHalf, (int(n),), side, False, lines)
    return SectorClass(Sector.Generic, None, "", False, lines)


# -- closed-form sector functions ---------------------------------------------

def _poly_d(p, with_exp):
    d = [k * p[k] for k in range(1, len(p))] or [Fraction(0)]
    if with_exp:
        d = _poly_add(d, p)
    return d


def _poly_add(p, r, s=1):
    n = max(len(p), len(r))
    p = list(p) + [Fraction(0)] * (n - len(p))
    r = list(r) + [Fraction(0)] * (n - len(r))
    return [x + s * y for x, y in zip(p, r)]


def _poly_scale(p, k):
    return [k * x for x in p]


def _poly_mulx(p):
    return [Fraction(0)] + list(p)


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def literal_on_closed_form(op, p: ChfParams, poly, with_exp: bool):
    """Exact action of a ladder operator on ``e^(x if with_exp) * poly(x)``.

    Only operators with polynomial coefficients are allowed (A1, A2, B1, B2).
    Returns the new ascending coefficient list (the exponential factor is
    unchanged).
    """
    kind = Kind.parse(op)
    c = exact(p.c)
    d = _poly_d(poly, with_exp)
    if kind is Kind.A1:
        out = _poly_add(d, poly, -1)
    elif kind is Kind.B2:
        out = d
    elif kind is Kind.A2:
        out = _poly_add(_poly_mulx(_poly_add(d, poly, -1)), _poly_scale(poly, c - 1))
    elif kind is Kind.B1:
        out = _poly_add(_poly_mulx(d), _poly_scale(poly, c - 1))
    else:
        raise ValueError(f"{kind.value} is not a polynomial-coefficient ladder operator")
    return _trim(out)


def kummer_on_closed_form(p: ChfParams, poly, with_exp: bool):
    """Exact L_(a,c) applied to ``e^(x if with_exp) * poly(x)``; zero iff in the kernel."""
    a, c = exact(p.a), exact(p.c)
    d1 = _poly_d(poly, with_exp)
    d2 = _poly_d(d1, with_exp)
    out = _poly_add(_poly_mulx(d2), _poly_scale(d1, c))
    out = _poly_add(out, _poly_mulx(d1), -1)
    out = _poly_add(out, _poly_scale(poly, a), -1)
    return _trim(out)


@dataclass(frozen=True)
class SectorFunction:
    """Closed-form c.h.f. of a sector point: ``e^(x if exp) * sum coeffs[k] x**k``.

    ``tag`` is one of ConstSign (k = number of A1 steps, value (-1)**k),
    MonomialNeg ((-x)**k), Exp (e**x), MonomialExp (x**k e**x), or the interior
    forms Polynomial / ExpPolynomial.
    """

    tag: str
    k: int | None
    point: PrimedParams
    coeffs: tuple
    exp: bool

    @property
    def params(self) -> ChfParams:
        return from_primed(self.point)

    def __call__(self, x):
        x = np.asarray(x)
        dtype = complex if np.iscomplexobj(x) else float
        poly = np.polynomial.polynomial.polyval(x, np.array([float(v) for v in self.coeffs], dtype=dtype))
        return poly * np.exp(x) if self.exp else poly

    def jet(self, x, n):
        """Values and magnitudes of the first n derivatives (jet protocol)."""
        p = list(self.coeffs)
        vals = np.zeros(n + 1)
        mags = np.zeros(n + 1)
        for k in range(n + 1):
            cf = np.array([float(v) for v in p])
            scale = np.exp(x) if self.exp else 1.0
            vals[k] = np.polynomial.polynomial.polyval(x, cf) * scale
            mags[k] = np.polynomial.polynomial.polyval(abs(x), np.abs(cf)) * scale
            p = _poly_d(p, self.exp)
        return vals, mags

    def as_kernel_element(self) -> KernelElement:
        """The same function as a multiple of 1F1(a, c; x); needs c >= 1 (upper part)."""
        p = self.params
        if p.c < 1:
            raise NotInSector(f"{self.point} lies in a lower part; no 1F1 representation at integer c")
        return KernelElement(p, float(self.coeffs[0]), 0.0)

    def describe(self) -> str:
        names = {
            "ConstSign": f"(-1)^{self.k}",
            "MonomialNeg": f"(-x)^{self.k}",
            "Exp": "e^x",
            "MonomialExp": f"x^{self.k} e^x",
        }
        if self.tag in names:
            return names[self.tag]
        terms = " + ".join(f"({c})x^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"e^x [{terms}]" if self.exp else terms


def sector_function(q: PrimedParams) -> SectorFunction:
    """Closed-form function of a left- or right-sector point.

    Built from the corner function by the literal operators (A1 then A2 from
    f(-1,0;x) = 1 on the left, B2 then B1 from g(1,0;x) = e^x on the right) in
    exact rational arithmetic.
    """
    q = PrimedParams(q.a_p, q.c_p)
    for side in ("LIS", "RIS"):
        idx = sector_indices(q, side)
        if idx is not None:
            break
    else:
        raise NotInSector(f"{q} is not a left- or right-sector lattice point")
    m, n = idx
    with_exp = side == "RIS"
    first, second = (Kind.A1, Kind.A2) if side == "LIS" else (Kind.B2, Kind.B1)
    point = PrimedParams(-1 if side == "LIS" else 1, 0)
    poly = [Fraction(1)]
    for kind, steps in ((first, m), (second, n)):
        for _ in range(steps):
            poly = literal_on_closed_form(kind, from_primed(point), poly, with_exp)
            point = induced_primed(kind, point)
    assert point == q
    if side == "LIS":
        tag, k = ("ConstSign", m) if n == 0 else ("MonomialNeg", n) if m == 0 else ("Polynomial", None)
    else:
        tag, k = ("Exp", None) if n == 0 else ("MonomialExp", n) if m == 0 else ("ExpPolynomial", None)
    return SectorFunction(tag, k, q, tuple(poly), with_exp)


# -- orbits and sector maps ------------------------------------------------------

@dataclass(frozen=True)
class Orbit:
    kind: Kind
    points: tuple
    annihilated: bool  # stopped on the operator's annihilation line
    starts_on_line: bool = False


def orbit(op, q: PrimedParams, steps: int) -> Orbit:
    """Iterated induced action of ``op`` for up to ``steps`` steps.

    The walk stops early, flagged, once it lands on ``op``'s annihilation line
    (the landing point is included).
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    kind = Kind.parse(op)
    line = annihilation_line(kind) if kind.index is not None else None
    q = PrimedParams(q.a_p, q.c_p)
    pts = [q]
    for _ in range(steps):
        pts.append(induced_primed(kind, pts[-1]))
        if line is not None and line.contains(pts[-1]):
            return Orbit(kind, tuple(pts), True, line.contains(q))
    return Orbit(kind, tuple(pts), False, bool(line and line.contains(q)))


@dataclass(frozen=True)
class SectorMap:
    image: PrimedParams
    source_class: SectorClass
    image_class: SectorClass
    description: str


def _part(cls: SectorClass) -> str:
    if cls.on_spine:
        return "spine"
    return "lower" if cls.variant.value.endswith("lower") else "upper"


def sector_intertwining_map(op, q: PrimedParams) -> SectorMap:
    """Where Q (same sector, upper <-> lower) or V (left <-> right, same part) sends a sector point."""
    kind = Kind.parse(op)
    if kind not in (Kind.Q, Kind.V):
        raise ValueError("sector maps are defined for Q and V")
    src = classify(q)
    if src.sector is None:
        raise NotInSector(f"{q} is not in the left or right sector")
    image = induced_primed(kind, q)
    dst = classify(image)
    desc = f"{src.sector} {_part(src)} -> {dst.sector} {_part(dst)}"
    return SectorMap(image, src, dst, desc)


def generate_sector(side: str, depth: int) -> set:
    """All points reached from the corner by words of length <= depth in the sector generators."""
    gens = (Kind.A1, Kind.A2) if side == "LIS" else (Kind.B1, Kind.B2)
    start = PrimedParams(-1 if side == "LIS" else 1, 0)
    seen = {start}
    frontier = {start}
    for _ in range(depth):
        frontier = {induced_primed(g, p) for p in frontier for g in gens}
        seen |= frontier
    return seen


def sector_points(side: str, depth: int) -> set:
    """Closed-form sector lattice {(-/+(1 + m + n), m - n) : m + n <= depth}."""
    s = -1 if side == "LIS" else 1
    return {
        PrimedParams(s * (1 + m + n), m - n)
        for m in range(depth + 1)
        for n in range(depth + 1 - m)
    }
