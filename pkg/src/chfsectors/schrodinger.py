"""From kernel elements to bound-state wavefunctions.

The map M divides a c.h.f. by ``phi(a,c;x) = [e^x / (x^c y'(x))]^(1/2)`` and
changes variable to y.  With

    oscillator   x = y**2
    Coulomb      x = kappa * y,  kappa = 2 sqrt(-E)
    Morse        x = exp(alpha * y)

the Kummer equation becomes ``-psi'' + V(y) psi = E psi`` (units 2m/hbar^2 = 1).
Bound states come from points where the relevant basis function terminates
into a polynomial:

    plus branch  (c' >= 0):  1F1(a, c; x)  with a = -n
    minus branch (c' <= 0):  u(a, c; x)    with a - c + 1 = -n

which on integer coordinates is exactly the upper / lower part of the left
invariant sector.  Both branches give the same psi (c'_minus = -c'_plus).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Union

import numpy as np

from .core import ChfParams, KernelElement, eval_kernel
from .errors import Annihilated, DomainX, DomainY, LabelConstraint, NonMonotoneMap, NotBoundState
from .lattice import HALF, PrimedParams, exact, from_primed, induced_primed, to_primed
from .operators import Kind, induced_params, ladder, table_coefficient


# -- potentials ------------------------------------------------------------------

@dataclass(frozen=True)
class Oscillator1D:
    """V(y) = y**2 on the whole line."""

    name = "osc1d"


@dataclass(frozen=True)
class OscillatorN:
    N: int
    ell: int
    name = "oscN"

    def __post_init__(self):
        if self.N < 2 or self.ell < 0:
            raise ValueError("OscillatorN needs N >= 2 and ell >= 0")


@dataclass(frozen=True)
class CoulombN:
    N: int
    ell: int
    name = "coulomb"

    def __post_init__(self):
        if self.N < 2 or self.ell < 0:
            raise ValueError("CoulombN needs N >= 2 and ell >= 0")


@dataclass(frozen=True)
class Morse:
    alpha: float
    lam: float
    name = "morse"

    def __post_init__(self):
        if not (self.alpha > 0 and self.lam > 0):
            raise ValueError("Morse needs alpha > 0 and lambda > 0")


PotentialSpec = Union[Oscillator1D, OscillatorN, CoulombN, Morse]


def _centrifugal(N, ell):
    return (2 * ell + N - 1) * (2 * ell + N - 3) / 4


def _half_line(spec) -> bool:
    return isinstance(spec, (OscillatorN, CoulombN))


def potential_value(spec: PotentialSpec, y):
    y = np.asarray(y, dtype=float)
    if _half_line(spec) and np.any(y <= 0):
        raise DomainY(f"{type(spec).__name__} is defined for y > 0")
    if isinstance(spec, Oscillator1D):
        v = y**2
    elif isinstance(spec, OscillatorN):
        v = y**2 + _centrifugal(spec.N, spec.ell) / y**2
    elif isinstance(spec, CoulombN):
        v = -2 / y + _centrifugal(spec.N, spec.ell) / y**2
    else:
        k = spec.alpha * y
        v = (spec.alpha / 2) ** 2 * (np.exp(2 * k) - 2 * spec.lam * np.exp(k))
    return v if v.ndim else float(v)


# -- variable maps ------------------------------------------------------------------

@dataclass(frozen=True)
class VariableMap:
    y_of_x: Callable
    x_of_y: Callable
    dy_dx: Callable
    y_domain: tuple


def variable_map(spec: PotentialSpec, energy: float | None = None) -> VariableMap:
    if isinstance(spec, (Oscillator1D, OscillatorN)):
        return VariableMap(np.sqrt, np.square, lambda x: 0.5 / np.sqrt(x), (0.0, math.inf))
    if isinstance(spec, CoulombN):
        if energy is None or not energy < 0:
            raise ValueError("the Coulomb map needs a negative energy")
        k = 2 * math.sqrt(-energy)
        return VariableMap(lambda x: x / k, lambda y: k * y, lambda x: np.full_like(x, 1 / k) if np.ndim(x) else 1 / k, (0.0, math.inf))
    al = spec.alpha
    return VariableMap(lambda x: np.log(x) / al, lambda y: np.exp(al * y), lambda x: 1 / (al * x), (-math.inf, math.inf))


def phi_factor(p: ChfParams, vmap: VariableMap, x) -> float:
    """``[e^x / (x^c y'(x))]^(1/2)``."""
    x = float(x)
    if not x > 0:
        raise DomainX(f"phi needs x > 0, got {x}")
    dy = float(vmap.dy_dx(x))
    if not dy > 0:
        raise NonMonotoneMap(f"y'(x) = {dy} is not positive at x = {x}")
    return math.sqrt(math.exp(x) / (x ** float(p.c) * dy))


def _log_inv_phi(c, vmap, x):
    return -x / 2 + (c / 2) * np.log(x) + 0.5 * np.log(vmap.dy_dx(x))


# -- terminating basis elements ----------------------------------------------------------

def _nonpos_int(v) -> int | None:
    v = exact(v)
    if v.denominator == 1 and v <= 0:
        return int(-v)
    return None


@dataclass(frozen=True)
class LatticeElement:
    """``coeff * 1F1(a, c; x)`` (branch "F") or ``coeff * u(a, c; x)`` (branch "u")
    at a point where the series terminates.

    Stored as an exact polynomial so integer c is no obstacle.
    """

    branch: str
    a: Fraction
    c: Fraction
    coeff: float = 1.0
    poly: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "a", exact(self.a))
        object.__setattr__(self, "c", exact(self.c))
        top, bottom = (self.a, self.c) if self.branch == "F" else (self.a - self.c + 1, 2 - self.c)
        n = _nonpos_int(top)
        if n is None:
            raise NotBoundState(f"{self.branch}-branch at (a, c) = ({self.a}, {self.c}) does not terminate")
        coeffs, t = [Fraction(1)], Fraction(1)
        for k in range(n):
            if bottom + k == 0:
                raise NotBoundState(f"pole in the terminating series at (a, c) = ({self.a}, {self.c})")
            t = t * (top + k) / ((bottom + k) * (k + 1))
            coeffs.append(t)
        object.__setattr__(self, "poly", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    @property
    def params(self) -> ChfParams:
        return ChfParams(self.a, self.c)

    @property
    def x_power(self) -> Fraction:
        """Power of x in front of the polynomial: 0 for 1F1, 1 - c for u."""
        return Fraction(0) if self.branch == "F" else 1 - self.c

    def polyval(self, x):
        return np.polynomial.polynomial.polyval(x, np.array([float(v) for v in self.poly]))

    def __call__(self, x):
        x = np.asarray(x)
        return self.coeff * x ** float(self.x_power) * self.polyval(x)


# -- dictionaries ----------------------------------------------------------------------

@dataclass(frozen=True)
class DictionaryEntry:
    """Schrodinger-parameter <-> (a', c') relations for one potential and branch."""

    spec: PotentialSpec
    branch: str
    c_p: Fraction | None  # fixed c' (None for Morse, where c' carries the energy)
    a_p: Fraction | None  # fixed a' (Morse only)
    region: str

    def energy(self, q: PrimedParams) -> float:
        return float(energy_of(self.spec, q))


def _sign(branch):
    if branch not in ("plus", "minus"):
        raise ValueError("branch must be 'plus' or 'minus'")
    return 1 if branch == "plus" else -1


def param_dictionary(spec: PotentialSpec, branch: str = "plus") -> DictionaryEntry:
    s = _sign(branch)
    part = "upper" if s > 0 else "lower"
    if isinstance(spec, Oscillator1D):
        return DictionaryEntry(spec, branch, s * HALF, None, f"{part} left invariant line")
    if isinstance(spec, OscillatorN):
        return DictionaryEntry(spec, branch, s * (spec.ell + Fraction(spec.N, 2) - 1), None, f"{part} part of the L.I.S.")
    if isinstance(spec, CoulombN):
        return DictionaryEntry(spec, branch, s * Fraction(2 * spec.ell + spec.N - 2), None, f"{part} part of the L.I.S.")
    return DictionaryEntry(spec, branch, None, -exact(spec.lam), f"{part} part of the L.I.S.")


def energy_of(spec: PotentialSpec, q: PrimedParams):
    """Energy attached to a primed point; exact Fraction where the inputs are exact."""
    a, c = q.a_p, q.c_p
    if isinstance(spec, (Oscillator1D, OscillatorN)):
        return -2 * a
    if isinstance(spec, CoulombN):
        return -((2 / a) ** 2)
    return -((spec.alpha / 2) ** 2) * float(c) ** 2


def state_point(spec: PotentialSpec, branch: str, n: int) -> PrimedParams:
    """Primed point of the n-th bound state (radial index n; for osc1d the level n)."""
    if n < 0:
        raise NotBoundState("state index must be >= 0")
    d = param_dictionary(spec, branch)
    if isinstance(spec, Oscillator1D):
        return PrimedParams(-HALF - n, d.c_p)
    if isinstance(spec, Morse):
        c_abs = exact(spec.lam) - 1 - 2 * n
        if c_abs <= 0:
            raise NotBoundState(
                f"Morse(lambda={spec.lam}) has {n_morse_states(spec)} bound states; index {n} is past the top"
            )
        return PrimedParams(d.a_p, _sign(branch) * c_abs)
    c_abs = abs(d.c_p)
    return PrimedParams(-2 * n - c_abs - 1, d.c_p)


def n_morse_states(spec: Morse) -> int:
    lam = exact(spec.lam)
    return max(0, math.ceil((lam - 1) / 2))


def _element_for(spec, branch, q: PrimedParams) -> LatticeElement:
    p = from_primed(q)
    if isinstance(spec, Oscillator1D):
        order = ("F", "u")
    elif q.c_p == 0:
        order = ("F",)
    else:
        order = ("F",) if branch == "plus" else ("u",)
    for br in order:
        try:
            return LatticeElement(br, p.a, p.c)
        except NotBoundState:
            continue
    raise NotBoundState(f"{q} is off the physical lattice for {spec}")


def _check_dictionary(spec, branch, q):
    d = param_dictionary(spec, branch)
    if d.c_p is not None and q.c_p != d.c_p:
        raise NotBoundState(f"{spec} on the {branch} branch needs c' = {d.c_p}, got {q.c_p}")
    if d.a_p is not None and q.a_p != d.a_p:
        raise NotBoundState(f"{spec} needs a' = -lambda = {d.a_p}, got {q.a_p}")
    if isinstance(spec, Morse) and _sign(branch) * q.c_p <= 0:
        raise NotBoundState(f"Morse bound states need {branch} c' of that sign, got {q.c_p}")
    if isinstance(spec, (Oscillator1D, OscillatorN)) and not q.a_p < 0:
        raise NotBoundState("oscillator states need E = -2a' > 0")


def nearest_state(spec: PotentialSpec, branch: str, q: PrimedParams) -> PrimedParams | None:
    """Closest bound-state point in a', for error messages."""
    best = None
    for n in range(200):
        try:
            cand = state_point(spec, branch, n)
        except NotBoundState:
            break
        if best is None or abs(cand.a_p - q.a_p) + abs(cand.c_p - q.c_p) < abs(best.a_p - q.a_p) + abs(best.c_p - q.c_p):
            best = cand
    return best


# -- wavefunctions -------------------------------------------------------------------

@dataclass(frozen=True)
class Wavefunction:
    """``psi(y) = phi^-1(a, c; x(y)) f(a, c; x(y))`` for a terminating f."""

    spec: PotentialSpec
    branch: str
    primed: PrimedParams
    energy: float
    element: LatticeElement
    vmap: VariableMap = field(repr=False)
    parity: int | None = None  # full-line extension (osc1d only)

    @property
    def params(self) -> ChfParams:
        return from_primed(self.primed)

    @property
    def level(self) -> int:
        """Radial index n (for osc1d, the level n with E = 2n + 1)."""
        if isinstance(self.spec, Oscillator1D):
            return int(-(self.primed.a_p + HALF))
        return _radial_index(self.primed)

    @property
    def labels(self) -> dict:
        out = {"potential": self.spec.name, "branch": self.branch, "n": self.level,
               "a_p": str(self.primed.a_p), "c_p": str(self.primed.c_p), "E": self.energy}
        if isinstance(self.spec, (OscillatorN, CoulombN)):
            out.update(N=self.spec.N, ell=self.spec.ell)
        if isinstance(self.spec, Morse):
            out.update(alpha=self.spec.alpha, **{"lambda": self.spec.lam})
        return out

    def _half(self, y):
        x = self.vmap.x_of_y(y)
        el = self.element
        c = float(el.c)
        power = c / 2 + float(el.x_power)
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = -x / 2 + power * np.log(x) + 0.5 * np.log(self.vmap.dy_dx(x))
            out = el.coeff * np.exp(logs) * el.polyval(x)
        # x = 0 (or y**2 underflowing to it): psi vanishes there except for even 1D states
        return np.where(x == 0, self._at_zero() if self.parity is not None else 0.0, out)

    def __call__(self, y):
        y = np.asarray(y)
        if self.parity is None:
            out = self._half(y)
        else:
            neg = np.real(y) < 0
            out = np.where(neg, self.parity, 1) * self._half(np.where(neg, -y, y))
            out = np.where(y == 0, self._at_zero(), out)
        return out if np.ndim(out) else out[()]

    def _at_zero(self):
        # even states are finite at 0; odd vanish
        if self.parity == -1:
            return 0.0
        return self.element.coeff * float(self.element.poly[0]) * math.sqrt(0.5)

    def scaled(self, factor: float) -> "Wavefunction":
        return replace(self, element=replace(self.element, coeff=self.element.coeff * factor))

    def normalized(self) -> "Wavefunction":
        lo, hi = support(self)
        y = np.linspace(lo, hi, 20001)[1:-1] if _half_line(self.spec) else np.linspace(lo, hi, 20001)
        norm = math.sqrt(np.trapezoid(np.abs(self(y)) ** 2, y))
        return self.scaled(1 / norm)


def _radial_index(q: PrimedParams) -> int:
    return int(-(q.a_p + abs(q.c_p) + 1) / 2)


def _build(spec, branch, q, element) -> Wavefunction:
    energy = float(energy_of(spec, q))
    vmap = variable_map(spec, energy)
    parity = None
    if isinstance(spec, Oscillator1D):
        parity = 1 if int(-(q.a_p + HALF)) % 2 == 0 else -1
    return Wavefunction(spec, branch, q, energy, element, vmap, parity)


def wavefunction(spec: PotentialSpec, branch: str = "plus", state: int | None = None,
                 point: PrimedParams | None = None) -> Wavefunction:
    """Bound state by index (``state``) or by primed lattice point (``point``)."""
    _sign(branch)
    if point is None:
        point = state_point(spec, branch, 0 if state is None else state)
    point = PrimedParams(point.a_p, point.c_p)
    try:
        _check_dictionary(spec, branch, point)
        element = _element_for(spec, branch, point)
    except NotBoundState as exc:
        near = nearest_state(spec, branch, point)
        hint = f"; nearest bound state at {near}" if near is not None else ""
        raise NotBoundState(f"{exc}{hint}") from None
    return _build(spec, branch, point, element)


def bound_states(spec: PotentialSpec, branch: str = "plus", levels: int = 3) -> list[Wavefunction]:
    """The lowest ``levels`` bound states, ordered by energy."""
    out = []
    for n in range(levels):
        try:
            out.append(wavefunction(spec, branch, state=n))
        except NotBoundState:
            break
    return sorted(out, key=lambda w: w.energy)


def map_kernel_element(spec: PotentialSpec, f: KernelElement):
    """``y -> phi^-1(a, c; x(y)) f(x(y))`` for any kernel element f.

    No quantization is imposed; the energy (and with it the Coulomb scale) is
    read off the dictionary at f's primed point.
    """
    q = to_primed(ChfParams(exact(f.params.a), exact(f.params.c)))
    energy = float(energy_of(spec, q))
    vmap = variable_map(spec, energy)
    c = float(f.params.c)

    def psi(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if f.is_zero:
            return np.zeros_like(y)
        x = vmap.x_of_y(y)
        vals = np.array([eval_kernel(f, xi) for xi in x])
        return np.exp(_log_inv_phi(c, vmap, x)) * vals

    return psi


def trial_function(spec: PotentialSpec, q: PrimedParams, branch: str = "plus"):
    """psi from the (possibly non-terminating) basis series at a dictionary point.

    Off the lattice the series does not terminate and psi grows at large y.
    """
    p = from_primed(q)
    f = KernelElement.first(p.a, p.c) if branch == "plus" else KernelElement.second(p.a, p.c)
    return map_kernel_element(spec, f)


# -- domains, residuals, nodes ------------------------------------------------------------

SUPPORT_TOL = 1e-12
CLIP_FRACTION = 0.02
NODE_GRID = 4096
NODE_GUARD = 1e-10
RESIDUAL_FLOOR = 1e-2


def _initial_bracket(spec, energy):
    if isinstance(spec, Oscillator1D):
        y = math.sqrt(max(energy, 1)) + 8
        return -y, y
    if isinstance(spec, OscillatorN):
        return 0.0, math.sqrt(max(energy, 1)) + 8
    if isinstance(spec, CoulombN):
        k = 2 * math.sqrt(-energy)
        return 0.0, 80 / k
    return -40 / spec.alpha, math.log(80) / spec.alpha


def support(w, tol: float = SUPPORT_TOL, points: int = 4001) -> tuple[float, float]:
    """Interval outside which |psi| < tol * max|psi|; the singular end (y = 0) is kept."""
    lo, hi = _initial_bracket(w.spec, w.energy)
    fixed_lo = _half_line(w.spec)
    for _ in range(40):
        y = np.linspace(lo, hi, points)
        if fixed_lo:
            y = y[1:]
        with np.errstate(all="ignore"):
            v = np.abs(w(y))
        v = np.where(np.isfinite(v), v, 0)
        peak = v.max()
        big = np.nonzero(v >= tol * peak)[0]
        grow_lo = not fixed_lo and big[0] == 0
        grow_hi = big[-1] == len(y) - 1
        if not (grow_lo or grow_hi):
            step = y[1] - y[0]
            new_lo = lo if fixed_lo else y[big[0]] - step
            return float(new_lo), float(y[big[-1]] + step)
        width = hi - lo
        if grow_lo:
            lo -= width
        if grow_hi:
            hi += width
    raise RuntimeError("could not bracket the wavefunction support")


def clipped_domain(w, clip: float = CLIP_FRACTION) -> tuple[float, float]:
    """Support with ``clip`` of its width removed at a singular (y = 0) end."""
    lo, hi = support(w)
    if _half_line(w.spec):
        lo = lo + clip * (hi - lo)
    return lo, hi


def second_difference(w, y, h: float, stencil: int = 5):
    """Central finite-difference psi'' with a 3- or 5-point stencil."""
    f = lambda t: np.real(w(t))  # noqa: E731
    if stencil == 3:
        return (f(y + h) - 2 * f(y) + f(y - h)) / h**2
    if stencil == 5:
        return (-f(y + 2 * h) + 16 * f(y + h) - 30 * f(y) + 16 * f(y - h) - f(y - 2 * h)) / (12 * h**2)
    raise ValueError("stencil must be 3 or 5")


def schrodinger_residual(w, y_grid=None, h: float = 1e-3, points: int = 2001, stencil: int = 5) -> float:
    """Max scaled residual of ``-psi'' + V psi - E psi`` from central differences.

    Each point is scaled by ``|E psi| + |V psi| + eps`` where eps is
    ``RESIDUAL_FLOOR`` times the largest such scale on the grid, so nodes do
    not divide by zero.  The default 5-point stencil keeps the truncation
    error well below the tolerance next to the 1/y**2 singularity.
    """
    if y_grid is None:
        lo, hi = clipped_domain(w)
        y_grid = np.linspace(lo, hi, points)
    y = np.asarray(y_grid, dtype=float)
    psi = np.real(w(y))
    d2 = second_difference(w, y, h, stencil)
    V = potential_value(w.spec, y)
    E = w.energy
    scale = np.abs(E * psi) + np.abs(V * psi)
    eps = RESIDUAL_FLOOR * scale.max()
    return float(np.max(np.abs(-d2 + V * psi - E * psi) / (scale + eps)))


def count_nodes(w, y_grid=None) -> int:
    """Sign changes of psi between samples above ``NODE_GUARD * max|psi|``."""
    if y_grid is None:
        lo, hi = support(w)
        y_grid = np.linspace(lo, hi, NODE_GRID + 1)[1:] if _half_line(w.spec) else np.linspace(lo, hi, NODE_GRID)
    v = np.real(w(np.asarray(y_grid, dtype=float)))
    keep = np.abs(v) > NODE_GUARD * np.abs(v).max()
    s = np.sign(v[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))


# -- ladders ---------------------------------------------------------------------------

def _relabel(spec, q: PrimedParams, element: LatticeElement):
    """Spec and branch describing a ladder image, or NotBoundState."""
    c = q.c_p
    branch = "plus" if c >= 0 else "minus"
    if isinstance(spec, Oscillator1D):
        if abs(c) != HALF:
            raise NotBoundState(f"{q} left the c' = +-1/2 lines")
        return spec, branch
    if c > 0 and element.branch != "F" or c < 0 and element.branch != "u":
        raise NotBoundState(f"{q}: the image is the non-normalizable solution")
    if isinstance(spec, OscillatorN):
        ell = abs(c) + 1 - Fraction(spec.N, 2)
        if ell.denominator != 1 or ell < 0:
            raise NotBoundState(f"{q} gives ell = {ell}, not a non-negative integer")
        return OscillatorN(spec.N, int(ell)), branch
    if isinstance(spec, CoulombN):
        ell = (abs(c) + 2 - spec.N) / 2
        if ell.denominator != 1 or ell < 0:
            raise NotBoundState(f"{q} gives ell = {ell}, not a non-negative integer")
        return CoulombN(spec.N, int(ell)), branch
    if c == 0:
        raise NotBoundState("Morse needs c' != 0")
    lam = -q.a_p
    return Morse(spec.alpha, float(lam) if lam.denominator != 1 else int(lam)), branch


def ladder_on_wavefunction(i: int, direction: str, w: Wavefunction) -> Wavefunction:
    """``M X^i M^-1 psi`` with X = A or B, through the exact basis action."""
    kind = ladder(direction.upper(), i)
    el = w.element
    coef, new_branch, (a_t, c_t) = table_coefficient(kind, el.branch, el.a, el.c)
    if coef == 0:
        raise Annihilated(f"{kind.value} annihilates the state at {w.primed}")
    q = induced_primed(kind, w.primed)
    assert to_primed(ChfParams(a_t, c_t)) == q
    try:
        element = LatticeElement(new_branch, a_t, c_t, el.coeff * float(coef))
    except NotBoundState as exc:
        raise NotBoundState(f"{kind.value} image at {q}: {exc}") from None
    spec, branch = _relabel(w.spec, q, element)
    return _build(spec, branch, q, element)


def _literal_scalar(kind: Kind, p: ChfParams, x, g, dg):
    c = float(p.c)
    if kind is Kind.A1:
        return dg - g
    if kind is Kind.B1:
        return x * dg + (c - 1) * g
    if kind is Kind.A2:
        return x * (dg - g) + (c - 1) * g
    if kind is Kind.B2:
        return dg
    if kind is Kind.A3:
        return x**c * (dg - g)
    if kind is Kind.B3:
        return x**c * dg
    if kind is Kind.A4:
        return x ** (c - 2) * (x * (dg - g) + (c - 1) * g)
    if kind is Kind.B4:
        return x ** (c - 2) * (x * dg + (c - 1) * g)
    raise ValueError(kind)


def conjugated_ladder(i: int, direction: str, w: Wavefunction, step: float = 1e-20):
    """``y -> (M X^i_(a,c) M^-1 psi)(y)`` computed directly on psi.

    M^-1 psi is differentiated in x by complex step, then the literal operator
    is applied and the result mapped back with phi at the target point.  The
    variable map must not depend on the level (oscillator, Morse).
    """
    if isinstance(w.spec, CoulombN):
        raise ValueError("the Coulomb map depends on the energy; no fixed conjugation")
    kind = ladder(direction.upper(), i)
    p = w.params
    target = induced_params(kind, p)
    vm = w.vmap
    c_src, c_tgt = float(p.c), float(target.c)

    def g(x):
        return np.exp(-_log_inv_phi(c_src, vm, x)) * w(vm.y_of_x(x))

    def image(y):
        y = np.asarray(y, dtype=float)
        x = vm.x_of_y(y)
        h = step * np.maximum(1.0, np.abs(x))
        gz = g(x + 1j * h)
        val = np.real(gz)
        der = np.imag(gz) / h
        return np.exp(_log_inv_phi(c_tgt, vm, x)) * _literal_scalar(kind, p, x, val, der)

    return image


# -- cross maps -------------------------------------------------------------------------

@dataclass(frozen=True)
class MappedWavefunction:
    spec: PotentialSpec
    energy: float
    source: Wavefunction
    labels: dict
    fn: Callable = field(repr=False)

    def __call__(self, y):
        return self.fn(np.asarray(y, dtype=float))


def oscillator_labels(w: Wavefunction) -> tuple[int, int]:
    """(n_O, ell_O) of an N = 2 oscillator state, with E_O = 2 n_O."""
    if not isinstance(w.spec, OscillatorN) or w.spec.N != 2:
        raise LabelConstraint("cross maps start from an N = 2 oscillator state")
    n_o = Fraction(w.energy).limit_denominator(1000) / 2
    if n_o.denominator != 1:
        raise LabelConstraint(f"E_O = {w.energy} is not an even integer")
    return int(n_o), w.spec.ell


def oscillator_state(n_o: int, ell_o: int) -> Wavefunction:
    """N = 2 oscillator state with E = 2 n_O and angular number ell_O."""
    n_r = Fraction(n_o - ell_o - 1, 2)
    if ell_o < 0 or n_r < 0 or n_r.denominator != 1:
        raise LabelConstraint(f"(n_O, ell_O) = ({n_o}, {ell_o}) needs n_O - ell_O - 1 even and >= 0")
    return wavefunction(OscillatorN(2, ell_o), "plus", state=int(n_r))


def cross_map_oscillator_morse(psi_o: Wavefunction, alpha: float) -> MappedWavefunction:
    """``psi_M(y) = exp(-alpha y / 4) psi_O(exp(alpha y / 2))`` with lambda_M = n_O, nu_M = ell_O."""
    n_o, ell_o = oscillator_labels(psi_o)
    if ell_o < 1:
        raise LabelConstraint("ell_O = 0 maps to nu_M = 0, a zero-energy Morse solution that is not bound")
    spec = Morse(alpha, n_o)
    energy = -(alpha**2) / 4 * ell_o**2

    def fn(y):
        return np.exp(-alpha * y / 4) * psi_o(np.exp(alpha * y / 2))

    labels = {"n_O": n_o, "ell_O": ell_o, "lambda_M": n_o, "nu_M": ell_o, "alpha": alpha}
    return MappedWavefunction(spec, energy, psi_o, labels, fn)


def cross_map_oscillator_coulomb(psi_o: Wavefunction) -> MappedWavefunction:
    """``psi_H(y) = y^(1/4) psi_O(2 y^(1/2) / n_O^(1/2))`` with n_O = 2 n_C + 1, ell_O = 2 ell_C.

    The argument scale sqrt(n_O) = sqrt(2 n_C + 1) is the one that matches
    E_C = -1 / (n_C + 1/2)^2.
    """
    n_o, ell_o = oscillator_labels(psi_o)
    if n_o % 2 != 1 or ell_o % 2 != 0:
        raise LabelConstraint(f"Coulomb map needs odd n_O and even ell_O, got ({n_o}, {ell_o})")
    n_c, ell_c = (n_o - 1) // 2, ell_o // 2
    spec = CoulombN(2, ell_c)
    energy = -1 / (n_c + 0.5) ** 2
    scale = 2 / math.sqrt(2 * n_c + 1)

    def fn(y):
        return y**0.25 * psi_o(scale * np.sqrt(y))

    labels = {"n_O": n_o, "ell_O": ell_o, "n_C": n_c, "ell_C": ell_c}
    return MappedWavefunction(spec, energy, psi_o, labels, fn)
