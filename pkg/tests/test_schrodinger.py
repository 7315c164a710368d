import math
from dataclasses import replace
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from chfsectors.core import ChfParams, KernelElement
from chfsectors.errors import Annihilated, DomainX, DomainY, LabelConstraint, NotBoundState
from chfsectors.lattice import PrimedParams as P
from chfsectors.lattice import Sector, classify
from chfsectors.schrodinger import (
    CoulombN,
    Morse,
    Oscillator1D,
    OscillatorN,
    bound_states,
    clipped_domain,
    conjugated_ladder,
    count_nodes,
    cross_map_oscillator_coulomb,
    cross_map_oscillator_morse,
    ladder_on_wavefunction,
    map_kernel_element,
    oscillator_state,
    param_dictionary,
    phi_factor,
    potential_value,
    schrodinger_residual,
    support,
    trial_function,
    variable_map,
    wavefunction,
)

SPECS = [
    Oscillator1D(),
    OscillatorN(2, 0),
    OscillatorN(3, 1),
    CoulombN(3, 0),
    CoulombN(2, 1),
    Morse(1.0, 12),
    Morse(0.5, 7.5),
]
branches = st.sampled_from(["plus", "minus"])


def clipped_grid(w, n=400):
    lo, hi = clipped_domain(w)
    return np.linspace(lo, hi, n)


# -- potentials and maps ------------------------------------------------------------------

def test_potential_examples():
    assert potential_value(OscillatorN(3, 0), 1.0) == 1.0
    assert potential_value(CoulombN(3, 0), 1.0) == -2.0
    assert potential_value(Morse(2.0, 1.0), 0.0) == -1.0
    assert potential_value(OscillatorN(2, 0), 1.0) == pytest.approx(1 - 0.25)
    with pytest.raises(DomainY):
        potential_value(CoulombN(3, 0), 0.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        Morse(-1.0, 2.0)
    with pytest.raises(ValueError):
        OscillatorN(1, 0)


def test_phi_examples():
    osc = variable_map(OscillatorN(3, 0))
    assert phi_factor(ChfParams(0, 1.5), osc, 1.0) == pytest.approx(math.sqrt(2 * math.e), rel=1e-15)
    coul = variable_map(CoulombN(3, 0), energy=-0.25)  # kappa = 1
    assert phi_factor(ChfParams(0, 1), coul, 1.0) == pytest.approx(math.sqrt(math.e), rel=1e-15)
    with pytest.raises(DomainX):
        phi_factor(ChfParams(0, 1.5), osc, 0.0)


@pytest.mark.parametrize("spec,energy", [(OscillatorN(3, 0), None), (CoulombN(3, 0), -0.25), (Morse(0.7, 3), None)])
def test_variable_map_roundtrip(spec, energy):
    vm = variable_map(spec, energy)
    x = np.linspace(0.01, 40, 101)
    assert np.allclose(vm.x_of_y(vm.y_of_x(x)), x, rtol=1e-12, atol=0)


def test_dictionary():
    d = param_dictionary(OscillatorN(2, 0), "plus")
    assert d.c_p == 0
    for spec in (Oscillator1D(), OscillatorN(3, 2), CoulombN(3, 1)):
        assert param_dictionary(spec, "minus").c_p == -param_dictionary(spec, "plus").c_p
    m = param_dictionary(Morse(2.0, 3.5))
    assert m.a_p == F(-7, 2) and m.c_p is None


# -- wavefunctions --------------------------------------------------------------------------

def test_oscillator_ground_state_is_gaussian():
    w = wavefunction(Oscillator1D(), state=0)
    y = np.linspace(-4, 4, 41)
    ratio = w(y) / np.exp(-(y**2) / 2)
    assert np.allclose(ratio, ratio[0], rtol=1e-13)
    assert schrodinger_residual(w) <= 1e-6
    assert count_nodes(w) == 0


def test_coulomb_ground_state():
    w = wavefunction(CoulombN(3, 0), state=0)
    assert w.primed == P(-2, 1) and w.energy == -1.0
    assert count_nodes(w) == 0
    y = np.linspace(*support(w), 2000)[1:]
    v = w(y)
    assert np.count_nonzero(np.diff(np.sign(np.diff(v)))) == 1  # one maximum


def test_zero_element_maps_to_zero():
    psi = map_kernel_element(OscillatorN(3, 0), KernelElement.zero(ChfParams(-1, 1.5)))
    assert np.all(psi(np.array([0.5, 1.0, 2.0])) == 0)


def test_point_selector_and_nearest_suggestion():
    w = wavefunction(OscillatorN(3, 0), point=P(F(-7, 2), F(1, 2)))
    assert w.level == 1 and w.energy == 7.0
    with pytest.raises(NotBoundState, match="nearest bound state at \\(-3/2, 1/2\\)"):
        wavefunction(OscillatorN(3, 0), point=P(F(-5, 2), F(1, 2)))
    with pytest.raises(NotBoundState):
        wavefunction(OscillatorN(3, 0), "plus", point=P(F(-7, 2), F(-1, 2)))
    with pytest.raises(NotBoundState):
        wavefunction(Morse(1.0, 2.5), state=1)


@pytest.mark.parametrize("spec", SPECS)
def test_residuals(spec):
    for w in bound_states(spec, "plus", 4):
        assert schrodinger_residual(w) <= 1e-5


@pytest.mark.parametrize("spec", SPECS)
def test_wrong_energy_detected(spec):
    w = wavefunction(spec, state=0)
    assert schrodinger_residual(replace(w, energy=w.energy + 0.1)) > 1e-3


@pytest.mark.parametrize("spec", SPECS)
def test_node_count_equals_level(spec):
    for w in bound_states(spec, "plus", 4):
        assert count_nodes(w) == w.level


def test_second_excited_has_two_nodes():
    assert count_nodes(wavefunction(Oscillator1D(), state=2)) == 2


@pytest.mark.parametrize("spec", SPECS)
def test_decay_at_domain_ends(spec):
    for w in bound_states(spec, "plus", 3):
        lo, hi = support(w)
        y = np.linspace(lo, hi, 3001)
        peak = np.abs(w(y[1:])).max()
        assert abs(w(hi)) < 1e-10 * peak
        start = 1e-8 if lo == 0 else lo
        assert abs(w(start)) < 1e-3 * peak


@given(n=st.integers(0, 6))
def test_oscillator_parity(n):
    w = wavefunction(Oscillator1D(), state=n)
    y = np.linspace(0.1, 4, 20)
    assert np.allclose(w(-y), (-1) ** n * w(y), rtol=1e-13, atol=0)
    # smooth through the origin: the one-sided stencils agree
    h = 1e-4
    left = (w(0.0) - w(-h)) / h
    right = (w(h) - w(0.0)) / h
    assert abs(left - right) < 1e-3 * max(1.0, abs(left))


@pytest.mark.parametrize("spec", SPECS + [Oscillator1D()])
def test_branch_redundancy(spec):
    for n in range(5):
        try:
            plus = wavefunction(spec, "plus", state=n)
        except NotBoundState:
            break
        minus = wavefunction(spec, "minus", state=n)
        y = clipped_grid(plus)
        pv, mv = plus(y), minus(y)
        keep = np.abs(pv) > 1e-8 * np.abs(pv).max()
        ratio = mv[keep] / pv[keep]
        assert np.max(np.abs(ratio / ratio[0] - 1)) <= 1e-8


def test_normalization():
    w = wavefunction(Oscillator1D(), state=0).normalized()
    assert w(0.0) == pytest.approx(math.pi**-0.25, rel=1e-8)
    h = wavefunction(CoulombN(3, 0), state=1).normalized()
    lo, hi = support(h)
    y = np.linspace(lo, hi, 40001)[1:]
    assert np.trapezoid(h(y) ** 2, y) == pytest.approx(1.0, rel=1e-6)


# -- spectra -----------------------------------------------------------------------------

def test_oscillator_spacing_exact():
    for spec in (Oscillator1D(), OscillatorN(3, 0), OscillatorN(4, 2)):
        e = [w.energy for w in bound_states(spec, levels=6)]
        step = 2 if isinstance(spec, Oscillator1D) else 4
        assert np.diff(e).tolist() == [step] * 5


def test_coulomb_levels_exact():
    for w in bound_states(CoulombN(3, 1), levels=5):
        assert w.energy == pytest.approx(-((2 / float(w.primed.a_p)) ** 2), rel=1e-12)
    assert [w.energy for w in bound_states(CoulombN(3, 0), levels=3)] == pytest.approx([-1.0, -0.25, -1 / 9], rel=1e-12)


def test_morse_levels():
    spec = Morse(0.8, 6.0)
    states = bound_states(spec, levels=10)
    assert len(states) == 3  # nu = 5, 3, 1
    for w in states:
        assert w.energy == -(0.8**2) / 4 * float(w.primed.c_p) ** 2


def fd_spectrum(spec, lo, hi, k, n=6000):
    y = np.linspace(lo, hi, n + 2)[1:-1]
    h = y[1] - y[0]
    diag = 2 / h**2 + potential_value(spec, y)
    off = np.full(n - 1, -1 / h**2)
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1), eigvals_only=True)


@pytest.mark.parametrize("spec,lo,hi", [
    (Oscillator1D(), -9, 9),
    (OscillatorN(3, 1), 0, 9),
    (CoulombN(3, 0), 0, 80),
    (Morse(1.0, 8), -6, 12),
])
def test_spectrum_against_finite_difference_hamiltonian(spec, lo, hi):
    exact = [w.energy for w in bound_states(spec, levels=3)]
    fd = fd_spectrum(spec, lo, hi, 3)
    assert np.allclose(fd, exact, rtol=2e-3, atol=2e-3)


@pytest.mark.parametrize("spec", [OscillatorN(3, 0), CoulombN(3, 1), OscillatorN(2, 2), CoulombN(2, 0)])
def test_quantization_by_sector(spec):
    # off the lattice the series does not terminate and psi grows like e^(x/2)
    c_p = param_dictionary(spec).c_p
    for twice in range(-24, -2):
        q = P(F(twice, 2), c_p)
        if isinstance(spec, CoulombN) and q.a_p >= -abs(c_p):
            continue
        on_lattice = (q.a_p + c_p + 1) <= 0 and (q.a_p + c_p + 1) % 2 == 0
        if c_p.denominator == 1:
            assert on_lattice == (classify(q).sector == "LIS")
        psi = trial_function(spec, q)
        vm = variable_map(spec, float(-2 * q.a_p) if isinstance(spec, OscillatorN) else -((2 / float(q.a_p)) ** 2))
        near, far = np.abs(psi(vm.y_of_x(np.array([30.0, 45.0]))))
        assert (far < near) == on_lattice, q


# -- ladders -------------------------------------------------------------------------------

def test_ladder_raises_energy_by_two():
    w = wavefunction(OscillatorN(3, 1), state=1)
    up = ladder_on_wavefunction(1, "A", w)
    assert up.energy - w.energy == 2 and up.spec == OscillatorN(3, 2)
    down = ladder_on_wavefunction(1, "B", w)
    assert down.energy - w.energy == -2


def test_annihilated_at_corner():
    with pytest.raises(Annihilated):
        ladder_on_wavefunction(2, "B", wavefunction(OscillatorN(3, 1), state=0))
    with pytest.raises(Annihilated):
        ladder_on_wavefunction(1, "B", wavefunction(Oscillator1D(), state=0))


def test_ladder_leaving_the_lines():
    with pytest.raises(NotBoundState):
        ladder_on_wavefunction(1, "A", wavefunction(Oscillator1D(), state=0))


@pytest.mark.parametrize("spec", [OscillatorN(3, 1), OscillatorN(2, 3), Oscillator1D(), Morse(1.0, 9)])
@given(i=st.integers(1, 4), d=st.sampled_from("AB"), n=st.integers(0, 2), branch=branches)
def test_commutative_diagram(spec, i, d, n, branch):
    w = wavefunction(spec, branch, state=n)
    try:
        image = ladder_on_wavefunction(i, d, w)
    except (Annihilated, NotBoundState):
        return
    direct = conjugated_ladder(i, d, w)
    y = clipped_grid(image, 100)
    y = y[y > 0.05]
    a, b = image(y), direct(y)
    assert np.max(np.abs(a - b)) <= 1e-9 * np.max(np.abs(a))
    assert schrodinger_residual(image) <= 1e-5


# -- cross maps --------------------------------------------------------------------------

def test_oscillator_labels():
    w = oscillator_state(3, 2)
    assert w.spec == OscillatorN(2, 2) and w.energy == 6
    with pytest.raises(LabelConstraint):
        oscillator_state(2, 0)


def test_morse_map_labels_and_nodes():
    m = cross_map_oscillator_morse(oscillator_state(2, 1), 1.0)
    assert (m.labels["lambda_M"], m.labels["nu_M"]) == (2, 1)
    assert m.energy == -0.25
    assert count_nodes(m) == 0
    assert schrodinger_residual(m) <= 1e-5
    with pytest.raises(LabelConstraint):
        cross_map_oscillator_morse(oscillator_state(1, 0), 1.0)
    with pytest.raises(LabelConstraint):
        cross_map_oscillator_morse(wavefunction(OscillatorN(3, 0)), 1.0)


def test_coulomb_map_labels():
    h = cross_map_oscillator_coulomb(oscillator_state(1, 0))
    assert (h.labels["n_C"], h.labels["ell_C"]) == (0, 0)
    assert h.energy == -4.0
    with pytest.raises(LabelConstraint):
        cross_map_oscillator_coulomb(oscillator_state(2, 1))


@pytest.mark.parametrize("n_o,ell_o", [(n, l) for n in range(1, 6) for l in range(n) if (n - l - 1) % 2 == 0])
def test_cross_maps_preserve_nodes(n_o, ell_o):
    src = oscillator_state(n_o, ell_o)
    images = []
    if ell_o >= 1:
        images.append(cross_map_oscillator_morse(src, 0.9))
    if n_o % 2 == 1 and ell_o % 2 == 0:
        images.append(cross_map_oscillator_coulomb(src))
    for img in images:
        assert count_nodes(img) == count_nodes(src)
        assert schrodinger_residual(img) <= 1e-5


def test_morse_image_matches_lattice_state():
    m = cross_map_oscillator_morse(oscillator_state(5, 2), 1.0)
    w = wavefunction(Morse(1.0, 5), state=1)
    y = np.linspace(-4, 3, 50)
    ratio = m(y) / w(y)
    assert np.allclose(ratio, ratio[0], rtol=1e-10)


def test_coulomb_scale_with_two_n_o_plus_one_fails():
    # the argument scale 2/sqrt(2 n_O + 1) does not give a Coulomb eigenfunction
    src = oscillator_state(3, 0)
    good = cross_map_oscillator_coulomb(src)
    bad = replace(good, fn=lambda y: y**0.25 * src(2 * np.sqrt(y) / math.sqrt(2 * 3 + 1)))
    assert schrodinger_residual(good) <= 1e-5
    assert schrodinger_residual(bad, y_grid=clipped_grid(good)) > 1e-2


@pytest.mark.parametrize("spec", [OscillatorN(3, 1), OscillatorN(2, 0), CoulombN(3, 0), CoulombN(2, 1)])
@pytest.mark.parametrize("branch", ["plus", "minus"])
def test_half_line_states_vanish_at_origin(spec, branch):
    w = wavefunction(spec, branch, state=1)
    at_zero, near_zero = w(np.array([0.0, 1e-300]))
    assert at_zero == 0.0 and abs(near_zero) < 1e-290
    assert w(0.0) == 0.0


def test_even_line_state_limit_at_origin():
    w = wavefunction(Oscillator1D(), "plus", state=2)
    near = w(1e-6)
    assert w(0.0) == pytest.approx(near, rel=1e-10)
    assert w(1e-300) == pytest.approx(near, rel=1e-10)
