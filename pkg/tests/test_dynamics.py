import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from liealg import dynamics as dyn
from liealg import entangled as ent
from liealg import measures as ms
from liealg import states as st
from liealg.errors import DimensionMismatchError, IdentityError, UnsupportedIdentityError

H = dyn.NumberHamiltonian


def test_time_zero_is_identity():
    s = st.su2_coherent(1, 0.4)
    out = dyn.evolve(s, H.su2_rotator(0.3, 1.0, 1), 0.0)
    np.testing.assert_array_equal(out.amplitudes, s.amplitudes)


@pytest.mark.parametrize("j", [1, 2, 3])
@pytest.mark.parametrize("omega,lam", [(0.0, 1.0), (0.7, 1.3), (-2.0, 0.5)])
def test_rotator_superposition(j, omega, lam):
    gamma = 0.4 + 0.25j
    out = dyn.evolve(st.su2_coherent(j, gamma), H.su2_rotator(omega, lam, j), np.pi * j / lam)
    target = dyn.rotator_target(j, gamma, omega, lam)
    # exact up to the global phase exp(-i omega pi j^2 / lam)
    phase = np.exp(-1j * omega * np.pi * j * j / lam)
    assert np.linalg.norm(out.amplitudes - phase * target.amplitudes) < 1e-12


@pytest.mark.parametrize("j", [1.5, 2.5, 3.5])
def test_rotator_half_integer_branches_are_rotated(j):
    # half-integer j gives an equal-weight cat on |+i g> and |-i g>, not on |+g>, |-g>
    gamma, omega, lam = 0.5 + 0.1j, 0.4, 1.0
    out = dyn.evolve(st.su2_coherent(j, gamma), H.su2_rotator(omega, lam, j), np.pi * j / lam)
    g = np.exp(1j * omega * np.pi * j / lam) * gamma
    branches = np.array([st.su2_coherent(j, 1j * g).amplitudes,
                         st.su2_coherent(j, -1j * g).amplitudes]).T
    w, *_ = np.linalg.lstsq(branches, out.amplitudes, rcond=None)
    assert np.linalg.norm(branches @ w - out.amplitudes) < 1e-12
    np.testing.assert_allclose(np.abs(w), [2 ** -0.5] * 2, atol=1e-12)
    assert st.phase_distance(out, dyn.rotator_target(j, gamma, omega, lam)) > 0.1


@pytest.mark.parametrize("family", ["P", "BG"])
@pytest.mark.parametrize("k", [0.25, 0.5, 1, 1.5])
def test_kerr_oscillator_superposition(family, k):
    make = st.perelomov if family == "P" else st.barut_girardello
    omega, lam = 0.7, 1.3
    s = make(k, 0.5 + 0.2j)
    out = dyn.evolve(s, H.kerr_oscillator(omega, lam, k), np.pi / (2 * lam))
    target = dyn.kerr_oscillator_target(s, omega, lam)
    phase = np.exp(-1j * np.pi * omega * k / (2 * lam))
    assert np.linalg.norm(out.amplitudes - phase * target.amplitudes) < 1e-10


def test_basis_mismatch():
    with pytest.raises(DimensionMismatchError):
        dyn.evolve(st.su2_coherent(1, 0.2), H.su2_rotator(0, 1, 2), 1.0)
    with pytest.raises(DimensionMismatchError):
        dyn.evolve(st.su2_coherent(1, 0.2), H.bipartite(1, 1, 1), 1.0)
    pair = ent.product(st.su2_coherent(1, 0.2), st.su2_coherent(1, 0.2))
    with pytest.raises(DimensionMismatchError):
        dyn.evolve(pair, H.su2_rotator(0, 1, 1), 1.0)


def test_revival():
    for j in (0.5, 1, 1.5, 2, 2.5):
        s = st.su2_coherent(j, 0.7 - 0.3j)
        out = dyn.evolve(s, H.su2_rotator(0.0, 1.7, j), 4 * np.pi * j / 1.7)
        assert abs(abs(np.vdot(s.amplitudes, out.amplitudes)) ** 2 - 1) < 1e-12


@settings(max_examples=50, deadline=None)
@given(hs.floats(-5, 5), hs.floats(0.1, 5), hs.floats(-10, 10), hs.floats(-10, 10),
       hs.integers(1, 8))
def test_composition_and_norm(omega, lam, t1, t2, two_j):
    j = two_j / 2
    s = st.su2_coherent(j, 0.6 + 0.1j)
    h = H.su2_rotator(omega, lam, j)
    once = dyn.evolve(dyn.evolve(s, h, t1), h, t2)
    both = dyn.evolve(s, h, t1 + t2)
    assert np.linalg.norm(once.amplitudes - both.amplitudes) < 1e-13 * (1 + abs(t1) + abs(t2))
    assert abs(once.norm() - 1) < 1e-14


@settings(max_examples=30, deadline=None)
@given(hs.floats(-3, 3), hs.floats(-3, 3), hs.floats(-3, 3), hs.floats(-5, 5))
def test_bipartite_norm_preserved(c1, c2, c3, t):
    s = ent.entangled_perelomov(0.5, 0.4, 0.3j)
    out = dyn.evolve(s, H.bipartite(c1, c2, c3), t)
    assert abs(out.norm() - s.norm()) < 1e-14


@pytest.mark.parametrize("j", [1, 2, 3])
@pytest.mark.parametrize("gammas", [(0.5, 0.5), (0.3, 0.7j), (1.2 - 0.4j, 0.1)])
def test_generate_entangled_su2(j, gammas):
    out = dyn.generate_entangled_su2(j, *gammas, chi1=0.8)
    assert np.linalg.norm(out.coeffs - ent.entangled_su2_parity(j, *gammas).coeffs) < 1e-10
    assert abs(out.norm() - 1) < 1e-14


def test_generate_entangled_su2_trivial_and_errors():
    out = dyn.generate_entangled_su2(2, 0, 0)
    assert abs(abs(out.coeffs[-1, -1]) - 1) < 1e-15
    with pytest.raises(UnsupportedIdentityError):
        dyn.generate_entangled_su2(1.5, 0.5, 0.5)


def test_h2_identity_for_half_integer_spin():
    # the identity also holds for half-integer j; the API still refuses it (see notes)
    j, g = 1.5, (0.5, 0.2j)
    start = ent.product(st.su2_coherent(j, -1j * g[0]), st.su2_coherent(j, -1j * g[1]))
    out = dyn.evolve(start, H.bipartite(1, 1, 2), np.pi / 2)
    assert np.linalg.norm(out.coeffs - ent.entangled_su2_parity(j, *g).coeffs) < 1e-10


@pytest.mark.parametrize("family,k,etas,tol", [
    ("P", 0.5, (0.4, 0.4), None),
    ("P", 1.5, (0.3j, 0.6), None),
    ("BG", 0.5, (1.0, 1.0), 1e-13),
    ("BG", 1, (2.0, 0.5 - 0.5j), None),
])
def test_generate_entangled_su11(family, k, etas, tol):
    out = dyn.generate_entangled_su11(k, *etas, lam1=1.3, family=family, tail_tol=tol)
    builder = ent.entangled_perelomov if family == "P" else ent.entangled_bg
    assert np.linalg.norm(out.coeffs - builder(k, *etas, tol).coeffs) < 1e-9


def test_generate_entangled_su11_ground_state():
    out = dyn.generate_entangled_su11(0.5, 0, 0)
    assert out.shape == (1, 1) and abs(abs(out.coeffs[0, 0]) - 1) < 1e-15


def test_identity_gate_raises():
    # comparing against the wrong template trips the gate
    wrong = ent.entangled_su2_parity(1, 0.5, 0.5)
    with pytest.raises(IdentityError):
        dyn.check_identity(ent.entangled_su2_parity(1, 0.5, 0.6), wrong, 1e-10, "demo")


@pytest.mark.parametrize("j,gammas", [(0.5, (0.6, 0.6)), (1, (0.3, 0.8j)), (1.5, (0.5, 0.4))])
def test_cat_su2(j, gammas):
    out = dyn.generate_cat_su2(j, *gammas, chi3=0.9)
    assert np.linalg.norm(out.coeffs - dyn.cat_template_su2(j, *gammas).coeffs) < 1e-10


@pytest.mark.parametrize("family,k", [("P", 0.5), ("BG", 0.5), ("P", 1.25)])
def test_cat_su11(family, k):
    out = dyn.generate_cat_su11(k, 0.5, 0.5, lam3=1.1, family=family)
    assert np.linalg.norm(out.coeffs - dyn.cat_template_su11(k, 0.5, 0.5, family).coeffs) < 1e-9


def test_cat_with_vanishing_second_amplitude_factorizes():
    out = dyn.generate_cat_su2(1, 0.6, 0)
    assert ms.measure(out).lambda_minus < 1e-10


def test_kerr_cross():
    b = st.binomial_state(4, 0.4)
    pair = ent.product(b, b)
    np.testing.assert_array_equal(dyn.kerr_cross(pair, 0).coeffs, pair.coeffs)
    assert np.abs(dyn.kerr_cross(pair, 2 * np.pi).coeffs - pair.coeffs).max() < 1e-13
    out = dyn.kerr_cross(pair, np.pi)
    assert np.abs(out.coeffs - ent.entangled_binomial(4, 0.4, 0.4).coeffs).max() < 1e-12
    nb = st.negative_binomial_state(3, 0.35)
    out = dyn.kerr_cross(ent.product(nb, nb), np.pi)
    assert np.abs(out.coeffs - ent.entangled_negative_binomial(3, 0.35, 0.35).coeffs).max() < 1e-10
