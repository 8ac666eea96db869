import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs
from scipy import special, stats

from liealg import algebra as alg
from liealg import states as st
from liealg.algebra import IrrepLabel
from liealg.errors import (DimensionMismatchError, DomainError, LieAlgError, TruncationError)

complexes = hs.builds(complex, hs.floats(-3, 3), hs.floats(-3, 3))
disc = hs.builds(lambda r, a: r * np.exp(1j * a), hs.floats(0, 0.9), hs.floats(-np.pi, np.pi))


def highest(j):
    v = np.zeros(int(2 * j + 1), dtype=complex)
    v[-1] = 1
    return v


def rotation(gens, gamma):
    theta = 2 * np.arctan(abs(gamma))
    phi = np.angle(gamma)
    return alg.mat_exp(-(theta / 2) * (gens.plus * np.exp(-1j * phi) - gens.minus * np.exp(1j * phi)))


def squeeze(gens, eta):
    r = np.arctanh(abs(eta))
    xi = r * np.exp(1j * np.angle(eta))
    return alg.mat_exp(xi * gens.plus - np.conj(xi) * gens.minus)


# -- parameters -------------------------------------------------------------------

def test_param_from_angles():
    assert st.param_from_angles("su2", 0.0, 1.234) == 0
    assert abs(st.param_from_angles("su2", np.pi / 2, 0.0) - 1) < 1e-15
    eta = st.param_from_angles("su11", 0.5, 0.2)
    assert abs(eta - np.exp(0.2j) * 0.46211715726000974) < 1e-15
    with pytest.raises(DomainError):
        st.param_from_angles("su2", np.pi, 0.0)
    with pytest.raises(LieAlgError):
        st.param_from_angles("other", 0.1, 0.1)


# -- su(2) ------------------------------------------------------------------------

def test_su2_coherent_examples():
    s = st.su2_coherent(2, 0)
    np.testing.assert_array_equal(s.amplitudes, highest(2))
    half = st.su2_coherent(0.5, 1)
    np.testing.assert_allclose(half.amplitudes, [2 ** -0.5, 2 ** -0.5], atol=1e-15)


@pytest.mark.parametrize("j", [0.5, 1, 1.5, 2, 2.5])
@pytest.mark.parametrize("gamma", [0.5, 0.3 - 0.8j, 1.0, 2.5j])
def test_su2_coherent_is_rotated_highest_weight(j, gamma):
    s = st.su2_coherent(j, gamma)
    out = rotation(alg.su2_generators(j), gamma) @ highest(j)
    assert np.linalg.norm(out - s.amplitudes) < 1e-12


def test_su2_coherent_binomial_coefficients():
    j, g = 1.5, 0.4 + 0.3j
    s = st.su2_coherent(j, g)
    expect = [(1 + abs(g) ** 2) ** -j * math.sqrt(math.comb(3, m)) * g ** m for m in range(4)]
    np.testing.assert_allclose(s.amplitudes[::-1], expect, atol=1e-15)


def test_su2_overlap_closed_form():
    a, b = st.su2_coherent(1, 0.5), st.su2_coherent(1, -0.5)
    assert abs(st.overlap(a, b) - 0.36) < 1e-14
    up, down = st.su2_coherent(0.5, 1), st.su2_coherent(0.5, -1)
    assert abs(st.overlap(up, down)) < 1e-15


@settings(max_examples=60, deadline=None)
@given(hs.integers(1, 12), complexes, complexes)
def test_su2_overlap_property(two_j, g1, g2):
    j = two_j / 2
    closed = (1 + np.conj(g1) * g2) ** (2 * j) / ((1 + abs(g1) ** 2) ** j * (1 + abs(g2) ** 2) ** j)
    assert abs(st.overlap(st.su2_coherent(j, g1), st.su2_coherent(j, g2)) - closed) < 1e-12


def test_antipode():
    s = st.su2_antipode(1.5)
    assert s.amplitudes[0] == 1 and s.norm() == 1
    big = st.su2_coherent(1.5, 1e9)
    assert st.fidelity(s, big) > 1 - 1e-12


@pytest.mark.parametrize("j", [0.5, 1, 1.5, 2, 2.5])
@pytest.mark.parametrize("gamma", [0.7, 0.2 + 0.5j, 1.0, -0.6j])
def test_parity_state_is_dressed_rotation(j, gamma):
    gens = alg.dress_parity(alg.su2_generators(j))
    out = rotation(gens, gamma) @ highest(j)
    assert np.linalg.norm(out - st.su2_parity_coherent(j, gamma).amplitudes) < 1e-12


def test_parity_state_examples():
    np.testing.assert_allclose(st.su2_parity_coherent(2, 0).amplitudes, highest(2), atol=1e-15)
    s = st.su2_parity_coherent(0.5, 1)
    np.testing.assert_allclose(np.abs(s.amplitudes), [2 ** -0.5] * 2, atol=1e-15)


def test_nonlinear_su2():
    base = st.su2_coherent(1.5, 0.4)
    np.testing.assert_allclose(st.nonlinear_su2(1.5, 0.4, lambda x: 0.0).amplitudes,
                               base.amplitudes, atol=1e-15)
    s = st.nonlinear_su2(1.5, 0.4, lambda x: x * x)
    assert abs(s.norm() - 1) < 1e-14
    np.testing.assert_allclose(np.abs(s.amplitudes), np.abs(base.amplitudes), atol=1e-15)
    assert np.abs(s.amplitudes - base.amplitudes).max() > 1e-3
    for j in (0.5, 1, 1.5, 2, 2.5):
        assert np.linalg.norm(st.nonlinear_su2(j, 0.8 - 0.2j, lambda x: np.pi * x).amplitudes
                              - st.su2_parity_coherent(j, 0.8 - 0.2j).amplitudes) < 1e-12


def test_nonlinear_su2_matches_dressed_rotation():
    fn = lambda n: 0.3 * n ** 2 - n
    gens = alg.dress_phase(alg.su2_generators(2), fn)
    out = rotation(gens, 0.6 + 0.1j) @ highest(2)
    assert np.linalg.norm(out - st.nonlinear_su2(2, 0.6 + 0.1j, fn).amplitudes) < 1e-12


# -- su(1,1) ----------------------------------------------------------------------

def test_perelomov_examples():
    np.testing.assert_array_equal(st.perelomov(1, 0).amplitudes, [1])
    s = st.perelomov(0.5, 0.5)
    n = np.arange(s.dim)
    np.testing.assert_allclose(s.probabilities(), 0.75 * 0.25 ** n, atol=1e-15)
    big = st.perelomov(1, 0.9, 1e-12)
    assert big.n_max >= 250
    assert abs(big.norm() - 1) < 1e-12 and big.tail < 1e-12
    with pytest.raises(DomainError, match="unit disc"):
        st.perelomov(0.5, 1.2)


def test_perelomov_against_mpmath():
    k, eta = 0.75, 0.6 - 0.3j
    s = st.perelomov(k, eta, n_max=40)
    mpmath.mp.dps = 30
    ref = [complex((1 - abs(eta) ** 2) ** k
                   * mpmath.sqrt(mpmath.gamma(2 * k + n) / (mpmath.gamma(2 * k) * mpmath.factorial(n)))
                   * mpmath.mpc(eta) ** n) for n in range(41)]
    ref = np.array(ref) / np.linalg.norm(ref)
    np.testing.assert_allclose(s.amplitudes, ref, atol=1e-14)


def test_perelomov_tail_is_bounded():
    # the neglected amplitude norm, summed to convergence, is below the tolerance
    for k, eta, tol in ((1, 0.9, 1e-12), (0.25, 0.95, 1e-10), (3, 0.5, 1e-12)):
        s = st.perelomov(k, eta, tol)
        n = np.arange(s.dim, s.dim + 20000)
        logp = (2 * k * np.log1p(-eta ** 2) + special.gammaln(2 * k + n) - special.gammaln(2 * k)
                - special.gammaln(n + 1) + 2 * n * np.log(eta))
        assert math.sqrt(np.exp(logp).sum()) < tol


def test_truncation_cap():
    with pytest.raises(TruncationError):
        st.perelomov(1, 0.999, 1e-12)


def test_env_override(monkeypatch):
    monkeypatch.setenv("LIEALG_TAIL_TOL", "1e-8")
    loose = st.perelomov(1, 0.5)
    monkeypatch.delenv("LIEALG_TAIL_TOL")
    assert loose.dim < st.perelomov(1, 0.5).dim
    monkeypatch.setenv("LIEALG_TAIL_TOL", "0.1")
    with pytest.raises(LieAlgError):
        st.perelomov(1, 0.5)


@pytest.mark.parametrize("k", [0.25, 0.5, 1, 2])
@pytest.mark.parametrize("eta", [0.3, 0.5j, 0.2 - 0.4j])
def test_su11_states_are_truncated_exponentials(k, eta):
    n_max = 90
    gens = alg.su11_generators(k, n_max)
    vac = np.zeros(n_max + 1)
    vac[0] = 1
    plain = squeeze(gens, eta) @ vac
    dressed = squeeze(alg.dress_parity(gens), eta) @ vac
    assert np.linalg.norm(plain - st.perelomov(k, eta, n_max=n_max).amplitudes) < 1e-10
    assert np.linalg.norm(dressed - st.perelomov_parity(k, eta, n_max=n_max).amplitudes) < 1e-10


def test_perelomov_parity_examples():
    np.testing.assert_allclose(st.perelomov_parity(1, 0).amplitudes, [1], atol=1e-15)
    k, eta = 0.25, 0.5
    a, b = st.perelomov(k, -0.5j), st.perelomov(k, 0.5j)
    manual = (np.exp(1j * np.pi / 4) * a.amplitudes + np.exp(-1j * np.pi / 4) * b.amplitudes) / np.sqrt(2)
    s = st.perelomov_parity(k, eta)
    np.testing.assert_allclose(s.amplitudes, manual / np.linalg.norm(manual), atol=1e-15)
    assert abs(s.norm() - 1) < 1e-12
    # magnitudes follow the plain state; the phase pattern is (-1)^{n(n-1)/2}
    p, q = st.perelomov_parity(0.5, 0.6), st.perelomov(0.5, 0.6)
    np.testing.assert_allclose(np.abs(p.amplitudes), np.abs(q.amplitudes), atol=1e-14)
    n = np.arange(p.dim)
    np.testing.assert_allclose(p.amplitudes, q.amplitudes * (-1.0) ** (n * (n - 1) // 2), atol=1e-14)


def test_bg_examples():
    np.testing.assert_array_equal(st.barut_girardello(0.5, 0).amplitudes, [1])
    # Sum |eta|^{2n} / (n!)^2 = I_0(2|eta|)
    eta = 1.7
    total = sum(eta ** (2 * n) / math.factorial(n) ** 2 for n in range(80))
    assert abs(total - special.iv(0, 2 * eta)) / total < 1e-14


def bg_residual(k, eta, tol=1e-12, dressed=False):
    s = (st.bg_parity if dressed else st.barut_girardello)(k, eta, tol)
    gens = alg.su11_generators(k, s.n_max + 1)
    v = np.concatenate([s.amplitudes, [0]])
    lowered = gens.minus @ v
    if dressed:
        lowered = alg.parity_operator(v.size) @ lowered
    return np.linalg.norm((lowered - eta * v)[:-1])


@pytest.mark.parametrize("k", [0.5, 1])
@pytest.mark.parametrize("eta", [0.2, 1.0, 2.0, -1.5j, 2 + 2j, 3.0])
def test_bg_eigenstate(k, eta):
    assert bg_residual(k, eta) < 1e-10


def test_bg_residual_scales_with_tolerance():
    assert bg_residual(1, 2.0) < 10 * 1e-12


def test_bg_parity():
    np.testing.assert_allclose(st.bg_parity(1, 0).amplitudes, [1], atol=1e-15)
    assert bg_residual(0.5, 1.5, dressed=True) < 1e-10
    np.testing.assert_allclose(st.bg_parity(0.75, 1).amplitudes,
                               st.nonlinear_bg(0.75, 1, lambda x: np.pi * x).amplitudes, atol=1e-12)


def test_nonlinear_su11():
    for make, plain, parity in ((st.nonlinear_perelomov, st.perelomov, st.perelomov_parity),
                                (st.nonlinear_bg, st.barut_girardello, st.bg_parity)):
        np.testing.assert_allclose(make(0.5, 0.5, lambda x: 0.0).amplitudes,
                                   plain(0.5, 0.5).amplitudes, atol=1e-15)
        s = make(0.5, 0.5, lambda x: 0.1 * x)
        np.testing.assert_allclose(np.abs(s.amplitudes), np.abs(plain(0.5, 0.5).amplitudes),
                                   atol=1e-15)
        for k in (0.25, 0.5, 1, 1.5):
            assert np.linalg.norm(make(k, 0.4 + 0.3j, lambda x: np.pi * x).amplitudes
                                  - parity(k, 0.4 + 0.3j).amplitudes) < 1e-12


def test_nonlinear_perelomov_matches_dressed_exponential():
    fn = lambda n: 0.2 * n * n + 0.5
    n_max = 90
    gens = alg.dress_phase(alg.su11_generators(0.5, n_max), fn)
    vac = np.zeros(n_max + 1)
    vac[0] = 1
    out = squeeze(gens, 0.4j) @ vac
    assert np.linalg.norm(out - st.nonlinear_perelomov(0.5, 0.4j, fn, n_max=n_max).amplitudes) < 1e-10


# -- Fock-space realizations ------------------------------------------------------

def test_binomial():
    np.testing.assert_array_equal(st.binomial_state(5, 0).amplitudes, [1, 0, 0, 0, 0, 0])
    one = st.binomial_state(1, 0.6)
    np.testing.assert_allclose(one.probabilities(), [0.64, 0.36], atol=1e-15)
    s = st.binomial_state(20, 0.3)
    np.testing.assert_allclose(s.probabilities(), stats.binom.pmf(np.arange(21), 20, 0.09),
                               atol=1e-14)
    with pytest.raises(DomainError):
        st.binomial_state(4, 1.0)


def test_binomial_is_holstein_primakoff_coherent_state():
    # amplitudes in the Fock basis are the SU(2) coherent amplitudes at row = photon number
    M, eta = 6, 0.3 + 0.4j
    gamma = eta / np.sqrt(1 - abs(eta) ** 2)
    coh = st.su2_coherent(M / 2, gamma)
    np.testing.assert_allclose(st.binomial_state(M, eta).amplitudes, coh.amplitudes[::-1], atol=1e-14)


def test_binomial_truncated_large_M():
    s = st.binomial_state(10_000, 0.01, tail_tol=1e-12)
    assert s.label.kind == "fock" and s.dim < 40
    assert s.tail < 1e-12


def test_negative_binomial():
    np.testing.assert_array_equal(st.negative_binomial_state(2, 0).amplitudes, [1])
    s = st.negative_binomial_state(1, 0.5)
    n = np.arange(s.dim)
    np.testing.assert_allclose(s.probabilities(), 0.75 * 0.25 ** n, atol=1e-15)
    nb = st.negative_binomial_state(3, 0.4)
    assert abs(abs(st.overlap(nb, st.perelomov(1.5, 0.4))) - 1) < 1e-12
    np.testing.assert_allclose(nb.probabilities(), stats.nbinom.pmf(n[:nb.dim], 3, 0.84)
                               / stats.nbinom.cdf(nb.n_max, 3, 0.84), atol=1e-15)


def test_squeezed_states():
    np.testing.assert_array_equal(st.squeezed_vacuum(0).amplitudes, [1])
    np.testing.assert_array_equal(st.squeezed_first(0).amplitudes, [0, 1])
    s = st.squeezed_vacuum(0.5)
    assert np.all(s.amplitudes[1::2] == 0)
    n = np.arange(s.dim // 2 + 1)
    p = (np.sqrt(0.75) * np.exp(special.gammaln(0.5 + n) - special.gammaln(0.5) - special.gammaln(n + 1))
         * 0.25 ** n)
    np.testing.assert_allclose(s.probabilities()[::2], p / p.sum(), atol=1e-15)
    f = st.squeezed_first(0.5)
    assert np.all(f.amplitudes[0::2] == 0)


def test_squeezed_vacuum_is_quadratic_squeeze():
    # exp(xi a+^2/2 - xi* a^2/2)|0> on a large Fock truncation
    dim = 160
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    eta = 0.4 * np.exp(0.7j)
    r = np.arctanh(abs(eta))
    xi = r * np.exp(1j * np.angle(eta))
    gen = xi * (a.T @ a.T) / 2 - np.conj(xi) * (a @ a) / 2
    out = alg.mat_exp(gen)[:, 0]
    s = st.squeezed_vacuum(eta)
    assert np.linalg.norm(out[:s.dim] - s.amplitudes) < 1e-10


def test_ho_coherent():
    np.testing.assert_array_equal(st.ho_coherent(0).amplitudes, [1])
    s = st.ho_coherent(1)
    np.testing.assert_allclose(s.probabilities(), stats.poisson.pmf(np.arange(s.dim), 1)
                               / stats.poisson.cdf(s.n_max, 1), atol=1e-15)


def test_contraction_fidelity():
    b = st.binomial_state(10_000, 1 / np.sqrt(10_000))
    h = st.ho_coherent(1)
    dim = max(b.dim, h.dim)
    assert st.fidelity(st.to_fock(b, dim), st.to_fock(h, dim)) >= 1 - 1e-3


# -- comparison helpers -----------------------------------------------------------

def test_overlap_requires_matching_bases():
    with pytest.raises(DimensionMismatchError):
        st.overlap(st.su2_coherent(1, 0.2), st.su2_coherent(0.5, 0.2))
    with pytest.raises(DimensionMismatchError):
        st.overlap(st.perelomov(1, 0.5), st.perelomov(1, 0.6))
    with pytest.raises(DimensionMismatchError):
        st.to_fock(st.perelomov(1, 0.5), 2)


def test_phase_distance():
    s = st.su2_coherent(1, 0.3)
    assert st.phase_distance(s.amplitudes * np.exp(0.9j), s) < 1e-15


def test_state_vector_validation():
    with pytest.raises(LieAlgError):
        st.StateVector(IrrepLabel.su2(1), np.ones(2))
    with pytest.raises(LieAlgError):
        st.basis_state(IrrepLabel.su2(1), 3)


# -- properties -------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(hs.integers(1, 10), complexes)
def test_su2_normalized(two_j, gamma):
    for make in (st.su2_coherent, st.su2_parity_coherent):
        assert abs(make(two_j / 2, gamma).norm() - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(hs.sampled_from([0.25, 0.5, 0.75, 1, 1.5, 2, 3.7]), disc)
def test_su11_normalized_with_bounded_tail(k, eta):
    for make in (st.perelomov, st.perelomov_parity, st.barut_girardello, st.bg_parity):
        s = make(k, eta)
        assert abs(s.norm() - 1) < 1e-12
        assert s.tail < 1e-12


@settings(max_examples=40, deadline=None)
@given(hs.integers(1, 8), hs.floats(0.05, 1.5), hs.floats(-np.pi, np.pi), hs.floats(-2, 2))
def test_phase_dressing_preserves_magnitudes(two_j, mod, ang, c):
    gamma = mod * np.exp(1j * ang)
    fn = lambda x: c * x ** 2 + 0.3 * x
    a = st.nonlinear_su2(two_j / 2, gamma, fn)
    np.testing.assert_allclose(np.abs(a.amplitudes), np.abs(st.su2_coherent(two_j / 2, gamma).amplitudes),
                               atol=1e-14)
    b = st.nonlinear_bg(two_j / 4, gamma, fn)
    np.testing.assert_allclose(np.abs(b.amplitudes),
                               np.abs(st.barut_girardello(two_j / 4, gamma).amplitudes), atol=1e-14)


def _fid_to_ho(make, M):
    s = make(M, 1 / np.sqrt(M))
    h = st.ho_coherent(1)
    dim = max(s.dim, h.dim)
    return st.fidelity(st.to_fock(s, dim), st.to_fock(h, dim))


@pytest.mark.parametrize("make", [st.binomial_state, st.negative_binomial_state])
def test_contraction_monotone(make):
    fids = [_fid_to_ho(make, M) for M in (10, 100, 1000, 10_000)]
    assert all(a < b for a, b in zip(fids, fids[1:]))
    assert fids[-1] >= 1 - 1e-3
