"""Built-in invariant and oracle suites behind ``liealg selftest``.

Each check is cheap (the whole run takes a few seconds) and compares two
independent routes to the same quantity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from . import algebra as alg
from . import dynamics as dyn
from . import entangled as ent
from . import measures as ms
from . import states as st


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list = field(default_factory=list)


def _run(name: str, checks: list[tuple[str, Callable[[], float], float]]) -> SuiteResult:
    """Each check returns an error magnitude that must be below its tolerance."""
    res = SuiteResult(name)
    for label, fn, tol in checks:
        res.total += 1
        try:
            err = float(fn())
        except Exception as exc:  # a crash counts as a failed check
            res.failures.append(f"{label}: {type(exc).__name__}: {exc}")
            continue
        if err < tol:
            res.passed += 1
        else:
            res.failures.append(f"{label}: error {err:.3e} >= {tol:g}")
    return res


def _interior(a: np.ndarray) -> np.ndarray:
    return a[:-1, :-1]


def algebra_suite() -> SuiteResult:
    checks = []
    for j in (0.5, 1, 1.5, 2, 2.5):
        def su2(j=j):
            g = alg.su2_generators(j)
            return max(np.abs(alg.commutator(g.plus, g.minus) - 2 * g.z).max(),
                       np.abs(alg.commutator(g.z, g.plus) - g.plus).max(),
                       np.abs(alg.casimir(g) - j * (j + 1) * np.eye(g.z.shape[0])).max())
        checks.append((f"su2 relations j={j}", su2, 1e-13))

        def tilde(j=j):
            g = alg.dress_parity(alg.su2_generators(j))
            return max(np.abs(alg.commutator(g.plus, g.minus) - 2 * g.z).max(),
                       np.abs(alg.commutator(g.z, g.plus) - g.plus).max())
        checks.append((f"parity-dressed su2 j={j}", tilde, 1e-13))
    for k in (0.25, 0.5, 0.75, 1, 2):
        def su11(k=k):
            g = alg.su11_generators(k, 60)
            eye = np.eye(61)
            return max(np.abs(_interior(alg.commutator(g.plus, g.minus) + 2 * g.z)).max(),
                       np.abs(_interior(alg.casimir(g) - k * (k - 1) * eye)).max())
        checks.append((f"su11 relations k={k}", su11, 1e-11))
    checks.append(("parity involution", lambda: np.abs(
        alg.parity_operator(9) @ alg.parity_operator(9) - np.eye(9)).max(), 1e-15))
    return _run("algebra", checks)


def _dressed_rotation_state(j, gamma):
    """``exp(xi J-~ - xi* J+~) |jj>`` with ``xi = (theta/2) e^{i phi}``,
    ``gamma = e^{i phi} tan(theta/2)``."""
    g = alg.dress_parity(alg.su2_generators(j))
    theta = 2 * np.arctan(abs(gamma))
    xi = theta / 2 * np.exp(1j * np.angle(gamma))
    top = np.zeros(g.z.shape[0], dtype=complex)
    top[-1] = 1
    return alg.mat_exp(xi * g.minus - xi.conjugate() * g.plus) @ top


def states_suite() -> SuiteResult:
    checks = []
    for j in (0.5, 1, 2.5):
        for gamma in (0.3, 0.7 + 0.4j, 1.0):
            checks.append((f"parity state vs dressed rotation j={j} gamma={gamma}",
                           lambda j=j, g=gamma: np.linalg.norm(
                               _dressed_rotation_state(j, g) - st.su2_parity_coherent(j, g).amplitudes),
                           1e-10))
    for k in (0.5, 1):
        for eta in (0.5, 2.0 + 1j, 3.0):
            def bg(k=k, eta=eta):
                s = st.barut_girardello(k, eta, 1e-12)
                g = alg.su11_generators(k, s.n_max + 1)
                v = np.concatenate([s.amplitudes, [0]])
                return np.linalg.norm((g.minus @ v - eta * v)[:-2])
            checks.append((f"BG eigenstate k={k} eta={eta}", bg, 1e-10))

    def bessel():
        # sum |z|^{2n} / (n! Gamma(n+2k)) against scipy's I_{2k-1}
        k, z = 0.75, 1.7
        n = np.arange(200)
        series = np.exp(2 * n * np.log(z) - special.gammaln(n + 1) - special.gammaln(n + 2 * k)).sum()
        return abs(series - special.iv(2 * k - 1, 2 * z) / z ** (2 * k - 1)) / series
    checks.append(("Bessel normalization oracle", bessel, 1e-13))
    for j in (1, 1.5):
        checks.append((f"nonlinear su2 at theta=pi x j={j}", lambda j=j: np.linalg.norm(
            st.nonlinear_su2(j, 0.6, lambda x: np.pi * x).amplitudes
            - st.su2_parity_coherent(j, 0.6).amplitudes), 1e-12))
    checks.append(("nonlinear perelomov at phi=pi x", lambda: np.linalg.norm(
        st.nonlinear_perelomov(0.5, 0.4, lambda x: np.pi * x).amplitudes
        - st.perelomov_parity(0.5, 0.4).amplitudes), 1e-12))
    checks.append(("nonlinear bg at phi=pi x", lambda: np.linalg.norm(
        st.nonlinear_bg(1, 1.3, lambda x: np.pi * x).amplitudes
        - st.bg_parity(1, 1.3).amplitudes), 1e-12))
    return _run("states", checks)


def entangled_suite() -> SuiteResult:
    checks = []

    def qft():
        n = 6
        q = 2 ** n
        dft = np.exp(2j * np.pi * np.outer(np.arange(q), np.arange(q)) / q) / np.sqrt(q)
        cols = np.array([ent.qft_state(a, n).amplitudes for a in range(q)]).T
        return max(np.abs(cols - dft).max(), np.abs(cols.conj().T @ cols - np.eye(q)).max())
    checks.append(("qft vs DFT", qft, 1e-13))
    for fn, name in ((ent.entangled_su2_parity, "su2"), (ent.entangled_perelomov, "perelomov")):
        args = (1, 0.6, 0.6) if name == "su2" else (0.5, 0.6, 0.6)
        checks.append((f"{name} symmetric coefficients",
                       lambda fn=fn, a=args: np.abs(fn(*a).coeffs - fn(*a).coeffs.T).max(), 1e-13))
    checks.append(("squeezed vacuum = perelomov k=1/4 on even indices", lambda: np.abs(
        ent.entangled_squeezed(0.3, 0.5).coeffs[::2, ::2]
        - ent.entangled_perelomov(0.25, 0.3, 0.5).coeffs).max(), 1e-15))
    return _run("entangled", checks)


def _gap(a, b) -> float:
    return float(np.linalg.norm(a.coeffs - b.coeffs))


def dynamics_suite() -> SuiteResult:
    checks = []
    for j in (1, 2):
        def rot(j=j):
            s = st.su2_coherent(j, 0.4 + 0.3j)
            out = dyn.evolve(s, dyn.NumberHamiltonian.su2_rotator(0.8, 1.1, j), np.pi * j / 1.1)
            return st.phase_distance(out, dyn.rotator_target(j, 0.4 + 0.3j, 0.8, 1.1))
        checks.append((f"rotator superposition j={j}", rot, 1e-12))
    gaps = {
        "entangled su2 generation": lambda: _gap(
            dyn.generate_entangled_su2(2, 0.5, 0.3j, check=False),
            ent.entangled_su2_parity(2, 0.5, 0.3j)),
        "entangled perelomov generation": lambda: _gap(
            dyn.generate_entangled_su11(0.5, 0.4, 0.4, check=False),
            ent.entangled_perelomov(0.5, 0.4, 0.4)),
        "entangled bg generation": lambda: _gap(
            dyn.generate_entangled_su11(0.5, 1.0, 1.0, family="BG", tail_tol=1e-13, check=False),
            ent.entangled_bg(0.5, 1.0, 1.0, 1e-13)),
        "su2 cat": lambda: _gap(dyn.generate_cat_su2(0.5, 0.6, 0.6, check=False),
                                dyn.cat_template_su2(0.5, 0.6, 0.6)),
        "su11 cat": lambda: _gap(dyn.generate_cat_su11(0.5, 0.5, 0.5, check=False),
                                 dyn.cat_template_su11(0.5, 0.5, 0.5)),
    }
    checks += [(name, fn, 1e-9) for name, fn in gaps.items()]

    def kerr():
        b = st.binomial_state(4, 0.4)
        out = dyn.kerr_cross(ent.product(b, b), np.pi)
        return np.abs(out.coeffs - ent.entangled_binomial(4, 0.4, 0.4).coeffs).max()
    checks.append(("cross-Kerr binomial", kerr, 1e-12))
    return _run("dynamics", checks)


def measures_suite() -> SuiteResult:
    checks = []
    for j in (0.5, 1, 1.5, 2):
        for g0 in (0.1, 0.5, 1.0, 1.7):
            def su2(j=j, g0=g0):
                r = ms.measure(ent.entangled_su2_parity(j, g0, g0))
                return max(abs(r.lambda_plus - ms.lambda_closed_su2(j, g0)[0]),
                           abs(r.bell_B - ms.bell_closed_su2(j, g0)))
            checks.append((f"su2 closed vs numeric j={j} gamma0={g0}", su2, 1e-10))
    for k in (0.25, 0.5, 1):
        for e0 in (0.05, 0.5, 0.9):
            def su11(k=k, e0=e0):
                r = ms.measure(ent.entangled_perelomov(k, e0, e0))
                return max(abs(r.lambda_plus - ms.lambda_closed_su11(k, e0)[0]),
                           abs(r.bell_B - ms.bell_closed_su11(k, e0)))
            checks.append((f"su11 closed vs numeric k={k} eta0={e0}", su11, 1e-10))

    def araki_lieb():
        s = ent.entangled_bg(1, 1.2, 0.7j)
        return abs(ms.entropy(ms.reduced_density(s, 1)) - ms.entropy(ms.reduced_density(s, 2)))
    checks.append(("S1 = S2", araki_lieb, 1e-10))
    checks.append(("Ic maximum", lambda: abs(
        ms.index_of_correlation(ent.entangled_su2_parity(0.5, 1, 1)) - 2 * np.log(2)), 1e-10))
    return _run("measures", checks)


SUITES = (algebra_suite, states_suite, entangled_suite, dynamics_suite, measures_suite)


def run_all() -> list[SuiteResult]:
    return [suite() for suite in SUITES]
