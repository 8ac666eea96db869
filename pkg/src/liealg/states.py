"""Single-particle SU(2), SU(1,1) and oscillator states.

Every constructor returns a unit-norm :class:`StateVector`.  Infinite
families (Perelomov, Barut-Girardello, negative binomial, squeezed,
oscillator coherent) are truncated at the smallest ``n_max`` for which an
analytic ratio-test bound puts the neglected amplitude norm below
``tail_tol`` (neglected probability below ``tail_tol**2``), then
renormalized.  The bound used is recorded on the returned state as
``tail``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import gammaln, ive

from .algebra import FOCK, SU2, SU11, IrrepLabel
from .errors import DimensionMismatchError, DomainError, LieAlgError, TruncationError

__all__ = [
    "StateVector", "default_tail_tol", "N_MAX_CAP", "param_from_angles",
    "su2_param", "su11_param", "basis_state", "su2_coherent", "su2_antipode",
    "su2_parity_coherent", "perelomov", "perelomov_parity", "barut_girardello",
    "bg_parity", "nonlinear_su2", "nonlinear_perelomov", "nonlinear_bg",
    "binomial_state", "negative_binomial_state", "squeezed_vacuum",
    "squeezed_first", "ho_coherent", "overlap", "fidelity", "to_fock",
    "phase_distance",
]

N_MAX_CAP = 4096
TAIL_TOL_ENV = "LIEALG_TAIL_TOL"
_DEFAULT_TAIL_TOL = 1e-12

PhaseFunction = Callable[[int], float]


def default_tail_tol() -> float:
    """Truncation tolerance, overridable through ``LIEALG_TAIL_TOL``."""
    raw = os.environ.get(TAIL_TOL_ENV)
    if raw is None or raw.strip() == "":
        return _DEFAULT_TAIL_TOL
    try:
        value = float(raw)
    except ValueError as exc:
        raise LieAlgError(f"{TAIL_TOL_ENV}={raw!r} is not a number") from exc
    if not 0 < value <= 1e-6:
        raise LieAlgError(f"{TAIL_TOL_ENV} must lie in (0, 1e-6], got {value}")
    return value


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitude vector over a labeled basis (row = number eigenvalue)."""

    label: IrrepLabel
    amplitudes: np.ndarray
    family: str = ""
    params: dict = field(default_factory=dict)
    tail: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if self.label.kind == SU2 and amps.size != self.label.two_j + 1:
            raise DimensionMismatchError(
                f"{self.label} needs {self.label.two_j + 1} amplitudes, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_max(self) -> int:
        return self.dim - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def padded(self, dim: int) -> "StateVector":
        """Zero-extend a truncated (SU(1,1) or Fock) state to ``dim`` rows."""
        if dim == self.dim:
            return self
        if self.label.finite:
            raise DimensionMismatchError("su(2) bases have a fixed dimension")
        if dim < self.dim:
            raise DimensionMismatchError(f"cannot pad a {self.dim}-dim state down to {dim}")
        amps = np.zeros(dim, dtype=complex)
        amps[:self.dim] = self.amplitudes
        return StateVector(self.label, amps, self.family, dict(self.params), self.tail)

    def __repr__(self) -> str:
        return f"StateVector({self.label}, dim={self.dim}, family={self.family!r})"


def _finish(label, amps, family, params, tail=0.0) -> StateVector:
    amps = np.asarray(amps, dtype=complex)
    norm = np.linalg.norm(amps)
    if not np.isfinite(norm) or norm == 0:
        raise LieAlgError(f"{family}: amplitudes could not be normalized")
    return StateVector(label, amps / norm, family, params, tail)


def _resolve_tol(tail_tol):
    tol = default_tail_tol() if tail_tol is None else float(tail_tol)
    if not tol > 0:
        raise LieAlgError(f"tail_tol must be positive, got {tail_tol!r}")
    return tol


def _cutoff(logp: np.ndarray, r_inf: float, tol: float, family: str) -> tuple[int, float]:
    """Smallest n_max whose neglected mass has a ratio-test bound <= tol**2.

    ``logp[n]`` are log-probabilities for n = 0..N_MAX_CAP+1.  The ratio
    sequence r_m = p_{m+1}/p_m is assumed eventually monotone with limit
    ``r_inf``, so sup_{m>=n} r_m is the running max over the window joined
    with ``r_inf``.  Returns ``(n_max, bound)``.
    """
    with np.errstate(invalid="ignore"):
        log_r = logp[1:] - logp[:-1]
    log_r = np.where(np.isnan(log_r), -np.inf, log_r)
    sup = np.maximum.accumulate(log_r[::-1])[::-1]
    sup = np.maximum(sup, np.log(r_inf) if r_inf > 0 else -np.inf)
    # bound for keeping 0..n: p_{n+1} / (1 - sup_{m>=n+1} r_m)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_bound = logp[1:-1] - np.log1p(-np.exp(np.minimum(sup[1:], 0.0)))
    log_bound = np.where(sup[1:] >= 0, np.inf, log_bound)
    ok = np.nonzero(log_bound <= 2 * np.log(tol))[0]
    if ok.size == 0:
        raise TruncationError(
            f"{family}: tail_tol={tol:g} is not reachable below n_max={N_MAX_CAP}")
    n_max = int(ok[0])
    return n_max, float(np.sqrt(np.exp(log_bound[n_max])))


def _truncated(label, log_p_fn, r_inf, phase_of_n, tail_tol, n_max, family, params):
    """Common path for infinite families: pick the cutoff, build, renormalize."""
    if n_max is None:
        n = np.arange(N_MAX_CAP + 2, dtype=float)
        n_max, tail = _cutoff(log_p_fn(n), r_inf, _resolve_tol(tail_tol), family)
    else:
        if int(n_max) != n_max or n_max < 0:
            raise LieAlgError(f"n_max must be a nonnegative integer, got {n_max!r}")
        n_max = int(n_max)
        tail = float("nan")
    n = np.arange(n_max + 1, dtype=float)
    amps = np.exp(0.5 * log_p_fn(n)) * phase_of_n(n)
    return _finish(label, amps, family, params, tail)


# -- parameters ---------------------------------------------------------------

def su2_param(theta: float, phi: float) -> complex:
    """gamma = exp(i phi) tan(theta/2)."""
    if not (np.isfinite(theta) and np.isfinite(phi)):
        raise DomainError("angles must be finite")
    if abs(np.cos(theta / 2)) < 1e-15:
        raise DomainError("theta = pi is singular for gamma; build the antipode with su2_antipode(j)")
    return complex(np.exp(1j * phi) * np.tan(theta / 2))


def su11_param(r: float, theta: float) -> complex:
    """eta = exp(i theta) tanh(r)."""
    if not (np.isfinite(r) and np.isfinite(theta)):
        raise DomainError("r and theta must be finite")
    return complex(np.exp(1j * theta) * np.tanh(r))


def param_from_angles(kind: str, a: float, b: float) -> complex:
    """``("su2", theta, phi)`` -> gamma, ``("su11", r, theta)`` -> eta."""
    if kind == SU2:
        return su2_param(a, b)
    if kind == SU11:
        return su11_param(a, b)
    raise LieAlgError(f"unknown kind {kind!r}")


def _check_disc(eta, family):
    if not np.isfinite(eta):
        raise DomainError(f"{family}: eta must be finite")
    if abs(eta) >= 1:
        raise DomainError(f"{family}: |eta| must lie inside the unit disc, got |eta|={abs(eta):g}")


def _phase_n(z: complex):
    ang = np.angle(z)
    return lambda n: np.exp(1j * n * ang)


# -- su(2) ------------------------------------------------------------------

def basis_state(label: IrrepLabel, n: int, dim: int | None = None) -> StateVector:
    """Number eigenstate ``n``; ``dim`` is required for truncated bases."""
    if label.finite:
        dim = label.two_j + 1
    elif dim is None:
        dim = n + 1
    if not 0 <= n < dim:
        raise LieAlgError(f"basis index {n} outside 0..{dim - 1}")
    amps = np.zeros(dim, dtype=complex)
    amps[n] = 1.0
    return StateVector(label, amps, "basis", {"n": n})


def su2_coherent(j, gamma: complex) -> StateVector:
    """Rotated highest-weight state; amplitude of ``|j, j-m>`` is
    ``(1+|g|^2)^(-j) sqrt(C(2j, m)) g^m`` (stored at row ``2j - m``)."""
    label = IrrepLabel.su2(j)
    gamma = complex(gamma)
    if not np.isfinite(gamma):
        raise DomainError("gamma must be finite; use su2_antipode for gamma = infinity")
    two_j = label.two_j
    m = np.arange(two_j + 1, dtype=float)
    if gamma == 0:
        amps = (m == 0).astype(complex)
    else:
        log_c = (-label.j * np.log1p(abs(gamma) ** 2)
                 + 0.5 * (gammaln(two_j + 1) - gammaln(m + 1) - gammaln(two_j - m + 1))
                 + m * np.log(abs(gamma)))
        amps = np.exp(log_c) * _phase_n(gamma)(m)
    return _finish(label, amps[::-1], "su2", {"j": label.j, "gamma": gamma})


def su2_antipode(j) -> StateVector:
    """The theta -> pi limit of ``su2_coherent``: the lowest-weight state ``|j, -j>``."""
    label = IrrepLabel.su2(j)
    state = basis_state(label, 0)
    return StateVector(label, state.amplitudes, "su2", {"j": label.j, "gamma": "inf"})


def _balanced(first: StateVector, second: StateVector, w1, w2, family, params):
    amps = w1 * first.amplitudes + w2 * second.amplitudes
    return _finish(first.label, amps, family, params, first.tail)


_EM = np.exp(-1j * np.pi / 4) / np.sqrt(2)
_EP = np.exp(1j * np.pi / 4) / np.sqrt(2)


def su2_parity_coherent(j, gamma: complex) -> StateVector:
    """Coherent state of the parity-dressed su(2) algebra:
    ``[e^{-i pi/4} |j, -i s g> + e^{i pi/4} |j, i s g>] / sqrt(2)``, ``s = (-1)^{2j}``."""
    label = IrrepLabel.su2(j)
    g = (-1) ** label.two_j * complex(gamma)
    return _balanced(su2_coherent(label.j, -1j * g), su2_coherent(label.j, 1j * g),
                     _EM, _EP, "su2-parity", {"j": label.j, "gamma": complex(gamma)})


def _phase_values(fn: PhaseFunction, values) -> np.ndarray:
    return np.array([float(fn(int(v))) for v in values], dtype=float)


def nonlinear_su2(j, gamma: complex, theta_fn: PhaseFunction) -> StateVector:
    """SU(2) coherent state of the phase-dressed algebra
    ``J+ exp(-i theta(M))``: the coefficient of ``|j, j-m>`` picks up
    ``exp(i sum_{n=1}^m theta(2j - n))``."""
    base = su2_coherent(j, gamma)
    two_j = base.label.two_j
    thetas = _phase_values(theta_fn, range(two_j + 1))
    # m lowering steps from M = 2j visit M = 2j-1, ..., 2j-m
    acc = np.concatenate([[0.0], np.cumsum(thetas[::-1][1:])])
    phases = np.exp(1j * acc)[::-1]
    return _finish(base.label, base.amplitudes * phases, "nonlinear-su2",
                   {"j": base.label.j, "gamma": complex(gamma)})


# -- su(1,1) ------------------------------------------------------------------

def _perelomov_logp(k, eta):
    a2 = abs(eta) ** 2
    return lambda n: (2 * k * np.log1p(-a2) + gammaln(2 * k + n) - gammaln(2 * k)
                      - gammaln(n + 1) + 2 * n * np.log(abs(eta)))


def perelomov(k, eta: complex, tail_tol: float | None = None, n_max: int | None = None,
              family: str = "perelomov") -> StateVector:
    """Perelomov state ``(1-|eta|^2)^k sum sqrt(G(2k+n)/(G(2k) n!)) eta^n |k n>``.

    Pass ``n_max`` to force a fixed truncation instead of the tail rule.
    """
    label = IrrepLabel.su11(k)
    eta = complex(eta)
    _check_disc(eta, family)
    params = {"k": label.k, "eta": eta}
    if eta == 0:
        return _finish(label, basis_state(label, 0, (n_max or 0) + 1).amplitudes, family, params)
    return _truncated(label, _perelomov_logp(label.k, eta), abs(eta) ** 2, _phase_n(eta),
                      tail_tol, n_max, family, params)


def perelomov_parity(k, eta: complex, tail_tol: float | None = None,
                     n_max: int | None = None) -> StateVector:
    """``[e^{i pi/4} |k, -i eta>_P + e^{-i pi/4} |k, i eta>_P] / sqrt(2)``."""
    eta = complex(eta)
    a = perelomov(k, -1j * eta, tail_tol, n_max)
    b = perelomov(k, 1j * eta, tail_tol, a.n_max)
    return _balanced(a, b, _EP, _EM, "perelomov-parity", {"k": a.label.k, "eta": eta})


def _bg_logp(k, eta):
    x = 2 * abs(eta)
    nu = 2 * k - 1
    if abs(eta) < 1e-5:
        # |eta|^nu / I_nu(2|eta|) = Gamma(2k) / (1 + |eta|^2/(2k) + ...); ive under/overflows here
        e2 = abs(eta) ** 2
        log_norm = gammaln(2 * k) - np.log1p(e2 / (2 * k) + e2 * e2 / (4 * k * (2 * k + 1)))
    else:
        log_norm = nu * np.log(abs(eta)) - (np.log(ive(nu, x)) + x)
    return lambda n: (log_norm + 2 * n * np.log(abs(eta)) - gammaln(n + 1) - gammaln(n + 2 * k))


def barut_girardello(k, eta: complex, tail_tol: float | None = None,
                     n_max: int | None = None) -> StateVector:
    """Eigenstate of K-: amplitudes ``eta^n / sqrt(n! G(n+2k))`` normalized by
    ``sqrt(|eta|^(2k-1) / I_{2k-1}(2|eta|))``."""
    label = IrrepLabel.su11(k)
    eta = complex(eta)
    if not np.isfinite(eta):
        raise DomainError("barut-girardello: eta must be finite")
    params = {"k": label.k, "eta": eta}
    if eta == 0:
        return _finish(label, basis_state(label, 0, (n_max or 0) + 1).amplitudes, "bg", params)
    return _truncated(label, _bg_logp(label.k, eta), 0.0, _phase_n(eta),
                      tail_tol, n_max, "bg", params)


def bg_parity(k, eta: complex, tail_tol: float | None = None,
              n_max: int | None = None) -> StateVector:
    """Eigenstate of ``(-1)^N K-``: ``[e^{i pi/4} |k,-i eta>_BG + e^{-i pi/4} |k,i eta>_BG]/sqrt(2)``."""
    eta = complex(eta)
    a = barut_girardello(k, -1j * eta, tail_tol, n_max)
    b = barut_girardello(k, 1j * eta, tail_tol, a.n_max)
    return _balanced(a, b, _EP, _EM, "bg-parity", {"k": a.label.k, "eta": eta})


def _dress_su11(base: StateVector, phi_fn: PhaseFunction, family: str) -> StateVector:
    phis = _phase_values(phi_fn, range(base.dim))
    acc = np.concatenate([[0.0], np.cumsum(phis[:-1])])
    return _finish(base.label, base.amplitudes * np.exp(-1j * acc), family,
                   dict(base.params), base.tail)


def nonlinear_perelomov(k, eta, phi_fn: PhaseFunction, tail_tol=None, n_max=None) -> StateVector:
    """Perelomov state of the algebra ``K+ exp(-i phi(N))``: the coefficient
    of ``|k n>`` picks up ``exp(-i sum_{m<n} phi(m))``."""
    return _dress_su11(perelomov(k, eta, tail_tol, n_max), phi_fn, "nonlinear-perelomov")


def nonlinear_bg(k, eta, phi_fn: PhaseFunction, tail_tol=None, n_max=None) -> StateVector:
    """Eigenstate of ``exp(i phi(N)) K-``; same phase accumulation as
    :func:`nonlinear_perelomov`."""
    return _dress_su11(barut_girardello(k, eta, tail_tol, n_max), phi_fn, "nonlinear-bg")


# -- Fock-space realizations -------------------------------------------------------

def binomial_state(M: int, eta: complex, tail_tol: float | None = None) -> StateVector:
    """Binomial state: SU(2) coherent state in the Holstein-Primakoff picture.

    ``p_n = C(M, n) |eta|^(2n) (1-|eta|^2)^(M-n)`` on n = 0..M, labeled as the
    spin-M/2 irrep.  With ``tail_tol`` the support is cut where the exact
    remaining mass drops below ``tail_tol**2`` and the state is relabeled as a
    plain Fock vector (useful for very large M).
    """
    if int(M) != M or M < 1:
        raise DomainError(f"binomial: M must be a positive integer, got {M!r}")
    M = int(M)
    eta = complex(eta)
    _check_disc(eta, "binomial")
    params = {"M": M, "eta": eta}
    label = IrrepLabel.su2(M / 2)
    n = np.arange(M + 1, dtype=float)
    if eta == 0:
        amps = (n == 0).astype(complex)
    else:
        a2 = abs(eta) ** 2
        logp = (gammaln(M + 1) - gammaln(n + 1) - gammaln(M - n + 1)
                + n * np.log(a2) + (M - n) * np.log1p(-a2))
        amps = np.exp(0.5 * logp) * _phase_n(eta)(n)
    if tail_tol is None:
        return _finish(label, amps, "binomial", params)
    tol = _resolve_tol(tail_tol)
    probs = np.abs(amps) ** 2
    suffix = np.concatenate([np.cumsum(probs[::-1])[::-1][1:], [0.0]])
    n_max = int(np.nonzero(suffix <= tol ** 2)[0][0])
    return _finish(IrrepLabel.fock(), amps[:n_max + 1], "binomial", params,
                   float(np.sqrt(suffix[n_max])))


def negative_binomial_state(M: int, eta: complex, tail_tol: float | None = None,
                            n_max: int | None = None) -> StateVector:
    """Negative binomial state: the Perelomov state with k = M/2 realized on
    one mode, ``(1-|eta|^2)^(M/2) sum sqrt(C(M+n-1, n)) eta^n |n>``."""
    if int(M) != M or M < 1:
        raise DomainError(f"negative binomial: M must be a positive integer, got {M!r}")
    state = perelomov(int(M) / 2, eta, tail_tol, n_max, family="negative-binomial")
    return StateVector(state.label, state.amplitudes, "negative-binomial",
                       {"M": int(M), "eta": complex(eta)}, state.tail)


def _embed_sector(base: StateVector, offset: int, family: str) -> StateVector:
    amps = np.zeros(2 * base.dim + offset - 1, dtype=complex)
    amps[offset::2] = base.amplitudes
    return StateVector(IrrepLabel.fock(), amps, family, dict(base.params), base.tail)


def squeezed_vacuum(eta: complex, tail_tol=None, n_max=None) -> StateVector:
    """Squeezed vacuum: the k = 1/4 Perelomov state of ``K+ = a+^2 / 2`` on even Fock states."""
    return _embed_sector(perelomov(0.25, eta, tail_tol, n_max, family="squeezed-vacuum"),
                         0, "squeezed-vacuum")


def squeezed_first(eta: complex, tail_tol=None, n_max=None) -> StateVector:
    """Squeezed first Fock state: the k = 3/4 Perelomov state on odd Fock states."""
    return _embed_sector(perelomov(0.75, eta, tail_tol, n_max, family="squeezed-first"),
                         1, "squeezed-first")


def ho_coherent(alpha: complex, tail_tol: float | None = None,
                n_max: int | None = None) -> StateVector:
    """Oscillator coherent state ``exp(-|a|^2/2) sum a^n / sqrt(n!) |n>``."""
    alpha = complex(alpha)
    if not np.isfinite(alpha):
        raise DomainError("ho-coherent: alpha must be finite")
    label = IrrepLabel.fock()
    params = {"alpha": alpha}
    if alpha == 0:
        return _finish(label, basis_state(label, 0, (n_max or 0) + 1).amplitudes,
                       "ho-coherent", params)
    a2 = abs(alpha) ** 2
    logp = lambda n: -a2 + n * np.log(a2) - gammaln(n + 1)
    return _truncated(label, logp, 0.0, _phase_n(alpha), tail_tol, n_max, "ho-coherent", params)


# -- comparisons ------------------------------------------------------------------

def overlap(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``; both states must share label and dimension."""
    if a.label != b.label or a.dim != b.dim:
        raise DimensionMismatchError(
            f"overlap of {a.label}/dim {a.dim} with {b.label}/dim {b.dim}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    return abs(overlap(a, b)) ** 2


def to_fock(state: StateVector, dim: int | None = None) -> StateVector:
    """Reinterpret a Holstein-Primakoff or Fock state as a plain Fock vector
    (row index = photon number), zero-padded to ``dim``."""
    dim = state.dim if dim is None else int(dim)
    if dim < state.dim:
        raise DimensionMismatchError(f"cannot embed a {state.dim}-dim state in {dim} rows")
    amps = np.zeros(dim, dtype=complex)
    amps[:state.dim] = state.amplitudes
    return StateVector(IrrepLabel.fock(), amps, state.family, dict(state.params), state.tail)


def phase_distance(a, b) -> float:
    """``min_phi ||a - e^{i phi} b||`` for amplitude arrays or states."""
    a = np.asarray(getattr(a, "amplitudes", getattr(a, "coeffs", a))).reshape(-1)
    b = np.asarray(getattr(b, "amplitudes", getattr(b, "coeffs", b))).reshape(-1)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shapes {a.shape} and {b.shape} differ")
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))
