"""Entanglement measures for pure bipartite states.

Reduced density matrices, Schmidt decomposition, the CHSH Bell operator
built on the Schmidt basis, von Neumann entropy (``k_B = 1``) and the
index of correlation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import IrrepLabel
from .entangled import BipartiteState
from .errors import DomainError, LieAlgError, SchmidtRankError

__all__ = [
    "MeasureReport", "Schmidt", "reduced_density", "schmidt", "schmidt_rank",
    "lambda_closed_su2", "lambda_closed_su11", "two_term_lambdas", "bell_from_lambdas",
    "bell_closed_su2", "bell_closed_su11", "theta_operator", "bell_operator_terms",
    "bell_expectation", "entropy", "index_of_correlation", "measure",
]

NORM_TOL = 1e-8
RANK_TOL = 1e-8
PSD_TOL = 1e-10


class Schmidt(NamedTuple):
    """``C = sum_i coeffs[i] * outer(left[:, i], right[:, i])``."""

    coeffs: np.ndarray
    left: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class MeasureReport:
    schmidt_coeffs: np.ndarray
    lambda_plus: float
    lambda_minus: float
    bell_B: float | None
    entropy_S1: float
    index_Ic: float

    def as_dict(self) -> dict:
        return {
            "lambda_plus": self.lambda_plus,
            "lambda_minus": self.lambda_minus,
            "bell_B": self.bell_B,
            "entropy_S1": self.entropy_S1,
            "index_Ic": self.index_Ic,
        }


def _coeffs(state) -> np.ndarray:
    c = state.coeffs if isinstance(state, BipartiteState) else np.asarray(state, dtype=complex)
    norm = np.linalg.norm(c)
    if abs(norm - 1) > NORM_TOL:
        raise LieAlgError(f"state is not normalized (norm = {norm:.12g})")
    return c


def reduced_density(state, slot: int = 1) -> np.ndarray:
    """``rho_1 = C C^dag`` (slot 1) or ``rho_2 = C^T conj(C)`` (slot 2)."""
    c = _coeffs(state)
    if slot == 1:
        return c @ c.conj().T
    if slot == 2:
        return c.T @ c.conj()
    raise LieAlgError(f"slot must be 1 or 2, got {slot!r}")


def _canonical_phase(v: np.ndarray) -> complex:
    """Phase that makes the largest-magnitude entry (lowest index on ties) real positive."""
    mag = np.abs(v)
    idx = int(np.argmax(mag >= mag.max() * (1 - 1e-12)))
    return v[idx] / mag[idx] if mag[idx] > 0 else 1.0


def schmidt(state) -> Schmidt:
    """SVD of the coefficient matrix with descending coefficients; each left
    vector is rotated so its largest entry is real positive (the right vector
    absorbs the conjugate phase)."""
    c = _coeffs(state)
    u, s, vh = np.linalg.svd(c, full_matrices=False)
    right = vh.T.copy()
    for i in range(s.size):
        ph = _canonical_phase(u[:, i])
        u[:, i] *= np.conj(ph)
        right[:, i] *= ph
    return Schmidt(s, u, right)


def schmidt_rank(state, tol: float = RANK_TOL) -> int:
    return int(np.sum(schmidt(state).coeffs > tol))


def _ratio_power(modulus: float, power: float) -> float:
    x = (1 - modulus ** 2) / (1 + modulus ** 2)
    return x ** power


def _lambdas(det_term: float) -> tuple[float, float]:
    # det_term = 4 lambda_+ lambda_-
    root = np.sqrt(max(0.0, 1 - det_term))
    return 0.5 + 0.5 * root, 0.5 - 0.5 * root


def lambda_closed_su2(j, gamma0: complex) -> tuple[float, float]:
    """Reduced-state eigenvalues of the entangled SU(2) parity state with
    ``gamma1 = gamma2 = gamma0``."""
    label = IrrepLabel.su2(j)
    g = abs(complex(gamma0))
    if not np.isfinite(g):
        raise DomainError("gamma0 must be finite")
    return _lambdas((1 - _ratio_power(g, 4 * label.j)) ** 2)


def lambda_closed_su11(k, eta0: complex) -> tuple[float, float]:
    """Same for the entangled Perelomov state with ``eta1 = eta2 = eta0``."""
    label = IrrepLabel.su11(k)
    e = abs(complex(eta0))
    if e >= 1:
        raise DomainError(f"|eta0| must lie inside the unit disc, got {e:g}")
    return _lambdas((1 - _ratio_power(e, 4 * label.k)) ** 2)


def two_term_lambdas(mu: complex, nu: complex, s1: complex, s2: complex) -> tuple[float, float]:
    """Eigenvalues of rho_1 for ``mu |a>|b> + nu |c>|d>`` (normalized here),
    given ``s1 = <a|c>`` and ``s2 = <b|d>``."""
    norm2 = abs(mu) ** 2 + abs(nu) ** 2 + 2 * np.real(np.conj(mu) * nu * s1 * s2)
    if norm2 <= 0:
        raise LieAlgError("two-term state has zero norm")
    det = abs(mu * nu) ** 2 * (1 - abs(s1) ** 2) * (1 - abs(s2) ** 2) / norm2 ** 2
    return _lambdas(4 * det)


def bell_from_lambdas(lam_plus: float, lam_minus: float) -> float:
    return float(2 * np.sqrt(1 + 4 * lam_plus * lam_minus))


def bell_closed_su2(j, gamma0: complex) -> float:
    label = IrrepLabel.su2(j)
    return float(2 * np.sqrt(1 + (1 - _ratio_power(abs(complex(gamma0)), 4 * label.j)) ** 2))


def bell_closed_su11(k, eta0: complex) -> float:
    label = IrrepLabel.su11(k)
    e = abs(complex(eta0))
    if e >= 1:
        raise DomainError(f"|eta0| must lie inside the unit disc, got {e:g}")
    return float(2 * np.sqrt(1 + (1 - _ratio_power(e, 4 * label.k)) ** 2))


def theta_operator(plus: np.ndarray, minus: np.ndarray, angle: float, phase: float) -> np.ndarray:
    """Dichotomic observable
    ``cos(angle)(|+><+| - |-><-|) + sin(angle)(e^{i phase}|+><-| + h.c.)``."""
    pp = np.outer(plus, plus.conj())
    mm = np.outer(minus, minus.conj())
    pm = np.outer(plus, minus.conj())
    return np.cos(angle) * (pp - mm) + np.sin(angle) * (np.exp(1j * phase) * pm
                                                         + np.exp(-1j * phase) * pm.conj().T)


def _expect(c: np.ndarray, a: np.ndarray, b: np.ndarray) -> complex:
    # <Psi| A (x) B |Psi> with Psi = sum C_ij |i>|j>
    return np.vdot(c, a @ c @ b.T)


def bell_operator_terms(state, decomposition: Schmidt | None = None):
    """The four dichotomic observables ``(T1, T1', T2, T2')`` at the optimal
    settings for ``state``, built on its Schmidt basis.

    ``decomposition`` may supply any Schmidt basis (e.g. with rotated phases);
    the settings adapt to the phases of the resulting coefficients.
    """
    c = _coeffs(state)
    sd = schmidt(c) if decomposition is None else decomposition
    if np.sum(sd.coeffs > RANK_TOL) > 2:
        raise SchmidtRankError(
            f"Schmidt rank {int(np.sum(sd.coeffs > RANK_TOL))} > 2: optimal Bell settings undefined")
    if sd.coeffs.size < 2:
        return None
    u_p, u_m = sd.left[:, 0], sd.left[:, 1]
    v_p, v_m = sd.right[:, 0], sd.right[:, 1]
    # independent phase conventions on both sides; c_pm carries the phases
    v_p = v_p * np.conj(_canonical_phase(v_p))
    v_m = v_m * np.conj(_canonical_phase(v_m))
    c_p = np.vdot(u_p, c @ v_p.conj())
    c_m = np.vdot(u_m, c @ v_m.conj())
    a = 2 * abs(c_p * c_m)
    lam2 = np.arccos(1 / np.sqrt(1 + a ** 2))
    phase2 = np.angle(c_p) - np.angle(c_m)
    t1 = theta_operator(u_p, u_m, 0.0, 0.0)
    t1p = theta_operator(u_p, u_m, np.pi / 2, 0.0)
    t2 = theta_operator(v_p, v_m, lam2, phase2)
    t2p = theta_operator(v_p, v_m, -lam2, phase2)
    return t1, t1p, t2, t2p


def bell_expectation(state, decomposition: Schmidt | None = None) -> float:
    """``<Psi| T1 T2 + T1 T2' + T1' T2 - T1' T2' |Psi>`` at the optimal settings."""
    c = _coeffs(state)
    ops = bell_operator_terms(c, decomposition)
    if ops is None:
        return 2.0
    t1, t1p, t2, t2p = ops
    b = (_expect(c, t1, t2) + _expect(c, t1, t2p) + _expect(c, t1p, t2) - _expect(c, t1p, t2p))
    return float(np.real(b))


def entropy(rho: np.ndarray) -> float:
    """``-Tr(rho ln rho)`` from the eigenvalues, with ``0 ln 0 = 0``."""
    rho = np.asarray(rho, dtype=complex)
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w.min() < -PSD_TOL:
        raise LieAlgError(f"density matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")
    # fp noise from C C^dag leaves tiny negative eigenvalues; they carry no entropy
    w = w[w > 0]
    return float(-np.sum(w * np.log(w))) + 0.0  # no negative zero


def index_of_correlation(state) -> float:
    """``S1 + S2 - S``; for a pure state this is ``2 S1``."""
    return 2 * entropy(reduced_density(state, 1))


def measure(state) -> MeasureReport:
    """All measures for one pure bipartite state.  ``bell_B`` is ``None``
    when the Schmidt rank exceeds two."""
    sd = schmidt(state)
    lam = np.concatenate([sd.coeffs ** 2, [0.0, 0.0]])
    try:
        bell = bell_expectation(state, sd)
    except SchmidtRankError:
        bell = None
    s1 = entropy(reduced_density(state, 1))
    return MeasureReport(sd.coeffs, float(lam[0]), float(lam[1]), bell, s1, 2 * s1)
