"""Generator matrices for su(2) and su(1,1), parity and phase dressings.

Basis convention used throughout the package: the row index of every matrix
and amplitude vector is the eigenvalue of the 'number' operator, in
ascending order.  For su(2) that operator is ``M = J_z + j`` (so the highest
weight state ``|j j>`` sits at row ``2j``); for su(1,1) it is ``N = K_z - k``
(the lowest weight state ``|k 0>`` sits at row 0).  With this ordering the
parity operator and all Hamiltonians in :mod:`liealg.dynamics` are diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionMismatchError, InvalidIrrepError, LieAlgError

__all__ = [
    "IrrepLabel", "Generators", "su2_generators", "su11_generators",
    "parity_operator", "number_operator", "dress_parity", "dress_phase",
    "commutator", "casimir", "mat_exp", "SU2", "SU11", "FOCK",
]

SU2 = "su2"
SU11 = "su11"
FOCK = "fock"


@dataclass(frozen=True)
class IrrepLabel:
    """Irrep carried by a basis.

    ``kind`` is ``"su2"`` (``index`` is the spin j), ``"su11"`` (``index`` is
    the Bargmann index k) or ``"fock"`` for a plain truncated oscillator
    basis with no group label (``index`` is unused).
    """

    kind: str
    index: float = 0.0

    @classmethod
    def su2(cls, j) -> "IrrepLabel":
        try:
            exact = Fraction(j)
        except (TypeError, ValueError) as exc:
            raise InvalidIrrepError(f"j must be a positive half-integer, got {j!r}") from exc
        two_j = exact.limit_denominator(1000) * 2
        if two_j.denominator != 1 or two_j < 1 or abs(float(two_j) - 2 * float(exact)) > 1e-12:
            raise InvalidIrrepError(f"j must be a positive half-integer, got {j!r}")
        return cls(SU2, float(two_j) / 2)

    @classmethod
    def su11(cls, k) -> "IrrepLabel":
        k = float(k)
        if not np.isfinite(k) or k <= 0:
            raise InvalidIrrepError(f"Bargmann index k must be positive, got {k!r}")
        return cls(SU11, k)

    @classmethod
    def fock(cls) -> "IrrepLabel":
        return cls(FOCK, 0.0)

    @property
    def j(self) -> float:
        if self.kind != SU2:
            raise LieAlgError("label is not an su(2) irrep")
        return self.index

    @property
    def k(self) -> float:
        if self.kind != SU11:
            raise LieAlgError("label is not an su(1,1) irrep")
        return self.index

    @property
    def two_j(self) -> int:
        return int(round(2 * self.j))

    @property
    def finite(self) -> bool:
        return self.kind == SU2

    def __str__(self) -> str:
        if self.kind == SU2:
            return f"SU2(j={Fraction(self.index).limit_denominator(1000)})"
        if self.kind == SU11:
            return f"SU11(k={self.index:g})"
        return "Fock"


class Generators(NamedTuple):
    """Raising, lowering and Cartan generators on one basis."""

    plus: np.ndarray
    minus: np.ndarray
    z: np.ndarray
    label: IrrepLabel


def _as_label(label, kind) -> IrrepLabel:
    if isinstance(label, IrrepLabel):
        if label.kind != kind:
            raise InvalidIrrepError(f"expected a {kind} label, got {label}")
        return label
    return IrrepLabel.su2(label) if kind == SU2 else IrrepLabel.su11(label)


def su2_generators(label) -> Generators:
    """J+, J-, J_z for spin j (``label`` may be an IrrepLabel or a number).

    >>> g = su2_generators(0.5)
    >>> g.plus.real.tolist()
    [[0.0, 0.0], [1.0, 0.0]]
    """
    label = _as_label(label, SU2)
    two_j = label.two_j
    n = np.arange(two_j + 1, dtype=float)
    jz = np.diag(n - label.j).astype(complex)
    # <n+1|J+|n> = sqrt((n+1)(2j-n)) in the M = J_z + j basis
    up = np.sqrt((n[:-1] + 1) * (two_j - n[:-1]))
    jp = np.diag(up, -1).astype(complex)
    return Generators(jp, jp.conj().T.copy(), jz, label)


def su11_generators(label, n_max: int) -> Generators:
    """K+, K-, K_z for Bargmann index k on the truncated basis n = 0..n_max.

    Only rows/columns ``0..n_max-1`` of commutators are exact; the top row is
    corrupted by the truncation.
    """
    label = _as_label(label, SU11)
    if int(n_max) != n_max or n_max < 1:
        raise LieAlgError(f"n_max must be an integer >= 1, got {n_max!r}")
    n = np.arange(int(n_max) + 1, dtype=float)
    kz = np.diag(n + label.k).astype(complex)
    up = np.sqrt((n[:-1] + 1) * (n[:-1] + 2 * label.k))
    kp = np.diag(up, -1).astype(complex)
    return Generators(kp, kp.conj().T.copy(), kz, label)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def parity_operator(dim: int) -> np.ndarray:
    """Diagonal ``(-1)^n`` on a basis of dimension ``dim``."""
    if int(dim) != dim or dim < 1:
        raise LieAlgError(f"dim must be a positive integer, got {dim!r}")
    signs = np.where(np.arange(int(dim)) % 2 == 0, 1.0, -1.0)
    return np.diag(signs).astype(complex)


def dress_parity(gens: Generators, parity: np.ndarray | None = None) -> Generators:
    """Parity-dressed generators ``(J+ P, P J-, J_z)``."""
    dim = gens.plus.shape[0]
    if parity is None:
        parity = parity_operator(dim)
    if parity.shape != gens.plus.shape:
        raise DimensionMismatchError(
            f"parity is {parity.shape}, generators are {gens.plus.shape}")
    return Generators(gens.plus @ parity, parity @ gens.minus, gens.z, gens.label)


def dress_phase(gens: Generators, phase_fn: Callable[[int], float]) -> Generators:
    """Phase-dressed generators ``(J+ U, U^dag J-, J_z)`` with ``U = diag(exp(-i phase_fn(n)))``."""
    dim = gens.plus.shape[0]
    phases = np.array([phase_fn(n) for n in range(dim)], dtype=float)
    u = np.exp(-1j * phases)
    return Generators(gens.plus * u[np.newaxis, :], u.conj()[:, np.newaxis] * gens.minus,
                      gens.z, gens.label)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def casimir(gens: Generators) -> np.ndarray:
    """Quadratic Casimir.

    su(2): ``J_z^2 + (J+J- + J-J+)/2`` (value j(j+1));
    su(1,1): ``K_z^2 - (K+K- + K-K+)/2`` (value k(k-1)).
    """
    sym = (gens.plus @ gens.minus + gens.minus @ gens.plus) / 2
    if gens.label.kind == SU2:
        return gens.z @ gens.z + sym
    return gens.z @ gens.z - sym


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential (Pade approximant with scaling and squaring)."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"mat_exp needs a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise LieAlgError("mat_exp input has non-finite entries")
    return scipy.linalg.expm(a.astype(complex))
