"""Two-particle product states, finite superpositions and the named
entangled SU(2) / SU(1,1) coherent states."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import states as st
from .algebra import IrrepLabel
from .errors import DegenerateSuperpositionError, DimensionMismatchError, LieAlgError
from .states import StateVector

__all__ = [
    "BipartiteState", "MultipartiteState", "Term", "product", "superpose",
    "entangled_su2_parity", "entangled_perelomov", "entangled_bg",
    "entangled_binomial", "entangled_negative_binomial", "entangled_squeezed",
    "entangled_ho_coherent", "qft_state",
]

_EM = np.exp(-1j * np.pi / 4) / np.sqrt(2)
_EP = np.exp(1j * np.pi / 4) / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure two-particle state ``sum C[n1, n2] |n1>|n2>``."""

    label1: IrrepLabel
    label2: IrrepLabel
    coeffs: np.ndarray
    family: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 2:
            raise DimensionMismatchError(f"coefficients must be a matrix, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.coeffs) ** 2

    def with_coeffs(self, coeffs, family=None) -> "BipartiteState":
        return BipartiteState(self.label1, self.label2, coeffs,
                              self.family if family is None else family, dict(self.params))

    def __repr__(self) -> str:
        return (f"BipartiteState({self.label1} x {self.label2}, shape={self.shape}, "
                f"family={self.family!r})")


class Term(NamedTuple):
    """One product component ``weight |left> (x) |right>`` of a superposition."""

    weight: complex
    left: StateVector
    right: StateVector


def product(a: StateVector, b: StateVector) -> BipartiteState:
    return BipartiteState(a.label, b.label, np.outer(a.amplitudes, b.amplitudes),
                          "product", {"left": a.family, "right": b.family})


def _common(slot: Sequence[StateVector]) -> list[StateVector]:
    labels = {s.label for s in slot}
    if len(labels) != 1:
        raise DimensionMismatchError(f"superposed components mix bases {sorted(map(str, labels))}")
    dim = max(s.dim for s in slot)
    return [s.padded(dim) for s in slot]


def superpose(terms: Sequence, family: str = "superposition", params: dict | None = None
              ) -> BipartiteState:
    """Normalized ``sum_a w_a |l_a> (x) |r_a>``.

    The norm comes from the Gram matrices of the (generally nonorthogonal)
    components.  Truncated components are zero-padded to a common dimension.
    """
    terms = [Term(*t) for t in terms]
    if not terms:
        raise LieAlgError("superpose needs at least one term")
    w = np.array([complex(t.weight) for t in terms])
    if not np.all(np.isfinite(w)) or not np.any(w != 0):
        raise LieAlgError("superposition weights must be finite and not all zero")
    left = _common([t.left for t in terms])
    right = _common([t.right for t in terms])
    L = np.array([s.amplitudes for s in left])
    R = np.array([s.amplitudes for s in right])
    gram = (L.conj() @ L.T) * (R.conj() @ R.T)
    norm2 = float(np.real(w.conj() @ gram @ w))
    if norm2 <= 1e-20 * float(np.sum(np.abs(w) ** 2)):
        raise DegenerateSuperpositionError("superposition components cancel to zero norm")
    coeffs = np.einsum("a,ai,aj->ij", w, L, R) / np.sqrt(norm2)
    return BipartiteState(left[0].label, right[0].label, coeffs, family, dict(params or {}))


def _parity_pair(make, x1, x2, w_minus, w_plus, family, params):
    """``w_minus |-i x> + w_plus |+i x>`` over both slots."""
    a1 = make(-1j * x1)
    a2 = make(-1j * x2)
    b1 = make(1j * x1)
    b2 = make(1j * x2)
    return superpose([(w_minus, a1, a2), (w_plus, b1, b2)], family, params)


def entangled_su2_parity(j, gamma1: complex, gamma2: complex) -> BipartiteState:
    """``[e^{-i pi/4} |j,-i g1>|j,-i g2> + e^{i pi/4} |j,i g1>|j,i g2>] / sqrt(2)``."""
    label = IrrepLabel.su2(j)
    return _parity_pair(lambda g: st.su2_coherent(label.j, g), complex(gamma1), complex(gamma2),
                        _EM, _EP, "su2-parity",
                        {"j": label.j, "gamma1": complex(gamma1), "gamma2": complex(gamma2)})


def _su11_pair(make, k, eta1, eta2, family):
    label = IrrepLabel.su11(k)
    return _parity_pair(make, complex(eta1), complex(eta2), _EP, _EM, family,
                        {"k": label.k, "eta1": complex(eta1), "eta2": complex(eta2)})


def entangled_perelomov(k, eta1, eta2, tail_tol=None) -> BipartiteState:
    """``[e^{i pi/4} |k,-i eta>_P + e^{-i pi/4} |k,i eta>_P] / sqrt(2)`` (two-particle)."""
    return _su11_pair(lambda e: st.perelomov(k, e, tail_tol), k, eta1, eta2, "perelomov-parity")


def entangled_bg(k, eta1, eta2, tail_tol=None) -> BipartiteState:
    """Barut-Girardello analog of :func:`entangled_perelomov`."""
    return _su11_pair(lambda e: st.barut_girardello(k, e, tail_tol), k, eta1, eta2, "bg-parity")


def _even_odd(make, x1, x2, family, params):
    """Normalized ``(|x1>+|-x1>)|x2> + (|x1>-|-x1>)|-x2>``."""
    p1, m1, p2, m2 = make(x1), make(-x1), make(x2), make(-x2)
    return superpose([(0.5, p1, p2), (0.5, m1, p2), (0.5, p1, m2), (-0.5, m1, m2)],
                     family, params)


def entangled_binomial(M: int, eta1, eta2, tail_tol=None) -> BipartiteState:
    """Entangled binomial state: the output of the cross-Kerr gate at chi = pi
    acting on two binomial states."""
    return _even_odd(lambda e: st.binomial_state(M, e, tail_tol), complex(eta1), complex(eta2),
                     "binomial", {"M": int(M), "eta1": complex(eta1), "eta2": complex(eta2)})


def entangled_negative_binomial(M: int, eta1, eta2, tail_tol=None) -> BipartiteState:
    return _even_odd(lambda e: st.negative_binomial_state(M, e, tail_tol),
                     complex(eta1), complex(eta2), "negative-binomial",
                     {"M": int(M), "eta1": complex(eta1), "eta2": complex(eta2)})


def entangled_ho_coherent(alpha1, alpha2, tail_tol=None) -> BipartiteState:
    """Entangled oscillator coherent state, the contraction limit of
    :func:`entangled_binomial`."""
    return _even_odd(lambda a: st.ho_coherent(a, tail_tol), complex(alpha1), complex(alpha2),
                     "ho-coherent", {"alpha1": complex(alpha1), "alpha2": complex(alpha2)})


def entangled_squeezed(eta1, eta2, sector: str = "vacuum", tail_tol=None) -> BipartiteState:
    """Entangled squeezed vacuum (``sector="vacuum"``) or squeezed first Fock
    (``sector="first"``) state on the two-mode Fock basis."""
    makers = {"vacuum": st.squeezed_vacuum, "first": st.squeezed_first}
    if sector not in makers:
        raise LieAlgError(f"sector must be 'vacuum' or 'first', got {sector!r}")
    make = makers[sector]
    return _parity_pair(lambda e: make(e, tail_tol), complex(eta1), complex(eta2), _EP, _EM,
                        f"squeezed-{sector}",
                        {"eta1": complex(eta1), "eta2": complex(eta2), "sector": sector})


@dataclass(frozen=True, eq=False)
class MultipartiteState:
    """Amplitudes over a product of ``len(party_dims)`` bases (row-major)."""

    amplitudes: np.ndarray
    party_dims: tuple
    labels: tuple
    family: str = ""
    params: dict = field(default_factory=dict)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.party_dims)

    def component(self, c: int) -> list[StateVector]:
        """The product of j = 1/2 coherent states making up basis state ``|c>``.

        Bit value 1 is ``gamma = 0`` (the highest-weight state), bit value 0
        is the antipode ``gamma = infinity``; the most significant bit is party 0.
        """
        n = len(self.party_dims)
        bits = [(c >> (n - 1 - i)) & 1 for i in range(n)]
        return [st.su2_coherent(0.5, 0) if b else st.su2_antipode(0.5) for b in bits]


def qft_state(a: int, num_qubits: int) -> MultipartiteState:
    """Quantum Fourier transform of ``|a>``: ``q^{-1/2} sum_c exp(2 pi i a c / q) |c>``."""
    if int(num_qubits) != num_qubits or not 1 <= num_qubits <= 12:
        raise LieAlgError(f"num_qubits must be an integer in 1..12, got {num_qubits!r}")
    q = 2 ** int(num_qubits)
    if int(a) != a or not 0 <= a < q:
        raise LieAlgError(f"a must be an integer in 0..{q - 1}, got {a!r}")
    c = np.arange(q)
    # reduce a*c mod q first so the phase argument stays small and exact
    amps = np.exp(2j * np.pi * ((int(a) * c) % q) / q) / np.sqrt(q)
    label = IrrepLabel.su2(0.5)
    return MultipartiteState(amps, (2,) * int(num_qubits), (label,) * int(num_qubits),
                             "qft", {"a": int(a), "num_qubits": int(num_qubits)})
