"""Exact evolution under number-diagonal Hamiltonians (hbar = 1).

Every Hamiltonian here is diagonal in the number basis, so ``exp(-iHt)`` is
applied as an elementwise phase; no ODE integration is involved.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import entangled as ent
from . import states as st
from .algebra import SU2, SU11, IrrepLabel
from .entangled import BipartiteState
from .errors import DimensionMismatchError, IdentityError, LieAlgError, UnsupportedIdentityError
from .states import StateVector

__all__ = [
    "NumberHamiltonian", "evolve", "kerr_cross", "rotator_target", "kerr_oscillator_target",
    "generate_entangled_su2", "generate_entangled_su11", "cat_template_su2",
    "cat_template_su11", "generate_cat_su2", "generate_cat_su11", "check_identity",
]

SINGLE = ("su2_rotator", "kerr_oscillator")
PAIR = ("bipartite", "kerr_cross")


@dataclass(frozen=True)
class NumberHamiltonian:
    """A Hamiltonian diagonal in the number basis.

    kinds and their eigenvalues (``n`` is the row index, i.e. M or N):

    * ``su2_rotator``: ``omega J_z + lam/(2j) J_z^2`` with ``J_z = n - j``
    * ``kerr_oscillator``: ``omega K_z + lam K+K-`` = ``omega (n+k) + lam n (n-1+2k)``
    * ``bipartite``: ``c1 n1^2 + c2 n2^2 + c3 n1 n2``
    * ``kerr_cross``: ``chi n1 n2``
    """

    kind: str
    coefficients: tuple
    label: IrrepLabel | None = None

    @classmethod
    def su2_rotator(cls, omega: float, lam: float, j) -> "NumberHamiltonian":
        return cls("su2_rotator", (float(omega), float(lam)), IrrepLabel.su2(j))

    @classmethod
    def kerr_oscillator(cls, omega: float, lam: float, k) -> "NumberHamiltonian":
        return cls("kerr_oscillator", (float(omega), float(lam)), IrrepLabel.su11(k))

    @classmethod
    def bipartite(cls, c1: float, c2: float, c3: float) -> "NumberHamiltonian":
        return cls("bipartite", (float(c1), float(c2), float(c3)))

    @classmethod
    def cross_kerr(cls, chi: float) -> "NumberHamiltonian":
        return cls("kerr_cross", (float(chi),))

    def energies(self, shape) -> np.ndarray:
        if self.kind == "su2_rotator":
            omega, lam = self.coefficients
            jz = np.arange(shape[0]) - self.label.j
            return omega * jz + lam / (2 * self.label.j) * jz ** 2
        if self.kind == "kerr_oscillator":
            omega, lam = self.coefficients
            n = np.arange(shape[0], dtype=float)
            return omega * (n + self.label.k) + lam * n * (n - 1 + 2 * self.label.k)
        n1 = np.arange(shape[0], dtype=float)[:, np.newaxis]
        n2 = np.arange(shape[1], dtype=float)[np.newaxis, :]
        if self.kind == "bipartite":
            c1, c2, c3 = self.coefficients
            return c1 * n1 ** 2 + c2 * n2 ** 2 + c3 * n1 * n2
        if self.kind == "kerr_cross":
            return self.coefficients[0] * n1 * n2
        raise LieAlgError(f"unknown Hamiltonian kind {self.kind!r}")


def evolve(state, hamiltonian: NumberHamiltonian, t: float):
    """``exp(-i H t) |state>`` for a StateVector or BipartiteState."""
    if isinstance(state, StateVector):
        if hamiltonian.kind not in SINGLE:
            raise DimensionMismatchError(f"{hamiltonian.kind} acts on two particles")
        if hamiltonian.label != state.label:
            raise DimensionMismatchError(
                f"Hamiltonian on {hamiltonian.label} applied to a state on {state.label}")
        phase = np.exp(-1j * t * hamiltonian.energies((state.dim,)))
        return StateVector(state.label, state.amplitudes * phase, state.family,
                           dict(state.params), state.tail)
    if isinstance(state, BipartiteState):
        if hamiltonian.kind not in PAIR:
            raise DimensionMismatchError(f"{hamiltonian.kind} acts on one particle")
        phase = np.exp(-1j * t * hamiltonian.energies(state.shape))
        return state.with_coeffs(state.coeffs * phase)
    raise LieAlgError(f"cannot evolve {type(state).__name__}")


def kerr_cross(state: BipartiteState, chi: float) -> BipartiteState:
    """Cross-Kerr gate ``exp(-i chi n1 n2)``; row indices are photon numbers."""
    return evolve(state, NumberHamiltonian.cross_kerr(chi), 1.0)


def check_identity(actual, expected, tol: float, what: str, up_to_phase: bool = False) -> float:
    """Raise IdentityError unless ``actual`` matches ``expected`` within ``tol``
    (2-norm of the difference, optionally after aligning global phase)."""
    a = np.asarray(getattr(actual, "coeffs", getattr(actual, "amplitudes", actual)))
    b = np.asarray(getattr(expected, "coeffs", getattr(expected, "amplitudes", expected)))
    if a.shape != b.shape:
        raise DimensionMismatchError(f"{what}: shapes {a.shape} and {b.shape} differ")
    err = st.phase_distance(a, b) if up_to_phase else float(np.linalg.norm(a - b))
    if not err < tol:
        raise IdentityError(f"{what}: deviation {err:.3e} exceeds {tol:g}")
    return err


# -- single-particle superpositions ------------------------------------------------

def rotator_target(j, gamma: complex, omega: float, lam: float) -> StateVector:
    """``[e^{-i pi/4} |j, g> + e^{i pi/4} e^{i pi j} |j, -g>] / sqrt(2)``,
    ``g = exp(i omega pi j / lam) gamma``: the nonlinear-rotator state at
    ``t = pi j / lam``, up to a global phase."""
    label = IrrepLabel.su2(j)
    g = np.exp(1j * omega * np.pi * label.j / lam) * complex(gamma)
    amps = (np.exp(-1j * np.pi / 4) * st.su2_coherent(label.j, g).amplitudes
            + np.exp(1j * np.pi / 4) * np.exp(1j * np.pi * label.j)
            * st.su2_coherent(label.j, -g).amplitudes) / np.sqrt(2)
    return StateVector(label, amps / np.linalg.norm(amps), "rotator-target",
                       {"j": label.j, "gamma": complex(gamma)})


def kerr_oscillator_target(initial: StateVector, omega: float, lam: float) -> StateVector:
    """``[e^{-i pi/4} |k, e> + e^{i pi/4} |k, -e>] / sqrt(2)`` with
    ``e = exp{-i pi [omega + (2k-1) lam] / (2 lam)} eta``, in the family of
    ``initial`` (Perelomov or Barut-Girardello) and on its truncation."""
    k = initial.label.k
    eta = complex(initial.params["eta"])
    e = np.exp(-1j * np.pi * (omega + (2 * k - 1) * lam) / (2 * lam)) * eta
    make = _su11_maker(initial.family)
    a = make(k, e, n_max=initial.n_max)
    b = make(k, -e, n_max=initial.n_max)
    amps = (np.exp(-1j * np.pi / 4) * a.amplitudes + np.exp(1j * np.pi / 4) * b.amplitudes)
    return StateVector(initial.label, amps / np.linalg.norm(amps), "kerr-target",
                       {"k": k, "eta": eta})


def _su11_maker(family: str):
    if family in ("perelomov", "P"):
        return st.perelomov
    if family in ("bg", "BG"):
        return st.barut_girardello
    raise LieAlgError(f"family must be Perelomov ('P') or Barut-Girardello ('BG'), got {family!r}")


# -- two-particle generation ------------------------------------------------------

def generate_entangled_su2(j, gamma1: complex, gamma2: complex, chi1: float = 1.0,
                           check: bool = True, tol: float = 1e-10) -> BipartiteState:
    """Evolve ``|j,-i g1>|j,-i g2>`` under ``chi1 (M1^2 + M2^2 + 2 M1 M2)`` for
    ``t = pi/(2 chi1)``; the result is the entangled SU(2) parity state."""
    label = IrrepLabel.su2(j)
    if label.two_j % 2:
        raise UnsupportedIdentityError(f"entangled SU(2) generation needs integer j, got j={label.j:g}")
    start = ent.product(st.su2_coherent(label.j, -1j * complex(gamma1)),
                        st.su2_coherent(label.j, -1j * complex(gamma2)))
    out = evolve(start, NumberHamiltonian.bipartite(chi1, chi1, 2 * chi1), np.pi / (2 * chi1))
    if check:
        check_identity(out, ent.entangled_su2_parity(label.j, gamma1, gamma2), tol,
                       "entangled SU(2) generation")
    return out.with_coeffs(out.coeffs, "su2-parity")


def _su11_product(family, k, x1, x2, tail_tol):
    make = _su11_maker(family)
    return ent.product(make(k, x1, tail_tol), make(k, x2, tail_tol))


def generate_entangled_su11(k, eta1: complex, eta2: complex, lam1: float = 1.0,
                            family: str = "P", tail_tol=None, check: bool = True,
                            tol: float = 1e-9) -> BipartiteState:
    """Evolve ``|k, i eta1>|k, i eta2>`` under ``lam1 (N1^2 + N2^2 + 2 N1 N2)`` for
    ``t = pi/(2 lam1)``; gives the entangled Perelomov / BG parity state."""
    start = _su11_product(family, k, 1j * complex(eta1), 1j * complex(eta2), tail_tol)
    out = evolve(start, NumberHamiltonian.bipartite(lam1, lam1, 2 * lam1), np.pi / (2 * lam1))
    fam = "perelomov-parity" if _su11_maker(family) is st.perelomov else "bg-parity"
    if check:
        builder = ent.entangled_perelomov if fam == "perelomov-parity" else ent.entangled_bg
        check_identity(out, builder(k, eta1, eta2, tail_tol), tol, "entangled SU(1,1) generation")
    return out.with_coeffs(out.coeffs, fam)


def cat_template_su2(j, gamma1: complex, gamma2: complex) -> BipartiteState:
    """Renormalized ``{[|g1> + s|-g1>]|g2> + [s|g1> - |-g1>]|-g2>} / 2``, ``s = (-1)^{2j}``."""
    label = IrrepLabel.su2(j)
    s = (-1) ** label.two_j
    p1, m1 = st.su2_coherent(label.j, gamma1), st.su2_coherent(label.j, -complex(gamma1))
    p2, m2 = st.su2_coherent(label.j, gamma2), st.su2_coherent(label.j, -complex(gamma2))
    return ent.superpose([(0.5, p1, p2), (0.5 * s, m1, p2), (0.5 * s, p1, m2), (-0.5, m1, m2)],
                         "su2-cat", {"j": label.j})


def cat_template_su11(k, eta1: complex, eta2: complex, family: str = "P", tail_tol=None
                      ) -> BipartiteState:
    """Renormalized ``[(|e1> + |-e1>)|e2> + (|e1> - |-e1>)|-e2>] / 2``."""
    make = _su11_maker(family)
    p1, m1 = make(k, eta1, tail_tol), make(k, -complex(eta1), tail_tol)
    p2, m2 = make(k, eta2, tail_tol), make(k, -complex(eta2), tail_tol)
    return ent.superpose([(0.5, p1, p2), (0.5, m1, p2), (0.5, p1, m2), (-0.5, m1, m2)],
                         "su11-cat", {"k": float(k)})


def generate_cat_su2(j, gamma1: complex, gamma2: complex, chi3: float = 1.0,
                     check: bool = True, tol: float = 1e-10) -> BipartiteState:
    """Cross-coupling-only evolution ``chi3 M1 M2`` for ``t = pi/chi3`` from ``|j g1>|j g2>``."""
    label = IrrepLabel.su2(j)
    start = ent.product(st.su2_coherent(label.j, gamma1), st.su2_coherent(label.j, gamma2))
    out = evolve(start, NumberHamiltonian.bipartite(0.0, 0.0, chi3), np.pi / chi3)
    if check:
        check_identity(out, cat_template_su2(label.j, gamma1, gamma2), tol, "SU(2) cat generation")
    return out.with_coeffs(out.coeffs, "su2-cat")


def generate_cat_su11(k, eta1: complex, eta2: complex, lam3: float = 1.0, family: str = "P",
                      tail_tol=None, check: bool = True, tol: float = 1e-9) -> BipartiteState:
    start = _su11_product(family, k, complex(eta1), complex(eta2), tail_tol)
    out = evolve(start, NumberHamiltonian.bipartite(0.0, 0.0, lam3), np.pi / lam3)
    if check:
        check_identity(out, cat_template_su11(k, eta1, eta2, family, tail_tol), tol,
                       "SU(1,1) cat generation")
    return out.with_coeffs(out.coeffs, "su11-cat")
