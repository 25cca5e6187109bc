"""Rotational-hyperfine structure of the vibronic ground state.

The model space is the product of the lowest rotational levels with the
two nuclear spin manifolds, |J, M, m_a, m_b>.  The effective
Hamiltonian collects five switchable terms:

* rotation                 B_v J(J+1)
* nuclear quadrupole       sum_k (eqQ)_k [C2 . T2(i_k)] / (i_k(2i_k - 1))
* nuclear Zeeman           -sum_k g_k mu_N B m_k          (B defines z)
* dc Stark                 -d0 E . C1
* laser polarization       -[ (a_par + 2 a_perp)/3
                              + sqrt(6)/3 (a_par - a_perp) T2(e,e) . C2 ] I

All directions (static E field, linear laser polarization) are given as
polar angles against the magnetic-field axis and lie in the x-z plane,
so every operator is a real symmetric matrix.  Energies are in MHz.

Shielding, rotational Zeeman, centrifugal distortion, spin-rotation and
spin-spin terms are deliberately left out; they are far below the MHz
scales treated here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy import constants as _sc

from .angular import rot_tensor_element
from .errors import ConfigError
from .units import NUCLEAR_MAGNETON_MHZ_PER_G

__all__ = [
    "TERMS",
    "MolecularConstants",
    "FieldConfiguration",
    "HyperfineBasis",
    "EigenSolution",
    "build_basis",
    "build_hamiltonian",
    "polarization_operator",
    "diagonalize",
    "eigenstate_polarizability",
    "track_states",
]

TERMS = frozenset({"rotation", "quadrupole", "zeeman", "stark", "polarization"})

# MHz per (debye * V/m)
_DEBYE_V_M_TO_MHZ = 1e-21 / _sc.c / _sc.h / 1e6

_VEC_TOL = 1e-12


@dataclass(frozen=True)
class MolecularConstants:
    """Ground-state coupling constants; unused ones may stay None.

    ``b_v`` in MHz, ``eqq_a``/``eqq_b`` in MHz, ``d0`` in debye,
    ``alpha_par``/``alpha_perp`` in Hz/(W/cm^2) at the trap frequency.
    ``quadrupole_denominator`` selects i(2i-1) ("standard") or the
    i(i-1) variant ("literal") in the quadrupole prefactor.
    """

    b_v: float | None = None
    eqq_a: float | None = None
    eqq_b: float | None = None
    g_a: float | None = None
    g_b: float | None = None
    d0: float | None = None
    alpha_par: float | None = None
    alpha_perp: float | None = None
    quadrupole_denominator: str = "standard"

    def __post_init__(self):
        if self.quadrupole_denominator not in ("standard", "literal"):
            raise ConfigError(
                "quadrupole_denominator must be 'standard' or 'literal', "
                f"got {self.quadrupole_denominator!r}"
            )

    def require(self, term: str, *names: str):
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(f"term {term!r} needs constant {name!r}")


@dataclass(frozen=True)
class FieldConfiguration:
    """External fields and the trap light.

    ``b_field`` in G along z; ``e_field`` in kV/cm at polar angle
    ``theta_e``; linear polarization at polar angle ``theta_p``;
    ``intensity`` in W/cm^2.  Angles are radians in the x-z plane.
    ``nu`` optionally records the photon energy (Hartree) the
    polarizability constants refer to.
    """

    constants: MolecularConstants
    b_field: float = 0.0
    e_field: float = 0.0
    theta_e: float = 0.0
    theta_p: float = 0.0
    intensity: float = 0.0
    nu: float | None = None

    def __post_init__(self):
        if self.b_field < 0.0 or self.e_field < 0.0:
            raise ValueError("field magnitudes must be >= 0")
        if self.intensity < 0.0:
            raise ValueError("intensity must be >= 0")

    @staticmethod
    def _vector_angle(vec: Sequence[float], what: str) -> float:
        v = np.asarray(vec, dtype=float)
        if v.shape != (3,):
            raise ValueError(f"{what} vector must have three components")
        if abs(np.linalg.norm(v) - 1.0) > _VEC_TOL:
            raise ValueError(f"{what} vector must be normalized to {_VEC_TOL}")
        if abs(v[1]) > _VEC_TOL:
            raise ValueError(f"{what} vector must lie in the x-z plane")
        return math.atan2(abs(v[0]), v[2])

    @classmethod
    def from_vectors(cls, constants: MolecularConstants, *, b_field: float = 0.0,
                     e_field: float = 0.0, e_vec: Sequence[float] = (0, 0, 1),
                     pol_vec: Sequence[float] = (0, 0, 1),
                     intensity: float = 0.0, nu: float | None = None
                     ) -> "FieldConfiguration":
        """Build from unit vectors instead of polar angles."""
        return cls(
            constants=constants, b_field=b_field, e_field=e_field,
            theta_e=cls._vector_angle(e_vec, "E-field"),
            theta_p=cls._vector_angle(pol_vec, "polarization"),
            intensity=intensity, nu=nu,
        )


@dataclass(frozen=True)
class HyperfineBasis:
    """Ordered product basis |J, M, m_a, m_b>."""

    j_max: int
    i_a: float
    i_b: float
    states: tuple[tuple[int, int, float, float], ...]

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def rot_states(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (j, m) for j in range(self.j_max + 1) for m in range(-j, j + 1)
        )

    def rotational_weights(self, vector: np.ndarray) -> dict[tuple[int, int], float]:
        """Total |amplitude|^2 per (J, M) block of one eigenvector."""
        n_spin = _spin_dim(self.i_a) * _spin_dim(self.i_b)
        blocks = vector.reshape(len(self.rot_states), n_spin)
        return {
            jm: float(np.sum(blocks[i] ** 2))
            for i, jm in enumerate(self.rot_states)
        }


@dataclass(frozen=True, eq=False)
class EigenSolution:
    """Sorted eigensystem with dominant-character labels.

    ``energies`` in MHz ascending; ``vectors[:, i]`` belongs to
    ``energies[i]``; ``labels[i]`` is the (J, M) block carrying the
    largest weight; ``polarizabilities`` in Hz/(W/cm^2) when attached.
    """

    basis: HyperfineBasis
    energies: np.ndarray
    vectors: np.ndarray
    labels: tuple[tuple[int, int], ...]
    polarizabilities: np.ndarray | None = None

    def select(self, label: tuple[int, int]) -> list[int]:
        """Indices of all eigenstates with the given (J, M) character."""
        return [i for i, lab in enumerate(self.labels) if lab == label]


def build_basis(j_max: int, i_a: float = 1.5, i_b: float = 1.5) -> HyperfineBasis:
    """Lexicographic basis in (J, M, m_a, m_b), all quantum numbers ascending."""
    if j_max not in (0, 1, 2):
        raise ValueError(f"j_max must be 0, 1 or 2, got {j_max}")
    for i in (i_a, i_b):
        two_i = round(2 * i)
        if two_i <= 0 or abs(2 * i - two_i) > 1e-9:
            raise ValueError(f"nuclear spin must be a positive half-integer, got {i}")
    states = tuple(
        (j, m, ma, mb)
        for j in range(j_max + 1)
        for m in range(-j, j + 1)
        for ma in _spin_projections(i_a)
        for mb in _spin_projections(i_b)
    )
    return HyperfineBasis(j_max=j_max, i_a=i_a, i_b=i_b, states=states)


def _spin_dim(i: float) -> int:
    return round(2 * i) + 1


def _spin_projections(i: float) -> list[float]:
    return [-i + k for k in range(_spin_dim(i))]


def _spin_z(i: float) -> np.ndarray:
    return np.diag(_spin_projections(i))


def _spin_raise(i: float) -> np.ndarray:
    n = _spin_dim(i)
    op = np.zeros((n, n))
    for k, m in enumerate(_spin_projections(i)[:-1]):
        op[k + 1, k] = math.sqrt(i * (i + 1) - m * (m + 1))
    return op


def _spin_t2(i: float) -> dict[int, np.ndarray]:
    """Rank-2 spin tensor T2q(i, i) in the ascending-m basis."""
    iz = _spin_z(i)
    ip = _spin_raise(i)
    im = ip.T
    t = {
        0: (3.0 * iz @ iz - i * (i + 1) * np.eye(_spin_dim(i))) / math.sqrt(6.0),
        +1: -(iz @ ip + ip @ iz) / 2.0,
        -1: +(iz @ im + im @ iz) / 2.0,
        +2: ip @ ip / 2.0,
        -2: im @ im / 2.0,
    }
    return t


def _rot_ckq(rot_states: Sequence[tuple[int, int]], k: int, q: int) -> np.ndarray:
    n = len(rot_states)
    op = np.zeros((n, n))
    for col, (j, m) in enumerate(rot_states):
        for row, (jp, mp) in enumerate(rot_states):
            if mp == m + q:
                op[row, col] = rot_tensor_element(jp, mp, k, q, j, m)
    return op


def _kron3(rot: np.ndarray, spin_a: np.ndarray, spin_b: np.ndarray) -> np.ndarray:
    return np.kron(rot, np.kron(spin_a, spin_b))


def _h_rotation(basis: HyperfineBasis, c: MolecularConstants) -> np.ndarray:
    c.require("rotation", "b_v")
    return np.diag([c.b_v * j * (j + 1) for (j, m, ma, mb) in basis.states])


def _h_quadrupole(basis: HyperfineBasis, c: MolecularConstants) -> np.ndarray:
    c.require("quadrupole", "eqq_a", "eqq_b")
    rot = basis.rot_states
    c2 = {q: _rot_ckq(rot, 2, q) for q in range(-2, 3)}
    eye_a = np.eye(_spin_dim(basis.i_a))
    eye_b = np.eye(_spin_dim(basis.i_b))
    h = np.zeros((basis.dim, basis.dim))
    for i_spin, eqq, slot in ((basis.i_a, c.eqq_a, 0), (basis.i_b, c.eqq_b, 1)):
        if c.quadrupole_denominator == "standard":
            denom = i_spin * (2.0 * i_spin - 1.0)
        else:
            denom = i_spin * (i_spin - 1.0)
        if denom == 0.0:
            if eqq == 0.0:
                continue
            raise ConfigError(
                f"quadrupole prefactor vanishes for spin {i_spin} "
                f"({c.quadrupole_denominator} denominator)"
            )
        t2 = _spin_t2(i_spin)
        for q in range(-2, 3):
            spin_a = t2[-q] if slot == 0 else eye_a
            spin_b = t2[-q] if slot == 1 else eye_b
            h += (-1) ** q * (eqq / denom) * _kron3(c2[q], spin_a, spin_b)
    return h


def _h_zeeman(basis: HyperfineBasis, c: MolecularConstants, b_field: float) -> np.ndarray:
    c.require("zeeman", "g_a", "g_b")
    shift = [
        -(c.g_a * ma + c.g_b * mb) * NUCLEAR_MAGNETON_MHZ_PER_G * b_field
        for (j, m, ma, mb) in basis.states
    ]
    return np.diag(shift)


def _h_stark(basis: HyperfineBasis, c: MolecularConstants, e_field: float,
             theta_e: float) -> np.ndarray:
    c.require("stark", "d0")
    rot = basis.rot_states
    # e . C1 for a field in the x-z plane at polar angle theta_e
    direction = (
        math.cos(theta_e) * _rot_ckq(rot, 1, 0)
        + (math.sin(theta_e) / math.sqrt(2.0))
        * (_rot_ckq(rot, 1, -1) - _rot_ckq(rot, 1, +1))
    )
    scale = c.d0 * e_field * 1e5 * _DEBYE_V_M_TO_MHZ
    eye_a = np.eye(_spin_dim(basis.i_a))
    eye_b = np.eye(_spin_dim(basis.i_b))
    return -scale * _kron3(direction, eye_a, eye_b)


def polarization_operator(basis: HyperfineBasis, c: MolecularConstants,
                          theta_p: float) -> np.ndarray:
    """Light-shift operator per unit intensity, in Hz/(W/cm^2).

    The polarization term of the Hamiltonian is -I times this matrix.
    Its expectation value in an eigenstate is the state's dynamic
    polarizability, which is how the Hellmann-Feynman extraction works.
    """
    c.require("polarization", "alpha_par", "alpha_perp")
    rot = basis.rot_states
    cth, sth = math.cos(theta_p), math.sin(theta_p)
    # sqrt(6)/3 * sum_q (-1)^q T2q(e,e) C2,-q, all components real
    aniso = (math.sqrt(6.0) / 3.0) * (
        (3.0 * cth * cth - 1.0) / math.sqrt(6.0) * _rot_ckq(rot, 2, 0)
        + sth * cth * (_rot_ckq(rot, 2, -1) - _rot_ckq(rot, 2, +1))
        + 0.5 * sth * sth * (_rot_ckq(rot, 2, -2) + _rot_ckq(rot, 2, +2))
    )
    iso = (c.alpha_par + 2.0 * c.alpha_perp) / 3.0
    delta = c.alpha_par - c.alpha_perp
    op = iso * np.eye(len(rot)) + delta * aniso
    eye_a = np.eye(_spin_dim(basis.i_a))
    eye_b = np.eye(_spin_dim(basis.i_b))
    return _kron3(op, eye_a, eye_b)


def build_hamiltonian(basis: HyperfineBasis, fields: FieldConfiguration,
                      terms: frozenset[str] | set[str] = TERMS) -> np.ndarray:
    """Assemble the selected terms; result is real symmetric, in MHz."""
    unknown = set(terms) - TERMS
    if unknown:
        raise ValueError(f"unknown terms {sorted(unknown)}; valid: {sorted(TERMS)}")
    c = fields.constants
    h = np.zeros((basis.dim, basis.dim))
    if "rotation" in terms:
        h += _h_rotation(basis, c)
    if "quadrupole" in terms:
        h += _h_quadrupole(basis, c)
    if "zeeman" in terms:
        h += _h_zeeman(basis, c, fields.b_field)
    if "stark" in terms:
        h += _h_stark(basis, c, fields.e_field, fields.theta_e)
    if "polarization" in terms:
        h += -fields.intensity * 1e-6 * polarization_operator(basis, c, fields.theta_p)
    return h


def diagonalize(h: np.ndarray, basis: HyperfineBasis) -> EigenSolution:
    """Eigensystem with a deterministic phase convention.

    The largest-magnitude component of each eigenvector is made
    positive.  Raises ValueError when the matrix is not symmetric
    within 1e-10 relative.
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (basis.dim, basis.dim):
        raise ValueError(f"matrix shape {h.shape} does not match basis dim {basis.dim}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.T)) > 1e-10 * scale:
        raise ValueError("Hamiltonian is not symmetric within 1e-10 relative")
    energies, vectors = np.linalg.eigh(h)
    for i in range(vectors.shape[1]):
        col = vectors[:, i]
        if col[int(np.argmax(np.abs(col)))] < 0.0:
            vectors[:, i] = -col
    labels = []
    for i in range(vectors.shape[1]):
        weights = basis.rotational_weights(vectors[:, i])
        labels.append(max(weights, key=weights.get))
    return EigenSolution(
        basis=basis, energies=energies, vectors=vectors, labels=tuple(labels),
    )


def eigenstate_polarizability(sol: EigenSolution, fields: FieldConfiguration
                              ) -> EigenSolution:
    """Attach per-eigenstate polarizabilities in Hz/(W/cm^2).

    Hellmann-Feynman: the polarization term is linear in intensity, so
    alpha_i = <psi_i| (-dH_pol/dI) |psi_i> at any operating intensity.
    """
    op = polarization_operator(sol.basis, fields.constants, fields.theta_p)
    alphas = np.einsum("ij,ik,kj->j", sol.vectors, op, sol.vectors)
    return replace(sol, polarizabilities=alphas)


def track_states(a: EigenSolution, b: EigenSolution) -> np.ndarray:
    """Greedy maximal-overlap matching between two eigensolutions.

    Returns ``perm`` with ``perm[i]`` the index in ``b`` continuing
    state ``i`` of ``a``; each target is used once.
    """
    if a.basis.dim != b.basis.dim:
        raise ValueError("eigensolutions live in different bases")
    overlap = np.abs(a.vectors.T @ b.vectors)
    n = overlap.shape[0]
    perm = np.full(n, -1, dtype=int)
    work = overlap.copy()
    for _ in range(n):
        i, j = np.unravel_index(np.argmax(work), work.shape)
        perm[i] = j
        work[i, :] = -1.0
        work[:, j] = -1.0
    return perm
