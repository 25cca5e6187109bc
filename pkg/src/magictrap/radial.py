"""Radial bound-state solver on a sinc (sine) DVR grid.

The grid covers a hard-wall interval [r_min, r_max] with n interior
points R_i = r_min + i dr, dr = (r_max - r_min)/(n + 1).  The kinetic
matrix is the closed-form particle-in-a-box DVR expression; its leading
diagonal term is hbar^2 pi^2 / (6 mu dr^2) with the standard interval
adjustments, and off-diagonal entries fall off as (-1)^(i-j)/(i-j)^2
with the corresponding interval correction.  Single curves and
two-channel spin-orbit coupled pairs share the same machinery.

All quantities are in Hartree atomic units unless stated otherwise;
reduced masses cross the API boundary in atomic mass units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from .errors import GridError
from .potentials import CoupledModel, DipoleFunction, PotentialCurve
from .units import AMU_TO_ME, C_AU

__all__ = [
    "RadialGrid",
    "RovibLevel",
    "dvr_kinetic",
    "solve_single",
    "solve_coupled",
    "radial_matrix_element",
    "linewidth",
]

# levels closer than this to the dissociation threshold get flagged
NEAR_THRESHOLD_WINDOW = 1e-6
BOUND_MARGIN = 1e-10


@dataclass(frozen=True)
class RadialGrid:
    """Uniform DVR grid on a hard-wall interval (lengths in Bohr)."""

    r_min: float
    r_max: float
    n: int

    def __post_init__(self):
        if self.r_min <= 0.0:
            raise GridError("r_min must be positive (radial coordinate)")
        if self.r_max <= self.r_min:
            raise GridError("r_max must exceed r_min")
        if self.n < 8:
            raise GridError("need at least 8 grid points")

    @property
    def dr(self) -> float:
        return (self.r_max - self.r_min) / (self.n + 1)

    @property
    def points(self) -> np.ndarray:
        return self.r_min + self.dr * np.arange(1, self.n + 1)

    @property
    def kinetic_cutoff_factor(self) -> float:
        """mu-independent part of the kinetic cutoff hbar^2 pi^2/(2 mu dr^2)."""
        return math.pi ** 2 / (2.0 * self.dr ** 2)


@dataclass(frozen=True, eq=False)
class RovibLevel:
    """One bound rovibrational level.

    ``wavefunction`` has shape (n_channels, n) and is normalized as
    sum over channels and grid points of psi^2 dr = 1, i.e. it stores
    amplitude densities psi(R_i), not bare DVR coefficients.
    """

    label: str
    v: int
    j: int
    energy: float
    grid: RadialGrid
    mu: float  # reduced mass, electron masses
    wavefunction: np.ndarray = field(repr=False)
    channel_labels: tuple[str, ...]
    channel_fractions: tuple[float, ...]
    potentials: tuple[PotentialCurve, ...] = field(repr=False)
    shift: float = 0.0
    near_threshold: bool = False

    def rotational_constant(self) -> float:
        """Vibrationally averaged <hbar^2 / (2 mu R^2)> in Hartree."""
        r = self.grid.points
        dens = np.sum(self.wavefunction ** 2, axis=0) * self.grid.dr
        return float(np.sum(dens / (2.0 * self.mu * r ** 2)))


@lru_cache(maxsize=8)
def _kinetic_cached(r_min: float, r_max: float, n: int, mu: float) -> np.ndarray:
    big_n = n + 1
    length = r_max - r_min
    i = np.arange(1, n + 1)
    diff = i[:, None] - i[None, :]
    summ = i[:, None] + i[None, :]
    pref = math.pi ** 2 / (2.0 * mu * length ** 2) * 0.5
    with np.errstate(divide="ignore", invalid="ignore"):
        off = (
            1.0 / np.sin(math.pi * diff / (2.0 * big_n)) ** 2
            - 1.0 / np.sin(math.pi * summ / (2.0 * big_n)) ** 2
        )
    t = pref * np.where(diff % 2 == 0, 1.0, -1.0) * off
    diag = pref * ((2.0 * big_n ** 2 + 1.0) / 3.0 - 1.0 / np.sin(math.pi * i / big_n) ** 2)
    t[np.diag_indices(n)] = diag
    t.setflags(write=False)
    return t


def dvr_kinetic(grid: RadialGrid, mass_amu: float) -> np.ndarray:
    """Kinetic-energy matrix (Hartree) for the given grid and mass."""
    if mass_amu <= 0.0:
        raise ValueError("mass must be positive")
    mu = mass_amu * AMU_TO_ME
    return _kinetic_cached(grid.r_min, grid.r_max, grid.n, mu)


def _check_grid(grid: RadialGrid, mu: float, v_on_grid: np.ndarray,
                asymptote: float) -> None:
    depth = asymptote - float(np.min(v_on_grid))
    cutoff = grid.kinetic_cutoff_factor / mu
    if depth > 0.0 and cutoff < depth:
        raise GridError(
            f"kinetic cutoff {cutoff:.3e} Eh below well depth {depth:.3e} Eh; "
            "decrease grid spacing"
        )


def _finalize_level(label, v, j, energy, grid, mu, coeffs, channel_labels,
                    channel_fractions, potentials, shift, asym) -> RovibLevel:
    # deterministic overall sign: largest-amplitude point positive
    flat = coeffs.ravel()
    if flat[np.argmax(np.abs(flat))] < 0.0:
        coeffs = -coeffs
    psi = coeffs / math.sqrt(grid.dr)
    return RovibLevel(
        label=label,
        v=v,
        j=j,
        energy=float(energy),
        grid=grid,
        mu=mu,
        wavefunction=psi,
        channel_labels=channel_labels,
        channel_fractions=channel_fractions,
        potentials=potentials,
        shift=shift,
        near_threshold=bool(energy > asym - NEAR_THRESHOLD_WINDOW),
    )


def solve_single(curve: PotentialCurve, j: int, mass_amu: float,
                 grid: RadialGrid, max_levels: int | None = None) -> list[RovibLevel]:
    """Bound levels of one electronic curve at rotational quantum number j.

    Returns levels with energy below the curve's asymptote, ordered by
    energy and indexed v = 0, 1, ...
    """
    if not isinstance(j, int) or j < 0:
        raise ValueError("j must be a non-negative integer")
    mu = mass_amu * AMU_TO_ME
    r = grid.points
    v_r = np.asarray(curve(r), dtype=float)
    _check_grid(grid, mu, v_r, curve.asymptote)
    h = _kinetic_cached(grid.r_min, grid.r_max, grid.n, mu).copy()
    v_eff = v_r + j * (j + 1) / (2.0 * mu * r ** 2)
    h[np.diag_indices(grid.n)] += v_eff

    bound_top = curve.asymptote - BOUND_MARGIN
    energies, vectors = sla.eigh(h, subset_by_value=(-np.inf, bound_top))
    levels = []
    for v_idx in range(energies.size):
        if max_levels is not None and v_idx >= max_levels:
            break
        coeffs = vectors[:, v_idx][None, :]
        levels.append(_finalize_level(
            curve.label, v_idx, j, energies[v_idx], grid, mu, coeffs,
            (curve.label,), (1.0,), (curve,), 0.0, curve.asymptote,
        ))
    return levels


def solve_coupled(model: CoupledModel, j: int, mass_amu: float,
                  grid: RadialGrid, max_levels: int | None = None) -> list[RovibLevel]:
    """Bound levels of a two-channel coupled model at rotational j.

    The 2n x 2n Hamiltonian stacks the DVR kinetic blocks on the
    diagonal channels, adds each channel's shifted potential plus the
    centrifugal term, and couples channels pointwise through xi(R).
    Channel fractions are the norm shares of the two components.
    """
    if not isinstance(j, int) or j < 0:
        raise ValueError("j must be a non-negative integer")
    mu = mass_amu * AMU_TO_ME
    r = grid.points
    n = grid.n
    va = np.asarray(model.curves[0](r), dtype=float) + model.shift
    vb = np.asarray(model.curves[1](r), dtype=float) + model.shift
    asym = min(c.asymptote for c in model.curves) + model.shift
    _check_grid(grid, mu, np.minimum(va, vb), asym)

    cent = j * (j + 1) / (2.0 * mu * r ** 2)
    t = _kinetic_cached(grid.r_min, grid.r_max, grid.n, mu)
    xi = np.asarray(model.coupling(r), dtype=float)

    h = np.zeros((2 * n, 2 * n))
    h[:n, :n] = t
    h[n:, n:] = t
    h[np.arange(n), np.arange(n)] += va + cent
    h[np.arange(n, 2 * n), np.arange(n, 2 * n)] += vb + cent
    h[np.arange(n), np.arange(n, 2 * n)] = xi
    h[np.arange(n, 2 * n), np.arange(n)] = xi

    energies, vectors = sla.eigh(h, subset_by_value=(-np.inf, asym - BOUND_MARGIN))
    levels = []
    for v_idx in range(energies.size):
        if max_levels is not None and v_idx >= max_levels:
            break
        coeffs = vectors[:, v_idx].reshape(2, n)
        fracs = tuple(float(np.sum(coeffs[c] ** 2)) for c in range(2))
        levels.append(_finalize_level(
            "".join(model.labels), v_idx, j, energies[v_idx], grid, mu, coeffs,
            tuple(model.labels), fracs, tuple(model.curves), model.shift, asym,
        ))
    return levels


def radial_matrix_element(bra: RovibLevel, f, ket: RovibLevel,
                          pairs: dict[tuple[int, int], object] | None = None) -> float:
    """<bra| f(R) |ket> on the common grid.

    With ``pairs`` omitted, ``f`` is applied on matching channels
    (requires equal channel counts).  Otherwise ``pairs`` maps
    (bra_channel, ket_channel) to the function weighting that block,
    which is how a transition dipole connecting only one channel pair
    is expressed.
    """
    if bra.grid != ket.grid:
        raise GridError("bra and ket live on different grids")
    r = bra.grid.points
    dr = bra.grid.dr
    if pairs is None:
        if bra.wavefunction.shape[0] != ket.wavefunction.shape[0]:
            raise ValueError("channel counts differ; pass explicit pairs")
        fr = np.asarray(f(r), dtype=float)
        acc = 0.0
        for c in range(bra.wavefunction.shape[0]):
            acc += float(np.sum(bra.wavefunction[c] * fr * ket.wavefunction[c])) * dr
        return acc
    acc = 0.0
    for (cb, ck), fn in pairs.items():
        fr = np.asarray(fn(r), dtype=float)
        acc += float(np.sum(bra.wavefunction[cb] * fr * ket.wavefunction[ck])) * dr
    return acc


def linewidth(level_f: RovibLevel,
              decay_targets: list[tuple[PotentialCurve, DipoleFunction]]) -> float:
    """Radiative linewidth gamma_f of an excited level (atomic units).

    Averages the R-local spontaneous rate over the level's density:

        Gamma(R) = |dE(R)|^3 d(R)^2 / (3 pi eps0 hbar^4 c^3)

    written in atomic units as (4/3) |dE|^3 d^2 / c^3, where dE(R) is
    the difference between the emitting channel's potential (including
    the model shift) and the target curve.  Channels without a dipole
    path to any target contribute nothing.
    """
    r = level_f.grid.points
    dr = level_f.grid.dr
    gamma = 0.0
    any_path = False
    for target_curve, dip in decay_targets:
        v_t = np.asarray(target_curve(r), dtype=float)
        if level_f.energy < float(np.min(v_t)):
            raise ValueError(
                f"level at {level_f.energy:.6e} Eh lies below the minimum of "
                f"decay target {target_curve.label!r}"
            )
        for c, ch_label in enumerate(level_f.channel_labels):
            if not dip.connects(ch_label, target_curve.label):
                continue
            any_path = True
            v_c = np.asarray(level_f.potentials[c](r), dtype=float) + level_f.shift
            de = v_c - v_t
            rate_r = (4.0 / 3.0) * np.abs(de) ** 3 * dip(r) ** 2 / C_AU ** 3
            gamma += float(np.sum(level_f.wavefunction[c] ** 2 * rate_r)) * dr
    if not any_path:
        return 0.0
    return gamma
