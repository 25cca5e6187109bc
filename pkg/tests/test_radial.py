"""Radial bound-state solver against analytic oracles.

The sine-DVR kinetic matrix is compared with an explicit spectral
construction, box and Morse spectra with their closed forms, and
matrix elements and linewidths with hand-evaluated integrals.
"""

import math

import numpy as np
import pytest

from magictrap import (
    CoupledModel,
    DipoleFunction,
    GridError,
    MorseCurve,
    RadialGrid,
    dvr_kinetic,
    linewidth,
    radial_matrix_element,
    solve_coupled,
    solve_single,
)
from magictrap.potentials import PotentialCurve
from magictrap.units import AMU_TO_ME, C_AU

MASS = 18.0
MU = MASS * AMU_TO_ME


class QuadraticWell(PotentialCurve):
    """Harmonic well of depth v0 below a zero asymptote."""

    def __init__(self, k: float, r_e: float, v0: float):
        self.label = "ho"
        self.asymptote = 0.0
        self.k = k
        self.r_e = r_e
        self.v0 = v0

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = 0.5 * self.k * (r - self.r_e) ** 2 - self.v0
        return out if out.ndim else float(out)


def test_grid_validation_and_geometry():
    grid = RadialGrid(4.0, 12.0, 99)
    assert grid.dr == pytest.approx(8.0 / 100.0)
    assert grid.points.shape == (99,)
    assert grid.points[0] == pytest.approx(4.0 + grid.dr)
    assert grid.points[-1] == pytest.approx(12.0 - grid.dr)
    with pytest.raises(GridError):
        RadialGrid(-1.0, 12.0, 99)
    with pytest.raises(GridError):
        RadialGrid(4.0, 4.0, 99)
    with pytest.raises(GridError):
        RadialGrid(4.0, 12.0, 4)


def test_kinetic_matrix_matches_spectral_construction():
    """T = U diag(k_n^2 / 2 mu) U^T with sine eigenvectors, built here."""
    grid = RadialGrid(4.0, 9.0, 24)
    n = grid.n
    big_n = n + 1
    length = grid.r_max - grid.r_min
    modes = np.arange(1, n + 1)
    u = np.sqrt(2.0 / big_n) * np.sin(
        np.pi * np.outer(modes, np.arange(1, n + 1)) / big_n)
    eigs = (modes * np.pi / length) ** 2 / (2.0 * MU)
    ref = u.T @ np.diag(eigs) @ u
    np.testing.assert_allclose(dvr_kinetic(grid, MASS), ref,
                               rtol=0.0, atol=1e-12)


def test_kinetic_eigenvalues_are_box_levels():
    grid = RadialGrid(4.0, 9.0, 60)
    length = grid.r_max - grid.r_min
    evals = np.linalg.eigvalsh(dvr_kinetic(grid, MASS))
    n = np.arange(1, 61)
    exact = (n * np.pi / length) ** 2 / (2.0 * MU)
    np.testing.assert_allclose(evals, exact, rtol=1e-11)


def test_harmonic_spectrum_and_matrix_element():
    k = 0.5
    omega = math.sqrt(k / MU)
    well = QuadraticWell(k, 6.5, 60.0 * omega)
    grid = RadialGrid(4.0, 9.0, 400)
    levels = solve_single(well, 0, MASS, grid, max_levels=8)
    for n, lvl in enumerate(levels):
        assert lvl.energy == pytest.approx(-60.0 * omega + omega * (n + 0.5),
                                           rel=1e-9)
    # |<0| (R - R_e) |1>| = sqrt(1 / (2 mu omega)); sign is a phase choice
    x01 = radial_matrix_element(levels[0], lambda r: r - 6.5, levels[1])
    assert abs(x01) == pytest.approx(math.sqrt(1.0 / (2.0 * MU * omega)),
                                     rel=1e-9)
    # parity forbids <0| (R - R_e) |0>
    x00 = radial_matrix_element(levels[0], lambda r: r - 6.5, levels[0])
    assert abs(x00) < 1e-10


def test_morse_spectrum_matches_closed_form():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 600)
    levels = solve_single(curve, 0, MASS, grid, max_levels=10)
    exact = curve.analytic_levels(MU)
    assert len(levels) == 10
    for lvl, ref in zip(levels, exact):
        assert lvl.energy == pytest.approx(ref, rel=1e-9)


def test_wavefunctions_orthonormal():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    levels = solve_single(curve, 0, MASS, grid, max_levels=5)
    for i, a in enumerate(levels):
        for j, b in enumerate(levels):
            ov = radial_matrix_element(a, lambda r: np.ones_like(r), b)
            assert ov == pytest.approx(1.0 if i == j else 0.0, abs=1e-10)


def test_centrifugal_term_shifts_energies():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    e0 = solve_single(curve, 0, MASS, grid, max_levels=1)[0]
    e1 = solve_single(curve, 1, MASS, grid, max_levels=1)[0]
    b0 = e0.rotational_constant()
    # J = 0 -> 1 spacing equals 2B to first order
    assert e1.energy - e0.energy == pytest.approx(2.0 * b0, rel=1e-3)
    # <1/(2 mu R^2)> close to the rigid-rotor value at R_e
    assert b0 == pytest.approx(1.0 / (2.0 * MU * 6.0**2), rel=5e-3)


def test_rotational_constant_matches_density_integral():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    lvl = solve_single(curve, 0, MASS, grid, max_levels=1)[0]
    dens = lvl.wavefunction[0] ** 2 * grid.dr
    ref = float(np.sum(dens / (2.0 * MU * grid.points**2)))
    assert lvl.rotational_constant() == pytest.approx(ref, rel=1e-14)


def test_solver_rejects_bad_arguments():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    with pytest.raises(ValueError):
        solve_single(curve, -1, MASS, grid)
    with pytest.raises(ValueError):
        solve_single(curve, 1.5, MASS, grid)


def test_coarse_grid_raises_grid_error():
    deep = MorseCurve(label="X", d_e=1.0, a=2.0, r_e=6.0)
    coarse = RadialGrid(3.5, 30.0, 10)
    with pytest.raises(GridError):
        solve_single(deep, 0, MASS, coarse)


def test_near_threshold_flag():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    levels = solve_single(curve, 0, MASS, grid, max_levels=3)
    assert not any(l.near_threshold for l in levels)


def test_coupled_decoupled_limit_matches_singles():
    up = MorseCurve(label="A", d_e=0.02, a=0.5, r_e=6.0, asymptote=0.0)
    dn = MorseCurve(label="b", d_e=0.018, a=0.45, r_e=6.4, asymptote=0.0)
    grid = RadialGrid(3.5, 14.0, 300)
    model = CoupledModel.constant_coupling(("A", "b"), (up, dn), xi=0.0)
    coupled = solve_coupled(model, 0, MASS, grid, max_levels=6)
    singles = sorted(
        [l.energy for l in solve_single(up, 0, MASS, grid, max_levels=6)]
        + [l.energy for l in solve_single(dn, 0, MASS, grid, max_levels=6)]
    )[:6]
    for lvl, ref in zip(coupled, singles):
        assert lvl.energy == pytest.approx(ref, rel=1e-12, abs=1e-14)
        assert max(lvl.channel_fractions) > 1.0 - 1e-9


def test_coupled_identical_wells_split_by_coupling():
    """Two identical channels with constant xi give E_n +/- xi exactly."""
    xi = 2e-4
    a = MorseCurve(label="A", d_e=0.02, a=0.5, r_e=6.0)
    b = MorseCurve(label="b", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    model = CoupledModel.constant_coupling(("A", "b"), (a, b), xi=xi)
    coupled = solve_coupled(model, 0, MASS, grid, max_levels=4)
    singles = solve_single(a, 0, MASS, grid, max_levels=2)
    expected = sorted([singles[0].energy - xi, singles[0].energy + xi,
                       singles[1].energy - xi, singles[1].energy + xi])
    for lvl, ref in zip(coupled, expected):
        assert lvl.energy == pytest.approx(ref, rel=1e-10)
        # perfect mixing
        assert lvl.channel_fractions[0] == pytest.approx(0.5, abs=1e-9)


def test_matrix_element_pairs_and_grid_guard():
    up = MorseCurve(label="A", d_e=0.02, a=0.5, r_e=6.0, asymptote=0.05)
    gnd = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    other = RadialGrid(3.5, 14.0, 301)
    x0 = solve_single(gnd, 0, MASS, grid, max_levels=1)[0]
    dark = MorseCurve(label="b", d_e=0.02, a=0.5, r_e=6.4, asymptote=0.05)
    model = CoupledModel.constant_coupling(("A", "b"), (up, dark), xi=1e-5)
    ab0 = solve_coupled(model, 1, MASS, grid, max_levels=1)[0]
    dip = DipoleFunction.constant(("X", "A"), 1.0)

    # channel counts differ: pairs are mandatory
    with pytest.raises(ValueError):
        radial_matrix_element(x0, dip, ab0)
    val = radial_matrix_element(x0, dip, ab0, pairs={(0, 0): dip})
    manual = float(np.sum(x0.wavefunction[0] * 1.0 * ab0.wavefunction[0])
                   * grid.dr)
    assert val == pytest.approx(manual, rel=1e-14)

    x0_other = solve_single(gnd, 0, MASS, other, max_levels=1)[0]
    with pytest.raises(GridError):
        radial_matrix_element(x0_other, dip, ab0, pairs={(0, 0): dip})


def test_linewidth_constant_gap_closed_form():
    """Parallel curves: Gamma = (4/3) dE^3 d^2 / c^3 exactly."""
    gap = 0.05
    gnd = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    up = MorseCurve(label="A", d_e=0.02, a=0.5, r_e=6.0, asymptote=gap)
    dark = MorseCurve(label="b", d_e=0.02, a=0.5, r_e=8.5, asymptote=gap + 0.2)
    grid = RadialGrid(3.5, 14.0, 300)
    model = CoupledModel.constant_coupling(("A", "b"), (up, dark), xi=0.0)
    lvl = solve_coupled(model, 0, MASS, grid, max_levels=1)[0]
    d = 1.3
    dip = DipoleFunction.constant(("X", "A"), d)
    gamma = linewidth(lvl, [(gnd, dip)])
    assert gamma == pytest.approx((4.0 / 3.0) * gap**3 * d**2 / C_AU**3,
                                  rel=1e-12)


def test_linewidth_zero_without_dipole_path():
    gnd = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    up = MorseCurve(label="A", d_e=0.02, a=0.5, r_e=6.0, asymptote=0.05)
    dark = MorseCurve(label="b", d_e=0.02, a=0.5, r_e=8.5, asymptote=0.25)
    grid = RadialGrid(3.5, 14.0, 300)
    model = CoupledModel.constant_coupling(("A", "b"), (up, dark), xi=0.0)
    lvl = solve_coupled(model, 0, MASS, grid, max_levels=1)[0]
    wrong = DipoleFunction.constant(("Q", "Z"), 1.0)
    assert linewidth(lvl, [(gnd, wrong)]) == 0.0


def test_linewidth_rejects_target_above_level():
    gnd = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0, asymptote=1.0)
    up = MorseCurve(label="A", d_e=0.02, a=0.5, r_e=6.0, asymptote=0.05)
    dark = MorseCurve(label="b", d_e=0.02, a=0.5, r_e=8.5, asymptote=0.25)
    grid = RadialGrid(3.5, 14.0, 300)
    model = CoupledModel.constant_coupling(("A", "b"), (up, dark), xi=0.0)
    lvl = solve_coupled(model, 0, MASS, grid, max_levels=1)[0]
    dip = DipoleFunction.constant(("X", "A"), 1.0)
    with pytest.raises(ValueError):
        linewidth(lvl, [(gnd, dip)])


def test_max_levels_truncates():
    curve = MorseCurve(label="X", d_e=0.02, a=0.5, r_e=6.0)
    grid = RadialGrid(3.5, 14.0, 300)
    assert len(solve_single(curve, 0, MASS, grid, max_levels=3)) == 3
    full = solve_single(curve, 0, MASS, grid)
    assert len(full) > 3
    assert all(l.energy < 0.0 for l in full)
