"""Shared fixtures.

The session-scoped fixtures build the two expensive radial models once:
the bundled molecule surrogate (used by the resonance and linewidth
tests) and a stiff two-channel model whose closed-form constants are
recovered from its own levels (used by the dual-route comparisons).
"""

from __future__ import annotations

import math

import numpy as np
import pytest

import magictrap as mt
from magictrap import narb
from magictrap.potentials import CoupledModel, DipoleFunction, MorseCurve, calibrate_morse
from magictrap.units import AMU_TO_ME, HARTREE_TO_CM1


@pytest.fixture(scope="session")
def narb_spec():
    return narb.default_spec()


@pytest.fixture(scope="session")
def narb_fields():
    return narb.field_configuration()


@pytest.fixture(scope="session")
def narb_radial():
    """Ground curve, coupled excited model, dipole, and solved levels."""
    grid = narb.default_grid()
    ground = narb.ground_curve()
    model = narb.excited_model(grid)
    dipole = narb.transition_dipole()
    mass = narb.reduced_mass_amu()
    x_levels = {j: mt.solve_single(ground, j, mass, grid, max_levels=3)
                for j in range(6)}
    ab_levels = {j: mt.solve_coupled(model, j, mass, grid, max_levels=6)
                 for j in range(3)}
    return {
        "grid": grid,
        "ground": ground,
        "model": model,
        "dipole": dipole,
        "mass": mass,
        "x": x_levels,
        "ab": ab_levels,
    }


def build_stiff_pair():
    """Stiff two-channel model plus closed-form constants from its levels.

    The bright upper well shares the ground equilibrium radius so the
    vibrational overlap has no first-order J dependence; that keeps the
    two polarizability routes consistent at the 1e-7 level.
    """
    mass = narb.reduced_mass_amu()
    mu = mass * AMU_TO_ME
    grid = mt.RadialGrid(4.5, 12.0, 700)
    omega = 800.0
    ground = calibrate_morse(0.06970, omega, mass, d_e_cm1=25 * omega, label="X")
    d_up = 25 * omega / HARTREE_TO_CM1
    om_up = (omega + 10.0) / HARTREE_TO_CM1
    bright = MorseCurve(label="A", d_e=d_up, a=om_up * math.sqrt(mu / (2 * d_up)),
                        r_e=ground.r_e, asymptote=0.0)
    dark = MorseCurve(label="b", d_e=d_up, a=om_up * math.sqrt(mu / (2 * d_up)),
                      r_e=ground.r_e * 1.02, asymptote=0.30)
    model = CoupledModel.constant_coupling(("A", "b"), (bright, dark), xi=1e-6)
    e_g0 = mt.solve_single(ground, 0, mass, grid, max_levels=1)[0].energy
    e_l1 = mt.solve_coupled(model, 1, mass, grid, max_levels=1)[0].energy
    model = model.with_shift(narb.TRANSITION_CM1 / HARTREE_TO_CM1 + e_g0 - e_l1)

    x_levels = [mt.solve_single(ground, j, mass, grid, max_levels=1)[0]
                for j in range(5)]
    ab_levels = []
    for jp in range(5):
        ab_levels.extend(l for l in mt.solve_coupled(model, jp, mass, grid,
                                                     max_levels=1) if l.v == 0)
    dip = DipoleFunction.constant(("X", "A"), 1.0)
    dipoles = {
        (xi, ai): mt.radial_matrix_element(x, dip, ab, pairs={(0, 0): dip})
        for xi, x in enumerate(x_levels)
        for ai, ab in enumerate(ab_levels)
        if abs(ab.j - x.j) == 1
    }
    background = narb.background()
    spec = mt.spec_from_levels(x_levels, ab_levels, dipoles, background)
    return {
        "x": x_levels,
        "ab": ab_levels,
        "dipoles": dipoles,
        "background": background,
        "spec": spec,
    }


@pytest.fixture(scope="session")
def stiff_pair():
    return build_stiff_pair()


@pytest.fixture(scope="session")
def narb_hyperfine():
    """Default-field 64-state solution with polarizabilities attached."""
    fields = narb.field_configuration()
    basis = mt.build_basis(1)
    h = mt.build_hamiltonian(basis, fields)
    sol = mt.diagonalize(h, basis)
    return mt.eigenstate_polarizability(sol, fields)


def assert_close(actual, expected, rel=0.0, abs_tol=0.0, label=""):
    __tracebackhide__ = True
    actual = float(actual)
    expected = float(expected)
    bound = max(rel * abs(expected), abs_tol)
    err = abs(actual - expected)
    if not err <= bound:
        pytest.fail(f"{label or 'value'}: {actual!r} differs from {expected!r} "
                    f"by {err:.3e} (allowed {bound:.3e})")
