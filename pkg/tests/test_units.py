"""Unit-conversion contracts.

Expected numbers here are frozen from independent arithmetic: the
adopted polarizability factor, the exact speed of light in cm-1 <-> GHz,
and 1e7 / wavenumber for wavelengths.
"""

import math

import pytest

from magictrap import (
    Quantity,
    Unit,
    UnitError,
    convert,
    wavelength_nm,
)
from magictrap.units import (
    AU_POL_TO_MHZ_PER_WCM2,
    CM1_TO_GHZ,
    DEBYE_TO_EA0,
    HARTREE_TO_CM1,
    HARTREE_TO_GHZ,
)


def test_polarizability_factor_is_adopted_value():
    assert AU_POL_TO_MHZ_PER_WCM2 == 4.68645e-8


def test_polarizability_unit_round_trip():
    assert convert(1.0, Unit.AU_POL, Unit.MHZ_PER_WCM2) == pytest.approx(
        4.68645e-8, rel=1e-12)
    assert convert(1.0, Unit.AU_POL, Unit.HZ_PER_WCM2) == pytest.approx(
        4.68645e-2, rel=1e-12)
    back = convert(convert(123.456, Unit.AU_POL, Unit.HZ_PER_WCM2),
                   Unit.HZ_PER_WCM2, Unit.AU_POL)
    assert back == pytest.approx(123.456, rel=1e-12)


def test_wavenumber_to_ghz_is_exact_speed_of_light():
    assert convert(1.0, Unit.WAVENUMBER, Unit.GHZ) == pytest.approx(
        29.9792458, rel=1e-12)
    assert CM1_TO_GHZ == pytest.approx(29.9792458, rel=1e-15)
    # consistency of the two Hartree-based energy scales
    assert HARTREE_TO_GHZ / HARTREE_TO_CM1 == pytest.approx(
        29.9792458, rel=1e-12)


def test_transition_wavelength_matches_band():
    lam = wavelength_nm(11306.4)
    assert lam == pytest.approx(884.4548220476898, rel=1e-12)
    assert round(lam) == 884
    # reciprocal map round trip
    assert 1e7 / lam == pytest.approx(11306.4, rel=1e-12)


def test_wavelength_rejects_nonpositive_energy():
    with pytest.raises(ValueError):
        wavelength_nm(0.0)
    with pytest.raises(ValueError):
        wavelength_nm(-5.0, Unit.GHZ)


def test_cross_dimension_conversion_raises():
    with pytest.raises(UnitError) as err:
        convert(1.0, Unit.GHZ, Unit.BOHR)
    assert "GHZ" in str(err.value) and "BOHR" in str(err.value)
    with pytest.raises(UnitError):
        convert(1.0, Unit.AU_POL, Unit.HARTREE)


def test_convert_requires_unit_members():
    with pytest.raises(ValueError):
        convert(1.0, "GHz", Unit.GHZ)


def test_magnetic_and_electric_field_scales():
    assert convert(1.0, Unit.TESLA, Unit.GAUSS) == pytest.approx(1e4, rel=1e-15)
    assert convert(1.0, Unit.KV_PER_CM, Unit.V_PER_M) == pytest.approx(
        1e5, rel=1e-15)
    assert convert(1.0, Unit.KW_PER_CM2, Unit.W_PER_CM2) == pytest.approx(
        1e3, rel=1e-15)


def test_dipole_and_angle_scales():
    assert DEBYE_TO_EA0 == pytest.approx(0.3934303, rel=1e-6)
    assert convert(180.0, Unit.DEGREE, Unit.RADIAN) == pytest.approx(
        math.pi, rel=1e-15)


def test_quantity_round_trip_and_format():
    q = Quantity(0.06970, Unit.WAVENUMBER)
    g = q.to(Unit.GHZ)
    assert g.unit is Unit.GHZ
    assert g.value == pytest.approx(0.06970 * 29.9792458, rel=1e-12)
    assert q.to(Unit.GHZ).to(Unit.WAVENUMBER).value == pytest.approx(
        0.06970, rel=1e-12)
    assert format(g, ".3f").endswith("GHZ")


def test_energy_chain_closes():
    # cm-1 -> Hartree -> MHz -> GHz -> cm-1
    x = convert(11306.4, Unit.WAVENUMBER, Unit.HARTREE)
    x = convert(x, Unit.HARTREE, Unit.MHZ)
    x = convert(x, Unit.MHZ, Unit.GHZ)
    x = convert(x, Unit.GHZ, Unit.WAVENUMBER)
    assert x == pytest.approx(11306.4, rel=1e-12)
