import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dwelldelay.kinematics import (
    HBAR_MEV_S,
    HBARC_MEV_FM,
    ChannelConfig,
    energy_from_wavenumber,
    energy_grid,
    wavenumber,
)
from dwelldelay.numdiff import five_point_derivative, fornberg_weights, sampled_derivative

energies = st.floats(min_value=1e-8, max_value=1e4)
masses = st.floats(min_value=1e-3, max_value=1e4)


@pytest.mark.parametrize(
    "E, k, dk",
    [(0.5, 1.0, 1.0), (-0.5, 1j, -1j), (2.0, 2.0, 0.5)],
)
def test_wavenumber_examples(natural, E, k, dk):
    kin = wavenumber(E, natural)
    assert kin.k == pytest.approx(k, abs=1e-15)
    assert kin.dk_dE == pytest.approx(dk, abs=1e-15)


def test_threshold_is_excluded(natural):
    with pytest.raises(ValueError, match="threshold point"):
        wavenumber(0.0, natural)


@given(energies, masses)
def test_energy_roundtrip_and_derivative(E, mu):
    ch = ChannelConfig(mu)
    kin = wavenumber(E, ch)
    assert kin.k.imag == 0 and kin.k.real > 0
    assert (kin.k.real**2) / (2 * mu) == pytest.approx(E, rel=1e-12)
    fd = five_point_derivative(lambda e: wavenumber(e, ch).k.real, E, h=1e-4 * E)
    assert fd == pytest.approx(kin.dk_dE.real, rel=1e-8)


@given(energies, masses)
def test_negative_branch(E, mu):
    ch = ChannelConfig(mu)
    above, below = wavenumber(E, ch), wavenumber(-E, ch)
    assert below.k.real == 0 and below.k.imag > 0
    assert below.k == pytest.approx(1j * abs(above.k), rel=1e-15)
    assert (below.k**2).real / (2 * mu) == pytest.approx(-E, rel=1e-12)


def test_channel_validation():
    with pytest.raises(ValueError):
        ChannelConfig(0.0)
    with pytest.raises(ValueError):
        ChannelConfig(1.0, partial_wave=-1)
    with pytest.raises(ValueError):
        ChannelConfig(1.0, unit_system="cgs")


def test_unit_conversions():
    ch = ChannelConfig(500.0, unit_system="mev_fm")
    assert ch.length_in(HBARC_MEV_FM) == pytest.approx(1.0)
    assert ch.length_out(ch.length_in(3.94)) == pytest.approx(3.94)
    assert ch.wavenumber_in(1.0) == pytest.approx(HBARC_MEV_FM)
    assert ch.time_out(1.0, "s") == HBAR_MEV_S
    assert ch.time_out(1.0, "fm/c") == HBARC_MEV_FM
    with pytest.raises(ValueError):
        ChannelConfig(1.0).time_out(1.0, "s")


def test_energy_from_wavenumber(natural):
    assert energy_from_wavenumber(2.0, natural) == 2.0


def test_linear_grid():
    assert energy_grid(0.1, 0.3, 3) == pytest.approx([0.1, 0.2, 0.3])


def test_grid_nudges_threshold():
    grid = energy_grid(-5, 5, 11)
    assert len(grid) == 11
    assert np.all(grid != 0)
    assert np.all(np.diff(grid) > 0)
    assert 0 < grid[5] < 1e-12


def test_log_grid_is_geometric():
    grid = energy_grid(1e-4, 1, 4, "log")
    ratio = (1 / 1e-4) ** (1 / 3)
    assert grid == pytest.approx([1e-4, 1e-4 * ratio, 1e-4 * ratio**2, 1.0], rel=1e-12)
    assert grid[1] == pytest.approx(2.1544e-3, rel=1e-4)


@pytest.mark.parametrize(
    "args",
    [(1, 1, 5), (2, 1, 5), (0, 1, 1), (0, 1, 5, "log"), (0.1, 1, 5, "cubic")],
)
def test_bad_grids(args):
    with pytest.raises(ValueError):
        energy_grid(*args)


def test_fornberg_weights_match_textbook_stencil():
    w = fornberg_weights(0.0, [-2, -1, 0, 1, 2])
    assert w == pytest.approx(np.array([1, -8, 0, 8, -1]) / 12)


def test_sampled_derivative_exact_for_quartic():
    x = np.sort(np.random.default_rng(3).uniform(0, 2, 12))
    y = x**4 - 3 * x**2
    assert sampled_derivative(x, y) == pytest.approx(4 * x**3 - 6 * x, rel=1e-9, abs=1e-9)
    with pytest.raises(ValueError):
        sampled_derivative(x[:4], y[:4])
