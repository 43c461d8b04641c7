"""Harmonic chain: reduced energies, junction widths, and both criteria."""
from __future__ import annotations

import math

import numpy as np
import pytest

from localtemp.canonical import AccuracyParams, Binding
from localtemp.harmonic import (
    HarmonicModel,
    asymptotic_nmin,
    cond_const_bound,
    delta_sq_debye,
    delta_sq_exact,
    dispersion,
    linearity_bound,
    mean_energy_reduced,
    min_length,
    nmin,
    nmin_cond_const,
    nmin_linearity,
    reduced_energies,
)
from localtemp.specfun import min_integer_above

ACC = AccuracyParams(alpha=10.0, delta=0.01)


def test_model_validation():
    HarmonicModel(theta=470.0, a0=2.5e-10, omega0=235.0)
    with pytest.raises(ValueError):
        HarmonicModel(theta=-1.0, a0=2.5e-10, omega0=235.0)
    with pytest.raises(ValueError):
        HarmonicModel(theta=470.0, a0=0.0, omega0=235.0)


def test_dispersion_band_edges():
    model = HarmonicModel(theta=2.0, a0=1.0, omega0=1.0)
    assert dispersion(0.0, model) == 0.0
    assert math.isclose(dispersion(math.pi, model), 2.0, rel_tol=1e-12)
    assert math.isclose(dispersion(math.pi / 3, model), 1.0, rel_tol=1e-12)


@pytest.mark.parametrize(
    "t,expected",
    [
        (0.01, 0.00016449340668482263),
        (0.1, 0.0164443465679946),
        (1.0, 0.7775046341122482),
        (10.0, 9.752777500047232),
        (100.0, 99.7502777775),
    ],
)
def test_mean_energy_reduced_frozen(t, expected):
    assert math.isclose(mean_energy_reduced(t), expected, rel_tol=1e-9)


def test_mean_energy_limits():
    # classical limit approached like t - 1/2 + O(1/t); at t=100 the gap to
    # the naive "= t" reading is still 2.5e-3 relative
    assert abs(mean_energy_reduced(100.0) / 100.0 - 1.0) < 5e-3
    assert abs(mean_energy_reduced(100.0) / 100.0 - 1.0) > 1e-3
    # quantum limit: ebar -> (pi^2/6) t^2
    t = 1e-3
    assert math.isclose(
        mean_energy_reduced(t), (math.pi**2 / 6) * t * t, rel_tol=1e-3
    )


def test_mean_energy_strictly_increasing():
    grid = np.geomspace(1e-3, 1e3, 40)
    values = [mean_energy_reduced(float(t)) for t in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_reduced_energies_ground():
    red = reduced_energies(1.0)
    assert red.e0 == 0.25
    assert math.isclose(red.e_bar, 0.7775046341122482, rel_tol=1e-9)


@pytest.mark.parametrize(
    "t,cond_n,lin_n",
    [
        (0.1, 1541, 329),
        (1.0, 1, 1556),
        (5.0, 1, 1903),
        (10.0, 1, 1951),
        (100.0, 1, 1996),
    ],
)
def test_nmin_branches_frozen(t, cond_n, lin_n):
    assert nmin_cond_const(t, ACC) == cond_n
    assert nmin_linearity(t, ACC) == lin_n
    report = nmin(t, ACC)
    assert report.n_min == max(cond_n, lin_n)


def test_cond_bound_raw_value():
    assert math.isclose(cond_const_bound(0.1, ACC), 1540.345096277381, rel_tol=1e-9)
    assert math.isclose(linearity_bound(0.1, ACC), 328.886931359892, rel_tol=1e-6)


def test_cond_const_regime_boundary():
    # bound applies only while the thermal energy stays below the ground value
    t_star = 0.4398506066712677
    assert nmin_cond_const(t_star * 1.01, ACC) == 1
    assert nmin_cond_const(t_star * 0.99, ACC) > 1
    assert math.isclose(mean_energy_reduced(t_star), 0.25, rel_tol=1e-9)


def test_nmin_report_binding():
    cold = nmin(0.1, ACC)
    assert cold.binding is Binding.COND_CONST and cold.n_min == 1541
    hot = nmin(10.0, ACC)
    assert hot.binding is Binding.LINEARITY and hot.n_min == 1951
    assert math.isclose(hot.c1_estimate, 0.1 / (2 * 1951), rel_tol=1e-12)
    assert hot.intensive


def test_asymptotic_branches():
    assert asymptotic_nmin(2.0, ACC) == 2000.0
    assert math.isclose(
        asymptotic_nmin(0.01, ACC), 1.5198177546350666e6, rel_tol=1e-12
    )
    # branch crossover where the two expressions meet
    t_cross = (3 * ACC.delta / (4 * math.pi**2)) ** (1.0 / 3.0)
    assert math.isclose(t_cross, 0.09125440533452586, rel_tol=1e-12)
    lo = asymptotic_nmin(t_cross * 0.999, ACC)
    hi = asymptotic_nmin(t_cross * 1.001, ACC)
    assert abs(lo - hi) / hi < 0.01


def test_asymptotic_tracks_exact_at_low_t():
    for t in (0.01, 0.005):
        exact = nmin(t, ACC).n_min
        assert abs(asymptotic_nmin(t, ACC) - exact) / exact < 0.02


def test_bounds_scale_with_accuracy():
    tight = AccuracyParams(alpha=20.0, delta=0.01)
    small_delta = AccuracyParams(alpha=10.0, delta=0.005)
    assert math.isclose(
        linearity_bound(5.0, tight), 2 * linearity_bound(5.0, ACC), rel_tol=1e-12
    )
    assert math.isclose(
        linearity_bound(5.0, small_delta), 2 * linearity_bound(5.0, ACC), rel_tol=1e-12
    )
    # cond bound grows with alpha too (more conservative window)
    assert cond_const_bound(0.1, tight) > cond_const_bound(0.1, ACC)


def test_delta_sq_debye_scaling():
    assert delta_sq_debye(2.0, 3.0, 10) == 4.0 * 6.0 / 100.0
    assert math.isclose(
        delta_sq_debye(4.0, 6.0, 10), 4.0 * delta_sq_debye(2.0, 3.0, 10), rel_tol=1e-12
    )


def test_delta_sq_exact_vacuum_single_site():
    model = HarmonicModel(theta=2.0, a0=1.0, omega0=1.0)
    got = delta_sq_exact([0], [0], model, 1)
    assert math.isclose(got, 0.125, rel_tol=1e-12)  # omega0^2/8


def test_delta_sq_exact_debye_limit():
    # low modes heavily occupied: finite-n width approaches the coarse form
    model = HarmonicModel(theta=2.0, a0=1.0, omega0=1.0)
    n = 64
    occ = [10_000] * 4 + [0] * (n - 4)
    exact = delta_sq_exact(occ, occ, model, n)
    x = math.pi * np.arange(1, n + 1) / (2 * (n + 1))
    e_group = float(np.sum(2.0 * np.sin(x) * (np.array(occ) + 0.5)))
    coarse = delta_sq_debye(e_group, e_group, n)
    assert 0.9 <= exact / coarse <= 1.1


def test_delta_sq_exact_validation():
    model = HarmonicModel(theta=2.0, a0=1.0, omega0=1.0)
    with pytest.raises(ValueError):
        delta_sq_exact([0, 0], [0], model, 2)
    with pytest.raises(ValueError):
        delta_sq_exact([-1], [0], model, 1)


def test_min_length_uses_lattice_constant():
    model = HarmonicModel(theta=470.0, a0=2.5e-10, omega0=235.0)
    report = nmin(10.0, ACC)
    assert math.isclose(
        min_length(10.0, ACC, model), report.n_min * 2.5e-10, rel_tol=1e-12
    )


def test_high_t_plateau_and_strict_integer():
    # raw linearity bound tends to 2 alpha / delta = 2000 from below, so the
    # integer answer settles on the plateau
    for t in (5.0, 10.0, 100.0):
        n = nmin(t, ACC).n_min
        assert 1900 <= n <= 2100
    assert min_integer_above(asymptotic_nmin(10.0, ACC)) == 2001


def test_nmin_rejects_nonpositive_temperature():
    with pytest.raises(ValueError):
        nmin(0.0, ACC)
    with pytest.raises(ValueError):
        mean_energy_reduced(-1.0)
