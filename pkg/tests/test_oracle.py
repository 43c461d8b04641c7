"""Dense-diagonalization checks of every analytic building block.

Small chains only (up to 10 sites here); everything is compared against
numbers the closed-form package modules produce, or against frozen values
recorded from an independent implementation.
"""
from __future__ import annotations

import math

import numpy as np
import pytest

from localtemp.canonical import AccuracyParams, GroupStatistics, rho_diag
from localtemp.harmonic import HarmonicModel
from localtemp.ising import GroupOccupations, IsingModel, delta_sq, group_energy
from localtemp.oracle import (
    Boundary,
    DenseThermalSystem,
    OffDiagReport,
    adjacent_junction_covariance,
    build_hamiltonian,
    distribution_moments,
    harmonic_mode_check,
    occupations_by_energy,
    product_basis,
    product_statistics,
    rho_product_diag,
    rho_product_offdiag_max,
    thermal_state,
    w_a_distribution,
)


def _model(k, l, b=1.0):
    return IsingModel.from_kl(b, k, l)


def _system(n_sites, model, beta_b=1.0, boundary=Boundary.OPEN):
    h = build_hamiltonian(n_sites, model, boundary)
    return DenseThermalSystem.solve(h, beta_b / model.b_field)


def test_single_site_hamiltonian():
    h = build_hamiltonian(1, _model(0.5, 0.2, b=3.0))
    assert np.allclose(h, np.diag([-3.0, 3.0]))


def test_build_hamiltonian_size_limits():
    with pytest.raises(ValueError):
        build_hamiltonian(0, _model(0.1, 0.0))
    with pytest.raises(ValueError):
        build_hamiltonian(15, _model(0.1, 0.0))


def test_spectra_match_formula_without_anisotropy():
    # open chains diagonalize exactly onto the half-open momentum grid
    for k_param in (0.3, 1.7):
        model = _model(k_param, 0.0)
        for n in (2, 3, 4):
            dense = np.sort(np.linalg.eigvalsh(build_hamiltonian(n, model)))
            formula = np.sort(
                [
                    group_energy(
                        GroupOccupations(tuple((a >> l) & 1 for l in range(n))), model
                    )
                    for a in range(2**n)
                ]
            )
            assert float(np.max(np.abs(dense - formula))) <= 1e-10


def test_spectrum_deviation_with_anisotropy():
    # K=0, L=1, n=2: exact levels {+-sqrt(5) B, 0, 0} against the formula's
    # {+-2B, 0, 0}; the boundary pairing term shifts the edges
    model = _model(0.0, 1.0)
    dense = np.sort(np.linalg.eigvalsh(build_hamiltonian(2, model)))
    expected = np.sort([-math.sqrt(5.0), 0.0, 0.0, math.sqrt(5.0)])
    assert np.allclose(dense, expected, atol=1e-12)
    formula = np.sort(
        [
            group_energy(GroupOccupations(tuple((a >> l) & 1 for l in range(2))), model)
            for a in range(4)
        ]
    )
    maxdev = float(np.max(np.abs(dense - formula)))
    assert abs(maxdev - (math.sqrt(5.0) - 2.0)) <= 1e-10


def test_interaction_mean_vanishes():
    pb = product_basis(6, 2, _model(0.3, 0.0))
    eps_max = max(abs(product_statistics(pb, a)[0]) for a in range(2**6))
    assert eps_max == 0.0


def test_width_decomposes_over_junctions():
    # interaction variance of every product state equals the sum of the
    # per-junction widths evaluated at the matched occupations
    model = _model(0.3, 0.0)
    n, n_groups = 2, 3
    pb = product_basis(n * n_groups, n, model)
    occs = occupations_by_energy(model, n)
    dim = 2**n
    worst = 0.0
    for a in range(dim**n_groups):
        _, dsq = product_statistics(pb, a)
        states = [occs[(a >> (n * g)) % dim] for g in range(n_groups)]
        formula = sum(
            delta_sq(states[g], states[g + 1], model) for g in range(n_groups - 1)
        )
        worst = max(worst, abs(dsq - formula))
    assert worst <= 1e-10


def test_width_decomposition_periodic_needs_three_groups():
    # with two groups on a ring both junctions couple the same pair and the
    # independence behind the sum rule fails; three groups restore it
    model = _model(0.3, 0.0)
    occs = occupations_by_energy(model, 2)

    def worst_dev(n_groups):
        pb = product_basis(2 * n_groups, 2, model, Boundary.PERIODIC)
        worst = 0.0
        for a in range(4**n_groups):
            _, dsq = product_statistics(pb, a)
            states = [occs[(a >> (2 * g)) % 4] for g in range(n_groups)]
            pairs = [(g, (g + 1) % n_groups) for g in range(n_groups)]
            formula = sum(delta_sq(states[i], states[j], model) for i, j in pairs)
            worst = max(worst, abs(dsq - formula))
        return worst

    assert worst_dev(3) <= 1e-10
    assert worst_dev(2) > 1e-2


def test_adjacent_junction_covariance_vanishes():
    for k_param, l_param in ((0.3, 0.0), (0.0, 0.7), (0.4, 0.9)):
        assert adjacent_junction_covariance(6, 2, _model(k_param, l_param)) == 0.0


def test_thermal_state_normalization():
    sys = _system(4, _model(0.5, 0.0), beta_b=2.0)
    log_z, weights = thermal_state(sys)
    assert math.isclose(float(np.sum(weights)), 1.0, rel_tol=1e-12)
    direct = math.log(float(np.sum(np.exp(-sys.beta * sys.eigenvalues))))
    assert math.isclose(log_z, direct, rel_tol=1e-12)


def test_w_a_moment_identities():
    # first two moments of the overlap distribution must reproduce the
    # product-state mean and variance at any coupling
    for k_param, l_param in ((0.0, 0.4), (0.3, 0.0), (1.2, 2.0)):
        model = _model(k_param, l_param)
        sys = _system(6, model, beta_b=1.0)
        pb = product_basis(6, 2, model)
        for a in range(2**6):
            eps, dsq = product_statistics(pb, a)
            mean, var, _ = distribution_moments(w_a_distribution(sys, pb, a))
            e_a = float(pb.product_energies[a])
            assert abs(mean - (e_a + eps)) <= 1e-10
            assert abs(var - dsq) <= 1e-10


def test_w_a_distribution_is_normalized_probability():
    model = _model(0.3, 0.0)
    sys = _system(6, model)
    pb = product_basis(6, 2, model)
    dist = w_a_distribution(sys, pb, 7)
    probs = [p for _, p in dist]
    assert math.isclose(sum(probs), 1.0, rel_tol=1e-12)
    assert all(p >= -1e-15 for p in probs)
    energies = [e for e, _ in dist]
    assert energies == sorted(energies)
    # merged bins: strictly fewer entries than eigenvalues (spectrum has
    # degeneracies) and separations above the merge width
    assert len(dist) < sys.eigenvalues.size
    assert all(b - a > 1e-9 for a, b in zip(energies, energies[1:]))


def test_skewness_decays_with_group_count():
    # zero-width product states carry no distribution shape; mask them
    model = _model(0.3, 0.0)
    expected = {3: 2.0, 4: 1.632993, 5: 1.5}
    previous = math.inf
    for n_groups, target in expected.items():
        sys = _system(2 * n_groups, model)
        pb = product_basis(2 * n_groups, 2, model)
        worst = 0.0
        for a in range(4**n_groups):
            _, dsq = product_statistics(pb, a)
            if dsq < 1e-12:
                continue
            worst = max(
                worst, abs(distribution_moments(w_a_distribution(sys, pb, a))[2])
            )
        assert math.isclose(worst, target, rel_tol=1e-5)
        assert worst < previous
        previous = worst


def test_rho_diag_formula_tracks_dense():
    # per-junction error of the Gaussian-weight formula stays near 5e-3 and
    # decreases as groups are added, while the total grows additively
    model = _model(0.3, 0.0)
    expected = [0.005127, 0.010221, 0.015316, 0.020410]
    per_junction = []
    for n_groups, target in zip(range(2, 6), expected):
        sys = _system(2 * n_groups, model)
        pb = product_basis(2 * n_groups, 2, model)
        log_z, _ = thermal_state(sys)
        dense = rho_product_diag(sys, pb)
        e0 = float(np.min(sys.eigenvalues))
        e1 = float(np.max(sys.eigenvalues))
        worst = 0.0
        for a in range(4**n_groups):
            eps, dsq = product_statistics(pb, a)
            if dsq < 1e-12:
                continue
            stats = GroupStatistics(
                e_a=float(pb.product_energies[a]),
                eps_a=eps,
                delta_sq_a=dsq,
                delta_tilde_sq=0.0,
                e0=e0,
                e1=e1,
            )
            predicted = rho_diag(stats, sys.beta, log_z)
            worst = max(worst, abs(predicted - math.log(float(dense[a]))))
        assert math.isclose(worst, target, rel_tol=1e-3)
        per_junction.append(worst / (n_groups - 1))
    assert all(b < a for a, b in zip(per_junction, per_junction[1:]))


def test_rho_product_diag_sums_to_one():
    model = _model(0.4, 0.9)
    sys = _system(6, model, beta_b=0.7)
    pb = product_basis(6, 2, model)
    assert math.isclose(float(np.sum(rho_product_diag(sys, pb))), 1.0, rel_tol=1e-12)


def test_offdiag_report_frozen_values():
    model = _model(0.1, 0.0)
    sys = _system(8, model)
    pb = product_basis(8, 2, model)
    report = rho_product_offdiag_max(sys, pb)
    assert isinstance(report, OffDiagReport)
    assert math.isclose(report.max_offdiag, 2.693681e-03, rel_tol=1e-5)
    assert math.isclose(report.max_coherence, 0.050166, rel_tol=1e-4)
    assert math.isclose(report.min_diag_window, 4.046697e-08, rel_tol=1e-5)
    # windowed off-diagonal elements are tiny in absolute terms yet still
    # above the smallest windowed diagonal entry
    assert math.isclose(report.ratio_min_diag, 27.40195, rel_tol=1e-5)
    assert report.ratio_min_diag * report.min_diag_window < 2e-6


def test_periodic_ground_energy_approaches_integral():
    from localtemp.ising import ground_energy_per_site

    model = _model(0.5, 0.3)
    integral = ground_energy_per_site(model)

    def dev(n):
        h = build_hamiltonian(n, model, Boundary.PERIODIC)
        return abs(float(np.min(np.linalg.eigvalsh(h))) / n - integral)

    assert dev(10) < dev(5)
    assert dev(10) < 5e-3


def test_group_norm_bound():
    for k_param, l_param, n in ((0.3, 0.0, 4), (0.0, 2.0, 3), (1.2, 1.2, 5)):
        model = _model(k_param, l_param)
        h = build_hamiltonian(n, model)
        norm = float(np.max(np.abs(np.linalg.eigvalsh(h))))
        assert norm <= n * 1.0 * (1.0 + abs(k_param) + abs(l_param)) + 1e-12


def test_product_basis_validation():
    with pytest.raises(ValueError):
        product_basis(6, 4, _model(0.3, 0.0))
    pb = product_basis(4, 2, _model(0.3, 0.0))
    with pytest.raises(IndexError):
        product_statistics(pb, 16)


def test_dense_system_rejects_nonsymmetric():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        DenseThermalSystem.solve(bad, 1.0)
    with pytest.raises(ValueError):
        DenseThermalSystem.solve(np.zeros((2, 2)), -1.0)


def test_occupations_by_energy_ordering():
    model = _model(0.3, 0.0)
    occs = occupations_by_energy(model, 3)
    energies = [group_energy(o, model) for o in occs]
    assert energies == sorted(energies)
    assert occs[0].bits == (0, 0, 0)
    assert occs[-1].bits == (1, 1, 1)
    # uncoupled chain is fully degenerate
    with pytest.raises(ValueError):
        occupations_by_energy(_model(0.0, 0.0), 2)


def test_harmonic_mode_check_values():
    model = HarmonicModel(theta=2.0, a0=1.0, omega0=1.0)
    for n in (1, 3, 64):
        assert harmonic_mode_check(n, model) <= 1e-10
    # n=3 closed form: eigenvalues {2 - sqrt2, 2, 2 + sqrt2} times omega0^2
    w2 = np.array([2.0 - math.sqrt(2.0), 2.0, 2.0 + math.sqrt(2.0)])
    l = np.arange(1, 4)
    assert np.allclose(4.0 * np.sin(math.pi * l / 8.0) ** 2, w2, atol=1e-12)
    with pytest.raises(ValueError):
        harmonic_mode_check(65, model)


def test_harmonic_mode_check_scales_with_frequency():
    model = HarmonicModel(theta=5.0, a0=1.0, omega0=2.5)
    assert harmonic_mode_check(16, model) <= 1e-10 * 2.5**2
