import numpy as np
import pytest

from cavitylab import (
    CoverageError,
    DomainError,
    HilbertSpec,
    PhaseSpaceGrid,
    SamplingError,
    cat_state,
    coherent_state,
    fock_state,
    marginal_distribution,
    pauli_incompleteness_demo,
    pure_to_density,
    sample_homodyne,
    uniform_angles,
    vacuum,
    wigner_map,
)
from cavitylab.tomo import (
    QuadratureHistogram,
    SinogramSet,
    exact_sinogram,
    inverse_radon,
    reconstruct_exact,
    reconstruct_from_samples,
)

GRID = PhaseSpaceGrid(-4, 4, -4, 4, 81, 81)


def rmse(a, b):
    return float(np.sqrt(np.mean((a - b) ** 2)))


# -- sampling -------------------------------------------------------------------


def test_vacuum_sample_variance():
    # vacuum quadrature variance is 1/2; allow 3 sigma of the variance estimator
    rho = pure_to_density(vacuum(HilbertSpec(10)))
    hist = sample_homodyne(rho, 0.0, 100000, seed=11)
    centers, dens = hist.centers, hist.density_estimate()
    width = hist.edges[1] - hist.edges[0]
    mean = np.sum(centers * dens) * width
    var = np.sum((centers - mean) ** 2 * dens) * width
    sigma_var = 0.5 * np.sqrt(2.0 / (hist.total - 1))
    assert abs(var - 0.5) < 3 * sigma_var + width ** 2 / 12


def test_sampled_histogram_tracks_exact_density():
    # Kolmogorov-Smirnov distance at the bin edges stays below 0.01 at 1e5 draws
    rho = pure_to_density(cat_state(HilbertSpec(26), 1.5, 0.0))
    theta = 0.6
    hist = sample_homodyne(rho, theta, 100000, seed=3)
    width = hist.edges[1] - hist.edges[0]
    cdf_hist = np.concatenate([[0.0], np.cumsum(hist.counts) / hist.total])
    dense = np.linspace(hist.edges[0], hist.edges[-1], 4001)
    pdf = marginal_distribution(rho, theta, dense)
    cdf_exact = np.interp(hist.edges,
                          dense,
                          np.concatenate([[0.0], np.cumsum(
                              (pdf[1:] + pdf[:-1]) / 2 * np.diff(dense))]))
    ks = np.max(np.abs(cdf_hist - cdf_exact / cdf_exact[-1]))
    assert ks < 0.01


def test_seed_repeatability():
    rho = pure_to_density(coherent_state(HilbertSpec(20), 1.0))
    h1 = sample_homodyne(rho, 0.9, 5000, seed=77)
    h2 = sample_homodyne(rho, 0.9, 5000, seed=77)
    assert np.array_equal(h1.counts, h2.counts)
    h3 = sample_homodyne(rho, 0.9, 5000, seed=78)
    assert not np.array_equal(h1.counts, h3.counts)


def test_sampling_normalization_guard():
    # a tabulation window far smaller than the state's support loses mass
    rho = pure_to_density(coherent_state(HilbertSpec(26), 1.8))
    with pytest.raises(SamplingError):
        sample_homodyne(rho, 0.0, 100, seed=0, q_range=1.5)


def test_sampling_domain_checks():
    rho = pure_to_density(vacuum(HilbertSpec(6)))
    with pytest.raises(DomainError):
        sample_homodyne(rho, -0.2, 100, seed=0)
    with pytest.raises(DomainError):
        sample_homodyne(rho, 0.0, 0, seed=0)


def test_histogram_invariants():
    with pytest.raises(ValueError):
        QuadratureHistogram(0.0, np.array([0.0, 1.0, 0.5]), np.array([1, 2]), 3)
    with pytest.raises(ValueError):
        QuadratureHistogram(0.0, np.array([0.0, 1.0, 2.0]), np.array([1, 2]), 4)


def test_sinogram_invariants():
    q = np.linspace(-1, 1, 5)
    dens = np.zeros((2, 5))
    with pytest.raises(DomainError):
        SinogramSet(np.array([0.0, np.pi]), q, dens)
    with pytest.raises(DomainError):
        SinogramSet(np.array([0.3, 0.3]), q, dens)


# -- filtered back-projection ------------------------------------------------------


def test_noise_free_vacuum_reconstruction():
    rho = pure_to_density(vacuum(HilbertSpec(12)))
    recon = reconstruct_exact(rho, uniform_angles(36), GRID)
    q1, q2 = np.meshgrid(GRID.q1_axis, GRID.q2_axis, indexing="ij")
    analytic = 2 * np.exp(-(q1 ** 2 + q2 ** 2))
    assert rmse(recon.values, analytic) < 1e-2


def test_noise_free_fock1_recovers_negative_dip():
    rho = pure_to_density(fock_state(HilbertSpec(12), 1))
    recon = reconstruct_exact(rho, uniform_angles(36), GRID)
    i0 = np.argmin(np.abs(GRID.q1_axis))
    j0 = np.argmin(np.abs(GRID.q2_axis))
    assert recon.values[i0, j0] < -1.7


def test_rotational_covariance():
    # relabeling the same sinogram data by theta + delta reconstructs the
    # state rotated by delta in phase space
    rho = pure_to_density(coherent_state(HilbertSpec(26), 1.5))
    angles = uniform_angles(36)
    delta = np.pi / 72  # half the spacing keeps labels inside [0, pi)
    q = np.linspace(-7, 7, 701)
    sino = exact_sinogram(rho, angles, q)
    base = inverse_radon(sino, GRID)
    relabeled = SinogramSet(angles + delta, q, sino.densities)
    rotated_recon = inverse_radon(relabeled, GRID)
    from scipy.interpolate import RegularGridInterpolator

    interp = RegularGridInterpolator((GRID.q1_axis, GRID.q2_axis),
                                     rotated_recon.values,
                                     bounds_error=False, fill_value=0.0)
    q1, q2 = np.meshgrid(GRID.q1_axis, GRID.q2_axis, indexing="ij")
    inner = np.hypot(q1, q2) < 2.8
    c, s = np.cos(delta), np.sin(delta)
    # sample the rotated reconstruction at rotated points; must match the base
    at_rotated = interp(np.stack([(c * q1 - s * q2)[inner],
                                  (s * q1 + c * q2)[inner]], axis=-1))
    assert np.max(np.abs(at_rotated - base.values[inner])) < 2e-2


def test_too_few_angles_raises():
    rho = pure_to_density(vacuum(HilbertSpec(8)))
    q = np.linspace(-6, 6, 301)
    sino = exact_sinogram(rho, uniform_angles(4), q)
    with pytest.raises(CoverageError):
        inverse_radon(sino, GRID)


def test_insufficient_support_raises():
    rho = pure_to_density(vacuum(HilbertSpec(8)))
    q = np.linspace(-2, 2, 101)  # grid radius is 4*sqrt(2) > 2
    sino = exact_sinogram(rho, uniform_angles(12), q)
    with pytest.raises(CoverageError):
        inverse_radon(sino, GRID)


def test_angle_count_monotonicity():
    # forward-inverse error is nonincreasing in the angle count
    rho = pure_to_density(coherent_state(HilbertSpec(40), 1.8))
    truth = wigner_map(rho, GRID)
    errs = [rmse(reconstruct_exact(rho, uniform_angles(k), GRID).values, truth.values)
            for k in (9, 18, 36, 72)]
    for lo, hi in zip(errs[1:], errs[:-1]):
        assert lo <= hi * 1.02
    assert errs[-1] < 0.1 * errs[0]


# -- end-to-end sampled reconstruction ----------------------------------------------


def test_sampled_cat_reconstruction_fringe_contrast():
    spec = HilbertSpec(36)
    cat = pure_to_density(cat_state(spec, 2.0, 0.0))
    grid = PhaseSpaceGrid(-4.2, 4.2, -4.2, 4.2, 113, 113)
    res = reconstruct_from_samples(cat, uniform_angles(72), 200000, 20250809, grid)
    true_c = res.error_report["fringe_contrast_true"]
    recon_c = res.error_report["fringe_contrast_recon"]
    assert abs(recon_c - true_c) / true_c < 0.15
    assert set(res.error_report) >= {"rmse", "max_abs_error",
                                     "marginal_consistency_residuals"}


def test_rmse_scales_like_root_n():
    # two decades of samples: RMSE drops by ~10, accepted within a factor 2
    rho = pure_to_density(coherent_state(HilbertSpec(26), 1.5))
    r_small = reconstruct_from_samples(rho, uniform_angles(36), 2000, 7, GRID)
    r_large = reconstruct_from_samples(rho, uniform_angles(36), 200000, 7, GRID)
    ratio = r_small.error_report["rmse"] / r_large.error_report["rmse"]
    assert 5.0 < ratio < 20.0


def test_large_n_approaches_noise_free_error():
    rho = pure_to_density(coherent_state(HilbertSpec(26), 1.5))
    exact = reconstruct_exact(rho, uniform_angles(36), GRID)
    gaps = []
    for n in (2000, 20000, 200000):
        res = reconstruct_from_samples(rho, uniform_angles(36), n, 5, GRID)
        gaps.append(rmse(res.map.values, exact.values))
    assert gaps[0] > gaps[1] > gaps[2]


def test_master_seed_determinism():
    rho = pure_to_density(coherent_state(HilbertSpec(20), 1.0))
    a = reconstruct_from_samples(rho, uniform_angles(12), 4000, 99, GRID)
    b = reconstruct_from_samples(rho, uniform_angles(12), 4000, 99, GRID)
    np.testing.assert_array_equal(a.map.values, b.map.values)


# -- the marginals-only demonstration ------------------------------------------------


def test_pauli_incompleteness_report():
    report = pauli_incompleteness_demo(PhaseSpaceGrid(-4, 4, -4, 4, 61, 61))
    assert report["two_angle_sinogram_sup_dev"] < 1e-8
    assert report["full_reconstruction_sup_dev"] > 0.05
    assert report["theta_45_marginal_dev"] > 0.01
    assert report["marginals_only_incomplete"] is True
