import numpy as np
import pytest

from pairlat import observables as obs
from pairlat.errors import DetectionError, FitError, InvalidParameterError
from pairlat.lattice import (ModelParams, TwoParticleAmplitude, build_hardcore_hamiltonian,
                             hardcore_spectrum, pair_basis, t2_zero_spectrum)


def amplitude_from(func, n_sites):
    b = pair_basis(n_sites)
    return TwoParticleAmplitude.from_vector(b, np.array([func(n, m) for n, m in b]))


def com_sep(n, m):
    """Inverse of the zigzag map: (c, l) for a pair."""
    return (n + m) // 2, m - n


# ---- IPR ----------------------------------------------------------------

def test_ipr_single_site_and_uniform():
    v = np.zeros(6)
    v[2] = 3.0
    assert obs.ipr(v) == 1.0
    assert obs.ipr(np.ones(6)) == pytest.approx(1 / 6, abs=1e-15)


def test_ipr_rejects_zero():
    with pytest.raises(InvalidParameterError):
        obs.ipr(np.zeros(4))


def test_ipr_all_matches_single(rng):
    v = rng.standard_normal((10, 4))
    assert np.allclose(obs.ipr_all(v), [obs.ipr(v[:, k]) for k in range(4)])


def test_flat_band_state_is_in_upper_ipr_tail(large_spectra):
    spec = large_spectra.full(0.4)
    iprs = obs.ipr_all(spec.eigenvectors)
    _, psi = obs.most_localized_state(spec, pair_basis(101), 0.84, window=2e-3)
    assert obs.ipr(psi) > np.quantile(iprs, 0.9)


# ---- DOS -----------------------------------------------------------------

def test_dos_single_level():
    c = obs.dos([0.3], sigma=0.01)
    assert c.energies[np.argmax(c.density)] == pytest.approx(0.3, abs=1e-12)
    assert c.integral() == pytest.approx(1.0, rel=1e-6)


def test_dos_rejects_bad_input():
    with pytest.raises(InvalidParameterError):
        obs.dos([])
    with pytest.raises(InvalidParameterError):
        obs.dos([0.0], sigma=0.0)


def test_dos_integral_and_permutation(rng):
    e = rng.uniform(-2, 2, 500)
    a = obs.dos(e)
    b = obs.dos(rng.permutation(e), (a.energies[0], a.energies[-1], len(a.energies)))
    assert abs(a.integral() / 500 - 1) < 0.01
    assert np.array_equal(a.density, b.density)
    assert np.all(a.density >= 0)


def test_default_grid_is_aligned():
    lo, hi, npts = obs.default_grid(np.array([-1.234, 0.91]), 0.02)
    x = np.linspace(lo, hi, npts)
    assert np.allclose(np.diff(x), 0.02)
    assert np.allclose(x / 0.02, np.rint(x / 0.02), atol=1e-9)


def test_filtered_dos_counts_states():
    c = obs.filtered_dos([0.0, 1.0, 2.0], [0.5, 0.1, 0.9], threshold=0.3)
    assert c.n_states == 2
    empty = obs.filtered_dos([0.0, 1.0], [0.1, 0.1])
    assert empty.n_states == 0 and not empty.density.any()


# ---- level spacing and clusters -----------------------------------------

def test_level_spacing_examples():
    assert np.array_equal(obs.level_spacing_weight([0.0, 1.0, 3.0]), [1.0, 1.0, 0.5])
    w = obs.level_spacing_weight([0.0, 0.0, 1.0])
    assert w[0] == w[1] == 1e12


def test_level_spacing_rejects():
    with pytest.raises(InvalidParameterError):
        obs.level_spacing_weight([1.0, 0.0, 2.0])
    with pytest.raises(InvalidParameterError):
        obs.level_spacing_weight([0.0, 1.0])


def test_flat_band_carries_top_decile_weight(large_spectra):
    e = large_spectra.eigenvalues(0.4)
    w = obs.level_spacing_weight(e)
    cl = obs.find_cluster_near(e, 1 - 0.4 ** 2, window=0.01)
    top = w[list(cl.indices)] >= np.quantile(w, 0.9)
    # the outermost columns of the run are detuned; the core is not
    assert np.median(w[list(cl.indices)]) >= np.quantile(w, 0.9)
    assert top.mean() >= 0.8


def test_cluster_small_example():
    cl = obs.degeneracy_clusters([0.0, 1e-6, 1.0], 1e-3)
    assert len(cl) == 1
    assert cl[0].indices == (0, 1) and cl[0].size == 2
    assert cl[0].spread == pytest.approx(1e-6)


def test_cluster_rejects_bad_tol():
    with pytest.raises(InvalidParameterError):
        obs.degeneracy_clusters([0.0, 1.0], 0.0)


def test_flat_band_cluster_near_n_over_three(large_spectra):
    e = large_spectra.eigenvalues(0.1)
    cl = obs.find_cluster_near(e, -(1 - 0.1 ** 2), window=5e-3)
    # resonant columns are those with label divisible by 3; a few near the
    # edges detune out of the run
    assert 25 <= cl.size <= 101 // 3
    assert cl.spread <= 1e-3 * cl.size


def test_t2_zero_massive_clusters():
    e = t2_zero_spectrum(101)
    cl = obs.find_cluster_near(e, 1.0, tol=1e-9, window=1e-9)
    assert cl.size == 101 // 3
    cl = obs.find_cluster_near(e, 0.0, tol=1e-9, window=1e-9)
    assert cl.size == 50  # every column of odd height


def test_find_cluster_near_missing():
    with pytest.raises(DetectionError):
        obs.find_cluster_near([0.0, 1.0, 2.0], 0.5)


def test_symmetry_defect_examples():
    assert obs.spectral_symmetry_defect([-1.0, 0.0, 1.0]) == 0.0
    assert obs.spectral_symmetry_defect([-1.0, 0.2, 1.0]) == pytest.approx(0.4)


# ---- cuts and z fit ------------------------------------------------------

def test_zigzag_covers_each_pair_once():
    n_sites = 12
    seen = set()
    for c in range(1, n_sites):
        for l in range(1, n_sites):
            n, m = obs.zigzag(c, l)
            if 1 <= n < m <= n_sites:
                assert com_sep(n, m) == (c, l)
                seen.add((n, m))
    assert seen == set(pair_basis(n_sites))


def test_relative_cut_geometric():
    r = 0.7
    psi = amplitude_from(lambda n, m: r ** (-n) * r ** m, 30)
    for prof in obs.relative_cuts(psi, [8, 12, 15]):
        ratios = prof.amplitudes[1:] / prof.amplitudes[:-1]
        assert np.allclose(ratios, r, rtol=1e-12)
        assert np.all(np.diff(prof.separations) > 0)


def test_relative_cut_rejects_out_of_range():
    psi = amplitude_from(lambda n, m: 1.0, 6)
    with pytest.raises(InvalidParameterError):
        obs.relative_cuts(psi, [6])


def test_checkerboard_zero_mode():
    n_sites = 12
    spec = hardcore_spectrum(ModelParams(n_sites, 1.0, 0.5))
    basis = pair_basis(n_sites)
    zero = spec.eigenvectors[:, np.abs(spec.eigenvalues) < 1e-10]
    assert zero.shape[1] > 0
    even = (basis.pairs.sum(axis=1) % 2 == 0).astype(float)
    # the chiral sign (-1)**(n+m) maps the zero space onto itself, so the
    # even-sublattice part of a zero mode is again a zero mode
    k = int(np.argmax(np.sum((even[:, None] * zero) ** 2, axis=0)))
    v = even * zero[:, k]
    h = build_hardcore_hamiltonian(ModelParams(n_sites, 1.0, 0.5)).to_dense()
    assert np.max(np.abs(h @ v)) < 1e-10
    psi = TwoParticleAmplitude.from_vector(basis, v)
    (prof,) = obs.relative_cuts(psi, [5])
    assert np.all(prof.amplitudes[0::2] < 1e-12)  # odd l: n + m odd
    assert np.any(prof.amplitudes[1::2] > 1e-6)


def chi(l):
    return np.exp(-0.3 * l) * (1 + 0.2 * np.cos(l))


def test_fit_z_power_of_n_plus_m():
    # psi ~ 0.9**(n+m): one step in the centre-of-mass label adds 2 to n+m
    psi = amplitude_from(lambda n, m: 0.9 ** (n + m) * chi(m - n), 40)
    assert obs.fit_z(psi, range(10, 16), range(1, 6)) == pytest.approx(0.81, abs=1e-10)
    psi = amplitude_from(lambda n, m: 0.9 ** ((n + m) / 2) * chi(m - n), 40)
    assert obs.fit_z(psi, range(10, 16), range(1, 6)) == pytest.approx(0.9, abs=1e-10)


def test_fit_z_alternating():
    psi = amplitude_from(lambda n, m: (-0.85) ** ((n + m) // 2) * chi(m - n), 40)
    z = obs.fit_z(psi, range(12, 18), range(1, 7))
    assert isinstance(z, float)
    assert z == pytest.approx(-0.85, abs=1e-10)


def test_fit_z_complex():
    z0 = 0.8 * np.exp(0.7j)
    psi = amplitude_from(lambda n, m: z0 ** ((n + m) // 2) * chi(m - n), 30)
    assert abs(obs.fit_z(psi, range(8, 13), range(1, 5)) - z0) < 1e-10


def test_fit_z_failures():
    psi = amplitude_from(lambda n, m: 1.0 if m - n == 1 else 0.0, 20)
    with pytest.raises(FitError):
        obs.fit_z(psi, range(5, 9), range(1, 4))
    psi = amplitude_from(lambda n, m: 1.0, 20)
    with pytest.raises(FitError):
        obs.fit_z(psi, [5], range(1, 3))


def test_log_slope():
    assert obs.log_slope(0.5 ** np.arange(6)) == pytest.approx(np.log(0.5))
    with pytest.raises(FitError):
        obs.log_slope([1.0])


def test_most_localized_state_small():
    spec = hardcore_spectrum(ModelParams(10, 1.0, 0.3))
    e, psi = obs.most_localized_state(spec, pair_basis(10), spec.eigenvalues[7], window=1e-9)
    assert e == pytest.approx(spec.eigenvalues[7])
    with pytest.raises(DetectionError):
        obs.most_localized_state(spec, pair_basis(10), 50.0)
