import numpy as np
import pytest

from pairlat import ssh
from pairlat.errors import InvalidParameterError
from pairlat.lattice import ModelParams, build_hardcore_hamiltonian, pair_basis
from pairlat.solvers import complex_eig


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        ssh.SSHParams(1.0, 0.5, 0.0)
    with pytest.raises(InvalidParameterError):
        ssh.SSHParams(1.0, 0.5, 1.0, n_cells=1)


def test_z_one_is_uniform_hermitian_chain():
    h = ssh.build_ssh_matrix(ssh.SSHParams(1.0, 0.3, 1.0, 6))
    expect = 1.3 * (np.eye(12, k=1) + np.eye(12, k=-1))
    assert np.array_equal(h, expect)


def test_t2_zero_alternating_couplings():
    p = ssh.SSHParams(1.0, 0.0, 0.5 + 0.2j, 5)
    h = ssh.build_ssh_matrix(p)
    z = 0.5 + 0.2j
    assert h[0, 1] == pytest.approx(1 / z) and h[1, 0] == pytest.approx(z)
    assert h[2, 1] == pytest.approx(1.0) and h[1, 2] == pytest.approx(1.0)
    w = complex_eig(h).eigenvalues
    assert np.abs(w[:, None] + w[None, :]).min(axis=1).max() < 1e-8


def test_bound_state_energy_in_chain():
    w = complex_eig(ssh.build_ssh_matrix(ssh.SSHParams(1.0, 0.8, -0.85, 20))).eigenvalues
    assert np.min(np.abs(w + 0.259)) < 0.005


def test_closed_form_spectrum():
    # bond products are equal, so the open chain is similar to a uniform one
    for z in (-0.85, 0.5, 1.7, 0.6 + 0.3j):
        p = ssh.SSHParams(1.0, 0.8, z, 12)
        a, b, _, _ = ssh.bond_amplitudes(p)
        s = np.sqrt(complex(a * b))
        expect = 2 * s * np.cos(np.pi * np.arange(1, 25) / 25)
        w = complex_eig(ssh.build_ssh_matrix(p)).eigenvalues
        assert np.abs(w[:, None] - expect[None, :]).min(axis=1).max() < 1e-9


def test_relative_motion_reduction():
    """psi = z**c * chi(l), with c = ceil((n+m)/2), solves the two-particle
    equation wherever the lattice edges are not reached, when chi is an
    eigenvector of the SSH chain placed at A_n -> l = 2n-1, B_n -> l = 2n."""
    t2, z, cells = 0.8, -0.85, 6
    p = ssh.SSHParams(1.0, t2, z, cells)
    h = ssh.build_ssh_matrix(p)
    w, v = np.linalg.eig(h)
    k = int(np.argmin(np.abs(w - 0.4)))
    e, vec = w[k].real, v[:, k].real / np.max(np.abs(v[:, k].real))
    chi = np.zeros(2 * cells + 1)
    chi[1:] = vec  # A1, B1, A2, ... at l = 1, 2, 3, ...
    n_sites = 60
    basis = pair_basis(n_sites)
    psi = np.zeros(len(basis))
    for i, (a, b) in enumerate(basis):
        c, l = (a + b + 1) // 2, b - a
        if l < len(chi):
            psi[i] = z ** c * chi[l]
    ham = build_hardcore_hamiltonian(ModelParams(n_sites, 1.0, t2)).to_dense()
    res = ham @ psi - e * psi
    # the hard-core contact l = 0 is the chain's open end, so the residual
    # vanishes for every separation once both particles are off the edges
    for c in range(12, 40):
        for l in range(1, 2 * cells + 1):
            n = c - (l + 1) // 2
            assert abs(res[basis.index(n, n + l)]) < 1e-12 * abs(z) ** c


def test_bulk_energy_examples():
    e, minus = ssh.bulk_energy(ssh.SSHParams(1.0, 0.3, 1.0), 0.0)
    assert e == pytest.approx(2.6) and minus == pytest.approx(-2.6)
    e, _ = ssh.bulk_energy(ssh.SSHParams(1.0, 0.3, 1.0), np.pi)
    assert abs(e) < 1e-7
    # (2.8 - 2.6i)(1.3 + 1.4i) evaluated by hand
    h = ssh.bulk_product(ssh.SSHParams(1.0, 0.8, 0.5), np.pi / 2)
    assert h == pytest.approx(7.28 + 0.54j, abs=1e-14)


def test_bulk_product_against_periodic_chain():
    p = ssh.SSHParams(1.0, 0.8, 0.5 + 0.2j, 9)
    n = p.n_cells
    h = ssh.build_ssh_matrix(p)
    a, b, c, d = ssh.bond_amplitudes(p)
    h[0, 2 * n - 1] = c
    h[2 * n - 1, 0] = d
    w = np.linalg.eigvals(h)
    kap = 2 * np.pi * np.arange(n) / n
    e2 = ssh.bulk_product(p, kap)
    assert np.abs(w[:, None] ** 2 - e2[None, :]).min(axis=1).max() < 1e-10


def test_winding_examples():
    assert ssh.winding_number(ssh.SSHParams(1.0, 0.8, 1.0)).gap_closed
    r = ssh.winding_number(ssh.SSHParams(1.0, 1.0, -0.6))
    assert r.gap_closed and r.winding is None
    r = ssh.winding_number(ssh.SSHParams(1.0, 0.8, 0.5))
    assert not r.gap_closed and r.winding == 1
    assert ssh.winding_number(ssh.SSHParams(1.0, 0.8, 2.0)).winding == -1


def test_winding_refinement_invariant():
    for z in (0.3, -0.85, 1.6, 0.5 + 0.5j):
        p = ssh.SSHParams(1.0, 0.45, z)
        a, b = ssh.winding_number(p, 256), ssh.winding_number(p, 512)
        assert a.winding == b.winding


def test_winding_rejects_coarse_grid():
    with pytest.raises(InvalidParameterError):
        ssh.winding_number(ssh.SSHParams(1.0, 0.5, 0.5), 100)


def test_skin_ratio_examples():
    assert ssh.skin_ratio(ssh.SSHParams(1.0, 0.4, 1.0)) == 1.0
    assert ssh.skin_ratio(ssh.SSHParams(0.7, 0.7, -0.3)) == pytest.approx(1.0)
    assert ssh.skin_ratio(ssh.SSHParams(1.0, 0.8, -0.85)) == pytest.approx(-0.15625, abs=1e-15)
    with pytest.raises(InvalidParameterError):
        ssh.skin_ratio(ssh.SSHParams(1.0, 0.5, -2.0))


def test_eigenvectors_follow_skin_ratio():
    p = ssh.SSHParams(1.0, 0.5, 0.4, 20)
    r = abs(ssh.skin_ratio(p))
    _, vec = ssh.nearest_eigenpair(p, 1.0)
    # per-cell growth of the standing-wave envelope
    a = vec[0::2]
    ratio = np.exp(np.polyfit(np.arange(20), np.log(a + 1e-300), 1)[0])
    assert ratio == pytest.approx(r, rel=0.25)


def test_localization_parameter_examples():
    assert abs(ssh.localization_parameter(ssh.SSHParams(1.0, 0.6, 1.0))) < 1e-10
    for z in (-1.5, -0.4, 0.3, 1.8):
        assert abs(ssh.localization_parameter(ssh.SSHParams(1.0, 1.0, z))) < 1e-10
    assert ssh.localization_parameter(ssh.SSHParams(1.0, 0.8, -0.85)) > 0


def test_localization_parameter_sublattice_mode():
    p = ssh.SSHParams(1.0, 0.8, -0.85)
    assert 0 < ssh.localization_parameter(p, "sublattice") <= 1
    with pytest.raises(InvalidParameterError):
        ssh.localization_parameter(p, "other")


def test_localization_map_shape_and_lines():
    ratios = np.array([0.3, 1.0, 1.5])
    zs = np.array([-0.85, 0.5, 1.0])
    m = ssh.localization_map(ratios, zs, n_cells=10)
    assert m.values.shape == (3, 3)
    assert np.all(m.gap_closed[2]) and np.all(m.values[2] == 0)
    assert np.all(np.abs(m.values[:, 1]) < 1e-9)
    assert ssh.localization_map([0.4], [1.0]).values.tolist() == [[0.0]]


def test_localization_map_darkest_near_unit_ratio():
    ratios = np.linspace(0.1, 1.9, 10)
    zs = np.linspace(-1.9, -0.1, 10)
    m = ssh.localization_map(ratios, zs, n_cells=20)
    i, j = np.unravel_index(np.argmax(np.abs(m.values)), m.values.shape)
    assert 0.5 < ratios[j] < 1.5


def test_default_z_grid():
    g = ssh.default_z_grid(40)
    assert len(g) == 40 and g.min() == -2.0 and g.max() == 2.0
    assert np.all(np.abs(g) >= 0.05)
