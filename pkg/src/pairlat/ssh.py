"""Effective non-Hermitian SSH chain for the relative motion.

Writing a two-particle state as ``z**c * chi(l)``, with separation
``l = m - n`` and centre-of-mass label ``c = ceil((n + m) / 2)``, turns the
bulk equation into a chain for ``chi`` with two sites per cell: ``A_n`` at
``l = 2n - 1`` and ``B_n`` at ``l = 2n``. The hard-core contact ``l = 0`` is
the open left end. The bond amplitudes are

    A_n -> B_n       t2 + t1/z        B_n -> A_n       t2 + t1*z
    A_n -> B_{n-1}   t1 + t2/z        B_n -> A_{n+1}   t1 + t2*z

Both directions of every bond multiply to ``t1**2 + t2**2 + t1*t2*(z + 1/z)``,
so the open chain is diagonally similar to a Hermitian-like uniform chain and
its eigenvectors acquire a per-cell factor ``skin_ratio``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .solvers import complex_eig

GAP_TOL = 1e-12


@dataclass(frozen=True)
class SSHParams:
    t1: float = 1.0
    t2: float = 0.0
    z: complex = 1.0
    n_cells: int = 20

    def __post_init__(self):
        if self.z == 0:
            raise InvalidParameterError("z must be nonzero")
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise InvalidParameterError(f"n_cells must be an integer >= 2, got {self.n_cells}")
        if not np.all(np.isfinite([self.t1, self.t2, abs(self.z)])):
            raise InvalidParameterError("SSH parameters must be finite")


def bond_amplitudes(p):
    """(A->B same cell, B->A same cell, A->B previous cell, B->A next cell)."""
    t1, t2, z = p.t1, p.t2, complex(p.z)
    return t2 + t1 / z, t2 + t1 * z, t1 + t2 / z, t1 + t2 * z


def build_ssh_matrix(p):
    """Dense ``2N x 2N`` matrix on the basis (A1, B1, A2, B2, ...), open ends."""
    n = int(p.n_cells)
    a, b, c, d = bond_amplitudes(p)
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    i = np.arange(n)
    h[2 * i, 2 * i + 1] = a
    h[2 * i + 1, 2 * i] = b
    h[2 * i[1:], 2 * i[1:] - 1] = c
    h[2 * i[:-1] + 1, 2 * i[:-1] + 2] = d
    return h


def bulk_product(p, kappa):
    """Single-valued ``h(kappa) = E(kappa)**2`` of the infinite chain."""
    a, b, c, d = bond_amplitudes(p)
    kappa = np.asarray(kappa, dtype=float)
    return (a + c * np.exp(-1j * kappa)) * (b + d * np.exp(1j * kappa))


def bulk_energy(p, kappa):
    """Both branches ``(+E, -E)`` of the bulk dispersion (principal root)."""
    e = np.sqrt(bulk_product(p, kappa))
    return e, -e


@dataclass(frozen=True)
class WindingResult:
    winding: object  # int, or None when the gap is closed
    gap_closed: bool
    min_abs: float


def winding_number(p, n_kappa=1024):
    """Winding of ``h(kappa)`` around zero as ``kappa`` runs over [-pi, pi]."""
    if n_kappa < 256:
        raise InvalidParameterError("n_kappa must be at least 256")
    kap = np.linspace(-np.pi, np.pi, int(n_kappa) + 1)
    h = bulk_product(p, kap)
    min_abs = float(np.min(np.abs(h)))
    if min_abs < GAP_TOL * (abs(p.t1) + abs(p.t2)) ** 2:
        return WindingResult(None, True, min_abs)
    turn = np.angle(h[1:] / h[:-1]).sum() / (2 * np.pi)
    return WindingResult(int(np.rint(turn)), False, min_abs)


def skin_ratio(p):
    """Per-cell amplitude factor ``(t1 z + t2) / (t2 z + t1)``."""
    z = complex(p.z)
    den = p.t2 * z + p.t1
    if abs(den) == 0:
        raise InvalidParameterError("skin ratio has a pole at t2*z + t1 = 0")
    r = (p.t1 * z + p.t2) / den
    return r.real if np.isrealobj(p.z) or p.z.imag == 0 else r


def localization_parameter(p, mode="cell"):
    """Edge weight imbalance averaged over all right eigenvectors.

    Parameters
    ----------
    p : SSHParams
    mode : {"cell", "sublattice"}
        ``"cell"`` compares the weight of the first unit cell (A1, B1) with
        that of the last one (AN, BN). ``"sublattice"`` compares the single
        components A1 and BN.

    Returns
    -------
    float
        Mean over the ``2N`` unit-norm eigenvectors, in [-1, 1]. Positive
        means weight piles up at the left edge.
    """
    spec = complex_eig(build_ssh_matrix(p))
    w = np.abs(spec.eigenvectors) ** 2
    if mode == "cell":
        vals = w[0] + w[1] - w[-2] - w[-1]
    elif mode == "sublattice":
        vals = w[0] - w[-1]
    else:
        raise InvalidParameterError(f"unknown mode {mode!r}")
    return float(np.mean(vals))


def nearest_eigenpair(p, energy):
    """Eigenvalue of the finite chain closest to ``energy`` and the moduli of
    its unit-norm right eigenvector, site order A1, B1, A2, ..."""
    spec = complex_eig(build_ssh_matrix(p))
    k = int(np.argmin(np.abs(spec.eigenvalues - energy)))
    return complex(spec.eigenvalues[k]), np.abs(spec.eigenvectors[:, k])


def default_z_grid(n=20, lo=0.05, hi=2.0):
    """Real z on [-hi, -lo] and [lo, hi], ``n`` points in total."""
    half = np.linspace(lo, hi, n // 2)
    return np.concatenate([-half[::-1], half[: n - n // 2]])


@dataclass(frozen=True, eq=False)
class LocalizationMap:
    z: np.ndarray
    ratios: np.ndarray
    values: np.ndarray
    gap_closed: np.ndarray


def localization_map(ratios, zs, n_cells=20, t1=1.0, mode="cell", n_kappa=1024, workers=1):
    """Localization parameter over a grid; rows are z, columns are t2/t1.

    Points where the bulk gap closes are stored as 0 and flagged in
    ``gap_closed``.
    """
    ratios = np.asarray(ratios, dtype=float)
    zs = np.asarray(zs)
    if ratios.size == 0 or zs.size == 0:
        raise InvalidParameterError("grids must be nonempty")
    jobs = [(i, j) for i in range(zs.size) for j in range(ratios.size)]

    def run(ij):
        i, j = ij
        p = SSHParams(t1, t1 * ratios[j], zs[i], n_cells)
        if winding_number(p, n_kappa).gap_closed:
            return 0.0, True
        return localization_parameter(p, mode), False

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            res = list(ex.map(run, jobs))
    else:
        res = [run(ij) for ij in jobs]
    vals = np.array([r[0] for r in res]).reshape(zs.size, ratios.size)
    mask = np.array([r[1] for r in res]).reshape(zs.size, ratios.size)
    return LocalizationMap(zs, ratios, vals, mask)
