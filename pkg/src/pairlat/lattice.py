"""Two distinguishable particles on an open chain.

Particle 1 sits at ``n`` and hops with ``t1``; particle 2 sits at ``m`` and
hops with ``t2``. In the hard-core limit the contact repulsion forbids
``n == m`` and, on an open chain, also forbids the particles from passing
each other, so the ordered sector ``n < m`` is closed under the dynamics and
is diagonalized on its own.
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import InvalidParameterError, ModeError
from .solvers import Spectrum, sym_eig


@dataclass(frozen=True)
class HardCore:
    """Infinite on-site repulsion; the n < m sector is kept exactly."""


@dataclass(frozen=True)
class FiniteU:
    u: float


Interaction = Union[HardCore, FiniteU]
HARD_CORE = HardCore()


@dataclass(frozen=True)
class ModelParams:
    n_sites: int
    t1: float = 1.0
    t2: float = 0.0
    eps1: float = 0.0
    eps2: float = 0.0
    interaction: Interaction = HARD_CORE

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise InvalidParameterError(f"n_sites must be an integer >= 2, got {self.n_sites}")
        if self.t1 == 0:
            raise InvalidParameterError("t1 sets the energy unit and must be nonzero")
        values = [self.t1, self.t2, self.eps1, self.eps2]
        if isinstance(self.interaction, FiniteU):
            values.append(self.interaction.u)
        elif not isinstance(self.interaction, HardCore):
            raise InvalidParameterError(f"unknown interaction {self.interaction!r}")
        if not np.all(np.isfinite(values)):
            raise InvalidParameterError("model parameters must be finite")

    @property
    def ratio(self):
        return self.t2 / self.t1


@dataclass(frozen=True, eq=False)
class PairBasis:
    """Ordered pairs (n, m), 1 <= n < m <= N, in lexicographic order."""

    n_sites: int
    pairs: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.pairs)

    @property
    def size(self):
        return len(self.pairs)

    def index(self, n, m):
        if not 1 <= n < m <= self.n_sites:
            raise InvalidParameterError(f"({n}, {m}) is not an ordered pair on {self.n_sites} sites")
        return int(kernels.pair_index(n, m, self.n_sites))

    def __iter__(self):
        return (tuple(int(x) for x in p) for p in self.pairs)


def pair_basis(n_sites):
    if int(n_sites) != n_sites or n_sites < 2:
        raise InvalidParameterError(f"need at least two sites, got {n_sites}")
    n_sites = int(n_sites)
    n, m = np.triu_indices(n_sites, k=1)
    return PairBasis(n_sites, np.column_stack([n + 1, m + 1]).astype(np.int64))


@dataclass(frozen=True, eq=False)
class SparseHamiltonian:
    """Real symmetric Hamiltonian as COO triplets."""

    dimension: int
    rows: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    symmetric: bool = True

    @property
    def entries(self):
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    def to_sparse(self):
        return sp.csr_matrix((self.values, (self.rows, self.cols)),
                             shape=(self.dimension, self.dimension))

    def to_dense(self):
        h = np.zeros((self.dimension, self.dimension))
        np.add.at(h, (self.rows, self.cols), self.values)
        return h

    def trace(self):
        return float(self.values[self.rows == self.cols].sum())

    def row_degree(self):
        off = self.rows != self.cols
        return np.bincount(self.rows[off], minlength=self.dimension)


def build_hardcore_hamiltonian(params):
    if not isinstance(params.interaction, HardCore):
        raise ModeError("build_hardcore_hamiltonian needs HardCore interaction")
    n = params.n_sites
    rows, cols, vals = kernels.hardcore_entries(
        n, float(params.t1), float(params.t2), float(params.eps1 + params.eps2))
    return SparseHamiltonian(n * (n - 1) // 2, rows, cols, vals)


def build_finite_u_hamiltonian(params):
    """Full N^2 Hamiltonian on the basis index (n-1)*N + (m-1)."""
    if not isinstance(params.interaction, FiniteU):
        raise ModeError("build_finite_u_hamiltonian needs FiniteU interaction")
    n = params.n_sites
    rows, cols, vals = kernels.finite_u_entries(
        n, float(params.t1), float(params.t2), float(params.eps1 + params.eps2),
        float(params.interaction.u))
    return SparseHamiltonian(n * n, rows, cols, vals)


def solve_spectrum(ham, vectors=True, method="lapack"):
    """Full diagonalization; the residual check uses the sparse operator."""
    if not ham.symmetric:
        raise InvalidParameterError("solve_spectrum needs a symmetric Hamiltonian")
    op = ham.to_sparse()
    return sym_eig(ham.to_dense(), method=method, vectors=vectors, residual_op=op)


def hardcore_spectrum(params, vectors=True, method="lapack"):
    if isinstance(params.interaction, FiniteU):
        raise ModeError("hardcore_spectrum needs HardCore interaction")
    return solve_spectrum(build_hardcore_hamiltonian(params), vectors=vectors, method=method)


def ordered_sector_eigenvalues(params):
    """Low-energy eigenvalues of the finite-U model in the block that contains
    the n < m sector.

    The simultaneous reflection (n, m) -> (N+1-n, N+1-m) commutes with H and
    swaps the n < m and n > m sectors, so each parity block carries one copy
    of the ordered-sector spectrum. The even block is diagonalized and its
    doublon-dominated levels near U are discarded.
    """
    if not isinstance(params.interaction, FiniteU):
        raise ModeError("ordered_sector_eigenvalues needs FiniteU interaction")
    n = params.n_sites
    dim = n * n
    h = build_finite_u_hamiltonian(params).to_dense()
    cols = []
    for i in range(dim):
        j = dim - 1 - i
        if i < j:
            q = np.zeros(dim)
            q[i] = q[j] = np.sqrt(0.5)
            cols.append(q)
        elif i == j:
            q = np.zeros(dim)
            q[i] = 1.0
            cols.append(q)
    q = np.array(cols).T
    vals = np.linalg.eigvalsh(q.T @ h @ q)
    keep = n * (n - 1) // 2
    doublon = params.eps1 + params.eps2 + params.interaction.u
    far = np.argsort(-np.abs(vals - doublon), kind="stable")[:keep]
    return np.sort(vals[far])


def t2_zero_spectrum(n_sites, t1=1.0, diag=0.0):
    """Closed-form spectrum at t2 = 0: the union of open chains of length
    h = 1 .. N-1 (particle 1 confined left of a frozen particle 2)."""
    levels = [diag + 2.0 * t1 * np.cos(np.pi * np.arange(1, h + 1) / (h + 1))
              for h in range(1, n_sites)]
    return np.sort(np.concatenate(levels))


@dataclass(frozen=True, eq=False)
class TwoParticleAmplitude:
    """Normalized amplitude psi_nm on the ordered-pair basis."""

    basis: PairBasis
    amplitudes: np.ndarray = field(repr=False)

    @classmethod
    def from_vector(cls, basis, vector):
        vec = np.asarray(vector)
        if vec.shape != (len(basis),):
            raise InvalidParameterError(
                f"amplitude vector has shape {vec.shape}, basis size is {len(basis)}")
        nrm = np.linalg.norm(vec)
        if nrm == 0:
            raise InvalidParameterError("zero amplitude vector")
        return cls(basis, vec / nrm)

    @property
    def n_sites(self):
        return self.basis.n_sites

    @property
    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def grid(self):
        """(N+1, N+1) array with psi[n, m] at 1-based positions, zero elsewhere."""
        n = self.n_sites
        g = np.zeros((n + 1, n + 1), dtype=self.amplitudes.dtype)
        g[self.basis.pairs[:, 0], self.basis.pairs[:, 1]] = self.amplitudes
        return g

    def __call__(self, n, m):
        return self.amplitudes[self.basis.index(n, m)]


def eigenstate(spectrum, index, basis):
    if spectrum.eigenvectors is None:
        raise InvalidParameterError("spectrum was computed without eigenvectors")
    return TwoParticleAmplitude.from_vector(basis, spectrum.eigenvectors[:, index])
