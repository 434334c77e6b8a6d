"""Dense eigensolvers.

``sym_eig`` handles real symmetric matrices, either through LAPACK
(``method="lapack"``, the default and the only practical choice for the
5050-dimensional pair Hamiltonian) or through the package's own Householder
plus implicit-QL kernels (``method="native"``). ``complex_eig`` handles small
dense non-Hermitian matrices with balancing, Hessenberg reduction, shifted QR
and inverse iteration.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import ConvergenceError, InvalidParameterError, SymmetryError

SYM_TOL = 1e-12
RESIDUAL_TOL = 1e-9
COMPLEX_RESIDUAL_TOL = 1e-8
MAX_COMPLEX_DIM = 512


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, orthonormal eigenvectors (columns) and the
    largest residual ``max ||H v - E v||``. Vectors and residual are ``None``
    when only eigenvalues were requested."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    residual: Optional[float] = None

    def __len__(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class ComplexSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    defective: np.ndarray
    sweeps: int

    @property
    def residual(self):
        return float(self.residuals.max()) if len(self.residuals) else 0.0


def check_symmetric(a, tol=SYM_TOL):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {a.shape}")
    scale = np.max(np.abs(a)) if a.size else 0.0
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > tol * max(scale, 1e-300):
        raise SymmetryError(f"matrix is not symmetric: max |A - A^T| = {asym:.3e}")


def _residual(op, vals, vecs):
    hv = op @ vecs
    return float(np.max(np.linalg.norm(hv - vecs * vals, axis=0))) if len(vals) else 0.0


def tridiagonal_eig(diag, offdiag, vectors=True, max_iter=60):
    """Eigen-decomposition of the symmetric tridiagonal matrix (diag, offdiag)
    by implicit-shift QL."""
    d = np.array(diag, dtype=float)
    n = len(d)
    e = np.zeros(n)
    e[: n - 1] = offdiag
    zt = np.eye(n) if vectors else np.zeros((0, n))
    status = kernels.tql_implicit(d, e, zt, max_iter)
    if status >= 0:
        raise ConvergenceError(
            f"implicit QL did not converge for eigenvalue {status} "
            f"after {max_iter} iterations", iterations=max_iter)
    order = np.argsort(d, kind="stable")
    vals = d[order]
    vecs = np.ascontiguousarray(zt[order].T) if vectors else None
    return vals, vecs


def sym_eig(a, method="lapack", vectors=True, residual_op=None, max_iter=60):
    """Full eigensystem of a real symmetric matrix.

    Parameters
    ----------
    a : (M, M) array_like
        Symmetric within ``1e-12`` relative.
    method : {"lapack", "native"}
    vectors : bool
        If False only eigenvalues are computed and no residual is reported.
    residual_op : matrix or sparse matrix, optional
        Operator used for the residual check instead of ``a``; a sparse copy
        of the same matrix makes the check cheap for large M.

    Returns
    -------
    Spectrum
    """
    a = np.asarray(a, dtype=float)
    check_symmetric(a)
    n = a.shape[0]
    if method == "lapack":
        if vectors:
            vals, vecs = np.linalg.eigh(a)
        else:
            vals, vecs = np.linalg.eigvalsh(a), None
    elif method == "native":
        if n == 0:
            vals, vecs = np.zeros(0), (np.zeros((0, 0)) if vectors else None)
        else:
            d, e, refl = kernels.tridiagonalize(np.ascontiguousarray(a))
            vals, u = tridiagonal_eig(d, e[: n - 1], vectors=vectors, max_iter=max_iter)
            vecs = kernels.apply_reflectors(refl, u) if vectors else None
    else:
        raise InvalidParameterError(f"unknown method {method!r}")
    if not vectors:
        return Spectrum(vals)
    res = _residual(a if residual_op is None else residual_op, vals, vecs)
    bound = RESIDUAL_TOL * max(float(np.max(np.abs(vals))) if n else 0.0, 1e-300)
    if res > bound and res > 1e-13:
        raise ConvergenceError(
            f"eigen-residual {res:.3e} exceeds {bound:.3e}", residual=res)
    return Spectrum(vals, vecs, res)


def complex_eig(a, max_iter=100, n_iter=3):
    """Eigenvalues and unit right eigenvectors of a dense complex matrix.

    Eigenvalues are sorted by (real, imaginary). ``defective`` flags vectors
    whose residual exceeds ``1e-8 * ||A||_F``, which is what a Jordan block
    produces once its repeated eigenvector has been orthogonalized away.
    """
    a = np.array(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_COMPLEX_DIM:
        raise InvalidParameterError(f"dimension {n} exceeds {MAX_COMPLEX_DIM}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError("matrix has non-finite entries")
    if n == 0:
        empty = np.zeros(0, np.complex128)
        return ComplexSpectrum(empty, np.zeros((0, 0), np.complex128),
                               np.zeros(0), np.zeros(0, bool), 0)
    ab, scale = kernels.balance(a)
    h, refl = kernels.hessenberg(ab)
    w, status, sweeps = kernels.hessenberg_eigvals(h, max_iter)
    if status >= 0:
        raise ConvergenceError(
            f"shifted QR did not converge for eigenvalue {status} after "
            f"{max_iter} iterations", iterations=sweeps)
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    norm_b = np.linalg.norm(ab)
    y = kernels.inverse_iteration(h, refl, w, 1e-10 * max(norm_b, 1e-300), n_iter)
    v = scale[:, None] * y
    v /= np.linalg.norm(v, axis=0)
    res = np.linalg.norm(a @ v - v * w, axis=0)
    defective = res > COMPLEX_RESIDUAL_TOL * max(np.linalg.norm(a), 1e-300)
    return ComplexSpectrum(w, v, res, defective, int(sweeps))
