"""Column picture at small t2 and the effective Stark ladder.

At ``t2 = 0`` the heavy particle at site ``n`` confines the light one to a
column of height ``h = n - 1``, an open chain with standing-wave modes. A
mode of energy ``E0 = 2 t1 cos k`` is resonant in every column whose label is
a multiple of the denominator of ``k / pi``. Expanding the column energies
around a resonant label ``n0`` gives a tilted lattice with linear slope ``F``
and curvature ``alpha``, coupled by ``tau`` through the heavy particle's
hopping; its spectrum is a Wannier-Stark ladder whose states are Bessel
functions, and the second-order shift ``2 alpha tau^2 / F^2`` is independent
of ``n0``. That shift is the flat-band offset ``-0.982 (t2/t1)^2``.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DetectionError, FitError, InvalidParameterError
from .observables import degeneracy_clusters

SQRT3 = np.sqrt(3.0)
RESONANCE_TOL = 1e-9
STARK_WINDOW = 40


# --------------------------------------------------------------------------
# Column basis
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ColumnState:
    height: int
    mode: int
    k: float
    energy: float
    amplitudes: np.ndarray = field(repr=False)


def standing_wave(h, j, t1=1.0):
    """Mode ``j`` of an open chain of ``h`` sites."""
    if int(h) != h or h < 1:
        raise InvalidParameterError(f"column height must be a positive integer, got {h}")
    if int(j) != j or not 1 <= j <= h:
        raise InvalidParameterError(f"mode {j} outside 1..{h}")
    k = np.pi * j / (h + 1)
    m = np.arange(1, h + 1)
    amp = np.sqrt(2.0 / (h + 1)) * np.sin(k * m)
    return ColumnState(int(h), int(j), float(k), float(2.0 * t1 * np.cos(k)), amp)


@dataclass(frozen=True)
class ColumnCoupling:
    direct: float
    analytic: object  # float, or None at a resonant denominator
    resonant: bool


def column_coupling(h, j, jp, t2, t1=1.0):
    """Matrix element of the heavy-particle hop between mode ``j`` of column
    height ``h`` and mode ``jp`` of height ``h + 1``.

    The direct overlap sum is exact. The closed form, with ``n = h + 1``,

        -t2 sin k sin k' / (sqrt(n (n - 1)) (cos k - cos k'))

    is its large-``n`` approximation and is suppressed when the two cosines
    coincide to within ``1e-9``.
    """
    a = standing_wave(h, j, t1)
    b = standing_wave(h + 1, jp, t1)
    direct = float(t2 * np.dot(a.amplitudes, b.amplitudes[:h]))
    n = h + 1
    den = np.cos(a.k) - np.cos(b.k)
    if abs(den) < RESONANCE_TOL:
        return ColumnCoupling(direct, None, True)
    analytic = float(-t2 * np.sin(a.k) * np.sin(b.k) / (np.sqrt(n * (n - 1.0)) * den))
    return ColumnCoupling(direct, analytic, False)


# --------------------------------------------------------------------------
# Stark ladder
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class StarkParams:
    n0: int
    F: float
    alpha: float
    tau: float


def stark_params(n0, t1=1.0, t2=0.0):
    if int(n0) != n0 or n0 < 3:
        raise InvalidParameterError(f"n0 must be an integer >= 3, got {n0}")
    if t1 == 0:
        raise InvalidParameterError("t1 must be nonzero")
    F = np.pi / (SQRT3 * n0)
    alpha = -np.pi * (6.0 * SQRT3 + np.pi) / (18.0 * n0 * n0)
    tau = 3.0 * SQRT3 * t2 / (2.0 * np.pi * t1)
    return StarkParams(int(n0), float(F), float(alpha), float(tau))


def stark_matrix(p, window=STARK_WINDOW):
    """Tridiagonal ladder on offsets ``d = -W .. W`` with Dirichlet ends."""
    if int(window) != window or window < 10:
        raise InvalidParameterError(f"window must be an integer >= 10, got {window}")
    d = np.arange(-int(window), int(window) + 1, dtype=float)
    size = d.size
    h = np.diag(p.F * d + p.alpha * d * d)
    off = np.full(size - 1, p.tau)
    h[np.arange(size - 1), np.arange(1, size)] = off
    h[np.arange(1, size), np.arange(size - 1)] = off
    return h


def ladder_state(p, window=STARK_WINDOW):
    """Normalized ``J_d(-2 tau / F)`` on the window, the alpha = 0 ladder
    state centred on the resonant column."""
    x = -2.0 * p.tau / p.F
    v = bessel_j_array(int(window), x)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class StarkLevel:
    energy: float
    overlap: float
    centre_weight: float


def stark_target_eigenvalue(p, window=STARK_WINDOW, select="overlap"):
    """Eigenvalue of the ladder level attached to the resonant column.

    Parameters
    ----------
    select : {"overlap", "centre"}
        ``"overlap"`` picks the eigenvector with the largest squared overlap
        with the Bessel ladder state; ``"centre"`` picks the largest weight
        on the central site ``d = 0``.
    """
    h = stark_matrix(p, window)
    w, v = np.linalg.eigh(h)
    b = ladder_state(p, window)
    ov = (b @ v) ** 2
    cw = v[int(window)] ** 2
    if select == "overlap":
        k = int(np.argmax(ov))
    elif select == "centre":
        k = int(np.argmax(cw))
    else:
        raise InvalidParameterError(f"unknown selection {select!r}")
    return StarkLevel(float(w[k]), float(ov[k]), float(cw[k]))


@dataclass(frozen=True)
class FlatBand:
    epsilon: float
    energy: float
    rounded: float


def flatband_energy(t1=1.0, t2=0.0):
    """Ladder shift ``2 alpha tau^2 / F^2`` and the flat-band level ``t1 (1 + eps)``.

    ``rounded`` is the two-digit form ``-0.98 (t2/t1)^2``.
    """
    p = stark_params(3, t1, t2)
    eps = 2.0 * p.alpha * p.tau ** 2 / p.F ** 2
    r = t2 / t1
    return FlatBand(float(eps), float(t1 * (1.0 + eps)), float(-0.98 * r * r))


# --------------------------------------------------------------------------
# Bessel functions
# --------------------------------------------------------------------------

def bessel_j(n, x):
    """Integer-order Bessel function of the first kind, ``|n| <= 200``, ``|x| <= 50``."""
    if int(n) != n or abs(n) > 200:
        raise InvalidParameterError(f"order must be an integer with |n| <= 200, got {n}")
    if not np.isfinite(x) or abs(x) > 50:
        raise InvalidParameterError(f"argument must satisfy |x| <= 50, got {x}")
    n = int(n)
    val = kernels.bessel_j_table(abs(n), float(x))[abs(n)]
    return float(-val if n < 0 and n % 2 else val)


def bessel_j_array(nmax, x):
    """``J_n(x)`` for ``n = -nmax .. nmax``."""
    pos = kernels.bessel_j_table(int(nmax), float(x))
    neg = pos[:0:-1].copy()
    neg[(nmax - np.arange(nmax)) % 2 == 1] *= -1
    return np.concatenate([neg, pos])


def _tail_order(x):
    return int(abs(x) + 40 + 4 * np.sqrt(abs(x) + 1))


def appendix_sum(x):
    """``sum_n n^2 J_n(x)^2`` over all integers; equals ``x^2 / 2``."""
    if not np.isfinite(x) or abs(x) > 40:
        raise InvalidParameterError(f"argument must satisfy |x| <= 40, got {x}")
    j = kernels.bessel_j_table(_tail_order(x), float(x))
    n = np.arange(j.size, dtype=float)
    return float(2.0 * np.sum(n * n * j * j))


def bessel_normalization(x):
    """``sum_n J_n(x)^2``; equals 1."""
    j = kernels.bessel_j_table(_tail_order(x), float(x))
    return float(j[0] ** 2 + 2.0 * np.sum(j[1:] ** 2))


def bessel_ladder_residual(tau, F, window=STARK_WINDOW):
    """Largest componentwise residual of ``F n psi_n + tau (psi_{n+1} + psi_{n-1})``
    for ``psi_n = J_n(-2 tau / F)`` on the interior of ``-W .. W``."""
    psi = bessel_j_array(int(window) + 1, -2.0 * tau / F)
    n = np.arange(-int(window), int(window) + 1, dtype=float)
    mid = psi[1:-1]
    res = F * n * mid + tau * (psi[2:] + psi[:-2])
    return float(np.max(np.abs(res)))


# --------------------------------------------------------------------------
# Parabolas at small t2
# --------------------------------------------------------------------------

# resonant wavevectors k / pi, top to bottom in E0 = 2 t1 cos k
PARABOLA_K = (Fraction(1, 4), Fraction(1, 3), Fraction(3, 8), Fraction(2, 5),
              Fraction(3, 7), Fraction(4, 9))


def _as_fraction(k_over_pi):
    f = Fraction(k_over_pi).limit_denominator(1000)
    if not 0 < f < 1:
        raise InvalidParameterError(f"k/pi must lie in (0, 1), got {k_over_pi}")
    return f


def second_order_coefficient(k_over_pi, t1=1.0, n0=None):
    """Exact second-order coefficient ``nu`` of ``E = E0 - nu t2^2 / t1``.

    The resonant mode of column ``n0`` (height ``n0 - 1``) couples through the
    heavy-particle hop to every mode of the two neighbouring columns; the sum
    of squared overlaps over energy denominators does not depend on ``n0``
    once the column is taller than the mode's wavelength.
    """
    f = _as_fraction(k_over_pi)
    if n0 is None:
        n0 = 40 * f.denominator
    if n0 % f.denominator:
        raise InvalidParameterError(f"column {n0} carries no mode at k = {f} pi")
    h = n0 - 1
    base = standing_wave(h, int(f * n0), t1)
    total = 0.0
    for hh in (h - 1, h + 1):
        if hh < 1:
            continue
        length = min(h, hh)
        for jj in range(1, hh + 1):
            other = standing_wave(hh, jj, t1)
            c = np.dot(base.amplitudes[:length], other.amplitudes[:length])
            den = base.energy - other.energy
            if abs(den) < RESONANCE_TOL:
                if abs(c) > RESONANCE_TOL:
                    raise FitError("degenerate neighbouring mode with nonzero coupling")
                continue
            total += c * c / den
    return float(-t1 * total)


@dataclass(frozen=True)
class ParabolaFit:
    k_over_pi: Fraction
    e0: float
    nu: float
    residual: float
    t2: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)
    sizes: np.ndarray = field(repr=False)


def perturbation_coefficient(k_over_pi, spectra, t1=1.0, cluster_tol=1e-4):
    """Fit ``E(t2) = E0 - nu t2^2 / t1`` to flat-band clusters of exact spectra.

    Parameters
    ----------
    k_over_pi : Fraction or float
        Resonant wavevector in units of pi; ``E0 = 2 t1 cos k``.
    spectra : mapping t2 -> sorted eigenvalues
        At least four nonzero ``t2`` values.
    cluster_tol : float
        Gap tolerance used to group levels.

    For each ``t2`` the largest cluster whose mean lies within
    ``4 t2^2 / |t1| + 1e-3`` of ``E0`` is taken; ``nu`` is the least-squares
    solution with ``E0`` held fixed, ``residual`` the rms misfit.
    """
    f = _as_fraction(k_over_pi)
    e0 = 2.0 * t1 * np.cos(np.pi * float(f))
    t2s = sorted(t for t in spectra if t != 0)
    if len(t2s) < 4:
        raise InvalidParameterError("need spectra for at least four nonzero t2 values")
    means, sizes = [], []
    for t2 in t2s:
        window = 4.0 * t2 * t2 / abs(t1) + 1e-3
        cands = [c for c in degeneracy_clusters(spectra[t2], cluster_tol)
                 if abs(c.mean - e0) <= window]
        if not cands:
            raise DetectionError(f"no cluster near E0 = {e0:.6f} at t2 = {t2}")
        best = max(cands, key=lambda c: (c.size, -abs(c.mean - e0)))
        means.append(best.mean)
        sizes.append(best.size)
    x = np.array(t2s) ** 2 / t1
    y = e0 - np.array(means)
    nu = float(np.dot(x, y) / np.dot(x, x))
    res = float(np.sqrt(np.mean((y - nu * x) ** 2)))
    return ParabolaFit(f, float(e0), nu, res, np.array(t2s), np.array(means), np.array(sizes))
