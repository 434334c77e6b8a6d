"""Diagnostics on exact two-particle spectra.

Centre-of-mass convention
-------------------------
Pairs with ``n + m`` in ``{2c, 2c+1}`` share the centre-of-mass label ``c``.
Along a label the separation ``l = m - n`` runs 1, 2, 3, ... on the zigzag
``n = c - l//2``, ``m = c + l//2 + l%2``. The parameter ``z`` returned by
:func:`fit_z` is the amplitude ratio ``psi(c+1, l) / psi(c, l)``, i.e. one
step in ``c`` multiplies the amplitude by ``z``. A state ``psi ~ r**(n+m)``
therefore has ``z = r**2``.
"""

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .errors import DetectionError, FitError, InvalidParameterError
from .lattice import TwoParticleAmplitude

DOS_SIGMA = 0.02
SPACING_FLOOR = 1e-12
CLUSTER_TOL = 1e-3
IPR_THRESHOLD = 0.3


def _amplitudes(psi):
    if isinstance(psi, TwoParticleAmplitude):
        return psi.amplitudes
    return np.asarray(psi)


def ipr(psi):
    """Inverse participation ratio ``sum |psi|^4 / (sum |psi|^2)^2``."""
    a = np.abs(_amplitudes(psi)) ** 2
    s = a.sum()
    if s == 0:
        raise InvalidParameterError("IPR of a zero vector is undefined")
    return float(np.sum(a * a) / (s * s))


def ipr_all(vectors):
    """IPR of every column of ``vectors``."""
    p = np.abs(np.asarray(vectors)) ** 2
    s = p.sum(axis=0)
    if np.any(s == 0):
        raise InvalidParameterError("IPR of a zero vector is undefined")
    return np.sum(p * p, axis=0) / (s * s)


@dataclass(frozen=True, eq=False)
class DosCurve:
    energies: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    sigma: float
    n_states: int

    @property
    def step(self):
        return float(self.energies[1] - self.energies[0]) if len(self.energies) > 1 else 0.0

    def integral(self):
        return float(np.sum(self.density) * self.step)

    def maxima(self):
        """Grid indices of strict local maxima (plateaus report their left edge)."""
        d = self.density
        if len(d) < 3:
            return np.array([], dtype=int)
        left = d[1:-1] > d[:-2]
        right = d[1:-1] >= d[2:]
        return np.nonzero(left & right)[0] + 1


def default_grid(energies, sigma, pad=6.0):
    """Uniform grid with spacing ``sigma`` aligned to integer multiples of it."""
    lo = np.floor((np.min(energies) - pad * sigma) / sigma)
    hi = np.ceil((np.max(energies) + pad * sigma) / sigma)
    return float(lo * sigma), float(hi * sigma), int(hi - lo) + 1


def dos(energies, grid=None, sigma=DOS_SIGMA):
    """Gaussian-broadened density of states.

    Parameters
    ----------
    energies : array_like
        Eigenvalues.
    grid : tuple (emin, emax, npts), optional
        Defaults to a grid of spacing ``sigma`` covering the data.
    sigma : float
        Gaussian width.

    Returns
    -------
    DosCurve
        Density normalized so that its integral is the number of states.
    """
    e = np.sort(np.asarray(energies, dtype=float).ravel())
    if e.size == 0:
        raise InvalidParameterError("empty energy list")
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    if grid is None:
        grid = default_grid(e, sigma)
    emin, emax, npts = grid
    if npts < 1 or emax < emin:
        raise InvalidParameterError(f"bad grid {grid}")
    x = np.linspace(emin, emax, int(npts))
    norm = 1.0 / (np.sqrt(2.0 * np.pi) * sigma)
    d = np.zeros_like(x)
    # chunked to bound memory at 5050 states x ~300 points
    for s in range(0, e.size, 1024):
        u = (x[:, None] - e[None, s:s + 1024]) / sigma
        d += np.exp(-0.5 * u * u).sum(axis=1)
    return DosCurve(x, d * norm, float(sigma), int(e.size))


def filtered_dos(energies, iprs, threshold=IPR_THRESHOLD, grid=None, sigma=DOS_SIGMA):
    """DOS of the states whose IPR exceeds ``threshold``.

    With no state above threshold the curve is identically zero.
    """
    e = np.asarray(energies, dtype=float)
    keep = np.asarray(iprs) > threshold
    if grid is None:
        grid = default_grid(e, sigma)
    if not np.any(keep):
        x = np.linspace(grid[0], grid[1], int(grid[2]))
        return DosCurve(x, np.zeros_like(x), float(sigma), 0)
    return dos(e[keep], grid, sigma)


def level_spacing_weight(energies, floor=SPACING_FLOOR):
    """Inverse distance to the nearest neighbouring level, floored at ``floor``."""
    e = np.asarray(energies, dtype=float)
    if e.size < 3:
        raise InvalidParameterError("need at least three levels")
    gaps = np.diff(e)
    if np.any(gaps < 0):
        raise InvalidParameterError("energies must be sorted ascending")
    near = np.empty_like(e)
    near[0] = gaps[0]
    near[-1] = gaps[-1]
    near[1:-1] = np.minimum(gaps[:-1], gaps[1:])
    return 1.0 / np.maximum(near, floor)


@dataclass(frozen=True)
class DegeneracyCluster:
    indices: tuple
    mean: float
    spread: float

    @property
    def size(self):
        return len(self.indices)


def degeneracy_clusters(energies, tol=CLUSTER_TOL, min_size=2):
    """Maximal runs of consecutive sorted levels with gaps below ``tol``.

    Runs shorter than ``min_size`` are dropped; ``min_size=1`` returns the
    full partition including singletons.
    """
    if not tol > 0:
        raise InvalidParameterError(f"cluster tolerance must be positive, got {tol}")
    e = np.asarray(energies, dtype=float)
    if e.size == 0:
        return []
    if np.any(np.diff(e) < 0):
        raise InvalidParameterError("energies must be sorted ascending")
    breaks = np.nonzero(np.diff(e) >= tol)[0] + 1
    out = []
    for run in np.split(np.arange(e.size), breaks):
        if run.size >= min_size:
            vals = e[run]
            out.append(DegeneracyCluster(tuple(int(i) for i in run),
                                         float(vals.mean()), float(vals[-1] - vals[0])))
    return out


def find_cluster_near(energies, target, tol=CLUSTER_TOL, window=None, min_size=2):
    """Largest cluster whose mean lies within ``window`` of ``target``.

    Ties in size go to the cluster closer to ``target``.
    """
    if window is None:
        window = 10 * tol
    cands = [c for c in degeneracy_clusters(energies, tol, min_size)
             if abs(c.mean - target) <= window]
    if not cands:
        raise DetectionError(f"no cluster of size >= {min_size} within {window:g} of {target:g}")
    return max(cands, key=lambda c: (c.size, -abs(c.mean - target)))


def spectral_symmetry_defect(energies):
    """``max_i |E_i + E_{M+1-i}|`` for a sorted spectrum."""
    e = np.asarray(energies, dtype=float)
    if e.size == 0:
        return 0.0
    return float(np.max(np.abs(e + e[::-1])))


# --------------------------------------------------------------------------
# Relative-motion cuts and centre-of-mass fits
# --------------------------------------------------------------------------

def zigzag(c, l):
    """Pair (n, m) at centre-of-mass label ``c`` and separation ``l``."""
    return c - l // 2, c + l // 2 + l % 2


@dataclass(frozen=True, eq=False)
class DecayProfile:
    com: int
    separations: np.ndarray
    amplitudes: np.ndarray

    def log_slope(self, lmax=None):
        """Least-squares slope of ``log|psi|`` against separation."""
        sel = slice(None) if lmax is None else self.separations <= lmax
        return log_slope(self.amplitudes[sel], self.separations[sel])


def log_slope(values, positions=None):
    """Least-squares slope of ``log|values|`` against ``positions``
    (default 0, 1, 2, ...)."""
    a = np.abs(np.asarray(values))
    x = np.arange(a.size) if positions is None else np.asarray(positions, dtype=float)
    if a.size < 2 or np.any(a == 0):
        raise FitError("need at least two nonzero samples for a slope")
    return float(np.polyfit(x, np.log(a), 1)[0])


def _signed_cut(g, n_sites, c):
    ls, vals = [], []
    l = 1
    while True:
        n, m = zigzag(c, l)
        if n < 1 or m > n_sites:
            break
        ls.append(l)
        vals.append(g[n, m])
        l += 1
    return np.array(ls, dtype=int), np.array(vals)


def relative_cuts(psi, com_positions) -> List[DecayProfile]:
    """|psi| along the relative coordinate at each centre-of-mass label."""
    if not isinstance(psi, TwoParticleAmplitude):
        raise InvalidParameterError("relative_cuts needs a TwoParticleAmplitude")
    n = psi.n_sites
    g = psi.grid()
    out = []
    for c in com_positions:
        if int(c) != c or not 1 <= c <= n - 1:
            raise InvalidParameterError(f"centre-of-mass label {c} outside 1..{n - 1}")
        ls, vals = _signed_cut(g, n, int(c))
        out.append(DecayProfile(int(c), ls, np.abs(vals)))
    return out


def fit_z(psi, com_window, separations=None, floor=1e-12):
    """Centre-of-mass parameter ``z`` from a window of an eigenstate.

    For each separation ``l`` the slope of ``log|psi(c, l)|`` against ``c``
    is fitted by least squares; ``|z|`` is the exponential of the mean slope
    weighted by the squared amplitude carried at that ``l``. The phase comes
    from ``sum_c psi(c+1, l) conj(psi(c, l))``, so a real input gives a real
    (signed) result.

    Parameters
    ----------
    psi : TwoParticleAmplitude
    com_window : sequence of int
        Consecutive centre-of-mass labels, at least two.
    separations : sequence of int, optional
        Separations to use; default every ``l`` present at all labels.
    """
    if not isinstance(psi, TwoParticleAmplitude):
        raise InvalidParameterError("fit_z needs a TwoParticleAmplitude")
    cs = np.asarray(sorted(int(c) for c in com_window))
    if cs.size < 2 or np.any(np.diff(cs) != 1):
        raise FitError("fit_z needs at least two consecutive centre-of-mass labels")
    n = psi.n_sites
    g = psi.grid()
    if separations is None:
        lmax = min(len(_signed_cut(g, n, int(c))[0]) for c in cs)
        separations = range(1, lmax + 1)
    separations = [int(l) for l in separations]
    if not separations:
        raise FitError("no separations available in the window")
    slopes, weights = [], []
    phase = 0j
    for l in separations:
        vals = []
        for c in cs:
            a, b = zigzag(int(c), l)
            if a < 1 or b > n:
                raise FitError(f"separation {l} leaves the lattice at label {c}")
            vals.append(g[a, b])
        vals = np.array(vals)
        mag = np.abs(vals)
        if np.any(mag < floor):
            raise FitError(f"amplitude below {floor:g} at separation {l}")
        slopes.append(np.polyfit(cs, np.log(mag), 1)[0])
        weights.append(np.sum(mag ** 2))
        phase += np.sum(vals[1:] * np.conj(vals[:-1]))
    modulus = float(np.exp(np.average(slopes, weights=weights)))
    if abs(phase) == 0:
        raise FitError("consecutive amplitudes carry no phase information")
    unit = phase / abs(phase)
    if np.isrealobj(g):
        return modulus * float(np.sign(unit.real))
    return complex(modulus * unit)


def most_localized_state(spectrum, basis, energy, window=1e-3, degeneracy_tol=1e-8):
    """Most localized eigenstate with eigenvalue within ``window`` of ``energy``.

    Exactly degenerate sets (gaps below ``degeneracy_tol``) do not fix their
    basis, so inside each set the centre-of-mass coordinate ``n + m`` is
    diagonalized first; this yields states localized along the edge. The
    state with largest IPR is returned together with its energy.
    """
    if spectrum.eigenvectors is None:
        raise InvalidParameterError("spectrum has no eigenvectors")
    w = spectrum.eigenvalues
    v = spectrum.eigenvectors
    sel = np.nonzero(np.abs(w - energy) <= window)[0]
    if sel.size == 0:
        raise DetectionError(f"no eigenvalue within {window:g} of {energy:g}")
    com = basis.pairs.sum(axis=1).astype(float)
    best = None
    for group in np.split(sel, np.nonzero(np.diff(w[sel]) >= degeneracy_tol)[0] + 1):
        block = v[:, group]
        if group.size > 1:
            _, rot = np.linalg.eigh(block.T @ (com[:, None] * block))
            block = block @ rot
        scores = ipr_all(block)
        k = int(np.argmax(scores))
        if best is None or scores[k] > best[0]:
            best = (float(scores[k]), float(w[group].mean()), block[:, k])
    score, e, vec = best
    return e, TwoParticleAmplitude.from_vector(basis, vec)
