"""Exact two-particle spectra of a hard-core chain with unequal hoppings,
with the effective SSH and Stark-ladder descriptions used to interpret them."""

from .errors import (ConvergenceError, DetectionError, FitError, InvalidParameterError,
                     ModeError, PairlatError, SymmetryError)
from .lattice import (HARD_CORE, FiniteU, HardCore, ModelParams, PairBasis, SparseHamiltonian,
                      TwoParticleAmplitude, build_finite_u_hamiltonian,
                      build_hardcore_hamiltonian, eigenstate, hardcore_spectrum,
                      ordered_sector_eigenvalues, pair_basis, solve_spectrum)
from .solvers import ComplexSpectrum, Spectrum, complex_eig, sym_eig

__version__ = "0.1.0"
