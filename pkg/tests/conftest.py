import numpy as np
import pytest

from pairlat.lattice import ModelParams, hardcore_spectrum

N_LARGE = 101

_REPORT = []


class SpectrumCache:
    """Lazily computed N=101 hard-core spectra shared by the whole session."""

    def __init__(self):
        self._vals = {}
        self._full = {}

    def full(self, t2):
        if t2 not in self._full:
            self._full[t2] = hardcore_spectrum(ModelParams(N_LARGE, 1.0, t2), vectors=True)
            self._vals[t2] = self._full[t2].eigenvalues
        return self._full[t2]

    def eigenvalues(self, t2):
        if t2 not in self._vals:
            self._vals[t2] = hardcore_spectrum(ModelParams(N_LARGE, 1.0, t2),
                                               vectors=False).eigenvalues
        return self._vals[t2]

    def all_eigenvalues(self):
        return dict(self._vals)


@pytest.fixture(scope="session")
def large_spectra():
    return SpectrumCache()


@pytest.fixture(scope="session")
def report():
    """Record one acceptance line: report(number, ok, detail)."""
    def add(number, ok, detail):
        line = f"CRITERION {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _REPORT.append((number, line))
        print(line)
    return add


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_REPORT, key=lambda x: x[0]):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
