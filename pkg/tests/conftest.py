import numpy as np
import pytest

from qpcdeph import QpcConfig, rates


@pytest.fixture(scope="session")
def paper_qpc():
    """Reference detector configuration: T=1/2, E_F=10 meV, V_d=1 mV, a=200 nm, eps_r=13."""
    return QpcConfig(
        transmission=0.5,
        fermi_energy=1e4,
        bias_energy=1e3,
        distance=200.0,
        rel_permittivity=13.0,
    )


@pytest.fixture(scope="session")
def paper_rates(paper_qpc):
    return rates(paper_qpc)


class ParsedCsv:
    """A scenario CSV split into metadata, header, string rows and footer."""

    def __init__(self, path):
        self.metadata = {}
        self.footer = {}
        self.columns = None
        self.rows = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line.startswith("#"):
                    key, _, value = line[1:].partition("=")
                    target = self.footer if self.columns is not None else self.metadata
                    target[key.strip()] = value.strip()
                elif self.columns is None:
                    self.columns = line.split(",")
                else:
                    self.rows.append(line.split(","))

    def col(self, name):
        idx = self.columns.index(name)
        return np.array([float(row[idx]) for row in self.rows])

    def cell(self, row, name):
        return self.rows[row][self.columns.index(name)]
