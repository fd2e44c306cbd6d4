import numpy as np
import pytest

from mchrh import direct_scattering as ds
from mchrh.soliton_rh import SolitonParams
from mchrh.verification import soliton_x_profile


@pytest.fixture(scope="session")
def gaussian_profile():
    x = np.linspace(-12.0, 12.0, 4096)
    return ds.profile_from_u(x, 0.3 * np.exp(-x * x))


@pytest.fixture(scope="session")
def gaussian_data(gaussian_profile):
    return ds.compute_spectral_data(gaussian_profile, ds.real_mu_grid(64))


def soliton_field_profile(theta=np.pi / 4, delta_hat=1.0, n=4096, half_width=30.0):
    params = SolitonParams(theta, delta_hat)
    x = np.linspace(-half_width, half_width, n)
    xp = soliton_x_profile(params, 0.0, x)
    return ds.FieldProfile(x, xp.u, xp.u_x, xp.m, 0.0)


@pytest.fixture(scope="session")
def soliton_scatter_profile():
    return soliton_field_profile()


@pytest.fixture(scope="session")
def soliton_data(soliton_scatter_profile):
    return ds.compute_spectral_data(soliton_scatter_profile)


ACCEPTANCE_LINES: list = []


@pytest.fixture
def acceptance_report():
    def report(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
