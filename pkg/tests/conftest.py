import pytest
from hypothesis import settings

from gcwaves.dispersion import FluidParams
from gcwaves.samples import region_i_params, region_ii_params, sample_families

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def families():
    return sample_families()


@pytest.fixture(scope="session")
def region_i():
    return region_i_params()


@pytest.fixture(scope="session")
def region_ii():
    return region_ii_params()


@pytest.fixture
def ref_params():
    return FluidParams(0.5, 1.0)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(label: str, passed: bool, detail: str = "") -> bool:
        line = f"{'PASS' if passed else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        request.config._acceptance_lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
