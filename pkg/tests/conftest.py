import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("signlab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("signlab")

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian_arrays(draw, n_min=1, n_max=6, complex_entries=True):
    n = draw(st.integers(n_min, n_max))
    re = np.array(draw(st.lists(finite, min_size=n * n, max_size=n * n))).reshape(n, n)
    im = (np.array(draw(st.lists(finite, min_size=n * n, max_size=n * n))).reshape(n, n)
          if complex_entries else np.zeros((n, n)))
    A = re + 1j * im
    return (A + A.conj().T) / 2


def random_hermitian(rng, n, size, complex_entries=True):
    A = rng.normal(size=(size, n, n))
    if complex_entries:
        A = A + 1j * rng.normal(size=(size, n, n))
    return (A + np.conj(np.swapaxes(A, 1, 2))) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -------------------------------------------------------- acceptance summary

CRITERIA = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and "::test_criterion_" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
            CRITERIA[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA):
        num = int(name.split("_")[2])
        label = name.split("_", 3)[3].replace("_", " ")
        status = "PASS" if CRITERIA[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status}  {label}")
