import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def taylor_exp(h, terms=80):
    """exp by a scaled Taylor series; independent of any eigensolver."""
    h = np.asarray(h, dtype=complex)
    s = max(0, int(np.ceil(np.log2(max(np.linalg.norm(h), 1.0)))) + 1)
    a = h / 2**s
    out = np.eye(h.shape[0], dtype=complex)
    term = np.eye(h.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
