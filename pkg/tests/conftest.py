import numpy as np
import pytest

from nkahler.sampling import rng_for

# criterion number -> (description, passed); filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


@pytest.fixture
def rng(request):
    return rng_for(0, request.node.name)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        desc, ok = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {desc}")


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)
