import numpy as np
import pytest
from hypothesis import settings

from sdmmpre.field import MERSENNE_61, PrimeField

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("fast", max_examples=20, deadline=None)
settings.load_profile("ci")


@pytest.fixture
def F61():
    return PrimeField(MERSENNE_61)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0].rstrip("ab")), k)):
        ok, seconds, note = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {note}")
