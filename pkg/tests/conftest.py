from pathlib import Path

import pytest

from mctree import _kernels_py, splits

DATASETS = Path(__file__).resolve().parent.parent / "datasets"

BACKENDS = [pytest.param(_kernels_py, id="numpy")]
try:
    from mctree import _kernels
except ImportError:
    _kernels = None
else:
    BACKENDS.append(pytest.param(_kernels, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture
def iris_path():
    return DATASETS / "iris.csv"


@pytest.fixture
def wine_path():
    return DATASETS / "winequality-red.csv"


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0].rstrip("abc")), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
