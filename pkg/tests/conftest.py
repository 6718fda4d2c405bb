import json
import os

import pytest

_HERE = os.path.dirname(__file__)


@pytest.fixture(scope="session")
def oracles():
    """Frozen reference values, computed once by independent scripts."""
    with open(os.path.join(_HERE, "data", "oracles.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def fseries200():
    """Rendered F-series records for 1..200 at 15 digits, shared per session."""
    from eulerforms.logseq import f_series_rendered

    return f_series_rendered(1, 200, out_digits=15)
