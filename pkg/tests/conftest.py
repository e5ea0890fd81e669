import os

import pytest

from ucsgroups.sweep import DEFAULT_BUDGET

WORKERS = int(os.environ.get("UCS_WORKERS", "1"))


@pytest.fixture(scope="session")
def r4_p3():
    """One shared GL_4(3) pass for every r = 4, p = 3 sweep in the suite."""
    from ucsgroups.ucs import catalog_r4, exponent_p_subspace, prefetch_r4_sweeps

    extra = [
        ("frattini", exponent_p_subspace(catalog_r4(3)[6])),  # CLI certify-ucs --rep U6
        ("exterior", catalog_r4(3, printed=True)[12]),
    ]
    prefetch_r4_sweeps(3, DEFAULT_BUDGET, seed=0, workers=WORKERS, extra=extra)
    return 3
