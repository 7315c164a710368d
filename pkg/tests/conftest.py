import os
import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from chfsectors.errors import SaturatedWarning

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("stress", parent=settings.get_profile("default"), max_examples=1000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _quiet_numpy():
    # singular map endpoints produce inf/nan that the code masks on purpose
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("error", SaturatedWarning)
        yield
