from __future__ import annotations

import pytest

from majda_znd import P0, P1


@pytest.fixture(params=[P0, P1], ids=["P0", "P1"])
def reference_params(request):
    return request.param
