import os

import pytest

from patternforge.generator import GenConfig, generate

FULL = os.environ.get("PATTERNFORGE_FULL_SCALE") == "1"


@pytest.mark.slow
@pytest.mark.skipif(not FULL, reason="set PATTERNFORGE_FULL_SCALE=1; needs tens of GB of RAM")
def test_reference_scale_generation():
    n = 38_000_000
    g, rep = generate(GenConfig(seed=2, target_edges=n))
    assert abs(g.edge_count - n) <= 0.01 * n
    assert rep.edge_count == g.edge_count
