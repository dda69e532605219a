import pytest
from hypothesis import settings

from lidstone.basis import NodeSystem

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# six admissible rational systems with m in {1, 2, 3, 4}
POOL = {
    "m1": NodeSystem((0,), (0,)),
    "lidstone": NodeSystem.lidstone(),
    "whittaker": NodeSystem.whittaker(),
    "example3": NodeSystem((0, 1, 2), (0, 0, 1)),
    "poritsky3": NodeSystem.poritsky(("0", "1/2", "-1/3")),
    "gontcharoff4": NodeSystem.gontcharoff(("0", "1/2", "1", "-1/2")),
}


@pytest.fixture(params=sorted(POOL), ids=sorted(POOL))
def pool_nodes(request):
    return POOL[request.param]
