from __future__ import annotations

from functools import lru_cache

from weylfold.root_systems import cartan_matrix
from weylfold.weyl import WeylGroup


@lru_cache(maxsize=None)
def weyl(t: str) -> WeylGroup:
    return WeylGroup.from_cartan(cartan_matrix(t))
