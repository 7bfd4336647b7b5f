import numpy as np
import pytest

from nematic_topo.complex import (
    TruncationSpec,
    build_truncated,
    cube,
    l_prism,
    tetrahedron,
)
from nematic_topo.field import Resolution
from nematic_topo.generators import post_base, tangent_base
from nematic_topo.post import build_post_domain


@pytest.fixture(scope="session")
def cube_cx():
    return build_truncated(cube(), TruncationSpec(0.1))


@pytest.fixture(scope="session")
def tetra_cx():
    return build_truncated(tetrahedron(), TruncationSpec(0.08))


@pytest.fixture(scope="session")
def lprism_cx():
    return build_truncated(l_prism(), TruncationSpec(0.1))


@pytest.fixture(scope="session")
def cube_base(cube_cx):
    return tangent_base(cube_cx)


@pytest.fixture(scope="session")
def tetra_base(tetra_cx):
    return tangent_base(tetra_cx)


@pytest.fixture(scope="session")
def lprism_base(lprism_cx):
    return tangent_base(lprism_cx)


@pytest.fixture(scope="session")
def post():
    return build_post_domain(0.3, 0.3, 0.5, 1.0, "T", 0.05)


@pytest.fixture(scope="session")
def post_T(post):
    return post_base(post, "T")


@pytest.fixture(scope="session")
def post_N(post):
    return post_base(post, "N")


@pytest.fixture()
def res():
    return Resolution()


@pytest.fixture()
def post_res():
    return Resolution(grid=32)
