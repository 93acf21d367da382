import logging

import pytest

from hgpy import config
from hgpy.definitions import *
import hgpy.core.code as hgcode
import hgpy.core.graph as hggraph

# Edges of the complete graph on 4 vertices, used as left vertices of its edge-vertex incidence graph
K4_EDGES = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
PLANE_DIFFERENCE_SET = (0, 1, 3, 9)


@pytest.fixture(autouse=True)
def _detach_console_handler():
    # The CLI attaches a console handler bound to the current sys.stderr; under pytest capture that
    # stream is closed after each test, so drop the handler to keep tests isolated
    yield
    root = logging.getLogger('hgpy')
    for h in list(root.handlers):
        if getattr(h, '_hgpy_console', False):
            root.removeHandler(h)


@pytest.fixture
def four_cycle() -> hggraph.BipartiteGraph:
    return hggraph.BipartiteGraph(2, 2, 2, 2, [[0, 1], [0, 1]])


@pytest.fixture
def k32() -> hggraph.BipartiteGraph:
    return hggraph.BipartiteGraph(3, 2, 2, 3, [[0, 1], [0, 1], [0, 1]])


@pytest.fixture
def c6() -> hggraph.BipartiteGraph:
    return hggraph.BipartiteGraph(3, 3, 2, 2, [[0, 1], [1, 2], [0, 2]])


@pytest.fixture
def k4_incidence() -> hggraph.BipartiteGraph:
    return hggraph.BipartiteGraph(6, 4, 2, 3, K4_EDGES)


@pytest.fixture
def single_edge() -> hggraph.BipartiteGraph:
    return hggraph.BipartiteGraph(1, 1, 1, 1, [[0]])


@pytest.fixture
def k4_code(k4_incidence) -> hgcode.CssCode:
    return hgcode.build_hypergraph_product(k4_incidence)


@pytest.fixture
def four_cycle_code(four_cycle) -> hgcode.CssCode:
    return hgcode.build_hypergraph_product(four_cycle)


@pytest.fixture
def restore_config(monkeypatch):
    """Undo configuration changes made through -c or set_configuration_data"""
    for key in [k for k in vars(config) if k.isupper()]:
        monkeypatch.setattr(config, key, getattr(config, key))
    return config


@pytest.fixture(scope='session')
def projective_plane() -> hggraph.BipartiteGraph:
    """Point-line incidence of the projective plane of order 3

    Lines are the translates of the perfect difference set {0, 1, 3, 9}
    mod 13, so any two points share exactly one line and dually.
    """
    adjacency = [sorted((p - d) % 13 for d in PLANE_DIFFERENCE_SET) for p in range(13)]
    return hggraph.BipartiteGraph(13, 13, 4, 4, adjacency)


@pytest.fixture(scope='session')
def projective_plane_code(projective_plane) -> hgcode.CssCode:
    return hgcode.build_hypergraph_product(projective_plane)


@pytest.fixture(scope='session')
def plane_small_errors(projective_plane_code) -> list:
    """Supports of every error of weight at most 2 on the plane code, up to its cyclic symmetry

    Shifting both AA coordinates, or both BB coordinates, by the same amount
    mod 13 maps the code onto itself, so it suffices to take pairs
    containing AA(0, 0), and BB-only pairs containing BB(0, 0).
    """
    C = projective_plane_code
    q_aa, q_bb = C.qubit_flat(KIND_AA, 0, 0), C.qubit_flat(KIND_BB, 0, 0)
    errors = [(q_aa,), (q_bb,)]
    errors.extend(tuple(sorted((q_aa, q))) for q in range(C.n) if q != q_aa)
    errors.extend((q_bb, q) for q in range(q_bb + 1, C.n))
    return errors
