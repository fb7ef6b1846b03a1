"""
Shared fixtures for the test suite
"""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import config
from src.digraph import Digraph
from src.families import directed_cycle, directed_path
from spectral_utils.digraph_io import format_digraph


@pytest.fixture(autouse=True)
def restore_config():
    """Every test starts and ends with the same settings"""
    saved = config.get_current_settings()
    config.update_settings_from_dict({'show_progress': False})
    yield
    config.update_settings_from_dict(saved)


@pytest.fixture
def p2():
    return directed_path(2)


@pytest.fixture
def p3():
    return directed_path(3)


@pytest.fixture
def p4():
    return directed_path(4)


@pytest.fixture
def c3():
    return directed_cycle(3)


@pytest.fixture
def out_star():
    """Arcs 0->1 and 0->2"""
    return Digraph(3, [(0, 1), (0, 2)])


@pytest.fixture
def digraph_file(tmp_path):
    """Write a digraph (or raw text) to a file and return its path"""
    counter = [0]

    def write(D_or_text):
        counter[0] += 1
        path = tmp_path / f"digraph_{counter[0]}.txt"
        text = D_or_text if isinstance(D_or_text, str) else format_digraph(D_or_text)
        path.write_text(text)
        return str(path)

    return write
