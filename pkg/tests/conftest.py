import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stemma.archive import open_store
from stemma.domains import Registry


@pytest.fixture
def registry():
    return Registry.with_builtins()


@pytest.fixture
def store(tmp_path, registry):
    archive = open_store(str(tmp_path / "store"), registry)
    yield archive
    archive.close()


@pytest.fixture
def rng():
    return random.Random(1234)
