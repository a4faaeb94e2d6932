"""
Pytest configuration and fixtures for the conley-surf test suite.

Provides:
- Named standard blocks (the corpus) and a corpus-wide parametrized fixture
- Small surfaces used by the complex and homology tests
- Block files written to tmp_path for CLI tests
- Settings reset between tests
"""

from pathlib import Path
from typing import Callable, Generator

import pytest

from conley_surf.core.config import get_settings, reload_settings
from conley_surf.models.block import IsolatingBlock, save_block
from conley_surf.models.surface import SurfaceComplex
from conley_surf.services.builders import (
    annulus,
    moebius_strip,
    pants,
    polygon_disk,
    punctured_torus,
    recipe_names,
    standard,
)

CORPUS = recipe_names()

# Blocks whose regularization needs no spine
REGULAR_CORPUS = [name for name in CORPUS if "nonregular" not in name]


# ============================================================================
# SETTINGS
# ============================================================================

@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> Generator[None, None, None]:
    """Isolate every test from the developer's environment and .env file."""
    for key in (
        "CONLEY_SURF_COLOR",
        "CONLEY_SURF_LOG_LEVEL",
        "CONLEY_SURF_LOG_FILE",
        "CONLEY_SURF_JOBS",
        "CONLEY_SURF_REPORT_INDENT",
        "CONLEY_SURF_RANDOM_BUDGET",
        "CONLEY_SURF_MAX_SIMPLICES",
    ):
        monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)
    reload_settings()
    yield
    # the test may have left an invalid environment behind
    get_settings.cache_clear()


# ============================================================================
# SURFACES
# ============================================================================

@pytest.fixture
def hex_annulus() -> SurfaceComplex:
    """Six-vertex annulus: outer circle 0-1-2, inner circle 3-4-5."""
    return annulus(3)


@pytest.fixture
def octagon() -> SurfaceComplex:
    return polygon_disk(8)


@pytest.fixture
def moebius() -> SurfaceComplex:
    return moebius_strip()


@pytest.fixture
def holed_torus() -> SurfaceComplex:
    return punctured_torus(1)


@pytest.fixture
def pants_surface() -> SurfaceComplex:
    return pants()


@pytest.fixture
def single_triangle() -> SurfaceComplex:
    return SurfaceComplex(vertex_count=3, triangles=[(0, 1, 2)])


# ============================================================================
# BLOCKS
# ============================================================================

@pytest.fixture
def block() -> Callable[[str], IsolatingBlock]:
    """Factory for named standard blocks."""
    return standard


@pytest.fixture(params=CORPUS)
def corpus_block(request: pytest.FixtureRequest) -> IsolatingBlock:
    """Every standard block in turn."""
    return standard(request.param)


@pytest.fixture(params=REGULAR_CORPUS)
def regular_corpus_block(request: pytest.FixtureRequest) -> IsolatingBlock:
    return standard(request.param)


@pytest.fixture
def block_file(tmp_path: Path) -> Callable[[str], Path]:
    """Write a named standard block to tmp_path and return its path."""
    def write(name: str) -> Path:
        return save_block(standard(name), tmp_path / f"{name}.json")

    return write
