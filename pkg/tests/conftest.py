from pathlib import Path

import pytest

from deepgraph import Config, CoverCache


@pytest.fixture
def config(tmp_path: Path) -> Config:
    return Config(cache_dir=tmp_path / "cache")


@pytest.fixture
def cache(config: Config) -> CoverCache:
    return CoverCache.from_config(config)
