from pathlib import Path

import pytest

from deepgraph import Budget, Config, ConfigError


@pytest.mark.config
def test_defaults() -> None:
    config = Config.from_env({})
    assert config.budget == Budget()
    assert config.cache_dir == Path(".deepgraph-cache")
    assert config.grid.primes == (2, 3, 5)
    assert config.grid.heisenberg == ((3, 1), (5, 1), (3, 2))
    assert config.log_level == "WARNING"


@pytest.mark.config
def test_environment_and_flags(tmp_path: Path) -> None:
    env = {
        "DEEPGRAPH_CACHE_DIR": str(tmp_path / "c"),
        "DEEPGRAPH_MAX_COSETS": "5000",
        "DEEPGRAPH_TIME_LIMIT": "2.5",
        "DEEPGRAPH_LOG_LEVEL": "debug",
    }
    config = Config.from_env(env)
    assert config.budget.max_cosets == 5000
    assert config.budget.time_limit == 2.5
    assert config.log_level == "DEBUG"

    flagged = config.with_overrides(max_cosets=7, max_vertices=None, seed=11, output_format="json")
    assert flagged.budget.max_cosets == 7
    assert flagged.budget.max_vertices == config.budget.max_vertices
    assert flagged.grid.seed == 11
    assert flagged.output_format == "json"


@pytest.mark.config
def test_invalid() -> None:
    with pytest.raises(ConfigError):
        Config.from_env({"DEEPGRAPH_MAX_COSETS": "many"})
    with pytest.raises(ConfigError):
        Config.from_env({"DEEPGRAPH_MAX_VERTICES": "0"})
    with pytest.raises(ConfigError):
        Config().with_overrides(output_format="png")


@pytest.mark.config
def test_cache_dir_is_file(tmp_path: Path) -> None:
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ConfigError):
        Config(cache_dir=blocker).validate()
    made = Config(cache_dir=tmp_path / "a" / "b").ensure_cache_dir()
    assert made.is_dir()
