import json

import pytest

from commands.base import RunContext, collect_instance_paths, resolve_config
from config import ExperimentConfig, PpoConfig, Settings
from errors import ConfigError


def test_defaults():
    config = ExperimentConfig().validate()
    assert config.profile == "nsga2/bi"
    assert config.num_epochs == 100
    ppo = config.ppo
    assert (ppo.gamma, ppo.gae_lambda, ppo.clip_ratio, ppo.learning_rate) == (0.99, 0.95, 0.2, 3e-4)
    assert (ppo.update_epochs, ppo.minibatch_size, ppo.steps_per_epoch, ppo.num_parallel_envs) == (10, 64, 500, 5)
    assert (ppo.value_coef, ppo.entropy_coef) == (0.5, 0.0)


def test_unknown_fields_are_named():
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_dict({"popsize": 3, "ppo": {"gama": 0.9}})
    assert excinfo.value.problems == ["popsize: unknown field", "ppo.gama: unknown field"]


def test_mistyped_values_are_named():
    with pytest.raises(ConfigError) as excinfo:
        ExperimentConfig.from_dict(
            {"population_size": "50", "budget_feature": 1, "instance_dirs": [3], "ppo": {"learning_rate": "3e-4", "update_epochs": True}}
        )
    fields = [message.split(":")[0] for message in excinfo.value.problems]
    assert fields == ["population_size", "budget_feature", "instance_dirs", "ppo.learning_rate", "ppo.update_epochs"]


def test_integers_are_accepted_for_float_fields():
    config = ExperimentConfig.from_dict({"ppo": {"learning_rate": 1, "gamma": 1}})
    assert config.ppo.learning_rate == 1 and config.validate() is config


@pytest.mark.parametrize("payload", ["[1, 2]", "\"fjsp\"", "{\"ppo\": [0.9]}"])
def test_non_object_config_file_is_a_config_error(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(payload)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(str(path))


def test_validate_reports_every_problem():
    config = ExperimentConfig(problem="cvrp", objective_set="tri", population_size=1, ppo=PpoConfig(clip_ratio=1.5))
    with pytest.raises(ConfigError) as excinfo:
        config.validate()
    fields = [message.split(":")[0] for message in excinfo.value.problems]
    assert fields == ["objective_set", "population_size", "ppo.clip_ratio"]


def test_mopso_needs_cvrp():
    with pytest.raises(ConfigError, match="mopso requires problem=cvrp"):
        ExperimentConfig(algorithm="mopso").validate()
    ExperimentConfig(problem="cvrp", algorithm="mopso").validate()


def test_with_overrides_skips_none_and_reaches_ppo():
    config = ExperimentConfig().with_overrides({"generations": 7, "problem": None, "ppo.steps_per_epoch": 100})
    assert config.generations == 7
    assert config.problem == "fjsp"
    assert config.ppo.steps_per_epoch == 100
    assert config.num_epochs == 500


def test_round_trip_through_file(tmp_path):
    path = tmp_path / "config.json"
    original = ExperimentConfig(problem="cvrp", instance_dirs=["a", "b"], ppo=PpoConfig(learning_rate=1e-3))
    path.write_text(json.dumps(original.to_dict()))
    assert ExperimentConfig.from_file(str(path)) == original
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(str(tmp_path / "missing.json"))


def test_settings_from_env(monkeypatch):
    monkeypatch.setenv("GSMODAC_SEED", "17")
    monkeypatch.setenv("GSMODAC_THREADS", "3")
    monkeypatch.setenv("GSMODAC_LOG_LEVEL", "debug")
    settings = Settings.from_env()
    assert (settings.master_seed, settings.threads, settings.log_level) == (17, 3, "DEBUG")


@pytest.mark.parametrize("name, value", [("GSMODAC_SEED", "abc"), ("GSMODAC_THREADS", "0")])
def test_settings_reject_bad_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(ValueError, match=name):
        Settings.from_env()


def test_precedence_cli_over_file_over_env(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"generations": 9, "seed": 4, "ppo": {"gamma": 0.9}}))
    settings = Settings(master_seed=2)

    from_env = resolve_config(RunContext(settings=settings, seed=None, threads=1))
    assert from_env.seed == 2

    from_file = resolve_config(RunContext(settings=settings, seed=None, threads=1, config_path=str(path)))
    assert (from_file.seed, from_file.generations, from_file.ppo.gamma) == (4, 9, 0.9)
    assert from_file.ppo.clip_ratio == 0.2

    from_cli = resolve_config(RunContext(settings=settings, seed=8, threads=1, config_path=str(path)), {"generations": 3})
    assert (from_cli.seed, from_cli.generations) == (8, 3)


@pytest.mark.parametrize("payload", [[1, 2], {"ppo": [0.9]}, {"population_size": "50"}])
def test_resolve_config_rejects_malformed_file(tmp_path, payload):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ConfigError):
        resolve_config(RunContext(settings=Settings(), seed=None, threads=1, config_path=str(path)))


def test_collect_instance_paths(fjsp_dir):
    train = collect_instance_paths([str(fjsp_dir)], split="train")
    assert [p.name for p in train] == ["fjsp_3j3m_0000.json", "fjsp_3j3m_0001.json"]
    everything = collect_instance_paths([str(fjsp_dir)], split=None)
    assert len(everything) == 4
    single = fjsp_dir / "fjsp_3j3m_0003.json"
    assert collect_instance_paths([str(single)], split="test") == [single]
