"""Testy walidacji konfiguracji, nadpisań i presetów."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from poisson_eigenpath.experiments import (
    ConfigNotFound,
    ExperimentConfig,
    InvalidOverride,
    UnknownPreset,
    apply_overrides,
    load_config,
    load_payload,
    parse_override,
    preset,
    preset_names,
)


def _grover_payload() -> dict:
    return {
        "instance": {"kind": "grover", "N": 8, "marked": [1]},
        "generator": {"kind": "liouville"},
        "schedule": {"kind": "constant", "value": 10.0},
    }


def _write(tmp_path: Path, payload: dict) -> Path:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_minimal_config_gets_defaults() -> None:
    config = ExperimentConfig.model_validate(_grover_payload())

    assert config.execution.kind == "ode"
    assert config.outputs.formats == ["json", "csv", "jsonl"]
    assert config.bounds.points == 1001
    assert config.instance.subspace == "auto"


@pytest.mark.parametrize(
    "dotted, value",
    [
        ("schedule", {"kind": "adaptive", "epsilon": 1.5}),
        ("schedule", {"kind": "adaptive", "epsilon": 0.1, "p": 2.5}),
        ("schedule", {"kind": "constant", "value": -1.0}),
        ("instance", {"kind": "grover", "N": 8, "marked": [8]}),
        ("instance", {"kind": "grover", "N": 4, "marked": [0, 0]}),
        ("generator", {"kind": "jump", "unitary": "trotter"}),
        ("generator", {"kind": "teleport"}),
    ],
)
def test_invalid_fields_are_rejected(dotted: str, value: dict) -> None:
    payload = _grover_payload()
    payload[dotted] = value

    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(payload)


def test_unknown_keys_are_rejected() -> None:
    payload = _grover_payload()
    payload["extra"] = 1

    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(payload)


def test_qlsp_requires_single_matrix_source() -> None:
    payload = _grover_payload()
    payload["instance"] = {
        "kind": "qlsp",
        "matrix": [[1.0, 0.0], [0.0, 2.0]],
        "random": {"kappa": 4},
        "b": [1.0, 0.0],
    }

    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(payload)


def test_parse_override_falls_back_to_string() -> None:
    assert parse_override("schedule.epsilon=0.05") == ("schedule.epsilon", 0.05)
    assert parse_override("instance.marked=[1,2]") == ("instance.marked", [1, 2])
    assert parse_override("outputs.stem=grover") == ("outputs.stem", "grover")
    with pytest.raises(InvalidOverride):
        parse_override("schedule.epsilon")


def test_apply_overrides_does_not_mutate_source() -> None:
    payload = _grover_payload()
    updated = apply_overrides(payload, ["instance.N=16", "bounds.points=51"])

    assert payload["instance"]["N"] == 8
    assert updated["instance"]["N"] == 16
    assert updated["bounds"] == {"points": 51}


def test_load_config_applies_cli_precedence(tmp_path: Path) -> None:
    payload = _grover_payload()
    payload["execution"] = {"kind": "trajectories", "n_traj": 10, "master_seed": 1}
    path = _write(tmp_path, payload)

    config = load_config(
        path, overrides=["execution.master_seed=5"], seed=9, threads=3, out=tmp_path / "out"
    )

    assert config.execution.master_seed == 9
    assert config.execution.threads == 3
    assert config.outputs.directory == tmp_path / "out"


def test_seed_flag_ignored_for_ode_execution(tmp_path: Path) -> None:
    config = load_config(_write(tmp_path, _grover_payload()), seed=9, threads=3)

    assert config.execution.kind == "ode"


def test_load_payload_errors(tmp_path: Path) -> None:
    with pytest.raises(ConfigNotFound):
        load_payload(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigNotFound):
        load_payload(broken)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigNotFound):
        load_payload(listing)


def test_presets_validate() -> None:
    names = preset_names()

    assert "grover-liouville-constant" in names
    for name in names:
        config = load_config(f"preset:{name}")
        assert config.name == name


def test_preset_returns_independent_copy() -> None:
    first = preset("grover-exp-adaptive")
    first["instance"]["N"] = 1024

    assert preset("grover-exp-adaptive")["instance"]["N"] == 8
    with pytest.raises(UnknownPreset):
        preset("does-not-exist")


def test_updated_revalidates() -> None:
    config = ExperimentConfig.model_validate(_grover_payload())

    assert config.updated({"instance.N": 32}).instance.N == 32
    with pytest.raises(ValidationError):
        config.updated({"schedule.value": -3})
