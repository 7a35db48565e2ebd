"""Testy budowy instancji, generatorów i harmonogramów z konfiguracji."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest

from poisson_eigenpath.dynamics import GeneratorKind, TabulatedDistribution, fejer_density
from poisson_eigenpath.experiments import (
    AdaptiveConstants,
    ExperimentConfig,
    MissingInitialState,
    build_instance,
    build_schedule,
    build_setup,
    uniform_constants,
)
from poisson_eigenpath.linalg.serialization import matrix_to_json
from poisson_eigenpath.paths import grover_gap_model
from poisson_eigenpath.schedules import ScheduleKind, TheoremId, certified


def _config(instance: dict, generator: dict | None = None, schedule: dict | None = None):
    return ExperimentConfig.model_validate(
        {
            "instance": instance,
            "generator": generator or {"kind": "liouville"},
            "schedule": schedule or {"kind": "constant", "value": 10.0},
            "bounds": {"points": 101},
        }
    )


def _custom_files(tmp_path: Path) -> tuple[Path, Path]:
    theta = math.pi / 3
    rotation = np.eye(3)
    rotation[:2, :2] = [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]]
    H0 = np.diag([0.0, 1.0, 2.0])
    H1 = rotation @ H0 @ rotation.T
    first, last = tmp_path / "H0.json", tmp_path / "H1.json"
    first.write_text(json.dumps(matrix_to_json(H0)), encoding="utf-8")
    last.write_text(json.dumps(matrix_to_json(H1)), encoding="utf-8")
    return first, last


GROVER = {"kind": "grover", "N": 8, "marked": [2]}


def test_custom_instance_uses_tracked_eigenvector(tmp_path: Path) -> None:
    H0, H1 = _custom_files(tmp_path)
    instance = build_instance(_config({"kind": "custom", "H0_file": str(H0), "H1_file": str(H1)}))

    state = instance.path.initial_state()
    assert instance.path.dimension == 3
    assert abs(state[0]) == pytest.approx(1.0)
    assert instance.gap_model.g0m > 0


def test_custom_degenerate_window_needs_initial_state(tmp_path: Path) -> None:
    H0, H1 = _custom_files(tmp_path)
    instance = {
        "kind": "custom",
        "H0_file": str(H0),
        "H1_file": str(H1),
        "window": {"kind": "interval", "lower": -0.5, "upper": 1.5},
    }

    with pytest.raises(MissingInitialState):
        build_instance(_config(instance))

    instance["initial_state"] = [1.0, 1.0, 0.0]
    state = build_instance(_config(instance)).path.initial_state()
    np.testing.assert_allclose(state, np.array([1.0, 1.0, 0.0]) / math.sqrt(2))


def test_qlsp_instance_has_solution_extractor() -> None:
    instance = build_instance(
        _config(
            {
                "kind": "qlsp",
                "matrix": [[1.0, 0.2], [0.2, 0.5]],
                "b": [1.0, 0.0],
            }
        )
    )

    assert instance.label == "qlsp"
    assert instance.extractor is not None
    assert instance.size >= 2.0


@pytest.mark.parametrize(
    "generator, theorem, dimension",
    [
        ({"kind": "liouville"}, TheoremId.LIOUVILLE, 8),
        ({"kind": "phase_rand"}, TheoremId.PHASE_RANDOMISATION, 8),
        ({"kind": "jump", "unitary": "exp"}, TheoremId.EXP_STEP, 8),
        ({"kind": "jump", "unitary": "qubitised"}, TheoremId.QUBITISED, 16),
        ({"kind": "jump", "unitary": "trotter", "h": 0.05}, TheoremId.TROTTER, 8),
        ({"kind": "jump", "unitary": "trotter", "h": 0.05, "order": 2}, TheoremId.DISCRETE, 8),
    ],
)
def test_setup_selects_theorem(generator: dict, theorem: TheoremId, dimension: int) -> None:
    config = _config({**GROVER, "subspace": "full"}, generator)

    setup = build_setup(config)

    assert setup.theorem is theorem
    assert setup.generator_path.dimension == dimension
    assert setup.initial_state().shape == (dimension,)


def test_unitary_setups_scale_gap_model() -> None:
    setup = build_setup(_config(GROVER, {"kind": "jump", "unitary": "exp"}))

    assert setup.kind is GeneratorKind.JUMP
    assert setup.gap_model.g0m == pytest.approx(0.5 * setup.instance.gap_model.g0m)
    assert setup.projector_source is not None


@pytest.mark.parametrize("order", [1, 2])
def test_trotter_fidelity_tracks_hamiltonian_projector(order: int) -> None:
    generator = {"kind": "jump", "unitary": "trotter", "h": 0.2, "order": order}
    config = _config(GROVER, generator)
    setup = build_setup(config)
    schedule, _ = build_schedule(config, setup)
    gen = setup.generator(schedule)

    assert setup.projector_source is setup.instance.path
    for s in (0.25, 0.5, 0.75):
        np.testing.assert_allclose(
            gen.tracking_projector(s), setup.instance.path.projector(s).P, atol=1e-12
        )


def test_tabulated_phase_distribution() -> None:
    grid = np.linspace(-50.0, 50.0, 2001)
    phi = {"grid": grid.tolist(), "density": fejer_density(grid).tolist(), "name": "fejer-table"}

    setup = build_setup(_config(GROVER, {"kind": "phase_rand", "phi": phi}))

    assert isinstance(setup.phi, TabulatedDistribution)


def test_build_schedule_constant_and_adaptive() -> None:
    constant = _config(GROVER)
    schedule, constants = build_schedule(constant, build_setup(constant))
    assert schedule.kind is ScheduleKind.CONSTANT
    assert constants is None

    adaptive = _config(GROVER, schedule={"kind": "adaptive", "p": 1.5, "epsilon": 0.2})
    schedule, constants = build_schedule(adaptive, build_setup(adaptive))
    assert schedule.kind is ScheduleKind.ADAPTIVE
    assert constants is not None
    assert constants.gap_model.certified
    assert constants.C > 0


def test_uniform_constants_take_family_maximum() -> None:
    members = [
        AdaptiveConstants(gap_model=certified(grover_gap_model(N, 1)), C=C)
        for N, C in ((4, 2.0), (16, 3.0))
    ]

    uniform = uniform_constants(members)

    assert all(member.C == 3.0 for member in uniform)
    B_p = max(member.gap_model.B_p for member in members)
    assert all(member.gap_model.B_p == B_p for member in uniform)
