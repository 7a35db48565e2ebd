"""Budowa instancji, generatora i harmonogramu z konfiguracji eksperymentu."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import structlog

from poisson_eigenpath.dynamics.models import Generator, GeneratorKind
from poisson_eigenpath.dynamics.phases import (
    FejerDistribution,
    PhaseDistribution,
    TabulatedDistribution,
)
from poisson_eigenpath.linalg.serialization import (
    load_matrix_file,
    matrix_from_json,
    vector_from_json,
)
from poisson_eigenpath.paths.base import GapModel, OperatorPath, numerical_gap_model
from poisson_eigenpath.paths.hamiltonians import (
    SolutionExtractor,
    grover_path,
    linear_path,
    qlsp_path,
    random_qlsp_instance,
)
from poisson_eigenpath.paths.unitaries import (
    exp_path,
    qubitised_path,
    scale_path,
    trotter_gap_model,
    trotter_path,
)
from poisson_eigenpath.schedules.assumption import certified
from poisson_eigenpath.schedules.bounds import BoundReport, adaptive_schedule, eval_bound
from poisson_eigenpath.schedules.constants import TheoremId, compute_C
from poisson_eigenpath.schedules.schedule import Schedule
from poisson_eigenpath.shared.errors import InstanceError
from poisson_eigenpath.spectral.windows import SpectralWindow, ranked_interval_window

from .config import (
    AdaptiveScheduleConfig,
    BoundsConfig,
    CustomInstanceConfig,
    ExperimentConfig,
    GroverInstanceConfig,
    JumpGeneratorConfig,
    PhaseGeneratorConfig,
    QlspInstanceConfig,
    TabulatedPhaseConfig,
)

logger = structlog.get_logger(__name__)

UNITARY_SCALE = 0.5
DEFAULT_P = 1.5


class MissingInitialState(InstanceError):
    """Śledzona przestrzeń ma wymiar > 1, a stan początkowy nie został podany."""


@dataclass(frozen=True, slots=True, eq=False)
class Instance:
    """Ścieżka hermitowska H(s) z modelem przerwy."""

    path: OperatorPath
    gap_model: GapModel
    label: str
    size: float
    extractor: SolutionExtractor | None = None


@dataclass(frozen=True, slots=True, eq=False)
class Setup:
    """Wszystko poza harmonogramem.

    `gap_model` służy do stałej C i harmonogramu adaptacyjnego, a
    `bound_gap_model` do ograniczenia liczonego z modelem przerwy.
    """

    kind: GeneratorKind
    theorem: TheoremId
    instance: Instance
    generator_path: OperatorPath
    bound_path: OperatorPath
    gap_model: GapModel
    bound_gap_model: GapModel
    projector_source: OperatorPath | None = None
    phi: PhaseDistribution | None = None
    h: float | None = None

    def generator(self, schedule: Schedule) -> Generator:
        if self.kind is GeneratorKind.LIOUVILLE:
            return Generator.liouville(self.generator_path, schedule)
        if self.kind is GeneratorKind.JUMP:
            return Generator.jump(
                self.generator_path, schedule, projector_source=self.projector_source
            )
        return Generator.phase_randomisation(
            self.generator_path, schedule, self.instance.gap_model, self.phi
        )

    def initial_state(self) -> np.ndarray:
        state = self.generator_path.initial_state()
        if state is None:
            raise MissingInitialState(
                f"Ścieżka {self.generator_path.name!r} nie ma stanu początkowego"
            )
        return state


# ----------------------------------------------------------------------
# Instancje
# ----------------------------------------------------------------------


def _grover(cfg: GroverInstanceConfig, p: float) -> Instance:
    path, model = grover_path(cfg.N, cfg.marked, subspace=cfg.subspace, p=p)
    return Instance(path=path, gap_model=model, label="grover", size=cfg.N / len(cfg.marked))


def _qlsp(cfg: QlspInstanceConfig, p: float) -> Instance:
    if cfg.random is not None:
        rng = np.random.default_rng(cfg.random.seed)
        A, b = random_qlsp_instance(cfg.random.dimension, cfg.random.kappa, rng)
        if cfg.b is not None:
            b = vector_from_json(cfg.b)
    else:
        if cfg.matrix_file is not None:
            A = load_matrix_file(cfg.matrix_file)
        elif isinstance(cfg.matrix, dict):
            A = matrix_from_json(cfg.matrix)
        else:
            A = np.asarray(cfg.matrix, dtype=np.complex128)
        assert cfg.b is not None
        b = vector_from_json(cfg.b)
    path, model, extractor = qlsp_path(A, b, cfg.kappa_hint, p=p)
    kappa = float(path.metadata.get("kappa", cfg.kappa_hint or 0.0))
    return Instance(path=path, gap_model=model, label="qlsp", size=kappa, extractor=extractor)


def _tracked_state(path: OperatorPath) -> np.ndarray:
    projector = path.projector(0.0).P
    values, vectors = np.linalg.eigh(projector)
    if int(np.sum(values > 0.5)) != 1:
        raise MissingInitialState(
            "Śledzona przestrzeń w s = 0 ma wymiar > 1; podaj instance.initial_state"
        )
    return np.asarray(vectors[:, -1], dtype=np.complex128)


def _custom(cfg: CustomInstanceConfig, p: float) -> Instance:
    H0 = load_matrix_file(cfg.H0_file)
    H1 = load_matrix_file(cfg.H1_file)
    window = cfg.window
    if window.kind == "interval":
        fixed = SpectralWindow.interval(window.lower, window.upper)
        path = linear_path(H0, H1, lambda s: fixed, metadata={"name": "custom"})
    else:
        first = np.asarray(H0, dtype=np.complex128)
        last = np.asarray(H1, dtype=np.complex128)
        path = linear_path(
            H0,
            H1,
            ranked_interval_window(lambda s: (1 - s) * first + s * last, window.ranks),
            metadata={"name": "custom"},
        )
    if cfg.initial_state is not None:
        state = vector_from_json(cfg.initial_state)
        state = state / np.linalg.norm(state)
    else:
        state = _tracked_state(path)
    path = path.with_metadata(initial_state=state)
    return Instance(path=path, gap_model=numerical_gap_model(path, p=p), label="custom", size=0.0)


def build_instance(config: ExperimentConfig) -> Instance:
    p = config.schedule.p if isinstance(config.schedule, AdaptiveScheduleConfig) else DEFAULT_P
    instance_cfg = config.instance
    if isinstance(instance_cfg, GroverInstanceConfig):
        return _grover(instance_cfg, p)
    if isinstance(instance_cfg, QlspInstanceConfig):
        return _qlsp(instance_cfg, p)
    return _custom(instance_cfg, p)


# ----------------------------------------------------------------------
# Generatory
# ----------------------------------------------------------------------


def _phase_distribution(phi: Any) -> PhaseDistribution:
    if isinstance(phi, TabulatedPhaseConfig):
        return TabulatedDistribution(
            grid=np.asarray(phi.grid, dtype=float),
            density=np.asarray(phi.density, dtype=float),
            name=phi.name,
        )
    return FejerDistribution()


def _jump_setup(cfg: JumpGeneratorConfig, instance: Instance) -> Setup:
    hamiltonian = instance.path
    if cfg.unitary == "trotter":
        assert cfg.h is not None
        unitary = trotter_path(
            hamiltonian.value(0.0),
            hamiltonian.value(1.0),
            cfg.h,
            cfg.order,
            window_fn=hamiltonian.window_fn,
        ).with_metadata(initial_state=hamiltonian.initial_state())
        step_model = trotter_gap_model(instance.gap_model, cfg.h)
        if cfg.order == 1:
            theorem, bound_path, bound_model = TheoremId.TROTTER, hamiltonian, instance.gap_model
        else:
            theorem, bound_path, bound_model = TheoremId.DISCRETE, unitary, step_model
        return Setup(
            kind=GeneratorKind.JUMP,
            theorem=theorem,
            instance=instance,
            generator_path=unitary,
            bound_path=bound_path,
            gap_model=step_model,
            bound_gap_model=bound_model,
            h=cfg.h,
            projector_source=hamiltonian,
        )

    scaled = scale_path(hamiltonian, UNITARY_SCALE)
    model = instance.gap_model.scaled(UNITARY_SCALE)
    if cfg.unitary == "qubitised":
        unitary, theorem = qubitised_path(scaled), TheoremId.QUBITISED
    else:
        unitary, theorem = exp_path(scaled), TheoremId.EXP_STEP
    return Setup(
        kind=GeneratorKind.JUMP,
        theorem=theorem,
        instance=instance,
        generator_path=unitary,
        bound_path=scaled,
        gap_model=model,
        bound_gap_model=model,
        projector_source=scaled,
    )


def build_setup(config: ExperimentConfig, instance: Instance | None = None) -> Setup:
    """Ścieżka generatora, twierdzenie i model przerwy dla konfiguracji.

    Kroki e^{−iπH/2} i kubityzacja działają na ½·H, a model przerwy jest
    skalowany tak samo.
    """

    instance = instance or build_instance(config)
    gen_cfg = config.generator
    if isinstance(gen_cfg, JumpGeneratorConfig):
        setup = _jump_setup(gen_cfg, instance)
    elif isinstance(gen_cfg, PhaseGeneratorConfig):
        setup = Setup(
            kind=GeneratorKind.PHASE_RANDOMISATION,
            theorem=TheoremId.PHASE_RANDOMISATION,
            instance=instance,
            generator_path=instance.path,
            bound_path=instance.path,
            gap_model=instance.gap_model,
            bound_gap_model=instance.gap_model,
            phi=_phase_distribution(gen_cfg.phi),
        )
    else:
        setup = Setup(
            kind=GeneratorKind.LIOUVILLE,
            theorem=TheoremId.LIOUVILLE,
            instance=instance,
            generator_path=instance.path,
            bound_path=instance.path,
            gap_model=instance.gap_model,
            bound_gap_model=instance.gap_model,
        )
    logger.debug(
        "setup-built",
        instance=instance.label,
        generator=setup.kind.value,
        theorem=setup.theorem.value,
        dimension=setup.generator_path.dimension,
    )
    return setup


# ----------------------------------------------------------------------
# Harmonogramy i ograniczenia
# ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class AdaptiveConstants:
    """Certyfikowany model przerwy i stała C harmonogramu adaptacyjnego."""

    gap_model: GapModel
    C: float

    def to_dict(self) -> dict[str, Any]:
        return {"C": self.C, "gap_model": self.gap_model.to_dict()}


def adaptive_constants(setup: Setup, p: float, bounds: BoundsConfig) -> AdaptiveConstants:
    model = certified(setup.gap_model, p)
    C = compute_C(setup.theorem, setup.bound_path, model, h=setup.h, points=bounds.points)
    return AdaptiveConstants(gap_model=model, C=C)


def uniform_constants(members: list[AdaptiveConstants]) -> list[AdaptiveConstants]:
    """Stałe B i C wspólne dla rodziny: maksimum po członkach."""

    B_p = max(float(member.gap_model.B_p or 0.0) for member in members)
    B_3mp = max(float(member.gap_model.B_3mp or 0.0) for member in members)
    C = max(member.C for member in members)
    return [
        AdaptiveConstants(
            gap_model=member.gap_model.with_constants(p=member.gap_model.p, B_p=B_p, B_3mp=B_3mp),
            C=C,
        )
        for member in members
    ]


def build_schedule(
    config: ExperimentConfig, setup: Setup, constants: AdaptiveConstants | None = None
) -> tuple[Schedule, AdaptiveConstants | None]:
    schedule_cfg = config.schedule
    if not isinstance(schedule_cfg, AdaptiveScheduleConfig):
        return Schedule.constant(schedule_cfg.value), None
    constants = constants or adaptive_constants(setup, schedule_cfg.p, config.bounds)
    schedule = adaptive_schedule(
        setup.theorem, constants.gap_model, schedule_cfg.epsilon, constants.C
    )
    return schedule, constants


def evaluate_bound(
    setup: Setup,
    schedule: Schedule,
    bounds: BoundsConfig,
    measured_infidelity: float,
    constants: AdaptiveConstants | None = None,
) -> BoundReport:
    model = setup.bound_gap_model
    if constants is not None and setup.bound_gap_model is setup.gap_model:
        model = constants.gap_model
    return eval_bound(
        setup.theorem,
        setup.bound_path,
        schedule,
        gap_model=model,
        h=setup.h,
        points=bounds.points,
        use_gap_model=bounds.use_gap_model,
        measured_infidelity=measured_infidelity,
    )


__all__ = [
    "AdaptiveConstants",
    "Instance",
    "MissingInitialState",
    "Setup",
    "adaptive_constants",
    "build_instance",
    "build_schedule",
    "build_setup",
    "evaluate_bound",
    "uniform_constants",
]
