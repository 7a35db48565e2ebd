"""Przebiegi eksperymentów, zapis wyników i przemiatania parametrów."""

from __future__ import annotations

import math
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path
from threading import Event
from typing import Any, Iterable, Sequence

import numpy as np
import structlog

from poisson_eigenpath.dynamics.cost import accumulate_cost
from poisson_eigenpath.dynamics.integrator import fidelity, integrate
from poisson_eigenpath.dynamics.models import (
    CostRecord,
    DensityMatrix,
    GeneratorKind,
    RunResult,
    StepPolicy,
)
from poisson_eigenpath.dynamics.phases import FEJER_MODEL_T0
from poisson_eigenpath.paths.hamiltonians import SolutionExtractor
from poisson_eigenpath.reporting import DefaultReportExporter, ExportFormat, ReportExporter
from poisson_eigenpath.schedules.bounds import BoundReport, adaptive_cost_bound
from poisson_eigenpath.schedules.schedule import Schedule
from poisson_eigenpath.shared.config import RuntimeSettings
from poisson_eigenpath.shared.errors import InstanceError
from poisson_eigenpath.stochastic.ensemble import MonteCarloResult, TrajectorySpec, monte_carlo

from .builders import (
    AdaptiveConstants,
    Setup,
    adaptive_constants,
    build_schedule,
    build_setup,
    evaluate_bound,
    uniform_constants,
)
from .config import (
    AdaptiveScheduleConfig,
    ExperimentConfig,
    GroverInstanceConfig,
    JumpGeneratorConfig,
    OdeExecutionConfig,
    QlspInstanceConfig,
)

logger = structlog.get_logger(__name__)

RUN_CSV_FIELDS = ["s", "fidelity"]
SWEEP_CSV_FIELDS = [
    "value",
    "cost",
    "final_fidelity",
    "infidelity",
    "bound",
    "satisfied",
    "cost_bound",
    "solution_overlap",
    "slope",
]
SWEEP_AXES = ("N", "M", "kappa", "epsilon", "lambda", "p", "h")
SLOPE_AXES = frozenset({"N", "kappa"})


class InvalidSweep(InstanceError):
    """Oś przemiatania nie pasuje do rodzaju instancji, generatora lub harmonogramu."""


# ----------------------------------------------------------------------
# Pojedynczy przebieg
# ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True, eq=False)
class RunOutcome:
    config: ExperimentConfig
    setup: Setup
    schedule: Schedule
    bound: BoundReport
    cost: CostRecord
    final_fidelity: float
    samples: tuple[tuple[float, float], ...]
    run_result: RunResult | None = None
    monte_carlo: MonteCarloResult | None = None
    constants: AdaptiveConstants | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    @property
    def infidelity(self) -> float:
        return 1.0 - self.final_fidelity

    @property
    def violated(self) -> bool:
        return self.bound.applicable and self.bound.satisfied is False

    @property
    def primary_cost(self) -> float:
        return self.cost.primary(self.setup.kind)

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "name": self.config.name,
            "instance": self.config.instance.model_dump(mode="json"),
            "generator": self.config.generator.model_dump(mode="json"),
            "execution": self.config.execution.model_dump(mode="json"),
            "theorem_id": self.setup.theorem.value,
            "schedule": self.schedule.to_dict(),
            "final_fidelity": self.final_fidelity,
            "infidelity": self.infidelity,
            "cost": self.cost.to_dict(),
        }
        payload.update(self.extras)
        if self.run_result is not None:
            result = self.run_result.to_dict()
            payload["diagnostics"] = result["diagnostics"]
        if self.monte_carlo is not None:
            payload["monte_carlo"] = self.monte_carlo.to_dict()
        return payload

    def csv_fieldnames(self) -> list[str]:
        return list(RUN_CSV_FIELDS)

    def csv_rows(self) -> Iterable[dict[str, Any]]:
        for s, value in self.samples:
            yield {"s": s, "fidelity": value}

    def json_lines(self) -> Iterable[dict[str, Any]]:
        if self.monte_carlo is None:
            return iter(())
        return self.monte_carlo.iter_records()

    def to_markdown(self) -> str:
        lines = [f"# Run: {self.config.name}", ""]
        lines.append(f"- generator: {self.setup.kind.value}")
        lines.append(f"- theorem: {self.setup.theorem.value}")
        lines.append(f"- final fidelity: {self.final_fidelity:.6f}")
        lines.append(f"- bound: {self.bound.bound_value:.6g}")
        lines.append(f"- satisfied: {self.bound.satisfied}")
        lines.append(f"- cost: {self.primary_cost:.6g}")
        return "\n".join(lines) + "\n"


def _embedded_extractor(setup: Setup, extractor: SolutionExtractor) -> SolutionExtractor:
    embedding = setup.generator_path.metadata.get("embedding")
    if embedding is None:
        return extractor
    V = np.asarray(embedding, dtype=np.complex128)
    return SolutionExtractor(target=V @ extractor.target)


def _cost_bound(
    config: ExperimentConfig, setup: Setup, constants: AdaptiveConstants | None
) -> float:
    schedule_cfg = config.schedule
    if constants is None or not isinstance(schedule_cfg, AdaptiveScheduleConfig):
        return math.nan
    value = adaptive_cost_bound(constants.gap_model, schedule_cfg.epsilon, constants.C)
    if setup.kind is GeneratorKind.PHASE_RANDOMISATION:
        value *= FEJER_MODEL_T0
    return value


def run_experiment(
    config: ExperimentConfig,
    settings: RuntimeSettings | None = None,
    *,
    setup: Setup | None = None,
    constants: AdaptiveConstants | None = None,
    cancel_event: Event | None = None,
) -> RunOutcome:
    """Jeden przebieg: równanie marginalne albo zespół trajektorii, plus raport ograniczenia."""

    settings = settings or RuntimeSettings.from_env()
    setup = setup or build_setup(config)
    schedule, constants = build_schedule(config, setup, constants)
    gen = setup.generator(schedule)
    psi0 = setup.initial_state()
    execution = config.execution

    run_result: RunResult | None = None
    ensemble: MonteCarloResult | None = None
    if isinstance(execution, OdeExecutionConfig):
        policy = StepPolicy(
            step_cap=execution.step_cap,
            rate_fraction=execution.rate_fraction,
            samples=execution.samples,
            check_doubling=execution.check_doubling,
        )
        run_result = integrate(gen, DensityMatrix.pure(psi0), policy)
        final_fidelity = run_result.final_fidelity
        final_state = run_result.final_state.matrix
        cost = run_result.cost
        samples = tuple(zip(run_result.sample_points, run_result.fidelities))
    else:
        ensemble = monte_carlo(
            TrajectorySpec.from_generator(gen, psi0),
            execution.n_traj,
            execution.master_seed,
            threads=execution.threads or settings.threads,
            cancel_event=cancel_event,
        )
        final_fidelity = ensemble.fidelity_mean
        final_state = ensemble.mean_state.matrix
        cost = accumulate_cost(gen)
        start = fidelity(DensityMatrix.pure(psi0), gen.tracking_projector(0.0))
        samples = ((0.0, start), (1.0, final_fidelity))

    extras: dict[str, Any] = {"cost_bound": _cost_bound(config, setup, constants)}
    if constants is not None:
        extras["constants"] = constants.to_dict()
    if setup.instance.extractor is not None:
        extractor = _embedded_extractor(setup, setup.instance.extractor)
        extras["solution_overlap"] = extractor(final_state)

    bound = evaluate_bound(setup, schedule, config.bounds, 1.0 - final_fidelity, constants)
    logger.info(
        "run-complete",
        name=config.name,
        generator=setup.kind.value,
        theorem=setup.theorem.value,
        final_fidelity=final_fidelity,
        bound=bound.bound_value,
        satisfied=bound.satisfied,
    )
    return RunOutcome(
        config=config,
        setup=setup,
        schedule=schedule,
        bound=bound,
        cost=cost,
        final_fidelity=final_fidelity,
        samples=samples,
        run_result=run_result,
        monte_carlo=ensemble,
        constants=constants,
        extras=extras,
    )


def write_outputs(outcome: RunOutcome, exporter: ReportExporter | None = None) -> list[Path]:
    """`<stem>.json`, `<stem>_bound.json`, `<stem>_fidelity.csv` i `<stem>_trajectories.jsonl`."""

    exporter = exporter or DefaultReportExporter()
    outputs = outcome.config.outputs
    directory = Path(outputs.directory)
    stem = outputs.stem
    written: list[Path] = []
    if "json" in outputs.formats:
        written.append(exporter.export(outcome, directory / f"{stem}.json", ExportFormat.JSON))
        written.append(
            exporter.export(
                outcome.bound,
                directory / f"{stem}_bound.json",
                ExportFormat.JSON,
            )
        )
    if "csv" in outputs.formats:
        written.append(
            exporter.export(outcome, directory / f"{stem}_fidelity.csv", ExportFormat.CSV)
        )
    if "jsonl" in outputs.formats and outcome.monte_carlo is not None:
        written.append(
            exporter.export(outcome, directory / f"{stem}_trajectories.jsonl", ExportFormat.JSONL)
        )
    if "md" in outputs.formats:
        written.append(exporter.export(outcome, directory / f"{stem}.md", ExportFormat.MARKDOWN))
    return written


# ----------------------------------------------------------------------
# Przemiatania
# ----------------------------------------------------------------------


def axis_assignments(config: ExperimentConfig, axis: str, value: float) -> dict[str, Any]:
    """Pola konfiguracji zmieniane przez jeden punkt przemiatania."""

    instance = config.instance
    schedule = config.schedule
    generator = config.generator
    if axis == "N" and isinstance(instance, GroverInstanceConfig):
        return {"instance.N": int(value)}
    if axis == "M" and isinstance(instance, GroverInstanceConfig):
        return {"instance.marked": list(range(int(value)))}
    if axis == "kappa" and isinstance(instance, QlspInstanceConfig):
        if instance.random is not None:
            return {"instance.random.kappa": float(value)}
        return {"instance.kappa_hint": float(value)}
    if axis in ("epsilon", "p") and isinstance(schedule, AdaptiveScheduleConfig):
        return {f"schedule.{axis}": float(value)}
    if axis == "lambda" and schedule.kind == "constant":
        return {"schedule.value": float(value)}
    trotter = isinstance(generator, JumpGeneratorConfig) and generator.unitary == "trotter"
    if axis == "h" and trotter:
        return {"generator.h": float(value)}
    raise InvalidSweep(
        f"Oś {axis!r} nie pasuje do instancji {instance.kind!r}, generatora "
        f"{generator.kind!r} i harmonogramu {schedule.kind!r}"
    )


@dataclass(frozen=True, slots=True)
class SweepRow:
    value: float
    cost: float
    final_fidelity: float
    bound: float
    satisfied: bool | None
    cost_bound: float
    solution_overlap: float | None = None

    @property
    def infidelity(self) -> float:
        return 1.0 - self.final_fidelity

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "cost": self.cost,
            "final_fidelity": self.final_fidelity,
            "infidelity": self.infidelity,
            "bound": self.bound,
            "satisfied": self.satisfied,
            "cost_bound": self.cost_bound,
            "solution_overlap": self.solution_overlap,
        }


@dataclass(frozen=True, slots=True)
class SweepResult:
    name: str
    axis: str
    rows: tuple[SweepRow, ...]
    slope: float | None = None
    uniform_constants: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "axis": self.axis,
            "slope": self.slope,
            "uniform_constants": self.uniform_constants,
            "rows": [row.to_dict() for row in self.rows],
        }

    def csv_fieldnames(self) -> list[str]:
        return list(SWEEP_CSV_FIELDS)

    def csv_rows(self) -> Iterable[dict[str, Any]]:
        for row in self.rows:
            yield {**row.to_dict(), "slope": self.slope}

    def json_lines(self) -> Iterable[dict[str, Any]]:
        return (row.to_dict() for row in self.rows)

    def to_markdown(self) -> str:
        lines = [f"# Sweep: {self.name} over {self.axis}", ""]
        if self.slope is not None:
            lines.append(f"log-log slope of cost: {self.slope:.4f}")
            lines.append("")
        lines.append("| value | cost | fidelity | bound | satisfied |")
        lines.append("|---|---|---|---|---|")
        for row in self.rows:
            lines.append(
                f"| {row.value:g} | {row.cost:.6g} | {row.final_fidelity:.6f} "
                f"| {row.bound:.6g} | {row.satisfied} |"
            )
        return "\n".join(lines) + "\n"


def fit_slope(values: Sequence[float], costs: Sequence[float]) -> float | None:
    x = np.asarray(values, dtype=float)
    y = np.asarray(costs, dtype=float)
    if x.size < 2 or np.any(x <= 0) or np.any(~np.isfinite(y)) or np.any(y <= 0):
        return None
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def _run_points(
    members: list[ExperimentConfig],
    setups: list[Setup],
    constants: list[AdaptiveConstants | None],
    settings: RuntimeSettings,
    cancel_event: Event | None,
) -> list[RunOutcome]:
    outcomes: list[RunOutcome | None] = [None] * len(members)
    if settings.threads == 1 or len(members) == 1:
        for index, member in enumerate(members):
            outcomes[index] = run_experiment(
                member,
                settings,
                setup=setups[index],
                constants=constants[index],
                cancel_event=cancel_event,
            )
        return [outcome for outcome in outcomes if outcome is not None]

    inner = settings.with_threads(1)
    with ThreadPoolExecutor(max_workers=settings.threads) as executor:
        pending = {
            executor.submit(
                run_experiment,
                member,
                inner,
                setup=setups[index],
                constants=constants[index],
                cancel_event=cancel_event,
            ): index
            for index, member in enumerate(members)
        }
        while pending:
            done, _ = wait(pending, return_when=FIRST_COMPLETED)
            for future in done:
                outcomes[pending.pop(future)] = future.result()
    return [outcome for outcome in outcomes if outcome is not None]


def sweep(
    config: ExperimentConfig,
    axis: str,
    values: Sequence[float],
    settings: RuntimeSettings | None = None,
    *,
    cancel_event: Event | None = None,
) -> SweepResult:
    """Przebieg dla każdej wartości osi, liczony współbieżnie; wyniki w kolejności wartości.

    Dla osi N i kappa z harmonogramem adaptacyjnym stałe B i C są wspólne dla
    całej rodziny (maksimum po członkach), a nachylenie log-log kosztu jest dopasowane.
    """

    if axis not in SWEEP_AXES:
        available = ", ".join(SWEEP_AXES)
        raise InvalidSweep(f"Nieznana oś przemiatania {axis!r}; dostępne: {available}")
    if not values:
        raise InvalidSweep("Przemiatanie wymaga co najmniej jednej wartości")
    settings = settings or RuntimeSettings.from_env()

    members = [config.updated(axis_assignments(config, axis, value)) for value in values]
    setups = [build_setup(member) for member in members]
    constants: list[AdaptiveConstants | None] = [None] * len(members)
    uniform = axis in SLOPE_AXES and isinstance(config.schedule, AdaptiveScheduleConfig)
    if uniform:
        per_member = [
            adaptive_constants(setup, member.schedule.p, member.bounds)  # type: ignore[union-attr]
            for member, setup in zip(members, setups)
        ]
        constants = list(uniform_constants(per_member))

    outcomes = _run_points(members, setups, constants, settings, cancel_event)
    rows = tuple(
        SweepRow(
            value=float(value),
            cost=outcome.primary_cost,
            final_fidelity=outcome.final_fidelity,
            bound=outcome.bound.bound_value,
            satisfied=outcome.bound.satisfied if outcome.bound.applicable else None,
            cost_bound=float(outcome.extras.get("cost_bound", math.nan)),
            solution_overlap=outcome.extras.get("solution_overlap"),
        )
        for value, outcome in zip(values, outcomes)
    )
    slope = fit_slope(values, [row.cost for row in rows]) if axis in SLOPE_AXES else None
    logger.info("sweep-complete", name=config.name, axis=axis, points=len(rows), slope=slope)
    return SweepResult(
        name=config.name, axis=axis, rows=rows, slope=slope, uniform_constants=uniform
    )


def write_sweep(
    result: SweepResult, config: ExperimentConfig, exporter: ReportExporter | None = None
) -> list[Path]:
    exporter = exporter or DefaultReportExporter()
    directory = Path(config.outputs.directory)
    stem = f"{config.outputs.stem}_sweep_{result.axis}"
    written = [exporter.export(result, directory / f"{stem}.csv", ExportFormat.CSV)]
    if "json" in config.outputs.formats:
        written.append(exporter.export(result, directory / f"{stem}.json", ExportFormat.JSON))
    if "md" in config.outputs.formats:
        written.append(exporter.export(result, directory / f"{stem}.md", ExportFormat.MARKDOWN))
    return written
