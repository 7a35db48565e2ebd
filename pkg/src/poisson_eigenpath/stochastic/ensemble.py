"""Zespoły trajektorii Monte-Carlo ze średnią składaną w kolejności indeksów."""

from __future__ import annotations

import math
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from threading import Event
from typing import Any, Iterator

import numpy as np
import numpy.typing as npt
import structlog

from poisson_eigenpath.dynamics.models import DensityMatrix, Generator, GeneratorKind
from poisson_eigenpath.shared.errors import EigenpathError, InstanceError

from .poisson import ENVELOPE_POINTS, expected_count, sample_poisson
from .trajectories import (
    TrajectoryResult,
    prepare_state,
    run_trajectory_liouville,
    run_trajectory_phase,
    run_trajectory_unitary,
)

logger = structlog.get_logger(__name__)


class InvalidEnsemble(InstanceError):
    """Zespół wymaga co najmniej dwóch trajektorii i dodatniej liczby wątków."""


class EnsembleCancelled(EigenpathError):
    """Obliczenia zespołu przerwane na żądanie."""


@dataclass(frozen=True, slots=True, eq=False)
class TrajectorySpec:
    """Generator i stan początkowy wspólne dla wszystkich trajektorii zespołu."""

    generator: Generator
    psi0: npt.NDArray[np.complex128]
    envelope_points: int = ENVELOPE_POINTS

    def __post_init__(self) -> None:
        object.__setattr__(self, "psi0", prepare_state(self.psi0, self.generator.dimension))

    @classmethod
    def from_generator(
        cls, generator: Generator, psi0: npt.ArrayLike | None = None
    ) -> "TrajectorySpec":
        """Bez `psi0` używa stanu początkowego zapisanego w metadanych ścieżki."""

        state = psi0 if psi0 is not None else generator.path.initial_state()
        if state is None:
            raise InvalidEnsemble(f"Ścieżka {generator.path.name!r} nie ma stanu początkowego")
        return cls(generator=generator, psi0=np.asarray(state, dtype=np.complex128))

    @property
    def kind(self) -> GeneratorKind:
        return self.generator.kind


def trajectory_seed(master_seed: int, index: int) -> int:
    """Ziarno trajektorii wyznaczone deterministycznie z (master_seed, index)."""

    sequence = np.random.SeedSequence([int(master_seed), int(index)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def run_single(spec: TrajectorySpec, seed: int) -> TrajectoryResult:
    """Jedna trajektoria; realizacja procesu i czasy τ pochodzą z jednego strumienia."""

    gen = spec.generator
    if gen.kind is GeneratorKind.LIOUVILLE:
        return run_trajectory_liouville(gen.path, gen.rate, spec.psi0, seed=seed)

    rng = np.random.default_rng(seed)
    realization = sample_poisson(gen.rate, rng, points=spec.envelope_points)
    if gen.kind is GeneratorKind.JUMP:
        return run_trajectory_unitary(gen.path, realization, spec.psi0, seed=seed)

    assert gen.gap_model is not None
    return run_trajectory_phase(
        gen.path,
        realization,
        spec.psi0,
        rng,
        gap_model=gen.gap_model,
        phi=gen.phi,
        seed=seed,
    )


@dataclass(frozen=True, slots=True)
class TrajectoryRecord:
    """Wiersz eksportu JSON lines dla jednej trajektorii."""

    index: int
    seed: int
    jump_count: int
    time: float
    fidelity: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "jump_count": self.jump_count,
            "time": self.time,
            "fidelity": self.fidelity,
        }


@dataclass(frozen=True, slots=True)
class CostStatistics:
    """Średnie i błędy standardowe liczby skoków oraz czasu hamiltonowskiego."""

    jump_mean: float
    jump_variance: float
    jump_stderr: float
    time_mean: float
    time_stderr: float
    expected_jumps: float

    def to_dict(self) -> dict[str, float]:
        return {
            "jump_mean": self.jump_mean,
            "jump_variance": self.jump_variance,
            "jump_stderr": self.jump_stderr,
            "time_mean": self.time_mean,
            "time_stderr": self.time_stderr,
            "expected_jumps": self.expected_jumps,
        }


@dataclass(frozen=True, slots=True, eq=False)
class MonteCarloResult:
    """Średni stan zespołu, wierność z błędem standardowym i statystyki kosztu.

    `state_stderr` to błąd standardowy średniej w normie Frobeniusa,
    √((1 − ‖ρ̄‖²_F)/(n − 1)) dla stanów czystych.
    """

    kind: GeneratorKind
    mean_state: DensityMatrix
    fidelity_mean: float
    fidelity_stderr: float
    state_stderr: float
    cost: CostStatistics
    records: tuple[TrajectoryRecord, ...] = field(default=())
    master_seed: int = 0

    @property
    def n_traj(self) -> int:
        return len(self.records)

    @property
    def stderr(self) -> float:
        return self.fidelity_stderr

    def consistency_tolerance(self, floor: float = 1e-3) -> float:
        """Próg zgodności ze stanem z równania marginalnego."""

        return max(3.0 * max(self.fidelity_stderr, self.state_stderr), floor)

    def iter_records(self) -> Iterator[dict[str, Any]]:
        for record in self.records:
            yield record.to_dict()

    def to_dict(self) -> dict[str, Any]:
        return {
            "generator": self.kind.value,
            "n_traj": self.n_traj,
            "master_seed": self.master_seed,
            "fidelity_mean": self.fidelity_mean,
            "fidelity_stderr": self.fidelity_stderr,
            "state_stderr": self.state_stderr,
            "cost": self.cost.to_dict(),
        }


def _stderr(values: npt.NDArray[np.float64]) -> float:
    return float(values.std(ddof=1) / math.sqrt(values.size))


def _collect(
    spec: TrajectorySpec,
    seeds: list[int],
    threads: int,
    cancel_event: Event | None,
) -> list[TrajectoryResult]:
    results: list[TrajectoryResult | None] = [None] * len(seeds)
    if threads == 1:
        for index, seed in enumerate(seeds):
            if cancel_event is not None and cancel_event.is_set():
                raise EnsembleCancelled("Przerwano obliczanie zespołu trajektorii")
            results[index] = run_single(spec, seed)
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            pending = {
                executor.submit(run_single, spec, seed): index for index, seed in enumerate(seeds)
            }
            while pending:
                done, _ = wait(pending, return_when=FIRST_COMPLETED)
                if cancel_event is not None and cancel_event.is_set():
                    for future in pending:
                        future.cancel()
                    raise EnsembleCancelled("Przerwano obliczanie zespołu trajektorii")
                for future in done:
                    results[pending.pop(future)] = future.result()
    return [result for result in results if result is not None]


def monte_carlo(
    spec: TrajectorySpec,
    n_traj: int,
    master_seed: int,
    *,
    threads: int = 1,
    cancel_event: Event | None = None,
) -> MonteCarloResult:
    """Średnia po `n_traj` trajektoriach.

    Ziarna trajektorii zależą tylko od (master_seed, indeks), a średnia jest
    składana w kolejności indeksów, więc wynik nie zależy od liczby wątków.
    """

    if n_traj < 2:
        raise InvalidEnsemble(f"Zespół wymaga co najmniej 2 trajektorii ({n_traj})")
    if threads < 1:
        raise InvalidEnsemble(f"Liczba wątków musi być dodatnia ({threads})")

    gen = spec.generator
    seeds = [trajectory_seed(master_seed, index) for index in range(n_traj)]
    results = _collect(spec, seeds, threads, cancel_event)
    projector = gen.tracking_projector(1.0)

    dimension = gen.dimension
    total = np.zeros((dimension, dimension), dtype=np.complex128)
    fidelities = np.empty(n_traj)
    jumps = np.empty(n_traj)
    times = np.empty(n_traj)
    records: list[TrajectoryRecord] = []
    for index, result in enumerate(results):
        psi = result.final_state
        total += np.outer(psi, psi.conj())
        fidelities[index] = result.fidelity(projector)
        jumps[index] = result.jump_count
        times[index] = result.hamiltonian_time
        records.append(
            TrajectoryRecord(
                index=index,
                seed=seeds[index],
                jump_count=result.jump_count,
                time=result.hamiltonian_time,
                fidelity=float(fidelities[index]),
            )
        )

    mean = total / n_traj
    mean = (mean + mean.conj().T) / 2
    mean /= np.real(np.trace(mean))
    purity = float(np.real(np.vdot(mean, mean)))
    expected = math.nan if gen.kind is GeneratorKind.LIOUVILLE else expected_count(gen.rate)
    cost = CostStatistics(
        jump_mean=float(jumps.mean()),
        jump_variance=float(jumps.var(ddof=1)),
        jump_stderr=_stderr(jumps),
        time_mean=float(times.mean()),
        time_stderr=_stderr(times),
        expected_jumps=expected,
    )
    outcome = MonteCarloResult(
        kind=gen.kind,
        mean_state=DensityMatrix(mean),
        fidelity_mean=float(fidelities.mean()),
        fidelity_stderr=_stderr(fidelities),
        state_stderr=math.sqrt(max(0.0, 1.0 - purity) / (n_traj - 1)),
        cost=cost,
        records=tuple(records),
        master_seed=master_seed,
    )
    logger.info(
        "monte-carlo-complete",
        generator=gen.kind.value,
        path=gen.path.name,
        n_traj=n_traj,
        threads=threads,
        fidelity=outcome.fidelity_mean,
        fidelity_stderr=outcome.fidelity_stderr,
        jump_mean=cost.jump_mean,
    )
    return outcome
