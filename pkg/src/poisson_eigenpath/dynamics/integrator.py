"""Całkowanie równania marginalnego klasyczną metodą Rungego–Kutty rzędu 4."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Any, Callable, Iterator

import numpy as np
import structlog

from poisson_eigenpath.linalg.decomposition import ComplexMatrix, DimensionMismatch

from . import generators
from .cost import accumulate_cost
from .models import (
    DensityMatrix,
    Generator,
    GeneratorKind,
    NonPhysicalState,
    RunResult,
    StepPolicy,
    StepUnderflow,
    check_dimension,
)

logger = structlog.get_logger(__name__)

NEGATIVE_EIGENVALUE_LIMIT = -1e-6
SNAPSHOT_CACHE_SIZE = 8
BATCH_STEPS = 1024
END_TOLERANCE = 1e-14


def fidelity(rho: DensityMatrix | ComplexMatrix, pp: Any) -> float:
    """Tr(Pρ) obcięte do [0, 1]; `pp` to ProjectorPair albo macierz rzutu."""

    matrix = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=np.complex128)
    projector = np.asarray(getattr(pp, "P", pp), dtype=np.complex128)
    if matrix.shape != projector.shape:
        raise DimensionMismatch(projector.shape, matrix.shape, what="stan")
    value = float(np.real(np.trace(projector @ matrix)))
    return min(1.0, max(0.0, value))


def _effective_rate(gen: Generator, snap: generators.GeneratorSnapshot) -> float:
    if gen.kind is GeneratorKind.LIOUVILLE:
        spectrum = np.linalg.eigvalsh(snap.operator)
        return snap.rate * max(1.0, float(spectrum[-1] - spectrum[0]))
    return snap.rate


def _normalize(rho: ComplexMatrix) -> tuple[ComplexMatrix, float]:
    symmetric = (rho + rho.conj().T) / 2
    trace = float(np.real(np.trace(symmetric)))
    return symmetric / trace, abs(trace - 1.0)


Stage = tuple[float, float, tuple[generators.GeneratorSnapshot, ...]]
Stages = Callable[[float, float], Iterator[Stage]]


def _step_size(policy: StepPolicy, rate: float, s: float, target: float) -> float:
    step = min(target - s, policy.step_cap)
    if rate > 0:
        limit = policy.rate_fraction / rate
        if limit < policy.min_step:
            raise StepUnderflow(limit, s)
        step = min(step, limit)
    return step


def _step_end(s: float, step: float, target: float) -> float:
    return target if target - (s + step) <= END_TOLERANCE else s + step


def _sequential_stages(gen: Generator, policy: StepPolicy) -> Stages:
    """Migawki liczone punkt po punkcie; wymagane, gdy krok zależy od widma."""

    prepared = lru_cache(maxsize=SNAPSHOT_CACHE_SIZE)(lambda s: generators.snapshot(gen, s))

    def _stages(s: float, target: float) -> Iterator[Stage]:
        while target - s > END_TOLERANCE:
            snap = prepared(s)
            step = _step_size(policy, _effective_rate(gen, snap), s, target)
            end = _step_end(s, step, target)
            yield step, end, (snap, prepared(s + step / 2), prepared(end))
            s = end

    return _stages


def _batched_stages(gen: Generator, policy: StepPolicy) -> Stages:
    """Kroki planowane z samej szybkości λ(s); U(s) liczone stosami po BATCH_STEPS kroków."""

    def _stages(s: float, target: float) -> Iterator[Stage]:
        while target - s > END_TOLERANCE:
            plan: list[tuple[float, float]] = []
            start = s
            while target - start > END_TOLERANCE and len(plan) < BATCH_STEPS:
                step = _step_size(policy, gen.rate.evaluate(start), start, target)
                plan.append((start, step))
                start = _step_end(start, step, target)
            nodes = np.empty(2 * len(plan) + 1)
            nodes[0] = s
            for i, (left, step) in enumerate(plan):
                nodes[2 * i + 1] = left + step / 2
                nodes[2 * i + 2] = _step_end(left, step, target)
            operators = gen.path.values(nodes)
            rates = gen.rate.evaluate_many(nodes)
            snaps = [
                generators.GeneratorSnapshot(kind=gen.kind, s=float(x), rate=float(r), operator=op)
                for x, r, op in zip(nodes, rates, operators)
            ]
            for i, (_, step) in enumerate(plan):
                yield step, float(nodes[2 * i + 2]), tuple(snaps[2 * i : 2 * i + 3])
            s = start

    return _stages


def _run(
    gen: Generator, rho0: DensityMatrix, policy: StepPolicy
) -> tuple[list[tuple[float, DensityMatrix]], list[float], dict[str, Any]]:
    apply = generators.RHS_BY_KIND[gen.kind]
    stages = (_batched_stages if gen.kind is GeneratorKind.JUMP else _sequential_stages)(gen, policy)

    sample_points = np.linspace(0.0, 1.0, policy.samples)
    rho = rho0.matrix.copy()
    samples: list[tuple[float, DensityMatrix]] = []
    fidelities: list[float] = []
    steps = 0
    smallest_step = math.inf
    largest_drift = 0.0
    smallest_eigenvalue = math.inf
    clusters = 1

    def record(s: float, state: ComplexMatrix) -> None:
        nonlocal smallest_eigenvalue
        lowest = float(np.min(np.linalg.eigvalsh(state)))
        smallest_eigenvalue = min(smallest_eigenvalue, lowest)
        if lowest < NEGATIVE_EIGENVALUE_LIMIT:
            raise NonPhysicalState(lowest, s)
        clipped = state.copy()
        if lowest < 0:
            values, vectors = np.linalg.eigh(state)
            values = np.clip(values, 0.0, None)
            clipped = (vectors * (values / values.sum())[np.newaxis, :]) @ vectors.conj().T
        samples.append((s, DensityMatrix(clipped)))
        fidelities.append(fidelity(clipped, gen.tracking_projector(s)))

    record(0.0, rho)
    s = 0.0
    for target in sample_points[1:]:
        target = float(target)
        for step, end, (left, middle, right) in stages(s, target):
            clusters = max(clusters, left.clusters)
            k1 = apply(left, rho)
            k2 = apply(middle, rho + (step / 2) * k1)
            k3 = apply(middle, rho + (step / 2) * k2)
            k4 = apply(right, rho + step * k3)
            rho, drift = _normalize(rho + (step / 6) * (k1 + 2 * k2 + 2 * k3 + k4))
            largest_drift = max(largest_drift, drift)
            smallest_step = min(smallest_step, step)
            steps += 1
            s = end
        record(target, rho)

    diagnostics: dict[str, Any] = {
        "steps": steps,
        "min_step": smallest_step if math.isfinite(smallest_step) else None,
        "max_trace_drift": largest_drift,
        "min_eigenvalue": smallest_eigenvalue,
    }
    if gen.kind is GeneratorKind.PHASE_RANDOMISATION:
        diagnostics["clusters"] = clusters
        diagnostics["outside_proven_regime"] = clusters > 1
        diagnostics["phase_distribution"] = getattr(gen.phi, "name", "custom")
    return samples, fidelities, diagnostics


def integrate(
    gen: Generator,
    rho0: DensityMatrix,
    grid: StepPolicy | None = None,
) -> RunResult:
    """Rozwiązuje dρ/ds = λ(s)L_s(ρ) na [0, 1].

    Po każdym kroku stan jest symetryzowany i normowany do śladu 1. Wierność
    Tr(P(s)ρ(s)) zapisywana jest w `grid.samples` równoodległych punktach.
    """

    policy = grid or StepPolicy()
    check_dimension(gen, rho0)
    samples, fidelities, diagnostics = _run(gen, rho0, policy)

    if policy.check_doubling:
        _, refined, _ = _run(gen, rho0, policy.halved())
        diagnostics["step_doubling_delta"] = abs(refined[-1] - fidelities[-1])

    cost = accumulate_cost(gen)
    result = RunResult(
        rho_samples=tuple(samples),
        fidelities=tuple(fidelities),
        final_fidelity=fidelities[-1],
        cost=cost,
        diagnostics=diagnostics,
    )
    if diagnostics.get("outside_proven_regime"):
        logger.warning("phase-randomisation-multi-cluster", clusters=diagnostics["clusters"])
    logger.info(
        "integration-complete",
        generator=gen.kind.value,
        path=gen.path.name,
        steps=diagnostics["steps"],
        final_fidelity=result.final_fidelity,
    )
    return result
