"""Modele dynamiki: macierz gęstości, generatory, polityka kroku i wynik przebiegu."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.linalg.decomposition import ComplexMatrix, DimensionMismatch, square_matrix
from poisson_eigenpath.paths.base import GapModel, OperatorPath, PathKind
from poisson_eigenpath.schedules.schedule import Schedule
from poisson_eigenpath.shared.errors import InstanceError, NumericalError

from .phases import FejerDistribution, PhaseDistribution

TRACE_TOL = 1e-9
HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = 1e-9


class GeneratorKind(str, Enum):
    """Rodzaj generatora L_s."""

    LIOUVILLE = "liouville"
    JUMP = "jump"
    PHASE_RANDOMISATION = "phase_randomisation"


class InvalidDensityMatrix(InstanceError):
    """Macierz nie jest poprawnym stanem (ślad, hermitowskość, dodatniość)."""


class InvalidGenerator(InstanceError):
    """Rodzaj ścieżki nie pasuje do rodzaju generatora."""


class GapModelMissing(InstanceError):
    """Randomizacja fazy wymaga modelu przerwy g₀(s)."""


class StepUnderflow(NumericalError):
    """Wymagany krok całkowania spadł poniżej minimum."""

    def __init__(self, step: float, s: float) -> None:
        super().__init__(f"Krok {step:.3e} poniżej minimum w s={s:.6f}")
        self.step = step
        self.s = s


class NonPhysicalState(NumericalError):
    """Stan ma wartość własną poniżej dopuszczalnego progu."""

    def __init__(self, eigenvalue: float, s: float) -> None:
        super().__init__(f"Wartość własna stanu {eigenvalue:.3e} w s={s:.6f}")
        self.eigenvalue = eigenvalue
        self.s = s


def _finite_or_none(value: float | None) -> float | None:
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@dataclass(frozen=True, slots=True, eq=False)
class DensityMatrix:
    """Stan mieszany: hermitowska, dodatnia macierz o śladzie 1."""

    matrix: ComplexMatrix

    def __post_init__(self) -> None:
        matrix = square_matrix(self.matrix)
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidDensityMatrix(f"Ślad stanu {trace:.12g} ≠ 1")
        asymmetry = float(np.linalg.norm(matrix - matrix.conj().T, 2))
        if asymmetry > HERMITIAN_TOL:
            raise InvalidDensityMatrix(f"Stan nie jest hermitowski (‖ρ − ρ*‖ = {asymmetry:.3e})")
        smallest = float(np.min(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)))
        if smallest < -POSITIVITY_TOL:
            raise InvalidDensityMatrix(f"Ujemna wartość własna stanu: {smallest:.3e}")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def pure(cls, psi: npt.ArrayLike) -> "DensityMatrix":
        vector = np.asarray(psi, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(vector))
        if norm == 0.0:
            raise InvalidDensityMatrix("Wektor stanu jest zerowy")
        vector = vector / norm
        return cls(np.outer(vector, vector.conj()))

    @classmethod
    def maximally_mixed(cls, projector: ComplexMatrix) -> "DensityMatrix":
        """P/rank(P)."""

        rank = float(np.real(np.trace(projector)))
        return cls(np.asarray(projector, dtype=np.complex128) / rank)

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    def trace_distance(self, other: "DensityMatrix | ComplexMatrix") -> float:
        target = other.matrix if isinstance(other, DensityMatrix) else np.asarray(other)
        difference = self.matrix - target
        return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((difference + difference.conj().T) / 2))))


@dataclass(frozen=True, slots=True, eq=False)
class Generator:
    """L_s wraz z harmonogramem częstości (λ(s) lub T(s))."""

    kind: GeneratorKind
    path: OperatorPath
    rate: Schedule
    gap_model: GapModel | None = None
    phi: PhaseDistribution | None = None
    projector_source: OperatorPath | None = None

    def __post_init__(self) -> None:
        if self.kind is GeneratorKind.JUMP:
            if self.path.kind is not PathKind.UNITARY:
                raise InvalidGenerator("Generator skoków wymaga ścieżki unitarnej")
            if self.projector_source is not None and not self.projector_source.hermitian:
                raise InvalidGenerator("Ścieżka źródłowa rzutu musi być hermitowska")
        elif self.path.kind is not PathKind.HERMITIAN:
            raise InvalidGenerator(f"Generator {self.kind.value} wymaga ścieżki hermitowskiej")
        if self.kind is GeneratorKind.PHASE_RANDOMISATION:
            if self.gap_model is None:
                raise GapModelMissing("Randomizacja fazy wymaga modelu przerwy g₀(s)")
            if self.phi is None:
                object.__setattr__(self, "phi", FejerDistribution())

    @classmethod
    def liouville(cls, path: OperatorPath, rate: Schedule) -> "Generator":
        return cls(kind=GeneratorKind.LIOUVILLE, path=path, rate=rate)

    @classmethod
    def jump(
        cls,
        path: OperatorPath,
        rate: Schedule,
        *,
        projector_source: OperatorPath | None = None,
    ) -> "Generator":
        return cls(kind=GeneratorKind.JUMP, path=path, rate=rate, projector_source=projector_source)

    @classmethod
    def phase_randomisation(
        cls,
        path: OperatorPath,
        rate: Schedule,
        gap_model: GapModel | None,
        phi: PhaseDistribution | None = None,
    ) -> "Generator":
        return cls(
            kind=GeneratorKind.PHASE_RANDOMISATION,
            path=path,
            rate=rate,
            gap_model=gap_model,
            phi=phi,
        )

    @property
    def dimension(self) -> int:
        return self.path.dimension

    def tracking_projector(self, s: float) -> ComplexMatrix:
        """Rzut, względem którego liczona jest wierność.

        Dla generatora skoków ze ścieżką źródłową: V·P_H(s)·V* z izometrią
        `embedding` ścieżki unitarnej; w pozostałych przypadkach rzut okna ścieżki.
        """

        if self.projector_source is not None:
            embedding = self.path.metadata.get("embedding")
            source = self.projector_source.projector(s).P
            if embedding is None:
                return source
            V = np.asarray(embedding, dtype=np.complex128)
            return V @ source @ V.conj().T
        return self.path.projector(s).P

    def with_rate(self, rate: Schedule) -> "Generator":
        return Generator(
            kind=self.kind,
            path=self.path,
            rate=rate,
            gap_model=self.gap_model,
            phi=self.phi,
            projector_source=self.projector_source,
        )


@dataclass(frozen=True, slots=True)
class StepPolicy:
    """Polityka kroku RK4: Δs ≤ min(step_cap, rate_fraction/λ(s))."""

    step_cap: float = 1e-2
    rate_fraction: float = 0.1
    samples: int = 101
    min_step: float = 1e-9
    check_doubling: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.step_cap <= 1:
            raise InstanceError(f"step_cap musi leżeć w (0, 1] ({self.step_cap})")
        if not self.rate_fraction > 0:
            raise InstanceError(f"rate_fraction musi być dodatnie ({self.rate_fraction})")
        if self.samples < 2:
            raise InstanceError(f"Wymagane co najmniej 2 punkty próbkowania ({self.samples})")

    def halved(self) -> "StepPolicy":
        return StepPolicy(
            step_cap=self.step_cap / 2,
            rate_fraction=self.rate_fraction / 2,
            samples=self.samples,
            min_step=self.min_step,
            check_doubling=False,
        )


@dataclass(frozen=True, slots=True)
class CostRecord:
    """Koszt przebiegu: oczekiwana liczba skoków i czas ewolucji hamiltonowskiej.

    `sampled_time` to średni czas dla faktycznie próbkowanego rozkładu τ
    (tylko randomizacja fazy); `hamiltonian_time` używa stałej modelu t₀.
    """

    jump_count_expected: float
    hamiltonian_time: float
    sampled_time: float | None = None

    def primary(self, kind: GeneratorKind) -> float:
        if kind is GeneratorKind.JUMP:
            return self.jump_count_expected
        return self.hamiltonian_time

    def to_dict(self) -> dict[str, float | None]:
        return {
            "jumps": _finite_or_none(self.jump_count_expected),
            "time": _finite_or_none(self.hamiltonian_time),
            "sampled_time": _finite_or_none(self.sampled_time),
        }


@dataclass(frozen=True, slots=True, eq=False)
class RunResult:
    """Wynik całkowania równania marginalnego."""

    rho_samples: tuple[tuple[float, DensityMatrix], ...]
    fidelities: tuple[float, ...]
    final_fidelity: float
    cost: CostRecord
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def final_state(self) -> DensityMatrix:
        return self.rho_samples[-1][1]

    @property
    def infidelity(self) -> float:
        return 1.0 - self.final_fidelity

    @property
    def sample_points(self) -> tuple[float, ...]:
        return tuple(s for s, _ in self.rho_samples)

    def to_dict(self) -> dict[str, Any]:
        return {
            "samples": [
                {"s": s, "fidelity": fidelity}
                for (s, _), fidelity in zip(self.rho_samples, self.fidelities)
            ],
            "final_fidelity": self.final_fidelity,
            "cost": self.cost.to_dict(),
            "diagnostics": self.diagnostics,
        }


def check_dimension(gen: Generator, rho: DensityMatrix) -> None:
    if rho.dimension != gen.dimension:
        raise DimensionMismatch(gen.dimension, rho.dimension, what="stan początkowy")
