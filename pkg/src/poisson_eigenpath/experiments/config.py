"""Konfiguracja eksperymentu: modele pydantic, nadpisania `--set` i presety."""

from __future__ import annotations

import copy
import json
from pathlib import Path
from typing import Annotated, Any, Iterable, Literal, Union

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, model_validator

from poisson_eigenpath.shared.errors import InstanceError

PRESET_PREFIX = "preset:"


class ConfigNotFound(InstanceError):
    """Plik konfiguracji nie istnieje lub nie jest poprawnym JSON-em."""


class InvalidOverride(InstanceError):
    """Nadpisanie `--set` nie ma postaci `ścieżka.z.kropkami=JSON`."""


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _existing_file(value: Path) -> Path:
    if not Path(value).is_file():
        raise ValueError(f"plik nie istnieje: {value}")
    return value


ExistingFile = Annotated[Path, AfterValidator(_existing_file)]


# ----------------------------------------------------------------------
# Instancje
# ----------------------------------------------------------------------


class GroverInstanceConfig(_Model):
    kind: Literal["grover"]
    N: int = Field(ge=2)
    marked: list[int] = Field(default_factory=lambda: [0], min_length=1)
    subspace: Literal["auto", "full", "symmetric"] = "auto"

    @model_validator(mode="after")
    def _check_marked(self) -> "GroverInstanceConfig":
        if len(set(self.marked)) != len(self.marked):
            raise ValueError("indeksy oznaczone muszą być różne")
        if any(not 0 <= index < self.N for index in self.marked):
            raise ValueError(f"indeksy oznaczone muszą leżeć w [0, {self.N})")
        if len(self.marked) >= self.N:
            raise ValueError("co najmniej jeden element musi pozostać nieoznaczony")
        return self


class RandomMatrixConfig(_Model):
    """Losowa hermitowska macierz o zadanym κ (rozkład jak w `random_qlsp_instance`)."""

    dimension: int = Field(default=4, ge=2)
    kappa: float = Field(ge=1)
    seed: int = Field(default=0, ge=0)


MatrixPayload = Union[list[list[float]], dict[str, Any]]
VectorPayload = Union[list[float], dict[str, list[float]]]


class QlspInstanceConfig(_Model):
    kind: Literal["qlsp"]
    matrix: MatrixPayload | None = None
    matrix_file: ExistingFile | None = None
    random: RandomMatrixConfig | None = None
    b: VectorPayload | None = None
    kappa_hint: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _check_source(self) -> "QlspInstanceConfig":
        sources = [self.matrix is not None, self.matrix_file is not None, self.random is not None]
        if sum(sources) != 1:
            raise ValueError("podaj dokładnie jedno z: matrix, matrix_file, random")
        if self.random is None and self.b is None:
            raise ValueError("wektor b jest wymagany dla macierzy podanej jawnie")
        return self


class RankWindowConfig(_Model):
    """Śledzone wartości własne wskazane rangami (0 = najmniejsza)."""

    kind: Literal["ranks"] = "ranks"
    ranks: list[int] = Field(default_factory=lambda: [0], min_length=1)


class IntervalWindowConfig(_Model):
    kind: Literal["interval"]
    lower: float
    upper: float

    @model_validator(mode="after")
    def _check_order(self) -> "IntervalWindowConfig":
        if not self.upper > self.lower:
            raise ValueError(f"okno wymaga lower < upper ({self.lower}, {self.upper})")
        return self


WindowConfig = Annotated[Union[RankWindowConfig, IntervalWindowConfig], Field(discriminator="kind")]


class CustomInstanceConfig(_Model):
    kind: Literal["custom"]
    H0_file: ExistingFile
    H1_file: ExistingFile
    window: WindowConfig = Field(default_factory=RankWindowConfig)
    initial_state: VectorPayload | None = None


InstanceConfig = Annotated[
    Union[GroverInstanceConfig, QlspInstanceConfig, CustomInstanceConfig],
    Field(discriminator="kind"),
]


# ----------------------------------------------------------------------
# Generatory i harmonogramy
# ----------------------------------------------------------------------


class LiouvilleGeneratorConfig(_Model):
    kind: Literal["liouville"]


class JumpGeneratorConfig(_Model):
    kind: Literal["jump"]
    unitary: Literal["qubitised", "exp", "trotter"]
    h: float | None = Field(default=None, gt=0)
    order: Literal[1, 2] = 1

    @model_validator(mode="after")
    def _check_trotter(self) -> "JumpGeneratorConfig":
        if self.unitary == "trotter" and self.h is None:
            raise ValueError("krok Trottera wymaga parametru h")
        return self


class TabulatedPhaseConfig(_Model):
    """Gęstość u = g₀τ na rosnącej siatce."""

    grid: list[float] = Field(min_length=3)
    density: list[float] = Field(min_length=3)
    name: str = "tabulated"

    @model_validator(mode="after")
    def _check_shape(self) -> "TabulatedPhaseConfig":
        if len(self.grid) != len(self.density):
            raise ValueError("grid i density muszą mieć tę samą długość")
        return self


class PhaseGeneratorConfig(_Model):
    kind: Literal["phase_rand"]
    phi: Literal["fejer"] | TabulatedPhaseConfig = "fejer"


GeneratorConfig = Annotated[
    Union[LiouvilleGeneratorConfig, JumpGeneratorConfig, PhaseGeneratorConfig],
    Field(discriminator="kind"),
]


class ConstantScheduleConfig(_Model):
    kind: Literal["constant"]
    value: float = Field(ge=0, allow_inf_nan=False)


class AdaptiveScheduleConfig(_Model):
    kind: Literal["adaptive"]
    p: float = Field(default=1.5, ge=1, le=2)
    epsilon: float = Field(gt=0, lt=1)


ScheduleConfig = Annotated[
    Union[ConstantScheduleConfig, AdaptiveScheduleConfig], Field(discriminator="kind")
]


# ----------------------------------------------------------------------
# Wykonanie i wyjście
# ----------------------------------------------------------------------


class OdeExecutionConfig(_Model):
    kind: Literal["ode"] = "ode"
    step_cap: float = Field(default=1e-2, gt=0, le=1)
    rate_fraction: float = Field(default=0.1, gt=0)
    samples: int = Field(default=101, ge=2)
    check_doubling: bool = False


class TrajectoriesExecutionConfig(_Model):
    kind: Literal["trajectories"]
    n_traj: int = Field(default=1000, ge=2)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    threads: int | None = Field(default=None, ge=1)


ExecutionConfig = Annotated[
    Union[OdeExecutionConfig, TrajectoriesExecutionConfig], Field(discriminator="kind")
]


class BoundsConfig(_Model):
    points: int = Field(default=1001, ge=11)
    use_gap_model: bool = False


OutputFormat = Literal["json", "csv", "jsonl", "md"]


class OutputsConfig(_Model):
    directory: Path = Path("results")
    stem: str = Field(default="run", min_length=1)
    formats: list[OutputFormat] = Field(default_factory=lambda: ["json", "csv", "jsonl"])


class ExperimentConfig(_Model):
    """Pełny opis jednego przebiegu; walidowany przed jakimikolwiek obliczeniami."""

    name: str = "experiment"
    instance: InstanceConfig
    generator: GeneratorConfig
    schedule: ScheduleConfig
    execution: ExecutionConfig = Field(default_factory=OdeExecutionConfig)
    bounds: BoundsConfig = Field(default_factory=BoundsConfig)
    outputs: OutputsConfig = Field(default_factory=OutputsConfig)

    def updated(self, assignments: dict[str, Any]) -> "ExperimentConfig":
        """Kopia z nadpisanymi polami (klucze w postaci `a.b.c`), ponownie walidowana."""

        payload = self.model_dump(mode="json")
        for dotted, value in assignments.items():
            set_dotted(payload, dotted, value)
        return ExperimentConfig.model_validate(payload)


# ----------------------------------------------------------------------
# Ładowanie
# ----------------------------------------------------------------------


def set_dotted(payload: dict[str, Any], dotted: str, value: Any) -> None:
    keys = [key for key in dotted.split(".") if key]
    if not keys:
        raise InvalidOverride(f"Pusta ścieżka nadpisania: {dotted!r}")
    node = payload
    for key in keys[:-1]:
        child = node.get(key)
        if not isinstance(child, dict):
            child = {}
            node[key] = child
        node = child
    node[keys[-1]] = value


def parse_override(assignment: str) -> tuple[str, Any]:
    """`a.b=JSON`; wartość niebędąca JSON-em traktowana jest jako napis."""

    dotted, separator, raw = assignment.partition("=")
    if not separator or not dotted.strip():
        raise InvalidOverride(f"Nadpisanie musi mieć postać ścieżka=wartość: {assignment!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return dotted.strip(), value


def apply_overrides(payload: dict[str, Any], assignments: Iterable[str]) -> dict[str, Any]:
    result = copy.deepcopy(payload)
    for assignment in assignments:
        dotted, value = parse_override(assignment)
        set_dotted(result, dotted, value)
    return result


def load_payload(source: str | Path) -> dict[str, Any]:
    """Surowy słownik konfiguracji z pliku JSON albo z presetu `preset:<nazwa>`."""

    text = str(source)
    if text.startswith(PRESET_PREFIX):
        from .presets import preset

        return preset(text[len(PRESET_PREFIX) :])
    path = Path(text)
    if not path.is_file():
        raise ConfigNotFound(f"Plik konfiguracji nie istnieje: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigNotFound(f"Niepoprawny JSON w {path}: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigNotFound(f"Konfiguracja w {path} musi być obiektem JSON")
    return payload


def load_config(
    source: str | Path,
    *,
    overrides: Iterable[str] = (),
    seed: int | None = None,
    threads: int | None = None,
    out: Path | None = None,
) -> ExperimentConfig:
    """Wczytuje, nadpisuje i waliduje konfigurację.

    Flagi CLI mają pierwszeństwo przed plikiem: `--seed` ustawia
    `execution.master_seed`, `--threads` ustawia `execution.threads` (tylko dla
    trajektorii), `--out` ustawia `outputs.directory`.
    """

    payload = apply_overrides(load_payload(source), overrides)
    execution = payload.get("execution")
    if isinstance(execution, dict) and execution.get("kind") == "trajectories":
        if seed is not None:
            execution["master_seed"] = int(seed)
        if threads is not None:
            execution["threads"] = int(threads)
    if out is not None:
        set_dotted(payload, "outputs.directory", str(out))
    return ExperimentConfig.model_validate(payload)
