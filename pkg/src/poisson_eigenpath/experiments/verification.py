"""Zestawy niezmienników liczone na losowych, zasianych instancjach.

Raporty nie zawierają znaczników czasu: te same ziarno i opcje dają identyczne pliki.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable

import numpy as np
import scipy.linalg
import structlog

from poisson_eigenpath.dynamics.generators import phase_channel, rhs
from poisson_eigenpath.dynamics.integrator import integrate
from poisson_eigenpath.dynamics.models import DensityMatrix, GeneratorKind, StepPolicy
from poisson_eigenpath.dynamics.phases import FejerDistribution, fejer_truncation_mass
from poisson_eigenpath.linalg.decomposition import ComplexMatrix, commutator, operator_norm
from poisson_eigenpath.paths.hamiltonians import (
    grover_path,
    qlsp_path,
    random_hermitian,
    random_qlsp_instance,
    random_unitary,
)
from poisson_eigenpath.paths.unitaries import exp_path, scale_path, suzuki_deviation
from poisson_eigenpath.reporting import DefaultReportExporter, ExportFormat, ReportExporter
from poisson_eigenpath.schedules.assumption import gap_integral_check
from poisson_eigenpath.schedules.bounds import eval_bound
from poisson_eigenpath.schedules.constants import TheoremId
from poisson_eigenpath.schedules.schedule import Schedule
from poisson_eigenpath.shared.config import RuntimeSettings
from poisson_eigenpath.shared.errors import EigenpathError, InstanceError
from poisson_eigenpath.spectral.bounds import norm_bound_suite
from poisson_eigenpath.spectral.projectors import (
    finite_difference_projector,
    projector_derivative,
    projector_second_derivative,
)
from poisson_eigenpath.spectral.twiddle import (
    quad_points_for,
    twiddle_contour,
    twiddle_derivative,
    twiddle_sylvester,
    twiddle_spectral,
)
from poisson_eigenpath.spectral.windows import SpectralWindow, window_projector
from poisson_eigenpath.stochastic.ensemble import TrajectorySpec, monte_carlo
from poisson_eigenpath.stochastic.phases import empirical_characteristic, sample_tau
from poisson_eigenpath.stochastic.poisson import sample_poisson

from .builders import build_setup
from .config import ExperimentConfig
from .runner import run_experiment

logger = structlog.get_logger(__name__)

SUITES = ("appendix_a", "dynamics", "stochastic", "bounds")
SUITE_CHOICES = SUITES + ("all",)

IDENTITY_TOL = 1e-9
ROUTE_TOL = 1e-7
FIRST_DIFFERENCE_TOL = 1e-6
SECOND_DIFFERENCE_TOL = 1e-4
RHS_TOL = 1e-8
CHANNEL_TOL = 1e-10
POSITIVITY_TOL = 1e-9

INSIDE_RADIUS = 0.3
WINDOW_RADIUS = 0.325
OUTSIDE_RADIUS = 0.35
PATH_DIFFERENCE_STEP = 1e-5

CONSTANT_RATE = 30.0
BOUND_RATE = 40.0
ADAPTIVE_EPSILON = 0.25
BOUND_POINTS = 401


class UnknownSuite(InstanceError):
    def __init__(self, name: str) -> None:
        super().__init__(f"Nieznany zestaw {name!r}; dostępne: {', '.join(SUITE_CHOICES)}")


@dataclass(frozen=True, slots=True)
class SuiteOptions:
    """Rozmiary zestawów; wartości domyślne odpowiadają pełnej weryfikacji."""

    instances: int = 200
    trajectories: int = 10_000
    channel_samples: int = 10_000
    poisson_samples: int = 2_000
    suzuki_cases: int = 50
    quick: bool = False

    @classmethod
    def reduced(cls) -> "SuiteOptions":
        return cls(
            instances=20,
            trajectories=1_000,
            channel_samples=2_000,
            poisson_samples=500,
            suzuki_cases=10,
            quick=True,
        )


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    worst_margin: float
    count: int
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "count": self.count,
            "detail": self.detail,
        }


@dataclass
class _Tally:
    """Najgorszy zapas (limit − wartość) po wszystkich przypadkach jednego niezmiennika."""

    name: str
    count: int = 0
    failures: int = 0
    worst: float = math.inf
    notes: list[str] = field(default_factory=list)

    def record(self, value: float, limit: float) -> None:
        margin = limit - value if math.isfinite(value) else -math.inf
        self.count += 1
        self.worst = min(self.worst, margin)
        if margin < 0:
            self.failures += 1

    def fail(self, note: str) -> None:
        self.count += 1
        self.failures += 1
        self.worst = -math.inf
        if len(self.notes) < 3:
            self.notes.append(note)

    def result(self) -> CheckResult:
        detail = "; ".join(self.notes)
        if self.failures and not detail:
            detail = f"{self.failures} z {self.count} przypadków poza tolerancją"
        return CheckResult(
            name=self.name,
            passed=self.failures == 0 and self.count > 0,
            worst_margin=self.worst,
            count=self.count,
            detail=detail,
        )


class _Tallies(dict[str, _Tally]):
    def __missing__(self, key: str) -> _Tally:
        tally = _Tally(key)
        self[key] = tally
        return tally

    def results(self) -> tuple[CheckResult, ...]:
        return tuple(tally.result() for tally in self.values())


@dataclass(frozen=True, slots=True)
class SuiteResult:
    name: str
    checks: tuple[CheckResult, ...]

    @property
    def violations(self) -> int:
        return sum(1 for check in self.checks if not check.passed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "violations": self.violations,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass(frozen=True, slots=True)
class VerificationReport:
    suite: str
    seed: int
    suites: tuple[SuiteResult, ...]

    @property
    def violations(self) -> int:
        return sum(result.violations for result in self.suites)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "violations": self.violations,
            "suites": [result.to_dict() for result in self.suites],
        }

    def csv_fieldnames(self) -> list[str]:
        return ["suite", "name", "passed", "worst_margin", "count", "detail"]

    def csv_rows(self) -> Iterable[dict[str, Any]]:
        for result in self.suites:
            for check in result.checks:
                yield {"suite": result.name, **check.to_dict()}

    def json_lines(self) -> Iterable[dict[str, Any]]:
        return self.csv_rows()

    def to_markdown(self) -> str:
        lines: list[str] = []
        lines.append("# Verification Report")
        lines.append("")
        lines.append(f"Suite: {self.suite}, seed: {self.seed}, violations: {self.violations}")
        lines.append("")
        for result in self.suites:
            lines.append(f"## {result.name}")
            lines.append("")
            lines.append("| invariant | passed | worst margin | cases |")
            lines.append("|---|---|---|---|")
            for check in result.checks:
                margin = f"{check.worst_margin:.3e}" if math.isfinite(check.worst_margin) else str(
                    check.worst_margin
                )
                lines.append(f"| {check.name} | {check.passed} | {margin} | {check.count} |")
                if check.detail:
                    lines.append(f"|  | {check.detail} |  |  |")
            lines.append("")
        return "\n".join(lines).rstrip() + "\n"


# ----------------------------------------------------------------------
# Wspólne pomocnicze
# ----------------------------------------------------------------------


def _random_matrix(rng: np.random.Generator, dim: int) -> ComplexMatrix:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return raw / operator_norm(raw)


def _random_density(rng: np.random.Generator, dim: int) -> ComplexMatrix:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = raw @ raw.conj().T
    return rho / np.trace(rho).real


def _config(
    instance: dict[str, Any], generator: dict[str, Any], schedule: dict[str, Any]
) -> ExperimentConfig:
    return ExperimentConfig.model_validate(
        {
            "instance": instance,
            "generator": generator,
            "schedule": schedule,
            "execution": {"kind": "ode"},
            "bounds": {"points": BOUND_POINTS},
        }
    )


GROVER_8 = {"kind": "grover", "N": 8, "marked": [0], "subspace": "full"}
GENERATORS: tuple[dict[str, Any], ...] = (
    {"kind": "liouville"},
    {"kind": "jump", "unitary": "exp"},
    {"kind": "jump", "unitary": "qubitised"},
    {"kind": "phase_rand", "phi": "fejer"},
)


# ----------------------------------------------------------------------
# Rachunek twiddle i rzutów
# ----------------------------------------------------------------------


@dataclass(frozen=True, slots=True, eq=False)
class _NormalPath:
    """A(t) = V·e^{tK}(D + tD₁ + t²D₂/2)e^{−tK}·V*, normalna dla każdego t."""

    V: ComplexMatrix
    K: ComplexMatrix
    D: ComplexMatrix
    D1: ComplexMatrix
    D2: ComplexMatrix

    def __call__(self, t: float) -> tuple[ComplexMatrix, ComplexMatrix, ComplexMatrix]:
        rotation = self.V @ scipy.linalg.expm(t * self.K)
        M = self.D + t * self.D1 + 0.5 * t * t * self.D2
        dM = self.D1 + t * self.D2
        first = commutator(self.K, M) + dM
        second = commutator(self.K, first) + commutator(self.K, dM) + self.D2
        inverse = rotation.conj().T
        return rotation @ M @ inverse, rotation @ first @ inverse, rotation @ second @ inverse


def _random_normal_instance(
    rng: np.random.Generator,
) -> tuple[_NormalPath, SpectralWindow, bool]:
    dim = int(rng.integers(4, 9))
    inside_count = int(rng.integers(1, dim))
    outside_count = dim - inside_count
    hermitian = bool(rng.random() < 0.5)
    if hermitian:
        inside = rng.uniform(-INSIDE_RADIUS, INSIDE_RADIUS, inside_count).astype(np.complex128)
        signs = rng.choice([-1.0, 1.0], size=outside_count)
        outside = (signs * rng.uniform(OUTSIDE_RADIUS, 1.0, outside_count)).astype(np.complex128)
        window = SpectralWindow.interval(-WINDOW_RADIUS, WINDOW_RADIUS)
        D1 = np.diag(rng.normal(scale=0.5, size=dim)).astype(np.complex128)
        D2 = np.diag(rng.normal(scale=0.5, size=dim)).astype(np.complex128)
    else:
        radii = INSIDE_RADIUS * np.sqrt(rng.random(inside_count))
        inside = radii * np.exp(2j * np.pi * rng.random(inside_count))
        outside = rng.uniform(OUTSIDE_RADIUS, 1.0, outside_count) * np.exp(
            2j * np.pi * rng.random(outside_count)
        )
        window = SpectralWindow.contour(0.0, WINDOW_RADIUS)
        D1 = np.diag(0.5 * (rng.normal(size=dim) + 1j * rng.normal(size=dim)))
        D2 = np.diag(0.5 * (rng.normal(size=dim) + 1j * rng.normal(size=dim)))
    values = np.concatenate([inside, outside])
    generator = random_hermitian(dim, rng, scale=0.5)
    path = _NormalPath(
        V=random_unitary(dim, rng),
        K=-1j * generator,
        D=np.diag(values),
        D1=D1,
        D2=D2,
    )
    return path, window, hermitian


def _twiddle_second_difference(
    path: _NormalPath,
    window: SpectralWindow,
    hermitian: bool,
    X: ComplexMatrix,
    dX: ComplexMatrix,
    ddX: ComplexMatrix,
) -> ComplexMatrix:
    step = PATH_DIFFERENCE_STEP

    def first_derivative(t: float) -> ComplexMatrix:
        A, dA, _ = path(t)
        pp = window_projector(A, window, hermitian_hint=hermitian)
        return twiddle_derivative(A, dA, pp, X + t * dX + 0.5 * t * t * ddX, dX + t * ddX)

    return (first_derivative(step) - first_derivative(-step)) / (2 * step)


def _calculus_suite(rng: np.random.Generator, options: SuiteOptions) -> tuple[CheckResult, ...]:
    tallies = _Tallies()
    for index in range(options.instances):
        path, window, hermitian = _random_normal_instance(rng)
        A, dA, ddA = path(0.0)
        dim = A.shape[0]
        X = _random_matrix(rng, dim)
        dX = _random_matrix(rng, dim)
        ddX = _random_matrix(rng, dim)
        try:
            pp = window_projector(A, window, hermitian_hint=hermitian)
            spectral = twiddle_spectral(A, pp, X)
            contour = twiddle_contour(A, window, X, quad_points_for(pp, window), pp=pp)
            sylvester = twiddle_sylvester(A, pp, X)
            second = _twiddle_second_difference(path, window, hermitian, X, dX, ddX)
        except EigenpathError as exc:
            tallies["twiddle_identity"].fail(f"instancja {index}: {type(exc).__name__}: {exc}")
            continue

        P, Q = pp.P, pp.Q
        tallies["twiddle_identity"].record(
            operator_norm(commutator(A, spectral) - commutator(P, X)), IDENTITY_TOL
        )
        tallies["twiddle_off_diagonal"].record(
            operator_norm(P @ spectral @ P) + operator_norm(Q @ spectral @ Q), IDENTITY_TOL
        )
        routes = max(
            operator_norm(spectral - contour),
            operator_norm(spectral - sylvester),
            operator_norm(contour - sylvester),
        )
        tallies["twiddle_routes_agree"].record(routes, ROUTE_TOL)

        suite = norm_bound_suite(A, pp, dA, ddA, X=X, dX=dX, ddX=ddX, twiddle_second=second)
        for check in suite.checks:
            tallies[f"norm_bound:{check.name}"].record(
                check.value, check.bound * (1 + 1e-9) + 1e-12
            )

    for label, path in _calculus_paths(rng):
        for s in np.linspace(0.05, 0.95, 20):
            point = float(s)
            first = projector_derivative(path, point)
            second = projector_second_derivative(path, point)
            tallies[f"projector_first_derivative:{label}"].record(
                operator_norm(first - finite_difference_projector(path, point, order=1)),
                FIRST_DIFFERENCE_TOL,
            )
            tallies[f"projector_second_derivative:{label}"].record(
                operator_norm(second - finite_difference_projector(path, point, order=2)),
                SECOND_DIFFERENCE_TOL,
            )
    return tallies.results()


def _calculus_paths(rng: np.random.Generator) -> list[tuple[str, Any]]:
    grover, _ = grover_path(8, [0], subspace="full")
    A, b = random_qlsp_instance(4, 4.0, rng)
    qlsp, _, _ = qlsp_path(A, b)
    return [("grover", grover), ("qlsp", qlsp)]


# ----------------------------------------------------------------------
# Dynamika
# ----------------------------------------------------------------------


def _dynamics_suite(rng: np.random.Generator, options: SuiteOptions) -> tuple[CheckResult, ...]:
    tallies = _Tallies()
    schedule = Schedule.constant(CONSTANT_RATE)
    for generator in GENERATORS:
        config = _config(GROVER_8, generator, {"kind": "constant", "value": CONSTANT_RATE})
        setup = build_setup(config)
        gen = setup.generator(schedule)
        label = setup.kind.value if generator["kind"] != "jump" else f"jump-{generator['unitary']}"
        dim = gen.dimension
        for _ in range(10):
            s = float(rng.uniform(0.02, 0.98))
            rho = _random_density(rng, dim)
            try:
                derivative = rhs(gen, s, rho)
            except EigenpathError as exc:
                tallies[f"rhs_trace_free:{label}"].fail(f"{type(exc).__name__}: {exc}")
                continue
            P = gen.path.projector(s).P
            tallies[f"rhs_trace_free:{label}"].record(abs(np.trace(derivative)), RHS_TOL)
            tallies[f"rhs_hermitian:{label}"].record(
                operator_norm(derivative - derivative.conj().T), RHS_TOL
            )
            tallies[f"rhs_tracked_population:{label}"].record(
                abs(np.trace(P @ derivative)), RHS_TOL
            )
        try:
            initial = DensityMatrix.pure(setup.initial_state())
            result = integrate(gen, initial, StepPolicy(samples=11))
        except EigenpathError as exc:
            tallies[f"ode_physical_state:{label}"].fail(f"{type(exc).__name__}: {exc}")
            continue
        smallest = float(np.min(np.linalg.eigvalsh(result.final_state.matrix)))
        tallies[f"ode_physical_state:{label}"].record(-smallest, POSITIVITY_TOL)

        if setup.kind is GeneratorKind.PHASE_RANDOMISATION:
            for _ in range(50):
                s = float(rng.uniform(0.02, 0.98))
                rho = _random_density(rng, dim)
                pair = gen.path.projector(s)
                averaged = phase_channel(gen, s, rho)
                tallies["phase_channel_cross_blocks"].record(
                    max(
                        operator_norm(pair.P @ averaged @ pair.Q),
                        operator_norm(pair.Q @ averaged @ pair.P),
                    ),
                    CHANNEL_TOL,
                )
                tallies["phase_channel_fixes_tracked_block"].record(
                    operator_norm(pair.P @ (averaged - rho) @ pair.P), CHANNEL_TOL
                )
    return tallies.results()


# ----------------------------------------------------------------------
# Procesy losowe
# ----------------------------------------------------------------------


def _poisson_checks(rng: np.random.Generator, options: SuiteOptions, tallies: _Tallies) -> None:
    rates: tuple[tuple[str, Callable[[float], float], float], ...] = (
        ("constant", lambda s: 50.0, 50.0),
        ("quadratic", lambda s: 20.0 + 60.0 * s * s, 40.0),
    )
    for label, rate, expected in rates:
        counts = np.array(
            [sample_poisson(rate, rng).count for _ in range(options.poisson_samples)], dtype=float
        )
        stderr = math.sqrt(expected / options.poisson_samples)
        tallies[f"poisson_mean:{label}"].record(abs(counts.mean() - expected), 4 * stderr)
        tallies[f"poisson_variance:{label}"].record(
            abs(counts.var(ddof=1) / expected - 1.0),
            4 * math.sqrt(2.0 / (options.poisson_samples - 1)) + 1.0 / expected,
        )


def _tau_checks(rng: np.random.Generator, options: SuiteOptions, tallies: _Tallies) -> None:
    g0 = 1.0
    samples = sample_tau(FejerDistribution(), g0, rng, size=options.channel_samples)
    slack = fejer_truncation_mass()
    for omega, expected in ((0.5 * g0, 0.5), (2.0 * g0, 0.0)):
        mean, stderr = empirical_characteristic(samples, omega)
        tallies["tau_characteristic"].record(abs(mean - expected), 3 * stderr + slack)


def _channel_sampling_checks(
    rng: np.random.Generator, options: SuiteOptions, tallies: _Tallies
) -> None:
    config = _config(GROVER_8, GENERATORS[3], {"kind": "constant", "value": CONSTANT_RATE})
    setup = build_setup(config)
    gen = setup.generator(Schedule.constant(CONSTANT_RATE))
    dim = gen.dimension
    for _ in range(3):
        s = float(rng.uniform(0.05, 0.95))
        psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        psi /= np.linalg.norm(psi)
        rho = np.outer(psi, psi.conj())
        values, vectors = np.linalg.eigh(gen.path.value(s))
        coefficients = vectors.conj().T @ psi
        g0 = setup.instance.gap_model.value(s)
        taus = np.asarray(sample_tau(gen.phi, g0, rng, size=options.channel_samples))
        evolved = (np.exp(-1j * np.outer(taus, values)) * coefficients[np.newaxis, :]) @ vectors.T
        mean = evolved.T @ evolved.conj() / taus.size
        purity = float(np.real(np.vdot(mean, mean)))
        stderr = math.sqrt(max(1.0 - purity, 0.0) / (taus.size - 1))
        target = phase_channel(gen, s, rho)
        tallies["phase_channel_sampling"].record(
            float(np.linalg.norm(mean - target)), max(3 * stderr, 1e-3) + fejer_truncation_mass()
        )


def _marginal_checks(
    rng: np.random.Generator, options: SuiteOptions, tallies: _Tallies, seed: int
) -> None:
    schedule = Schedule.constant(CONSTANT_RATE)
    for index, generator in enumerate(GENERATORS):
        config = _config(GROVER_8, generator, {"kind": "constant", "value": CONSTANT_RATE})
        setup = build_setup(config)
        gen = setup.generator(schedule)
        label = setup.kind.value if generator["kind"] != "jump" else f"jump-{generator['unitary']}"
        psi0 = setup.initial_state()
        count = 2 if setup.kind is GeneratorKind.LIOUVILLE else options.trajectories
        try:
            ode = integrate(gen, DensityMatrix.pure(psi0), StepPolicy(samples=11))
            ensemble = monte_carlo(TrajectorySpec.from_generator(gen, psi0), count, seed + index)
        except EigenpathError as exc:
            tallies[f"marginal_consistency:{label}"].fail(f"{type(exc).__name__}: {exc}")
            continue
        tallies[f"marginal_consistency:{label}"].record(
            ensemble.mean_state.trace_distance(ode.final_state), ensemble.consistency_tolerance()
        )
        if index == 1:
            small = TrajectorySpec.from_generator(gen, psi0)
            serial = monte_carlo(small, 16, seed, threads=1)
            threaded = monte_carlo(small, 16, seed, threads=4)
            same = list(serial.iter_records()) == list(threaded.iter_records()) and np.array_equal(
                serial.mean_state.matrix, threaded.mean_state.matrix
            )
            tallies["thread_count_independence"].record(0.0 if same else 1.0, 0.0)


def _stochastic_suite(
    rng: np.random.Generator, options: SuiteOptions, seed: int
) -> tuple[CheckResult, ...]:
    tallies = _Tallies()
    _poisson_checks(rng, options, tallies)
    _tau_checks(rng, options, tallies)
    _channel_sampling_checks(rng, options, tallies)
    _marginal_checks(rng, options, tallies, seed)
    return tallies.results()


# ----------------------------------------------------------------------
# Ograniczenia
# ----------------------------------------------------------------------


def _bound_instances(quick: bool) -> list[tuple[str, dict[str, Any]]]:
    instances = [
        ("grover8", GROVER_8),
        ("grover16", {"kind": "grover", "N": 16, "marked": [0], "subspace": "full"}),
        ("qlsp4", {"kind": "qlsp", "random": {"dimension": 4, "kappa": 4.0, "seed": 3}}),
        ("qlsp8", {"kind": "qlsp", "random": {"dimension": 4, "kappa": 8.0, "seed": 3}}),
    ]
    return instances[:1] if quick else instances


def _bound_schedules(quick: bool) -> list[dict[str, Any]]:
    schedules: list[dict[str, Any]] = [{"kind": "constant", "value": BOUND_RATE}]
    if not quick:
        schedules.append({"kind": "adaptive", "p": 1.5, "epsilon": ADAPTIVE_EPSILON})
    return schedules


def _bounds_suite(rng: np.random.Generator, options: SuiteOptions) -> tuple[CheckResult, ...]:
    tallies = _Tallies()
    for kind in ("grover", "qlsp"):
        for p in (1.0, 1.5):
            report = gap_integral_check(kind, p)  # type: ignore[arg-type]
            tallies[f"gap_integral:{kind}"].record(report.spread, report.limit)

    for _ in range(options.suzuki_cases):
        dim = int(rng.integers(2, 7))
        H0 = random_hermitian(dim, rng)
        H1 = random_hermitian(dim, rng)
        H0 *= rng.uniform(0.2, 1.0) / operator_norm(H0)
        H1 *= rng.uniform(0.2, 1.0) / operator_norm(H1)
        s = float(rng.uniform(0.0, 1.0))
        h = float(rng.uniform(0.01, 0.5))
        tallies["trotter_spectral_shift"].record(suzuki_deviation(H0, H1, s, h), h**3 / 2 + 1e-12)

    settings = RuntimeSettings(threads=1)
    for label, instance in _bound_instances(options.quick):
        for generator in GENERATORS:
            for schedule in _bound_schedules(options.quick):
                name = f"{label}/{generator['kind']}"
                if generator["kind"] == "jump":
                    name += f"-{generator['unitary']}"
                name += f"/{schedule['kind']}"
                try:
                    outcome = run_experiment(_config(instance, generator, schedule), settings)
                except EigenpathError as exc:
                    tallies["bound_domination"].fail(f"{name}: {type(exc).__name__}: {exc}")
                    continue
                tallies["bound_domination"].record(
                    outcome.infidelity, outcome.bound.bound_value + 1e-9
                )

    hamiltonian, model = grover_path(8, [0], subspace="full")
    scaled = scale_path(hamiltonian, 0.5)
    unitary = exp_path(scaled)
    constant = Schedule.constant(BOUND_RATE)
    tight = eval_bound(TheoremId.DISCRETE_TIGHT, unitary, constant, points=BOUND_POINTS)
    loose = eval_bound(TheoremId.DISCRETE, unitary, constant, points=BOUND_POINTS)
    tallies["discrete_tight_below_loose"].record(
        tight.bound_value, loose.bound_value * (1 + 1e-9)
    )

    h = 0.1 * math.sqrt(model.g0m)
    trotter = _config(
        GROVER_8,
        {"kind": "jump", "unitary": "trotter", "h": h, "order": 1},
        {"kind": "adaptive", "p": 1.5, "epsilon": ADAPTIVE_EPSILON},
    )
    try:
        outcome = run_experiment(trotter, settings)
        tallies["trotter_run_within_bound"].record(outcome.infidelity, outcome.bound.bound_value)
    except EigenpathError as exc:
        tallies["trotter_run_within_bound"].fail(f"{type(exc).__name__}: {exc}")
    return tallies.results()


# ----------------------------------------------------------------------
# Wejście
# ----------------------------------------------------------------------


def _suite_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), SUITES.index(name)]))


def run_suite(name: str, seed: int, options: SuiteOptions | None = None) -> SuiteResult:
    options = options or SuiteOptions()
    rng = _suite_rng(seed, name)
    if name == "appendix_a":
        checks = _calculus_suite(rng, options)
    elif name == "dynamics":
        checks = _dynamics_suite(rng, options)
    elif name == "stochastic":
        checks = _stochastic_suite(rng, options, seed)
    elif name == "bounds":
        checks = _bounds_suite(rng, options)
    else:
        raise UnknownSuite(name)
    result = SuiteResult(name=name, checks=checks)
    logger.info("suite-complete", suite=name, checks=len(checks), violations=result.violations)
    return result


def verify(suite: str, seed: int, options: SuiteOptions | None = None) -> VerificationReport:
    """Uruchamia zestaw lub wszystkie; każdy ma własny strumień losowy z (seed, nazwa)."""

    if suite not in SUITE_CHOICES:
        raise UnknownSuite(suite)
    names = SUITES if suite == "all" else (suite,)
    return VerificationReport(
        suite=suite,
        seed=int(seed),
        suites=tuple(run_suite(name, seed, options) for name in names),
    )


def write_verification(
    report: VerificationReport,
    *,
    output_dir: Path,
    stem: str = "verification",
    formats: tuple[str, ...] = ("json", "md"),
    exporter: ReportExporter | None = None,
) -> list[Path]:
    exporter = exporter or DefaultReportExporter()
    output_dir = Path(output_dir)
    written: list[Path] = []
    if "json" in formats:
        written.append(exporter.export(report, output_dir / f"{stem}.json", ExportFormat.JSON))
    if "md" in formats:
        written.append(exporter.export(report, output_dir / f"{stem}.md", ExportFormat.MARKDOWN))
    if "csv" in formats:
        written.append(exporter.export(report, output_dir / f"{stem}.csv", ExportFormat.CSV))
    return written
