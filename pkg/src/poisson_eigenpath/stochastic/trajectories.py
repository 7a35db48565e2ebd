"""Pojedyncze trajektorie: unitarne skoki, randomizacja fazy i ewolucja Schrödingera."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt
import scipy.integrate
import scipy.linalg

from poisson_eigenpath.dynamics.phases import PhaseDistribution
from poisson_eigenpath.linalg.decomposition import DimensionMismatch
from poisson_eigenpath.paths.base import GapModel, OperatorPath
from poisson_eigenpath.schedules.assumption import simpson_integral
from poisson_eigenpath.schedules.schedule import Schedule
from poisson_eigenpath.shared.errors import InstanceError, NumericalError

from .phases import sample_tau
from .poisson import PoissonRealization, SeedLike, as_rng

StateVector = npt.NDArray[np.complex128]

STATE_NORM_TOL = 1e-10
NORM_DRIFT_LIMIT = 1e-9
ODE_RTOL = 1e-10
ODE_ATOL = 1e-12


class InvalidState(InstanceError):
    """Wektor początkowy nie jest unormowany."""


class NormDrift(NumericalError):
    """Norma stanu trajektorii odpłynęła od 1."""

    def __init__(self, error: float, s: float) -> None:
        super().__init__(f"Odchylenie normy stanu {error:.3e} w s={s:.6f}")
        self.error = error
        self.s = s


@dataclass(frozen=True, slots=True, eq=False)
class TrajectoryResult:
    """Wynik jednej realizacji.

    `hamiltonian_time` to suma |τ| (randomizacja fazy) albo ∫T ds (Liouville);
    dla skoków unitarnych wynosi 0.
    """

    final_state: StateVector
    jump_count: int
    hamiltonian_time: float
    seed: int | None
    jump_points: tuple[float, ...] = ()
    max_norm_error: float = 0.0

    def fidelity(self, projector: npt.ArrayLike) -> float:
        P = np.asarray(projector, dtype=np.complex128)
        psi = self.final_state
        return min(1.0, max(0.0, float(np.real(np.vdot(psi, P @ psi)))))

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "jump_count": self.jump_count,
            "time": self.hamiltonian_time,
            "max_norm_error": self.max_norm_error,
        }


def prepare_state(psi0: npt.ArrayLike, dimension: int) -> StateVector:
    psi = np.asarray(psi0, dtype=np.complex128).reshape(-1)
    if psi.shape[0] != dimension:
        raise DimensionMismatch(dimension, psi.shape[0], what="wektor stanu")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > STATE_NORM_TOL:
        raise InvalidState(f"Norma stanu początkowego {norm:.12g} ≠ 1")
    return psi.copy()


def _norm_error(psi: StateVector, s: float) -> float:
    error = abs(float(np.linalg.norm(psi)) - 1.0)
    if error > NORM_DRIFT_LIMIT:
        raise NormDrift(error, s)
    return error


def run_trajectory_unitary(
    path: OperatorPath,
    realization: PoissonRealization,
    psi0: npt.ArrayLike,
    *,
    seed: int | None = None,
) -> TrajectoryResult:
    """Stosuje U(s_k) w kolejności rosnących punktów skoków."""

    psi = prepare_state(psi0, path.dimension)
    worst = 0.0
    for s in realization.jump_points:
        psi = path.value(s) @ psi
        worst = max(worst, _norm_error(psi, s))
    return TrajectoryResult(
        final_state=psi,
        jump_count=realization.count,
        hamiltonian_time=0.0,
        seed=seed,
        jump_points=realization.jump_points,
        max_norm_error=worst,
    )


def run_trajectory_phase(
    path: OperatorPath,
    realization: PoissonRealization,
    psi0: npt.ArrayLike,
    rng_seed: SeedLike,
    *,
    gap_model: GapModel,
    phi: PhaseDistribution | None = None,
    seed: int | None = None,
) -> TrajectoryResult:
    """W każdym skoku losuje τ i stosuje e^{−iτH(s_k)}; czas to Σ|τ|."""

    rng = as_rng(rng_seed)
    psi = prepare_state(psi0, path.dimension)
    worst = 0.0
    elapsed = 0.0
    for s in realization.jump_points:
        tau = float(sample_tau(phi, gap_model.value(s), rng))
        values, vectors = scipy.linalg.eigh(path.value(s))
        psi = vectors @ (np.exp(-1j * tau * values) * (vectors.conj().T @ psi))
        elapsed += abs(tau)
        worst = max(worst, _norm_error(psi, s))
    return TrajectoryResult(
        final_state=psi,
        jump_count=realization.count,
        hamiltonian_time=elapsed,
        seed=seed,
        jump_points=realization.jump_points,
        max_norm_error=worst,
    )


def run_trajectory_liouville(
    path: OperatorPath,
    rate: Schedule,
    psi0: npt.ArrayLike,
    *,
    seed: int | None = None,
    rtol: float = ODE_RTOL,
    atol: float = ODE_ATOL,
) -> TrajectoryResult:
    """Ewolucja dψ/ds = −i·T(s)·H(s)ψ (metoda DOP853); trajektoria deterministyczna."""

    psi = prepare_state(psi0, path.dimension)

    def derivative(s: float, state: StateVector) -> StateVector:
        return -1j * rate.evaluate(s) * (path.value(s) @ state)

    solution = scipy.integrate.solve_ivp(
        derivative, (0.0, 1.0), psi, method="DOP853", rtol=rtol, atol=atol
    )
    if not solution.success:
        raise NumericalError(f"Całkowanie trajektorii nie powiodło się: {solution.message}")
    final = np.asarray(solution.y[:, -1], dtype=np.complex128)
    error = abs(float(np.linalg.norm(final)) - 1.0)
    return TrajectoryResult(
        final_state=final / np.linalg.norm(final),
        jump_count=0,
        hamiltonian_time=simpson_integral(rate.evaluate_many),
        seed=seed,
        max_norm_error=error,
    )
