"""Ograniczenia normowe rachunku "twiddle" i rzutów spektralnych."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.linalg.decomposition import (
    ComplexMatrix,
    commutator,
    operator_norm,
    square_matrix,
)

from .twiddle import twiddle_derivative, twiddle_spectral
from .windows import ProjectorPair

RELATIVE_SLACK = 1e-9
ABSOLUTE_SLACK = 1e-12


@dataclass(frozen=True, slots=True)
class BoundCheck:
    """Jedno ograniczenie: wartość ograniczenia i norma, którą ma dominować."""

    name: str
    bound: float
    value: float

    @property
    def satisfied(self) -> bool:
        return self.value <= self.bound * (1 + RELATIVE_SLACK) + ABSOLUTE_SLACK

    @property
    def margin(self) -> float:
        """Względny zapas (bound − value)/max(bound, 1e−300)."""

        if math.isinf(self.bound):
            return math.inf
        return (self.bound - self.value) / max(abs(self.bound), 1e-300)

    def to_dict(self) -> dict[str, object]:
        return {
            "name": self.name,
            "bound": self.bound,
            "value": self.value,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True, slots=True)
class NormBoundSuite:
    checks: tuple[BoundCheck, ...]

    @property
    def satisfied(self) -> bool:
        return all(check.satisfied for check in self.checks)

    @property
    def violations(self) -> list[BoundCheck]:
        return [check for check in self.checks if not check.satisfied]

    @property
    def worst_margin(self) -> float:
        return min((check.margin for check in self.checks), default=math.inf)

    def by_name(self) -> dict[str, BoundCheck]:
        return {check.name: check for check in self.checks}

    def to_dict(self) -> dict[str, object]:
        return {
            "satisfied": self.satisfied,
            "checks": [check.to_dict() for check in self.checks],
        }


def _block_norms(pp: ProjectorPair, X: ComplexMatrix) -> npt.NDArray[np.float64]:
    P, Q = pp.P, pp.Q
    return np.array(
        [
            [operator_norm(P @ X @ P), operator_norm(P @ X @ Q)],
            [operator_norm(Q @ X @ P), operator_norm(Q @ X @ Q)],
        ]
    )


def norm_bound_suite(
    A: npt.ArrayLike,
    pp: ProjectorPair,
    dA: npt.ArrayLike,
    ddA: npt.ArrayLike,
    *,
    X: npt.ArrayLike | None = None,
    dX: npt.ArrayLike | None = None,
    ddX: npt.ArrayLike | None = None,
    twiddle_second: npt.ArrayLike | None = None,
) -> NormBoundSuite:
    """Porównuje normy obliczone wprost z ich ograniczeniami.

    Bez `X` ograniczenia statyczne sprawdzane są dla X = A'. Ograniczenia
    pochodnych X̃ wymagają `dX` (pierwsza) oraz `ddX` i `twiddle_second` (druga).
    """

    matrix = square_matrix(A)
    first = square_matrix(dA)
    second = square_matrix(ddA)
    P, Q = pp.P, pp.Q
    m = pp.m
    root_m = math.sqrt(m)
    g = pp.gap

    norm_d = operator_norm(first)
    norm_dd = operator_norm(second)

    target = first if X is None else square_matrix(X)
    target_norm = operator_norm(target)
    target_twiddle = twiddle_spectral(matrix, pp, target)

    dP = twiddle_spectral(matrix, pp, first)
    ddP = twiddle_derivative(matrix, first, pp, first, second)
    bracket = commutator(P, dP)
    bracket_derivative = commutator(P, ddP)
    twiddled_bracket_derivative = twiddle_derivative(matrix, first, pp, bracket, bracket_derivative)

    checks = [
        BoundCheck(
            "block_norm",
            operator_norm(_block_norms(pp, target)),
            target_norm,
        ),
        BoundCheck(
            "twiddle_norm",
            root_m * max(operator_norm(P @ target @ Q), operator_norm(Q @ target @ P)) / g,
            operator_norm(target_twiddle),
        ),
        BoundCheck("projector_derivative", root_m * norm_d / g, operator_norm(dP)),
        BoundCheck(
            "projector_second_derivative",
            root_m * norm_dd / g + 6 * m * norm_d**2 / g**2,
            operator_norm(ddP),
        ),
        BoundCheck(
            "commutator_derivative",
            root_m * norm_dd / g + 2 * m * norm_d**2 / g**2,
            operator_norm(bracket_derivative),
        ),
        BoundCheck(
            "twiddled_commutator_derivative",
            m * operator_norm(P @ second @ Q) / g**2 + 5 * m * root_m * norm_d**2 / g**3,
            operator_norm(twiddled_bracket_derivative),
        ),
    ]

    if dX is not None:
        dXm = square_matrix(dX)
        checks.append(
            BoundCheck(
                "twiddle_first_derivative",
                root_m * operator_norm(dXm) / g + 6 * m * norm_d * target_norm / g**2,
                operator_norm(twiddle_derivative(matrix, first, pp, target, dXm)),
            )
        )
        if ddX is not None and twiddle_second is not None:
            checks.append(
                BoundCheck(
                    "twiddle_second_derivative",
                    64 * m * root_m * norm_d**2 * target_norm / g**3
                    + 6 * m * norm_dd * target_norm / g**2
                    + 12 * m * norm_d * operator_norm(dXm) / g**2
                    + root_m * operator_norm(square_matrix(ddX)) / g,
                    operator_norm(square_matrix(twiddle_second)),
                )
            )

    return NormBoundSuite(tuple(checks))
