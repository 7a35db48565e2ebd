"""Prawe strony równania marginalnego dρ/ds = λ(s)·L_s(ρ) dla trzech generatorów."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from poisson_eigenpath.linalg.decomposition import ComplexMatrix, eig_normal
from poisson_eigenpath.spectral.windows import window_projector

from .models import DensityMatrix, GapModelMissing, Generator, GeneratorKind


@dataclass(frozen=True, slots=True, eq=False)
class GeneratorSnapshot:
    """Operatory generatora zamrożone w jednym punkcie s.

    `multiplier` (tylko randomizacja fazy) to macierz mnożników w bazie własnej H:
    φ(ω_j − ω_k) z wyzerowanymi blokami mieszającymi okno z dopełnieniem.
    """

    kind: GeneratorKind
    s: float
    rate: float
    operator: ComplexMatrix
    eigenvectors: ComplexMatrix | None = None
    multiplier: ComplexMatrix | None = None
    clusters: int = 1


def snapshot(gen: Generator, s: float) -> GeneratorSnapshot:
    """Przygotowuje operatory generatora w punkcie s."""

    rate = gen.rate.evaluate(s)
    value = gen.path.value(s)
    if gen.kind is not GeneratorKind.PHASE_RANDOMISATION:
        return GeneratorSnapshot(kind=gen.kind, s=s, rate=rate, operator=value)

    if gen.gap_model is None or gen.phi is None:
        raise GapModelMissing("Randomizacja fazy wymaga modelu przerwy g₀(s)")
    decomposition = eig_normal(value, hermitian_hint=True)
    pair = window_projector(value, gen.path.window(s), decomposition=decomposition)
    omega = np.real(decomposition.eigenvalues)
    multiplier = gen.phi.characteristic(omega[:, np.newaxis] - omega[np.newaxis, :], gen.gap_model.value(s))
    inside = pair.inside_mask
    cross = np.logical_xor(inside[:, np.newaxis], inside[np.newaxis, :])
    multiplier = np.where(cross, 0.0, multiplier).astype(np.complex128)
    return GeneratorSnapshot(
        kind=gen.kind,
        s=s,
        rate=rate,
        operator=value,
        eigenvectors=decomposition.eigenvectors,
        multiplier=multiplier,
        clusters=pair.m,
    )


def _liouville(snap: GeneratorSnapshot, rho: ComplexMatrix) -> ComplexMatrix:
    H = snap.operator
    return -1j * snap.rate * (H @ rho - rho @ H)


def _jump(snap: GeneratorSnapshot, rho: ComplexMatrix) -> ComplexMatrix:
    U = snap.operator
    return snap.rate * (U @ rho @ U.conj().T - rho)


def _phase(snap: GeneratorSnapshot, rho: ComplexMatrix) -> ComplexMatrix:
    assert snap.eigenvectors is not None and snap.multiplier is not None
    V = snap.eigenvectors
    averaged = V @ (snap.multiplier * (V.conj().T @ rho @ V)) @ V.conj().T
    return snap.rate * (averaged - rho)


RhsFunction = Callable[[GeneratorSnapshot, ComplexMatrix], ComplexMatrix]

RHS_BY_KIND: dict[GeneratorKind, RhsFunction] = {
    GeneratorKind.LIOUVILLE: _liouville,
    GeneratorKind.JUMP: _jump,
    GeneratorKind.PHASE_RANDOMISATION: _phase,
}


def _as_array(rho: DensityMatrix | ComplexMatrix) -> ComplexMatrix:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=np.complex128)


def _require(gen: Generator, kind: GeneratorKind) -> None:
    if gen.kind is not kind:
        raise ValueError(f"Oczekiwano generatora {kind.value}, otrzymano {gen.kind.value}")


def liouville_rhs(gen: Generator, s: float, rho: DensityMatrix | ComplexMatrix) -> ComplexMatrix:
    """−iT(s)[H(s), ρ]."""

    _require(gen, GeneratorKind.LIOUVILLE)
    return RHS_BY_KIND[gen.kind](snapshot(gen, s), _as_array(rho))


def jump_rhs(gen: Generator, s: float, rho: DensityMatrix | ComplexMatrix) -> ComplexMatrix:
    """λ(s)(U(s)ρU(s)* − ρ)."""

    _require(gen, GeneratorKind.JUMP)
    return RHS_BY_KIND[gen.kind](snapshot(gen, s), _as_array(rho))


def phase_rand_rhs(gen: Generator, s: float, rho: DensityMatrix | ComplexMatrix) -> ComplexMatrix:
    """λ(s)(E_τ[e^{−iτH}ρe^{iτH}] − ρ) z zerowymi blokami PρQ i QρP uśrednienia."""

    _require(gen, GeneratorKind.PHASE_RANDOMISATION)
    return RHS_BY_KIND[gen.kind](snapshot(gen, s), _as_array(rho))


def rhs(gen: Generator, s: float, rho: DensityMatrix | ComplexMatrix) -> ComplexMatrix:
    return RHS_BY_KIND[gen.kind](snapshot(gen, s), _as_array(rho))


def phase_channel(gen: Generator, s: float, rho: DensityMatrix | ComplexMatrix) -> ComplexMatrix:
    """Uśredniony kanał randomizacji fazy w punkcie s (bez czynnika λ)."""

    _require(gen, GeneratorKind.PHASE_RANDOMISATION)
    snap = snapshot(gen, s)
    assert snap.eigenvectors is not None and snap.multiplier is not None
    V = snap.eigenvectors
    matrix = _as_array(rho)
    return V @ (snap.multiplier * (V.conj().T @ matrix @ V)) @ V.conj().T
