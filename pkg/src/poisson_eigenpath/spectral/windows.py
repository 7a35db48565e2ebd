"""Okna spektralne i pary rzutów spektralnych P, Q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
import numpy.typing as npt

from poisson_eigenpath.linalg.decomposition import (
    ComplexMatrix,
    SpectralDecomposition,
    eig_normal,
    operator_norm,
    square_matrix,
)
from poisson_eigenpath.shared.errors import InstanceError, NumericalError

BOUNDARY_TOL = 1e-10
CLUSTER_RTOL = 1e-8
MIN_GAP = 1e-8


class WindowKind(str, Enum):
    """Rodzaj okna spektralnego."""

    INTERVAL = "interval"
    CONTOUR = "contour"


class InvalidWindow(InstanceError):
    """Niepoprawne parametry okna."""


class BoundaryEigenvalue(NumericalError):
    """Wartość własna leży na brzegu okna."""

    def __init__(self, eigenvalue: complex, distance: float) -> None:
        super().__init__(f"Wartość własna {eigenvalue:.6g} w odległości {distance:.3e} od brzegu okna")
        self.eigenvalue = eigenvalue
        self.distance = distance


class EmptyWindow(NumericalError):
    """W oknie nie ma żadnej wartości własnej."""


class GapTooSmall(NumericalError):
    """Przerwa między widmem wewnątrz i na zewnątrz okna jest zbyt mała."""

    def __init__(self, gap: float) -> None:
        super().__init__(f"Przerwa spektralna {gap:.3e} poniżej progu {MIN_GAP:.0e}")
        self.gap = gap


class WindowCountChanged(NumericalError):
    """Liczba śledzonych wartości własnych zmieniła się wzdłuż ścieżki."""


@dataclass(frozen=True, slots=True)
class SpectralWindow:
    """Przedział [b0, b1] (widmo rzeczywiste) albo okrąg o środku `center` i promieniu `radius`."""

    kind: WindowKind
    b0: float = 0.0
    b1: float = 0.0
    center: complex = 0j
    radius: float = 0.0

    def __post_init__(self) -> None:
        if self.kind is WindowKind.INTERVAL and not self.b0 < self.b1:
            raise InvalidWindow(f"Przedział wymaga b0 < b1 (b0={self.b0}, b1={self.b1})")
        if self.kind is WindowKind.CONTOUR and not self.radius > 0:
            raise InvalidWindow(f"Kontur wymaga dodatniego promienia (r={self.radius})")

    @classmethod
    def interval(cls, b0: float, b1: float) -> "SpectralWindow":
        return cls(kind=WindowKind.INTERVAL, b0=float(b0), b1=float(b1))

    @classmethod
    def contour(cls, center: complex, radius: float) -> "SpectralWindow":
        return cls(kind=WindowKind.CONTOUR, center=complex(center), radius=float(radius))

    def contains(self, values: npt.ArrayLike) -> npt.NDArray[np.bool_]:
        z = np.asarray(values, dtype=np.complex128)
        if self.kind is WindowKind.INTERVAL:
            return (z.real > self.b0) & (z.real < self.b1)
        return np.abs(z - self.center) < self.radius

    def boundary_distance(self, values: npt.ArrayLike) -> npt.NDArray[np.float64]:
        z = np.asarray(values, dtype=np.complex128)
        if self.kind is WindowKind.INTERVAL:
            return np.minimum(np.abs(z - self.b0), np.abs(z - self.b1))
        return np.abs(np.abs(z - self.center) - self.radius)

    def scaled(self, factor: float) -> "SpectralWindow":
        if factor <= 0:
            raise InvalidWindow(f"Skalowanie okna wymaga dodatniego czynnika (c={factor})")
        if self.kind is WindowKind.INTERVAL:
            return SpectralWindow.interval(self.b0 * factor, self.b1 * factor)
        return SpectralWindow.contour(self.center * factor, self.radius * factor)

    def to_dict(self) -> dict[str, object]:
        if self.kind is WindowKind.INTERVAL:
            return {"kind": self.kind.value, "b0": self.b0, "b1": self.b1}
        return {
            "kind": self.kind.value,
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
        }


WindowFunction = Callable[[float], SpectralWindow]


@dataclass(frozen=True, slots=True, eq=False)
class ProjectorPair:
    """Rzuty P, Q = 1 − P, m skupisk wartości własnych wewnątrz okna i przerwa."""

    P: ComplexMatrix
    Q: ComplexMatrix
    m: int
    inside_eigs: tuple[tuple[complex, ComplexMatrix], ...]
    gap: float
    decomposition: SpectralDecomposition
    inside_mask: npt.NDArray[np.bool_]
    tracked_values: npt.NDArray[np.complex128]

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.inside_mask))

    @property
    def dimension(self) -> int:
        return int(self.P.shape[0])

    @property
    def inside_values(self) -> npt.NDArray[np.complex128]:
        return self.decomposition.eigenvalues[self.inside_mask]

    @property
    def outside_values(self) -> npt.NDArray[np.complex128]:
        return self.decomposition.eigenvalues[~self.inside_mask]


def _cluster(values: npt.NDArray[np.complex128], tol: float) -> list[list[int]]:
    clusters: list[list[int]] = []
    anchors: list[complex] = []
    for index, value in enumerate(values):
        for cluster, anchor in zip(clusters, anchors):
            if abs(value - anchor) <= tol:
                cluster.append(index)
                break
        else:
            clusters.append([index])
            anchors.append(complex(value))
    return clusters


def projector_from_decomposition(
    decomposition: SpectralDecomposition,
    inside: npt.NDArray[np.bool_],
    *,
    cluster_rtol: float = CLUSTER_RTOL,
    min_gap: float = MIN_GAP,
) -> ProjectorPair:
    """Buduje parę rzutów dla zadanej maski wartości własnych wewnątrz okna."""

    values = decomposition.eigenvalues
    V = decomposition.eigenvectors
    if not np.any(inside):
        raise EmptyWindow("Okno nie zawiera żadnej wartości własnej")

    V_in = V[:, inside]
    P = V_in @ V_in.conj().T
    identity = np.eye(values.shape[0], dtype=np.complex128)

    inside_values = values[inside]
    outside_values = values[~inside]
    if outside_values.size:
        gap = float(np.min(np.abs(inside_values[:, np.newaxis] - outside_values[np.newaxis, :])))
    else:
        gap = math.inf
    if gap < min_gap:
        raise GapTooSmall(gap)

    scale = max(1.0, float(np.max(np.abs(values))))
    inside_indices = np.flatnonzero(inside)
    tracked = np.full(values.shape[0], np.nan + 0j, dtype=np.complex128)
    pairs: list[tuple[complex, ComplexMatrix]] = []
    for cluster in _cluster(inside_values, cluster_rtol * scale):
        members = inside_indices[cluster]
        omega = complex(np.mean(values[members]))
        Vk = V[:, members]
        pairs.append((omega, Vk @ Vk.conj().T))
        tracked[members] = omega

    return ProjectorPair(
        P=P,
        Q=identity - P,
        m=len(pairs),
        inside_eigs=tuple(pairs),
        gap=gap,
        decomposition=decomposition,
        inside_mask=np.asarray(inside, dtype=bool),
        tracked_values=tracked,
    )


def window_projector(
    A: npt.ArrayLike,
    w: SpectralWindow,
    *,
    hermitian_hint: bool | None = None,
    decomposition: SpectralDecomposition | None = None,
    boundary_tol: float = BOUNDARY_TOL,
    cluster_rtol: float = CLUSTER_RTOL,
) -> ProjectorPair:
    """Rzut Riesza na wartości własne A leżące wewnątrz okna `w`."""

    matrix = square_matrix(A)
    decomp = decomposition if decomposition is not None else eig_normal(matrix, hermitian_hint)
    distances = w.boundary_distance(decomp.eigenvalues)
    worst = int(np.argmin(distances))
    if distances[worst] < boundary_tol * max(1.0, operator_norm(matrix)):
        raise BoundaryEigenvalue(complex(decomp.eigenvalues[worst]), float(distances[worst]))
    return projector_from_decomposition(
        decomp, w.contains(decomp.eigenvalues), cluster_rtol=cluster_rtol
    )


def contour_around(
    inside: npt.ArrayLike,
    outside: npt.ArrayLike,
) -> SpectralWindow:
    """Okrąg o środku w centrum prostokąta otaczającego `inside`, w połowie drogi do `outside`."""

    z_in = np.asarray(inside, dtype=np.complex128)
    z_out = np.asarray(outside, dtype=np.complex128)
    if z_in.size == 0:
        raise EmptyWindow("Brak wartości własnych do otoczenia konturem")
    center = complex(
        (z_in.real.min() + z_in.real.max()) / 2, (z_in.imag.min() + z_in.imag.max()) / 2
    )
    r_in = float(np.max(np.abs(z_in - center)))
    if z_out.size == 0:
        return SpectralWindow.contour(center, r_in + 1.0)
    r_out = float(np.min(np.abs(z_out - center)))
    if r_out <= r_in:
        nearest = complex(z_out[int(np.argmin(np.abs(z_out - center)))])
        raise BoundaryEigenvalue(nearest, r_out - r_in)
    return SpectralWindow.contour(center, (r_in + r_out) / 2)


def default_contour(pp: ProjectorPair) -> SpectralWindow:
    """Kontur w połowie przerwy wokół śledzonych wartości własnych pary `pp`."""

    return contour_around(pp.inside_values, pp.outside_values)


def interval_around(inside: npt.ArrayLike, outside: npt.ArrayLike) -> SpectralWindow:
    """Przedział wokół rzeczywistych wartości `inside`, poszerzony o połowę przerwy."""

    z_in = np.real(np.asarray(inside))
    z_out = np.real(np.asarray(outside))
    lo, hi = float(z_in.min()), float(z_in.max())
    gap = float(np.min(np.abs(z_in[:, np.newaxis] - z_out[np.newaxis, :]))) if z_out.size else 1.0
    half = max(gap / 2, MIN_GAP)
    return SpectralWindow.interval(lo - half, hi + half)


def ranked_interval_window(
    value: Callable[[float], ComplexMatrix],
    ranks: Sequence[int],
) -> WindowFunction:
    """Okno śledzące wartości własne o zadanych pozycjach w uporządkowanym widmie.

    Dla ścieżek hermitowskich z otwartą przerwą pozycje śledzonych wartości się nie
    zmieniają, więc wystarczy je odczytać w każdym punkcie s.
    """

    indices = np.asarray(sorted(set(int(r) for r in ranks)), dtype=int)

    def _window(s: float) -> SpectralWindow:
        spectrum = np.linalg.eigvalsh(value(s))
        mask = np.zeros(spectrum.shape[0], dtype=bool)
        mask[indices] = True
        return interval_around(spectrum[mask], spectrum[~mask])

    return _window


def continue_windows(
    values: Sequence[ComplexMatrix],
    initial: SpectralWindow,
) -> list[SpectralWindow]:
    """Kontynuacja okna wzdłuż siatki przez dopasowanie najbliższych wartości własnych.

    Zgłasza `WindowCountChanged`, gdy dopasowanie nie jest jednoznaczne.
    """

    if not values:
        return []
    decomp = eig_normal(values[0])
    previous = decomp.eigenvalues[initial.contains(decomp.eigenvalues)]
    if previous.size == 0:
        raise EmptyWindow("Okno początkowe nie zawiera wartości własnych")

    windows = [initial]
    for matrix in values[1:]:
        current = eig_normal(matrix)
        spectrum = current.eigenvalues
        chosen: set[int] = set()
        for value in previous:
            order = np.argsort(np.abs(spectrum - value))
            pick = next((int(i) for i in order if int(i) not in chosen), None)
            if pick is None:
                raise WindowCountChanged("Brak wartości własnej do kontynuacji okna")
            chosen.add(pick)
        mask = np.zeros(spectrum.shape[0], dtype=bool)
        mask[list(chosen)] = True
        if current.hermitian:
            window = interval_around(spectrum[mask], spectrum[~mask])
        else:
            window = contour_around(spectrum[mask], spectrum[~mask])
        if int(np.count_nonzero(window.contains(spectrum))) != previous.size:
            raise WindowCountChanged(
                f"Liczba śledzonych wartości własnych zmieniła się z {previous.size}"
            )
        windows.append(window)
        previous = spectrum[mask]
    return windows
