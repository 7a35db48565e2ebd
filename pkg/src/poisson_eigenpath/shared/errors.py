"""Wspólna hierarchia wyjątków symulatora.

Moduły definiują własne, nazwane wyjątki obok kodu, który je zgłasza, i dziedziczą
po jednej z dwóch gałęzi poniżej. CLI mapuje gałąź na kod wyjścia.
"""

from __future__ import annotations


class EigenpathError(RuntimeError):
    """Bazowy wyjątek pakietu."""

    exit_code: int = 1


class InstanceError(EigenpathError, ValueError):
    """Niepoprawna instancja, konfiguracja lub parametr wejściowy."""

    exit_code = 2


class NumericalError(EigenpathError):
    """Niepowodzenie obliczeń numerycznych."""

    exit_code = 3


__all__ = ["EigenpathError", "InstanceError", "NumericalError"]
