"""Ustawienia uruchomieniowe czytane ze zmiennych środowiskowych."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

THREADS_ENV = "POISSON_EIGENPATH_THREADS"
ERROR_DIR_ENV = "POISSON_EIGENPATH_ERROR_DIR"


def _read_int(name: str, default: int, *, minimum: int = 1) -> int:
    raw = (os.getenv(name) or "").strip()
    if not raw:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return max(minimum, value)


@dataclass(frozen=True, slots=True)
class RuntimeSettings:
    """Ustawienia procesu niezależne od konfiguracji eksperymentu."""

    threads: int = 1
    error_dir: Path | None = None

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        """Czyta `POISSON_EIGENPATH_THREADS` oraz `POISSON_EIGENPATH_ERROR_DIR`."""

        error_dir = (os.getenv(ERROR_DIR_ENV) or "").strip()
        return cls(
            threads=_read_int(THREADS_ENV, 1),
            error_dir=Path(error_dir) if error_dir else None,
        )

    def with_threads(self, threads: int | None) -> "RuntimeSettings":
        """Flaga `--threads` ma pierwszeństwo przed zmienną środowiskową."""

        if threads is None:
            return self
        return RuntimeSettings(threads=max(1, int(threads)), error_dir=self.error_dir)
