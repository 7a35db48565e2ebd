"""Raporty awarii numerycznych zapisywane przez CLI przy kodzie wyjścia 3."""

from __future__ import annotations

import json
import os
import platform
import sys
import traceback
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any
from uuid import uuid4

import numpy as np

from .config import THREADS_ENV, RuntimeSettings
from .errors import InstanceError, NumericalError

STACK_DISTRIBUTIONS = ("numpy", "scipy", "pydantic", "structlog")
_CHAIN_LIMIT = 8


@dataclass(frozen=True, slots=True)
class ErrorReport:
    path: Path
    created_at: datetime
    where: str


def _project_root() -> Path | None:
    for start in (Path.cwd(), *Path.cwd().parents):
        if (start / "pyproject.toml").is_file():
            return start
    return None


def get_error_reports_dir(settings: RuntimeSettings | None = None) -> Path:
    """Katalog raportów: `POISSON_EIGENPATH_ERROR_DIR`, potem `error_reports/` obok
    `pyproject.toml`, na końcu `~/.poisson_eigenpath/error_reports`."""

    settings = settings or RuntimeSettings.from_env()
    if settings.error_dir is not None:
        base = settings.error_dir
    elif (root := _project_root()) is not None:
        base = root / "error_reports"
    else:
        base = Path.home() / ".poisson_eigenpath" / "error_reports"
    base.mkdir(parents=True, exist_ok=True)
    return base


def _version(distribution: str) -> str:
    try:
        return metadata.version(distribution)
    except metadata.PackageNotFoundError:
        return "unknown"


def _branch(error: BaseException) -> str:
    if isinstance(error, NumericalError):
        return "numerical"
    if isinstance(error, InstanceError):
        return "instance"
    return "unexpected"


def _chain(error: BaseException) -> list[dict[str, str]]:
    """Łańcuch `__cause__`/`__context__` od zgłoszonego wyjątku w głąb."""

    links: list[dict[str, str]] = []
    current: BaseException | None = error
    while current is not None and len(links) < _CHAIN_LIMIT:
        links.append({"type": type(current).__name__, "message": str(current)})
        current = current.__cause__ or current.__context__
    return links


def _context(context: dict[str, Any]) -> dict[str, Any]:
    merged = dict(context)
    merged.setdefault("stack", {name: _version(name) for name in STACK_DISTRIBUTIONS})
    merged.setdefault("threads_env", (os.getenv(THREADS_ENV) or "").strip() or None)
    merged.setdefault("numpy_errstate", dict(np.geterr()))
    return merged


def write_error_report(
    error: BaseException,
    *,
    where: str,
    context: dict[str, Any] | None = None,
    settings: RuntimeSettings | None = None,
) -> ErrorReport:
    """Zapisuje nagłówek JSON (podkomenda, konfiguracja, wersje stosu) i traceback."""

    created_at = datetime.now(timezone.utc)
    path = get_error_reports_dir(settings) / (
        f"error_{created_at:%Y%m%d_%H%M%S}_{uuid4().hex[:8]}.txt"
    )
    header = {
        "created_at": created_at.isoformat(),
        "where": where,
        "error_type": type(error).__name__,
        "error_message": str(error),
        "branch": _branch(error),
        "chain": _chain(error),
        "version": _version("poisson-eigenpath"),
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "context": _context(context or {}),
    }
    trace = "".join(traceback.format_exception(error))
    path.write_text(
        f"poisson-eigenpath error report ({where})\n\n"
        + json.dumps(header, ensure_ascii=False, indent=2, default=str)
        + "\n\nTraceback\n---------\n"
        + trace,
        encoding="utf-8",
        errors="replace",
    )
    return ErrorReport(path=path, created_at=created_at, where=where)
