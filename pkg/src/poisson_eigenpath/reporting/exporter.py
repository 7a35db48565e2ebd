"""Interfejsy eksportu wyników przebiegów, przemiatań i weryfikacji."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Protocol


class ExportFormat(str, Enum):
    """Formaty plików wynikowych."""

    CSV = "csv"
    JSON = "json"
    JSONL = "jsonl"
    MARKDOWN = "md"


class ReportDocument(Protocol):
    """Wynik, który potrafi opisać się jako słownik, wiersze CSV i rekordy JSONL."""

    def to_dict(self) -> dict[str, Any]:
        """Dokument JSON."""

    def csv_fieldnames(self) -> list[str]:
        """Stałe nagłówki CSV."""

    def csv_rows(self) -> Iterable[dict[str, Any]]:
        """Wiersze CSV w kolejności zapisu."""

    def json_lines(self) -> Iterable[dict[str, Any]]:
        """Rekordy JSONL."""

    def to_markdown(self) -> str:
        """Podsumowanie w Markdown."""


class ReportExporter(Protocol):
    """Interfejs dla mechanizmów eksportu."""

    def export(self, document: ReportDocument, destination: Path, fmt: ExportFormat) -> Path:
        """Eksportuje dokument do wybranego formatu i zwraca ścieżkę docelową."""
