"""Domyślna implementacja eksportu (JSON/CSV/JSONL/Markdown)."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .exporter import ExportFormat, ReportDocument, ReportExporter


def to_plain(value: Any) -> Any:
    """Zamienia typy numpy na typy Pythona, a wartości nieskończone i NaN na None."""

    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_plain(value.real), "im": to_plain(value.imag)}
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def dumps(payload: Any) -> str:
    """JSON o stałym formacie, z NaN zapisanym jako null."""

    return json.dumps(to_plain(payload), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


class DefaultReportExporter(ReportExporter):
    """Eksporter zapisujący dokumenty wynikowe do plików."""

    def export(self, document: ReportDocument, destination: Path, fmt: ExportFormat) -> Path:
        destination = Path(destination)
        destination.parent.mkdir(parents=True, exist_ok=True)

        if fmt is ExportFormat.JSON:
            destination.write_text(dumps(document.to_dict()), encoding="utf-8")
        elif fmt is ExportFormat.CSV:
            self._write_csv(document.csv_fieldnames(), document.csv_rows(), destination)
        elif fmt is ExportFormat.JSONL:
            self._write_jsonl(document.json_lines(), destination)
        elif fmt is ExportFormat.MARKDOWN:
            destination.write_text(document.to_markdown(), encoding="utf-8")
        else:  # pragma: no cover - obsługa przyszłych formatów
            raise ValueError(f"Nieobsługiwany format eksportu: {fmt}")

        return destination

    # ------------------------------------------------------------------
    # CSV
    # ------------------------------------------------------------------

    @staticmethod
    def _write_csv(
        fieldnames: list[str], rows: Iterable[dict[str, Any]], destination: Path
    ) -> None:
        with destination.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.DictWriter(handle, fieldnames=fieldnames, extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                plain = to_plain(row)
                writer.writerow(
                    {key: "" if plain.get(key) is None else plain[key] for key in fieldnames}
                )

    # ------------------------------------------------------------------
    # JSONL
    # ------------------------------------------------------------------

    @staticmethod
    def _write_jsonl(records: Iterable[dict[str, Any]], destination: Path) -> None:
        with destination.open("w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(to_plain(record), ensure_ascii=False, allow_nan=False))
                handle.write("\n")
