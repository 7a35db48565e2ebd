"""Zapis wyników do plików JSON, CSV, JSONL i Markdown."""

from .default import DefaultReportExporter, dumps, to_plain
from .exporter import ExportFormat, ReportDocument, ReportExporter

__all__ = [
	"DefaultReportExporter",
	"ExportFormat",
	"ReportDocument",
	"ReportExporter",
	"dumps",
	"to_plain",
]
