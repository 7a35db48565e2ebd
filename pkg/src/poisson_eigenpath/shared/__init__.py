"""Moduły współdzielone: konfiguracja, logowanie, wyjątki, raporty błędów."""

from .config import RuntimeSettings
from .error_reporting import ErrorReport, get_error_reports_dir, write_error_report
from .errors import EigenpathError, InstanceError, NumericalError
from .logging import bind_run_context, configure_logging

__all__ = [
	"RuntimeSettings",
	"bind_run_context",
	"configure_logging",
	"EigenpathError",
	"InstanceError",
	"NumericalError",
	"ErrorReport",
	"get_error_reports_dir",
	"write_error_report",
]
