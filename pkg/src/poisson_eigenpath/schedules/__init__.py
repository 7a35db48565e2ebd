"""Harmonogramy częstości, certyfikacja założenia o przerwie, stałe C i ograniczenia."""

from .assumption import (
	GapBelowMinimum,
	GapIntegralReport,
	GapIntegralRow,
	NonPositiveGap,
	certified,
	certify_assumption,
	gap_integral,
	gap_integral_check,
	simpson_integral,
)
from .bounds import BoundReport, adaptive_cost_bound, adaptive_schedule, eval_bound
from .constants import PathProfile, TheoremId, compute_C, path_profile
from .schedule import (
	AssumptionNotCertified,
	InvalidSchedule,
	Schedule,
	ScheduleKind,
	ScheduleNotDifferentiable,
)

__all__ = [
	"AssumptionNotCertified",
	"BoundReport",
	"GapBelowMinimum",
	"GapIntegralReport",
	"GapIntegralRow",
	"InvalidSchedule",
	"NonPositiveGap",
	"PathProfile",
	"Schedule",
	"ScheduleKind",
	"ScheduleNotDifferentiable",
	"TheoremId",
	"adaptive_cost_bound",
	"adaptive_schedule",
	"certified",
	"certify_assumption",
	"compute_C",
	"eval_bound",
	"gap_integral",
	"gap_integral_check",
	"path_profile",
	"simpson_integral",
]
