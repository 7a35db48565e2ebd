"""Eksperymenty: konfiguracja, budowa instancji, przebiegi, przemiatania i weryfikacja."""

from .builders import (
	AdaptiveConstants,
	Instance,
	MissingInitialState,
	Setup,
	adaptive_constants,
	build_instance,
	build_schedule,
	build_setup,
	evaluate_bound,
	uniform_constants,
)
from .config import (
	ConfigNotFound,
	ExperimentConfig,
	InvalidOverride,
	apply_overrides,
	load_config,
	load_payload,
	parse_override,
)
from .presets import UnknownPreset, load_presets, preset, preset_names
from .runner import (
	RUN_CSV_FIELDS,
	SWEEP_AXES,
	SWEEP_CSV_FIELDS,
	InvalidSweep,
	RunOutcome,
	SweepResult,
	SweepRow,
	axis_assignments,
	fit_slope,
	run_experiment,
	sweep,
	write_outputs,
	write_sweep,
)
from .verification import (
	SUITE_CHOICES,
	SUITES,
	CheckResult,
	SuiteOptions,
	SuiteResult,
	UnknownSuite,
	VerificationReport,
	run_suite,
	verify,
	write_verification,
)

__all__ = [
	"AdaptiveConstants",
	"CheckResult",
	"ConfigNotFound",
	"ExperimentConfig",
	"Instance",
	"InvalidOverride",
	"InvalidSweep",
	"MissingInitialState",
	"RUN_CSV_FIELDS",
	"RunOutcome",
	"SUITES",
	"SUITE_CHOICES",
	"SWEEP_AXES",
	"SWEEP_CSV_FIELDS",
	"Setup",
	"SuiteOptions",
	"SuiteResult",
	"SweepResult",
	"SweepRow",
	"UnknownPreset",
	"UnknownSuite",
	"VerificationReport",
	"adaptive_constants",
	"apply_overrides",
	"axis_assignments",
	"build_instance",
	"build_schedule",
	"build_setup",
	"evaluate_bound",
	"fit_slope",
	"load_config",
	"load_payload",
	"load_presets",
	"parse_override",
	"preset",
	"preset_names",
	"run_experiment",
	"run_suite",
	"sweep",
	"uniform_constants",
	"verify",
	"write_outputs",
	"write_sweep",
	"write_verification",
]
