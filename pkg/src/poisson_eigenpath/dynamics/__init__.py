"""Generatory L_s, całkowanie równania marginalnego, wierność i koszt."""

from .cost import accumulate_cost
from .generators import (
	RHS_BY_KIND,
	GeneratorSnapshot,
	jump_rhs,
	liouville_rhs,
	phase_channel,
	phase_rand_rhs,
	rhs,
	snapshot,
)
from .integrator import fidelity, integrate
from .models import (
	CostRecord,
	DensityMatrix,
	GapModelMissing,
	Generator,
	GeneratorKind,
	InvalidDensityMatrix,
	InvalidGenerator,
	NonPhysicalState,
	RunResult,
	StepPolicy,
	StepUnderflow,
)
from .phases import (
	FEJER_MODEL_T0,
	FejerDistribution,
	InvalidPhaseDistribution,
	PhaseDistribution,
	TabulatedDistribution,
	fejer_density,
)

__all__ = [
	"CostRecord",
	"DensityMatrix",
	"FEJER_MODEL_T0",
	"FejerDistribution",
	"GapModelMissing",
	"Generator",
	"GeneratorKind",
	"GeneratorSnapshot",
	"InvalidDensityMatrix",
	"InvalidGenerator",
	"InvalidPhaseDistribution",
	"NonPhysicalState",
	"PhaseDistribution",
	"RHS_BY_KIND",
	"RunResult",
	"StepPolicy",
	"StepUnderflow",
	"TabulatedDistribution",
	"accumulate_cost",
	"fejer_density",
	"fidelity",
	"integrate",
	"jump_rhs",
	"liouville_rhs",
	"phase_channel",
	"phase_rand_rhs",
	"rhs",
	"snapshot",
]
