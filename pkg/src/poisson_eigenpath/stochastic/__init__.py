"""Trajektorie Monte-Carlo: proces Poissona, losowanie τ i średnie po zespole."""

from .ensemble import (
	CostStatistics,
	EnsembleCancelled,
	InvalidEnsemble,
	MonteCarloResult,
	TrajectoryRecord,
	TrajectorySpec,
	monte_carlo,
	run_single,
	trajectory_seed,
)
from .phases import NonPositiveGapSample, empirical_characteristic, sample_tau
from .poisson import (
	EnvelopeViolation,
	InvalidRate,
	InvalidRealization,
	PoissonRealization,
	as_rng,
	expected_count,
	poisson_stderr,
	rate_envelope,
	sample_poisson,
)
from .trajectories import (
	InvalidState,
	NormDrift,
	TrajectoryResult,
	prepare_state,
	run_trajectory_liouville,
	run_trajectory_phase,
	run_trajectory_unitary,
)

__all__ = [
	"CostStatistics",
	"EnsembleCancelled",
	"EnvelopeViolation",
	"InvalidEnsemble",
	"InvalidRate",
	"InvalidRealization",
	"InvalidState",
	"MonteCarloResult",
	"NonPositiveGapSample",
	"NormDrift",
	"PoissonRealization",
	"TrajectoryRecord",
	"TrajectoryResult",
	"TrajectorySpec",
	"as_rng",
	"empirical_characteristic",
	"expected_count",
	"monte_carlo",
	"poisson_stderr",
	"prepare_state",
	"rate_envelope",
	"run_single",
	"run_trajectory_liouville",
	"run_trajectory_phase",
	"run_trajectory_unitary",
	"sample_poisson",
	"sample_tau",
	"trajectory_seed",
]
