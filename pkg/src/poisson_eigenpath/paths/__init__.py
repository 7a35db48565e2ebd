"""Ścieżki operatorów: hamiltoniany (liniowe, Grover, układy liniowe) i ścieżki unitarne."""

from .base import (
	GapModel,
	GapModelCheck,
	InvalidGapModel,
	OperatorPath,
	PathKind,
	PathSample,
	cached_sampler,
	derivative_residual,
	gap_profile,
	numerical_gap_model,
	verify_gap_model,
)
from .hamiltonians import (
	InvalidMarkedSet,
	KappaTooSmall,
	NonHermitianMatrix,
	SingularA,
	SolutionExtractor,
	condition_number,
	dilation_solution,
	grover_embedding,
	grover_gap_model,
	grover_path,
	hermitian_dilation,
	linear_path,
	qlsp_gap_model,
	qlsp_path,
	qlsp_state,
	random_hermitian,
	random_qlsp_instance,
	random_unitary,
)
from .unitaries import (
	NormTooLarge,
	StepTooLarge,
	exp_path,
	qubitised_path,
	scale_path,
	suzuki_deviation,
	trotter_gap_model,
	trotter_path,
	trotter_step,
)

__all__ = [
	"GapModel",
	"GapModelCheck",
	"InvalidGapModel",
	"InvalidMarkedSet",
	"KappaTooSmall",
	"NonHermitianMatrix",
	"NormTooLarge",
	"OperatorPath",
	"PathKind",
	"PathSample",
	"SingularA",
	"SolutionExtractor",
	"StepTooLarge",
	"cached_sampler",
	"condition_number",
	"derivative_residual",
	"dilation_solution",
	"exp_path",
	"gap_profile",
	"grover_embedding",
	"grover_gap_model",
	"grover_path",
	"hermitian_dilation",
	"linear_path",
	"numerical_gap_model",
	"qlsp_gap_model",
	"qlsp_path",
	"qlsp_state",
	"qubitised_path",
	"random_hermitian",
	"random_qlsp_instance",
	"random_unitary",
	"scale_path",
	"suzuki_deviation",
	"trotter_gap_model",
	"trotter_path",
	"trotter_step",
	"verify_gap_model",
]
