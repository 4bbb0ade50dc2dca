"""Classical simulation of noninteracting-fermion (matchgate) circuits."""
from .adaptive import (AdaptiveProgram, Branch, MeasurementRecord, Stage,
                       enumerate_record_probabilities, exact_record_probability,
                       run_adaptive, sample_records, sample_subset_outcome)
from .amplitude import transition_amplitude, transition_probability
from .fock import FockState, ModeSubset, OutcomeAssignment, jw_sign, parity
from .gates import (CompiledCircuit, GeneralQuadraticGateSpec, NumberConservingGateSpec,
                    PauliGateSpec, compile_general, compile_number_conserving,
                    fermionize_pauli, lift_number_conserving_to_general, t_matrix,
                    validate_matchgate_unitary)
from .linalg import determinant, matrix_exponential, pfaffian, skew_canonical_form
from .probability import (joint_probability, marginal_probability,
                          marginal_probability_general, marginal_probability_nc)

__version__ = "0.1.0"
