"""Transition amplitudes of number-conserving circuits as determinants."""
from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .fock import FockState
from .gates import CompiledCircuit
from .linalg import determinant


def transition_amplitude(circuit: CompiledCircuit, x: FockState, y: FockState) -> complex:
    """<y|U|x> = global_phase * det(V[occ(x), occ(y)])."""
    if circuit.kind != "number-conserving":
        raise ValidationError("amplitudes need a number-conserving circuit")
    if x.n != circuit.n or y.n != circuit.n:
        raise ValidationError(f"states must have {circuit.n} modes, got {x.n} and {y.n}")
    if x.hamming_weight != y.hamming_weight:
        return 0j
    sub = circuit.V[np.ix_(x.occupied, y.occupied)]
    return complex(circuit.global_phase * determinant(sub))


def transition_probability(circuit: CompiledCircuit, x: FockState, y: FockState) -> float:
    return abs(transition_amplitude(circuit, x, y)) ** 2
