"""Brute-force 2^n statevector simulator, the reference for every engine.

Fermionic operators act on qubits through the Jordan-Wigner image: a two-mode
quadratic Hamiltonian on modes i < j only sees the parity s = +-1 of the modes
strictly between them, so each gate is two 4x4 exponentials (one per s)
applied sector-wise.  This module deliberately does not use the compiler or
the linalg kernels.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .errors import ValidationError
from .fock import FockState, OutcomeAssignment
from .gates import (GateSpec, GeneralQuadraticGateSpec, NumberConservingGateSpec,
                    PauliGateSpec)

MAX_MODES = 14

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
_LOWER = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|: removes a fermion


def pauli_hamiltonian(g: PauliGateSpec) -> np.ndarray:
    """H1 + H2 + H3 as a 4x4 matrix on (qubit i, qubit i+1)."""
    return (g.alpha1 * np.kron(_Z, _I) + g.beta1 * np.kron(_I, _Z)
            + g.alpha2 * np.kron(_X, _X) + g.beta2 * np.kron(_Y, _Y)
            + g.alpha3 * np.kron(_X, _Y) + g.beta3 * np.kron(_Y, _X))


def pauli_unitary(g: PauliGateSpec) -> np.ndarray:
    return scipy.linalg.expm(1j * pauli_hamiltonian(g))


def _local_operators(s: int):
    """Annihilators of the lower and upper mode on a (lo, hi) qubit pair,
    given the parity sign s of the modes strictly between them."""
    a_lo = np.kron(_LOWER, _I)
    a_hi = s * np.kron(_Z, _LOWER)
    return a_lo, a_hi


def fermionic_hamiltonian(g: GateSpec, s: int) -> tuple[np.ndarray, bool]:
    """4x4 Hamiltonian on qubits (min, max) of the gate's modes.

    Returns (H, swapped) where swapped means the gate lists the higher mode
    first; H is always expressed with the lower mode as the first qubit.
    """
    i, j = g.modes
    a_lo, a_hi = _local_operators(s)
    ops = (a_lo, a_hi) if i < j else (a_hi, a_lo)  # ops[k] annihilates spec mode k
    if isinstance(g, NumberConservingGateSpec):
        h = np.zeros((4, 4), dtype=complex)
        for k in range(2):
            for l in range(2):
                h += g.b[k, l] * ops[k].conj().T @ ops[l]
        return h, i > j
    if isinstance(g, GeneralQuadraticGateSpec):
        c = []
        for a in ops:
            c.append(a + a.conj().T)
            c.append(-1j * (a - a.conj().T))
        h = g.offset * np.eye(4, dtype=complex)
        for k in range(4):
            for l in range(4):
                if k != l:
                    h += 0.25j * g.alpha[k, l] * c[k] @ c[l]
        return h, i > j
    raise TypeError(f"not a fermionic gate: {g!r}")


@dataclass
class StateVector:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def basis(cls, x: FockState) -> "StateVector":
        if x.n > MAX_MODES:
            raise ValidationError(f"dense oracle limited to n <= {MAX_MODES}, got {x.n}")
        amps = np.zeros(2 ** x.n, dtype=complex)
        amps[x.index()] = 1.0
        return cls(x.n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, y: FockState) -> complex:
        return complex(self.amplitudes[y.index()])

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())


def _apply_two_qubit(state: np.ndarray, n: int, lo: int, hi: int, unitaries) -> np.ndarray:
    """Apply unitaries[s] on qubits (lo, hi) in the sector where the modes
    strictly between have parity sign s."""
    psi = state.reshape((2,) * n)
    psi = np.moveaxis(psi, (lo, hi), (0, 1)).reshape(4, -1)
    rest = [m for m in range(n) if m not in (lo, hi)]
    between = [k for k, m in enumerate(rest) if lo < m < hi]
    cols = np.arange(psi.shape[1])
    par = np.zeros(psi.shape[1], dtype=int)
    for k in between:
        par ^= (cols >> (len(rest) - 1 - k)) & 1
    out = np.empty_like(psi)
    for s, mask in ((1, par == 0), (-1, par == 1)):
        if mask.any():
            out[:, mask] = unitaries[s] @ psi[:, mask]
    out = np.moveaxis(out.reshape((2,) * n), (0, 1), (lo, hi))
    return out.reshape(-1)


def oracle_apply_gate(state: StateVector, gate: GateSpec) -> StateVector:
    n = state.n
    for m in gate.modes:
        if not 0 <= m < n:
            raise ValidationError(f"gate {gate.modes} outside [0, {n})")
    if isinstance(gate, PauliGateSpec):
        u = pauli_unitary(gate)
        i, j = gate.qubits
        amps = _apply_two_qubit(state.amplitudes, n, i, j, {1: u, -1: u})
        return StateVector(n, amps)
    lo, hi = sorted(gate.modes)
    unitaries = {}
    for s in (1, -1):
        h, _ = fermionic_hamiltonian(gate, s)
        unitaries[s] = scipy.linalg.expm(1j * h)
    return StateVector(n, _apply_two_qubit(state.amplitudes, n, lo, hi, unitaries))


def oracle_run(gates: Sequence[GateSpec], x: FockState) -> StateVector:
    state = StateVector.basis(x)
    for g in gates:
        state = oracle_apply_gate(state, g)
    return state


def oracle_amplitude(gates: Sequence[GateSpec], x: FockState, y: FockState) -> complex:
    if x.n != y.n:
        raise ValidationError("x and y have different mode counts")
    return oracle_run(gates, x).amplitude(y)


def _consistent_mask(n: int, assignment: OutcomeAssignment) -> np.ndarray:
    idx = np.arange(2 ** n)
    mask = np.ones(2 ** n, dtype=bool)
    for m, b in zip(assignment.subset.modes, assignment.bits):
        mask &= ((idx >> (n - 1 - m)) & 1) == b
    return mask


def state_marginal(state: StateVector, assignment: OutcomeAssignment) -> float:
    mask = _consistent_mask(state.n, assignment)
    return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def oracle_marginal(gates: Sequence[GateSpec], x: FockState,
                    assignment: OutcomeAssignment) -> float:
    return state_marginal(oracle_run(gates, x), assignment)


def project(state: StateVector, assignment: OutcomeAssignment) -> StateVector:
    """Unnormalized projection onto the outcome."""
    amps = np.where(_consistent_mask(state.n, assignment), state.amplitudes, 0)
    return StateVector(state.n, amps)


def oracle_adaptive(program, x: FockState, outcomes: Sequence[Sequence[int]]) -> float:
    """Exact probability of a full outcome history by unitary -> project."""
    state = StateVector.basis(x)
    history: list[tuple[int, ...]] = []
    for stage_index in range(len(program.stages)):
        gates, subset = program.select(stage_index, history)
        for g in gates:
            state = oracle_apply_gate(state, g)
        bits = tuple(outcomes[stage_index])
        state = project(state, OutcomeAssignment(subset, bits))
        history.append(bits)
    return float(np.sum(np.abs(state.amplitudes) ** 2))


def oracle_adaptive_distribution(program, x: FockState) -> dict[tuple, float]:
    """All outcome histories with their probabilities (collapse and renormalize)."""
    out: dict[tuple, float] = {}

    def recurse(stage_index, state, history, prob):
        if stage_index == len(program.stages):
            out[tuple(history)] = prob
            return
        gates, subset = program.select(stage_index, history)
        for g in gates:
            state = oracle_apply_gate(state, g)
        k = len(subset)
        for code in range(2 ** k):
            bits = tuple((code >> (k - 1 - t)) & 1 for t in range(k))
            projected = project(state, OutcomeAssignment(subset, bits))
            p = float(np.sum(np.abs(projected.amplitudes) ** 2))
            if p <= 1e-14:
                continue
            projected.amplitudes /= np.sqrt(p)
            recurse(stage_index + 1, projected, history + [bits], prob * p)

    recurse(0, StateVector.basis(x), [], 1.0)
    return out


def oracle_adaptive_sample(program, x: FockState, rng: np.random.Generator):
    """One history sampled stage by stage from the collapsed statevector."""
    state = StateVector.basis(x)
    history: list[tuple[int, ...]] = []
    probs = []
    for stage_index in range(len(program.stages)):
        gates, subset = program.select(stage_index, history)
        for g in gates:
            state = oracle_apply_gate(state, g)
        k = len(subset)
        weights = []
        for code in range(2 ** k):
            bits = tuple((code >> (k - 1 - t)) & 1 for t in range(k))
            weights.append(state_marginal(state, OutcomeAssignment(subset, bits)))
        weights = np.array(weights)
        code = int(rng.choice(2 ** k, p=weights / weights.sum()))
        bits = tuple((code >> (k - 1 - t)) & 1 for t in range(k))
        state = project(state, OutcomeAssignment(subset, bits))
        state.amplitudes /= np.sqrt(weights[code])
        history.append(bits)
        probs.append(float(weights[code]))
    return history, probs
