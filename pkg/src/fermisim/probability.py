"""Measurement probabilities as Pfaffians of Wick-contraction matrices.

Every probability here is a vacuum expectation value of an ordered string of
operators, each linear in the fermion (or Majorana) operators:

    <0| bra(x) [P_1][P_2]...[P_k]...[P_2][P_1] ket(x) |0>

where bra(x) = a_{p_l} ... a_{p_1} (or c_{2p_l} ... c_{2p_1}), ket(x) is its
adjoint and each P_s is the conjugated outcome projector of stage s.  By
Wick's theorem the value is Pf(M) with M[i, j] = <0|A_i A_j|0> for i < j.
The string layout is produced by ``operator_string`` alone, so the
number-conserving table, the single-stage Majorana table and the multi-stage
table share it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericalIntegrityError, ValidationError
from .fock import FockState, OutcomeAssignment
from .gates import CompiledCircuit, t_matrix
from .linalg import pfaffian

log = logging.getLogger(__name__)

CLEAN_TOL = 1e-9
ABORT_TOL = 1e-6

BRA, ANN, CRE, KET = "bra", "ann", "cre", "ket"


@dataclass(frozen=True)
class Op:
    kind: str       # bra | ann | cre | ket
    mode: int       # p for bra/ket, measured mode j otherwise
    stage: int = 0  # which T matrix conjugates it (ann/cre only)


def projector_ops(assignment: OutcomeAssignment, stage: int) -> list[Op]:
    """a a^dag for outcome 0 and a^dag a for outcome 1, in subset order."""
    ops = []
    for mode, bit in zip(assignment.subset.modes, assignment.bits):
        if bit:
            ops += [Op(CRE, mode, stage), Op(ANN, mode, stage)]
        else:
            ops += [Op(ANN, mode, stage), Op(CRE, mode, stage)]
    return ops


def operator_string(x: FockState, chain: Sequence[OutcomeAssignment]) -> list[Op]:
    """Ordered operator string for p(y_1, ..., y_k | x).

    Earlier stages appear on both sides of the last one, so the length is
    2 (l + |S_k| + 2 sum_{s<k} |S_s|).
    """
    ops = [Op(BRA, p) for p in reversed(x.occupied)]
    k = len(chain)
    for s in range(k - 1):
        ops += projector_ops(chain[s], s)
    if k:
        ops += projector_ops(chain[k - 1], k - 1)
    for s in reversed(range(k - 1)):
        ops += projector_ops(chain[s], s)
    ops += [Op(KET, p) for p in x.occupied]
    return ops


def _check_inputs(n: int, x: FockState, chain: Sequence[OutcomeAssignment]):
    if x.n != n:
        raise ValidationError(f"input state has {x.n} modes, circuit has {n}")
    seen: set[int] = set()
    for y in chain:
        if y.n != n:
            raise ValidationError(f"outcome assignment is over {y.n} modes, circuit has {n}")
        overlap = seen.intersection(y.subset.modes)
        if overlap:
            raise ValidationError(f"modes {sorted(overlap)} measured in more than one stage")
        seen.update(y.subset.modes)


# ---------------------------------------------------------------- number-conserving


class UnreachableCell(AssertionError):
    """An operator pair that cannot occur in a correctly ordered string."""


def _table1_entry(a: Op, b: Op, v: np.ndarray) -> complex:
    """M(i, j), i < j, for the number-conserving string.

    ann = U^dag a_j U = sum_n V[n, j] a_n, cre = U^dag a_j^dag U = sum_m V^dag[j, m] a_m^dag;
    the only non-zero vacuum contraction is <a_i a_k^dag> = delta_ik.
    """
    ka, kb = a.kind, b.kind
    if ka == BRA:
        if kb in (BRA, ANN):
            return 0.0
        if kb == CRE:
            return np.conj(v[a.mode, b.mode])      # V^dag[j_b, p_a]
        return 1.0 if a.mode == b.mode else 0.0    # KET
    if ka == ANN:
        if kb == BRA:
            raise UnreachableCell("annihilator before a bra operator")
        if kb == ANN:
            return 0.0
        if kb == CRE:
            return 1.0 if a.mode == b.mode else 0.0
        return v[b.mode, a.mode]                   # V[p_b, j_a]
    if ka == CRE:
        if kb == BRA:
            raise UnreachableCell("creator before a bra operator")
        return 0.0
    if kb in (BRA, ANN, CRE):
        raise UnreachableCell("ket operator before a non-ket operator")
    return 0.0


def build_table1_matrix(v, x: FockState, assignment: OutcomeAssignment) -> np.ndarray:
    """Antisymmetric matrix whose Pfaffian is p(y*|x) for a number-conserving
    circuit with conjugation matrix V."""
    v = np.asarray(v, dtype=complex)
    _check_inputs(v.shape[0], x, [assignment])
    ops = operator_string(x, [assignment])
    m = len(ops)
    mat = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(i + 1, m):
            mat[i, j] = _table1_entry(ops[i], ops[j], v)
            mat[j, i] = -mat[i, j]
    return mat


def clean_probability(value: complex, what: str = "probability") -> float:
    """Strip Pfaffian round-off; fail loudly on anything larger."""
    value = complex(value)
    if not np.isfinite(value):
        raise NumericalIntegrityError(f"{what} is not finite: {value}")
    if abs(value.imag) > ABORT_TOL:
        raise NumericalIntegrityError(
            f"{what} has imaginary part {value.imag:.3e} (value {value})"
        )
    p = value.real
    if p < -ABORT_TOL or p > 1 + ABORT_TOL:
        raise NumericalIntegrityError(f"{what} {p!r} outside [0, 1]")
    if abs(value.imag) > CLEAN_TOL or p < -CLEAN_TOL or p > 1 + CLEAN_TOL:
        log.warning("%s residue beyond %.0e: %r", what, CLEAN_TOL, value)
    return min(max(p, 0.0), 1.0)


def marginal_probability_nc(circuit: CompiledCircuit, x: FockState,
                            assignment: OutcomeAssignment) -> float:
    if circuit.kind != "number-conserving":
        raise ValidationError("marginal_probability_nc needs a number-conserving circuit")
    return clean_probability(pfaffian(build_table1_matrix(circuit.V, x, assignment)))


# ---------------------------------------------------------------- Majorana path


def contraction_matrix(n: int) -> np.ndarray:
    """H[k, l] = <0|c_k c_l|0>: blocks [[1, i], [-i, 1]]."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        h[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[1, 1j], [-1j, 1]]
    return h


def _coefficient_rows(ops: Sequence[Op], t_chain: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Each operator as a row of coefficients over c_0 ... c_{2n-1}."""
    rows = np.zeros((len(ops), 2 * n), dtype=complex)
    for r, op in enumerate(ops):
        if op.kind in (BRA, KET):
            rows[r, 2 * op.mode] = 1.0
        elif op.kind == ANN:
            rows[r] = t_chain[op.stage][op.mode]
        else:
            rows[r] = np.conj(t_chain[op.stage][op.mode])
    return rows


def majorana_matrix(ops: Sequence[Op], t_chain: Sequence[np.ndarray], n: int) -> np.ndarray:
    """Pairing matrix of an operator string; upper triangle is rows H rows^T.

    For single- and multi-stage strings this reproduces the closed-form blocks
    (T H T^T, T H T^dag, T^* H T^T, T H, H T^dag, delta, ...), selected at the
    measured modes and at the Majorana indices 2p of occupied input modes.
    """
    rows = _coefficient_rows(ops, t_chain, n)
    h = contraction_matrix(n)
    full = rows @ h @ rows.T
    upper = np.triu(full, 1)
    return upper - upper.T


def _check_t(t_chain: Sequence[np.ndarray]) -> int:
    if not t_chain:
        raise ValidationError("T chain is empty")
    n = t_chain[0].shape[0]
    for t in t_chain:
        if t.shape != (n, 2 * n):
            raise ValidationError(f"T matrix must be {n}x{2 * n}, got {t.shape}")
    return n


def build_table2_matrix(t, x: FockState, assignment: OutcomeAssignment) -> np.ndarray:
    t = np.asarray(t, dtype=complex)
    n = _check_t([t])
    _check_inputs(n, x, [assignment])
    return majorana_matrix(operator_string(x, [assignment]), [t], n)


def build_table3_matrix(t_chain: Sequence[np.ndarray], x: FockState,
                        chain: Sequence[OutcomeAssignment]) -> np.ndarray:
    """Multi-stage matrix. ``t_chain[s]`` is T of the cumulative circuit
    U_{s+1} ... U_1 (i.e. U_{1..s+1}^dag a U_{1..s+1} = T c)."""
    t_chain = [np.asarray(t, dtype=complex) for t in t_chain]
    if len(t_chain) != len(chain):
        raise ValidationError(
            f"{len(t_chain)} T matrices for {len(chain)} outcome assignments"
        )
    n = _check_t(t_chain)
    _check_inputs(n, x, chain)
    return majorana_matrix(operator_string(x, chain), t_chain, n)


def marginal_probability_general(circuit: CompiledCircuit, x: FockState,
                                 assignment: OutcomeAssignment) -> float:
    if circuit.kind != "general":
        raise ValidationError("marginal_probability_general needs a general circuit")
    return clean_probability(pfaffian(build_table2_matrix(t_matrix(circuit), x, assignment)))


def joint_probability(t_chain: Sequence[np.ndarray], x: FockState,
                      chain: Sequence[OutcomeAssignment]) -> float:
    """p(y_1, ..., y_k | x) for an adaptive history."""
    if not chain:
        return 1.0
    return clean_probability(pfaffian(build_table3_matrix(t_chain, x, chain)),
                             "joint probability")


def marginal_probability(circuit: CompiledCircuit, x: FockState,
                         assignment: OutcomeAssignment) -> float:
    if circuit.kind == "number-conserving":
        return marginal_probability_nc(circuit, x, assignment)
    return marginal_probability_general(circuit, x, assignment)
