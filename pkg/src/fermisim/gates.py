"""Gate specifications and circuit compilation.

Conventions
-----------
Majorana operators: mode i owns c_{2i} = a_i + a_i^dag and
c_{2i+1} = -i (a_i - a_i^dag).  A general quadratic gate is
U = exp(iH) with H = (i/4) sum_{kl} alpha_kl c_k c_l + offset.

Compiled matrices are defined by conjugation of the full circuit U:

    U a_i^dag U^dag = sum_m V[i, m] a_m^dag       (number-conserving)
    U c_i U^dag     = sum_j R[i, j] c_j           (general)

For a single gate these are V_g = exp(i b)^T and R_g = exp(alpha), and a
circuit U = U_G ... U_1 composes as V = V_1 V_2 ... V_G (likewise for R).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ConsistencyError, ShapeError, ValidationError
from .linalg import SKEW_TOL, check_antisymmetric, matrix_exponential, skew_canonical_form

log = logging.getLogger(__name__)

ROUTE_AGREEMENT_TOL = 1e-9
ROUTE_FAILURE_TOL = 1e-6


@dataclass(frozen=True)
class PauliGateSpec:
    """exp(i(H1 + H2 + H3)) on adjacent qubits (i, i+1).

    H1 = alpha1 Z_i + beta1 Z_{i+1}, H2 = alpha2 X_i X_{i+1} + beta2 Y_i Y_{i+1},
    H3 = alpha3 X_i Y_{i+1} + beta3 Y_i X_{i+1}.
    """

    qubits: tuple[int, int]
    alpha1: float = 0.0
    beta1: float = 0.0
    alpha2: float = 0.0
    beta2: float = 0.0
    alpha3: float = 0.0
    beta3: float = 0.0

    def __post_init__(self):
        i, j = (int(q) for q in self.qubits)
        if j != i + 1 or i < 0:
            raise ValidationError(
                f"Pauli-form gates need adjacent qubits (i, i+1), got {self.qubits}; "
                "express non-adjacent interactions as fermionic gates"
            )
        object.__setattr__(self, "qubits", (i, j))
        for name in ("alpha1", "beta1", "alpha2", "beta2", "alpha3", "beta3"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValidationError(f"coefficient {name} is not finite")
            object.__setattr__(self, name, v)

    @property
    def modes(self) -> tuple[int, int]:
        return self.qubits

    def inverse(self) -> "PauliGateSpec":
        return PauliGateSpec(self.qubits, -self.alpha1, -self.beta1, -self.alpha2,
                             -self.beta2, -self.alpha3, -self.beta3)


@dataclass(frozen=True)
class NumberConservingGateSpec:
    """exp(iH) with H = sum_{k,l in (i,j)} b_kl a_k^dag a_l, b Hermitian 2x2."""

    modes: tuple[int, int]
    b: np.ndarray

    def __post_init__(self):
        i, j = (int(m) for m in self.modes)
        if i == j or i < 0 or j < 0:
            raise ValidationError(f"gate needs two distinct modes, got {self.modes}")
        b = np.array(self.b, dtype=complex)
        if b.shape != (2, 2):
            raise ShapeError(f"b must be 2x2, got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValidationError("b has non-finite entries")
        if np.max(np.abs(b - b.conj().T)) > SKEW_TOL:
            raise ValidationError("b must be Hermitian")
        b.setflags(write=False)
        object.__setattr__(self, "modes", (i, j))
        object.__setattr__(self, "b", b)

    @classmethod
    def hopping(cls, i: int, j: int, theta: float, onsite=(0.0, 0.0)):
        return cls((i, j), np.array([[onsite[0], theta], [theta, onsite[1]]]))

    def inverse(self) -> "NumberConservingGateSpec":
        return NumberConservingGateSpec(self.modes, -self.b)


@dataclass(frozen=True)
class GeneralQuadraticGateSpec:
    """exp(iH), H = (i/4) sum alpha_kl c_k c_l + offset over Majorana indices
    (2i, 2i+1, 2j, 2j+1)."""

    modes: tuple[int, int]
    alpha: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        i, j = (int(m) for m in self.modes)
        if i == j or i < 0 or j < 0:
            raise ValidationError(f"gate needs two distinct modes, got {self.modes}")
        alpha = np.array(self.alpha, dtype=float)
        if alpha.shape != (4, 4):
            raise ShapeError(f"alpha must be 4x4, got {alpha.shape}")
        check_antisymmetric(alpha, name="alpha")
        alpha.setflags(write=False)
        object.__setattr__(self, "modes", (i, j))
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def majorana_indices(self) -> list[int]:
        i, j = self.modes
        return [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]

    def inverse(self) -> "GeneralQuadraticGateSpec":
        return GeneralQuadraticGateSpec(self.modes, -self.alpha, -self.offset)


GateSpec = Union[PauliGateSpec, NumberConservingGateSpec, GeneralQuadraticGateSpec]


def inverse_circuit(gates: Sequence[GateSpec]) -> list[GateSpec]:
    """Gate list for U^dag: reversed order, each generator negated."""
    return [g.inverse() for g in reversed(gates)]


def validate_matchgate_unitary(u4, tol: float = 1e-10) -> bool:
    """True iff the 4x4 unitary has the matchgate block form.

    The even {00, 11} and odd {01, 10} sectors must decouple and both 2x2
    blocks must share a determinant, i.e. be SU(2) up to one common phase.
    """
    u = np.asarray(u4, dtype=complex)
    if u.shape != (4, 4):
        raise ShapeError(f"expected a 4x4 matrix, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(4))) > tol:
        raise ValidationError("matrix is not unitary")
    even, odd = [0, 3], [1, 2]
    cross = np.concatenate([u[np.ix_(even, odd)].ravel(), u[np.ix_(odd, even)].ravel()])
    if np.max(np.abs(cross)) > tol:
        return False
    det_even = np.linalg.det(u[np.ix_(even, even)])
    det_odd = np.linalg.det(u[np.ix_(odd, odd)])
    return bool(abs(det_even - det_odd) <= 1e-8)


# Local Majorana indices 0..3 stand for (2i, 2i+1, 2i+2, 2i+3).  With the
# string on qubit i only, c0 = X.I, c1 = Y.I, c2 = Z.X, c3 = Z.Y, so
#   Z_i = -i c0 c1,  Z_{i+1} = -i c2 c3,  XX = -i c1 c2,  YY = i c0 c3,
#   XY = -i c1 c3,   YX = i c0 c2.
# H = (i/2) sum_{k<l} alpha_kl c_k c_l, so a term g * (-+i) c_k c_l gives
# alpha_kl = -+2g.
def fermionize_pauli(g: PauliGateSpec) -> tuple[GeneralQuadraticGateSpec, float]:
    """Jordan-Wigner image of a Pauli-form gate as a Majorana-quadratic gate.

    Returns the gate and the identity coefficient of its Hamiltonian (zero for
    Pauli terms, which are all traceless).
    """
    a = np.zeros((4, 4))
    a[0, 1] = -2 * g.alpha1
    a[2, 3] = -2 * g.beta1
    a[1, 2] = -2 * g.alpha2
    a[0, 3] = 2 * g.beta2
    a[1, 3] = -2 * g.alpha3
    a[0, 2] = 2 * g.beta3
    a = a - a.T
    offset = 0.0
    return GeneralQuadraticGateSpec(g.qubits, a, offset), offset


def pauli_to_number_conserving(g: PauliGateSpec) -> tuple[NumberConservingGateSpec, float]:
    """Number-conserving form of a Pauli gate, plus its identity coefficient.

    Z = 1 - 2 n, XX + YY = 2 (a_i^dag a_j + h.c.) and XY - YX hops with an
    imaginary amplitude; the gate conserves particle number only when
    alpha2 == beta2 and alpha3 == -beta3.
    """
    if abs(g.alpha2 - g.beta2) > 1e-12 or abs(g.alpha3 + g.beta3) > 1e-12:
        raise ValidationError(
            "Pauli gate has pairing terms (alpha2 != beta2 or alpha3 != -beta3) "
            "and does not conserve particle number"
        )
    hop = (g.alpha2 + g.beta2) + 1j * (g.beta3 - g.alpha3)
    b = np.array([[-2 * g.alpha1, hop], [np.conj(hop), -2 * g.beta1]])
    return NumberConservingGateSpec(g.qubits, b), g.alpha1 + g.beta1


# a_k = (c_{2k} + i c_{2k+1}) / 2
_W = np.array([1.0, 1j])


def lift_number_conserving_to_general(g: NumberConservingGateSpec) -> GeneralQuadraticGateSpec:
    """Rewrite sum b_kl a_k^dag a_l in Majorana form.

    a_k^dag a_l = 1/4 sum_pq conj(w_p) w_q c_{2k+p} c_{2l+q}; the symmetric
    part of the coefficient tensor reduces to the identity (returned as the
    gate offset), the antisymmetric part is alpha.
    """
    coeff = np.zeros((4, 4), dtype=complex)
    for k in range(2):
        for l in range(2):
            coeff[2 * k:2 * k + 2, 2 * l:2 * l + 2] = 0.25 * g.b[k, l] * np.outer(_W.conj(), _W)
    alpha = -2j * (coeff - coeff.T)
    if np.max(np.abs(alpha.imag)) > 1e-12:
        raise ConsistencyError("lifted generator is not real")
    offset = float(np.trace(coeff).real)
    return GeneralQuadraticGateSpec(g.modes, alpha.real, offset)


def as_general(g: GateSpec) -> GeneralQuadraticGateSpec:
    if isinstance(g, GeneralQuadraticGateSpec):
        return g
    if isinstance(g, NumberConservingGateSpec):
        return lift_number_conserving_to_general(g)
    if isinstance(g, PauliGateSpec):
        return fermionize_pauli(g)[0]
    raise TypeError(f"not a gate spec: {g!r}")


def as_number_conserving(g: GateSpec) -> tuple[NumberConservingGateSpec, float]:
    if isinstance(g, NumberConservingGateSpec):
        return g, 0.0
    if isinstance(g, PauliGateSpec):
        return pauli_to_number_conserving(g)
    raise ValidationError(f"{type(g).__name__} is not number-conserving")


def is_number_conserving(gates: Iterable[GateSpec]) -> bool:
    try:
        for g in gates:
            as_number_conserving(g)
    except ValidationError:
        return False
    return True


@dataclass(frozen=True)
class CompiledCircuit:
    n: int
    kind: str  # "number-conserving" or "general"
    V: np.ndarray | None = None
    R: np.ndarray | None = None
    global_phase: complex = 1.0 + 0j
    num_gates: int = 0

    def __post_init__(self):
        for arr in (self.V, self.R):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def matrix(self) -> np.ndarray:
        return self.V if self.kind == "number-conserving" else self.R


def _check_modes(g: GateSpec, n: int):
    for m in g.modes:
        if not 0 <= m < n:
            raise ValidationError(f"gate {g.modes} touches mode {m} outside [0, {n})")


def number_conserving_gate_matrix(g: NumberConservingGateSpec) -> np.ndarray:
    """Local 2x2 block of V for one gate: exp(i b)^T."""
    return matrix_exponential(1j * g.b).T


def compile_number_conserving(gates: Sequence[GateSpec], n: int,
                              dense: bool = False) -> CompiledCircuit:
    v = np.eye(n, dtype=complex)
    phase = 0.0
    for g in gates:
        g, offset = as_number_conserving(g)
        _check_modes(g, n)
        phase += offset
        local = number_conserving_gate_matrix(g)
        idx = list(g.modes)
        if dense:
            full = np.eye(n, dtype=complex)
            full[np.ix_(idx, idx)] = local
            v = v @ full
        else:
            v[:, idx] = v[:, idx] @ local
    return CompiledCircuit(n, "number-conserving", V=v, global_phase=complex(np.exp(1j * phase)),
                           num_gates=len(gates))


def rotation_blocks(eps) -> np.ndarray:
    """exp of the canonical block matrix: blocks [[cos e, sin e], [-sin e, cos e]]."""
    eps = np.asarray(eps, dtype=float)
    m = np.zeros((2 * len(eps), 2 * len(eps)))
    for j, e in enumerate(eps):
        c, s = np.cos(e), np.sin(e)
        m[2 * j:2 * j + 2, 2 * j:2 * j + 2] = [[c, s], [-s, c]]
    return m


def gate_rotation(alpha, check: bool = True) -> np.ndarray:
    """R for exp(iH) with H = (i/4) sum alpha_kl c_k c_l.

    Canonical route: W alpha W^T = blocks(eps), R = W^T exp(blocks) W.
    With ``check`` the result is compared with a direct exponential of alpha.
    """
    alpha = np.asarray(alpha, dtype=float)
    w, eps = skew_canonical_form(alpha)
    r = w.T @ rotation_blocks(eps) @ w
    if check:
        r_exp = matrix_exponential(alpha)
        diff = np.max(np.abs(r - r_exp)) if r.size else 0.0
        if diff > ROUTE_FAILURE_TOL:
            raise ConsistencyError(
                f"canonical and exponential rotation disagree by {diff:.3e}"
            )
        if diff > ROUTE_AGREEMENT_TOL:
            log.warning("canonical and exponential rotation differ by %.3e", diff)
    return r


def compile_general(gates: Sequence[GateSpec], n: int, dense: bool = False,
                    check: bool = True, start: CompiledCircuit | None = None) -> CompiledCircuit:
    """Fold gates into R in SO(2n).  ``start`` continues an earlier circuit
    (the new gates act after it)."""
    if start is not None:
        if start.kind != "general" or start.n != n:
            raise ValidationError("start circuit must be a general circuit on the same modes")
        r = np.array(start.R)
        phase = float(np.angle(start.global_phase))
        count = start.num_gates
    else:
        r = np.eye(2 * n)
        phase = 0.0
        count = 0
    for g in gates:
        _check_modes(g, n)
        g = as_general(g)
        phase += g.offset
        local = gate_rotation(g.alpha, check=check)
        idx = g.majorana_indices
        if dense:
            full = np.eye(2 * n)
            full[np.ix_(idx, idx)] = local
            r = r @ full
        else:
            r[:, idx] = r[:, idx] @ local
    return CompiledCircuit(n, "general", R=r, global_phase=complex(np.exp(1j * phase)),
                           num_gates=count + len(gates))


def t_matrix(circuit: CompiledCircuit) -> np.ndarray:
    """n x 2n matrix with U^dag a_i U = sum_j T[i, j] c_j."""
    if circuit.kind != "general":
        raise ValidationError("t_matrix needs a general (Majorana) circuit")
    rt = circuit.R.T
    return 0.5 * (rt[0::2, :] + 1j * rt[1::2, :])


def embed_generator(g: GeneralQuadraticGateSpec, n: int) -> np.ndarray:
    full = np.zeros((2 * n, 2 * n))
    idx = g.majorana_indices
    full[np.ix_(idx, idx)] = g.alpha
    return full
