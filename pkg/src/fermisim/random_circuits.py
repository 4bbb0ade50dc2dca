"""Random gates, circuits and adaptive programs for tests, self-test and benches."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .adaptive import AdaptiveProgram, Branch, Stage
from .gates import GeneralQuadraticGateSpec, NumberConservingGateSpec, PauliGateSpec


def _pair(rng: np.random.Generator, modes: Sequence[int]) -> tuple[int, int]:
    i, j = rng.choice(np.asarray(modes), 2, replace=False)
    return int(i), int(j)


def random_nc_gate(rng, n: int, modes=None, scale: float = 1.0) -> NumberConservingGateSpec:
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return NumberConservingGateSpec(_pair(rng, range(n) if modes is None else modes),
                                    scale * 0.5 * (b + b.conj().T))


def random_general_gate(rng, n: int, modes=None, scale: float = 1.0) -> GeneralQuadraticGateSpec:
    a = rng.normal(size=(4, 4))
    return GeneralQuadraticGateSpec(_pair(rng, range(n) if modes is None else modes),
                                    scale * (a - a.T))


def random_pauli_gate(rng, n: int, number_conserving: bool = False) -> PauliGateSpec:
    i = int(rng.integers(0, n - 1))
    c = rng.normal(size=6)
    if number_conserving:
        c[3] = c[2]
        c[5] = -c[4]
    return PauliGateSpec((i, i + 1), *c)


def random_nc_circuit(rng, n: int, num_gates: int, with_pauli: bool = True) -> list:
    gates = []
    for _ in range(num_gates):
        if with_pauli and n >= 2 and rng.random() < 0.25:
            gates.append(random_pauli_gate(rng, n, number_conserving=True))
        else:
            gates.append(random_nc_gate(rng, n))
    return gates


def random_general_circuit(rng, n: int, num_gates: int, with_pauli: bool = True) -> list:
    gates = []
    for _ in range(num_gates):
        r = rng.random()
        if with_pauli and r < 0.25:
            gates.append(random_pauli_gate(rng, n))
        elif r < 0.4:
            gates.append(random_nc_gate(rng, n))
        else:
            gates.append(random_general_gate(rng, n))
    return gates


def random_subset(rng, n: int, k: int | None = None, exclude=()) -> list[int]:
    pool = [m for m in range(n) if m not in set(exclude)]
    if k is None:
        k = int(rng.integers(1, len(pool) + 1))
    return sorted(int(m) for m in rng.choice(pool, k, replace=False))


def random_two_stage_program(rng, n: int, first_gates: int = 8, second_gates: int = 4,
                             k1: int | None = None) -> AdaptiveProgram:
    """U1 on all modes, measure S1, then a segment and subset chosen per outcome."""
    if n < 3:
        raise ValueError("need n >= 3 for a two-stage program")
    k1 = int(rng.integers(1, n - 1)) if k1 is None else k1
    s1 = random_subset(rng, n, k1)
    rest = [m for m in range(n) if m not in s1]
    table = {}
    for code in range(2 ** k1):
        key = format(code, f"0{k1}b")
        gates = [random_general_gate(rng, n, modes=rest) for _ in range(second_gates)] \
            if len(rest) >= 2 else []
        s2 = random_subset(rng, n, int(rng.integers(1, len(rest) + 1)), exclude=s1)
        table[key] = Branch(tuple(gates), tuple(s2))
    u1 = random_general_circuit(rng, n, first_gates)
    return AdaptiveProgram(n, (Stage.fixed(u1, s1), Stage(table=table)))
