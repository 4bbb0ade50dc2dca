"""Dense many-body helpers for tests: full unitaries and Jordan-Wigner operators."""
from functools import reduce

import numpy as np

from fermisim.fock import FockState
from fermisim.oracle import oracle_run

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
LOWER = np.array([[0, 1], [0, 0]], dtype=complex)


def kron_all(ops):
    return reduce(np.kron, ops, np.eye(1, dtype=complex))


def annihilator(i, n):
    return kron_all([Z] * i + [LOWER] + [I2] * (n - i - 1))


def majorana(k, n):
    i, r = divmod(k, 2)
    return kron_all([Z] * i + [X if r == 0 else Y] + [I2] * (n - i - 1))


def full_unitary(gates, n):
    cols = [oracle_run(gates, FockState.from_index(idx, n)).amplitudes for idx in range(2 ** n)]
    return np.column_stack(cols)
