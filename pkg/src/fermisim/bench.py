"""Wall-time scaling of compile + full-assignment sampling on the Pfaffian path."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .adaptive import sample_subset_outcome
from .fock import FockState, ModeSubset
from .gates import compile_general, t_matrix
from .random_circuits import random_general_gate


@dataclass
class BenchRow:
    n: int
    gates: int
    matrix_dim: int
    compile_s: float
    sample_s: float

    @property
    def total_s(self) -> float:
        return self.compile_s + self.sample_s

    def csv(self) -> str:
        return f"{self.n},{self.gates},{self.matrix_dim},{self.compile_s:.6f},{self.sample_s:.6f}"


CSV_HEADER = "n,gates,matrix_dim,compile_s,sample_s"


def bench_size(n: int, gates_per_mode: int = 8, seed: int = 0) -> BenchRow:
    """One full-assignment sample of a random general circuit on n modes
    from a random input state."""
    rng = np.random.default_rng([seed, n])
    gates = [random_general_gate(rng, n) for _ in range(gates_per_mode * n)]
    x = FockState(tuple(int(b) for b in rng.integers(0, 2, n)))
    t0 = time.perf_counter()
    t = t_matrix(compile_general(gates, n))
    t1 = time.perf_counter()
    sample_subset_outcome([t], x, [], ModeSubset(n, tuple(range(n))), np.random.default_rng(seed))
    t2 = time.perf_counter()
    return BenchRow(n, len(gates), 2 * (x.hamming_weight + n), t1 - t0, t2 - t1)


def loglog_slope(ns, times) -> float:
    return float(np.polyfit(np.log(ns), np.log(times), 1)[0])
