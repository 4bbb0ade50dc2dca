"""Randomized oracle-equivalence suites, shared by the CLI ``selftest``
command and the benchmark script."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .adaptive import enumerate_record_probabilities
from .amplitude import transition_amplitude
from .fock import FockState, OutcomeAssignment
from .gates import compile_general, compile_number_conserving
from .linalg import determinant, pfaffian
from .oracle import MAX_MODES, oracle_adaptive_distribution, oracle_run, state_marginal
from .probability import marginal_probability_general, marginal_probability_nc
from .random_circuits import (random_general_circuit, random_nc_circuit, random_subset,
                              random_two_stage_program)

TOL = 1e-9


def worst(*errors) -> float:
    """Largest error; NaN propagates so it can never pass a threshold."""
    return float(np.max(errors))


@dataclass
class SuiteResult:
    name: str
    cases: int
    max_error: float
    seconds: float

    @property
    def passed(self) -> bool:
        return self.max_error <= TOL

    def line(self) -> str:
        return (f"suite name={self.name} cases={self.cases} max_error={self.max_error:.3e} "
                f"status={'pass' if self.passed else 'FAIL'}")


def _random_state(rng, n) -> FockState:
    return FockState(tuple(int(b) for b in rng.integers(0, 2, n)))


def suite_amplitudes(rng, sizes, per_size=3):
    err, cases = 0.0, 0
    for n in sizes:
        for _ in range(per_size):
            gates = random_nc_circuit(rng, n, int(rng.integers(1, 31)))
            circuit = compile_number_conserving(gates, n)
            x = _random_state(rng, n)
            psi = oracle_run(gates, x)
            for idx in range(2 ** n):
                y = FockState.from_index(idx, n)
                err = worst(err, abs(transition_amplitude(circuit, x, y) - psi.amplitudes[idx]))
            cases += 1
    return err, cases


def _marginal_suite(rng, sizes, per_size, make, compile_fn, prob_fn, dual=False):
    err, cases = 0.0, 0
    for n in sizes:
        for _ in range(per_size):
            gates = make(rng, n, int(rng.integers(1, 31)))
            circuit = compile_fn(gates, n)
            general = compile_general(gates, n) if dual else None
            x = _random_state(rng, n)
            psi = oracle_run(gates, x)
            subset = random_subset(rng, n)
            bits = tuple(int(b) for b in rng.integers(0, 2, len(subset)))
            y = OutcomeAssignment.of(n, dict(zip(subset, bits)))
            p = prob_fn(circuit, x, y)
            err = worst(err, abs(p - state_marginal(psi, y)))
            if dual:
                err = worst(err, abs(p - marginal_probability_general(general, x, y)))
            cases += 1
    return err, cases


def suite_nc_marginals(rng, sizes, per_size=3):
    return _marginal_suite(rng, sizes, per_size, random_nc_circuit,
                           compile_number_conserving, marginal_probability_nc, dual=True)


def suite_general_marginals(rng, sizes, per_size=3):
    return _marginal_suite(rng, sizes, per_size, random_general_circuit,
                           compile_general, marginal_probability_general)


def suite_adaptive(rng, sizes, per_size=2):
    err, cases = 0.0, 0
    for n in sizes:
        if n < 3:
            continue
        for _ in range(per_size):
            program = random_two_stage_program(rng, n)
            x = _random_state(rng, n)
            exact = enumerate_record_probabilities(program, x)
            ref = oracle_adaptive_distribution(program, x)
            for key in set(exact) | set(ref):
                err = worst(err, abs(exact.get(key, 0.0) - ref.get(key, 0.0)))
            err = worst(err, abs(sum(exact.values()) - 1.0))
            cases += 1
    return err, cases


def suite_pfaffian(rng, sizes, per_size=3):
    err, cases = 0.0, 0
    for m in sizes:
        for _ in range(per_size):
            a = rng.normal(size=(2 * m, 2 * m)) + 1j * rng.normal(size=(2 * m, 2 * m))
            a = a - a.T
            pf, det = pfaffian(a), determinant(a)
            err = worst(err, abs(pf * pf - det) / max(abs(det), 1e-300))
            cases += 1
    return err, cases


def run_selftest(max_n: int = 8, seed: int = 20240101) -> list[SuiteResult]:
    max_n = min(max(max_n, 2), MAX_MODES)
    rng = np.random.default_rng(seed)
    sizes = list(range(2, max_n + 1))
    suites = [
        ("pfaffian_squared_vs_det", suite_pfaffian, sizes),
        ("amplitude_vs_oracle", suite_amplitudes, sizes),
        ("nc_marginal_vs_oracle_and_dual_path", suite_nc_marginals, sizes),
        ("general_marginal_vs_oracle", suite_general_marginals, sizes),
        ("adaptive_records_vs_collapse_oracle", suite_adaptive, [n for n in sizes if n <= 6]),
    ]
    results = []
    for name, fn, sz in suites:
        t0 = time.perf_counter()
        err, cases = fn(rng, sz)
        results.append(SuiteResult(name, cases, err, time.perf_counter() - t0))
    return results
