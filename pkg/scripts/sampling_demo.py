"""Sample an adaptive program and compare frequencies with exact record probabilities.

    python3 scripts/sampling_demo.py circuits/adaptive_example.json --x 1010 --shots 50000
"""
import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy import stats

from fermisim.adaptive import enumerate_record_probabilities, sample_records
from fermisim.circuit_io import load_circuit
from fermisim.fock import FockState, to_bitstring


@dataclass
class DemoConfig:
    path: str = "circuits/adaptive_example.json"
    x: str = "1010"
    shots: int = 50_000
    seed: int = 0


def key_text(history):
    return "|".join(to_bitstring(b) for b in history)


def run(cfg: DemoConfig):
    doc = load_circuit(cfg.path)
    program = doc.default_program()
    x = FockState.from_string(cfg.x)
    exact = enumerate_record_probabilities(program, x)
    counts = Counter(r.outcomes for r in sample_records(program, x, cfg.shots, cfg.seed))
    print(f"{'record':<16}{'exact':>12}{'observed':>12}{'z':>8}")
    for key, p in sorted(exact.items(), key=lambda kv: -kv[1]):
        freq = counts.get(key, 0) / cfg.shots
        sd = np.sqrt(p * (1 - p) / cfg.shots)
        print(f"{key_text(key):<16}{p:>12.6f}{freq:>12.6f}{(freq - p) / sd if sd else 0:>8.2f}")
    keys = sorted(exact)
    obs = np.array([counts.get(k, 0) for k in keys])
    exp = np.array([exact[k] for k in keys]) * cfg.shots
    print(f"chi-square p-value: {stats.chisquare(obs, exp * obs.sum() / exp.sum()).pvalue:.4f}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("path", nargs="?", default=DemoConfig.path)
    p.add_argument("--x", default=DemoConfig.x)
    p.add_argument("--shots", type=int, default=DemoConfig.shots)
    p.add_argument("--seed", type=int, default=DemoConfig.seed)
    a = p.parse_args()
    run(DemoConfig(a.path, a.x, a.shots, a.seed))


if __name__ == "__main__":
    main()
