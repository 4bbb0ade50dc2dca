"""Worst-case disagreement with the dense statevector oracle, per mode count.

    python3 scripts/oracle_sweep.py --max-n 10 --per-size 20
"""
import argparse
from dataclasses import dataclass

import numpy as np

from fermisim.selftest import suite_amplitudes, suite_nc_marginals, suite_general_marginals


@dataclass
class SweepConfig:
    max_n: int = 10
    per_size: int = 10
    seed: int = 1


def run(cfg: SweepConfig):
    rng = np.random.default_rng(cfg.seed)
    print(f"{'n':>3}{'amplitude':>14}{'nc marginal':>14}{'general marg.':>15}")
    for n in range(2, cfg.max_n + 1):
        errs = [suite(rng, [n], cfg.per_size)[0]
                for suite in (suite_amplitudes, suite_nc_marginals, suite_general_marginals)]
        print(f"{n:>3}" + "".join(f"{e:>14.2e}" for e in errs))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    p.add_argument("--per-size", type=int, default=SweepConfig.per_size)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = p.parse_args()
    run(SweepConfig(a.max_n, a.per_size, a.seed))


if __name__ == "__main__":
    main()
