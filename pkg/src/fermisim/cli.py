"""Command-line front end.

Results go to stdout as line records of ``key=value`` fields; failures print
one ``error kind=... code=... message="..."`` line to stderr and exit with
1 (parse), 2 (validation), 3 (numerical integrity) or 4 (oracle mismatch).
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from .adaptive import AdaptiveProgram, Stage, run_adaptive, sample_records
from .amplitude import transition_amplitude
from .bench import CSV_HEADER, bench_size, loglog_slope
from .circuit_io import load_circuit
from .errors import FermiSimError, OracleMismatchError, UsageError, ValidationError
from .fock import FockState, OutcomeAssignment, to_bitstring
from .gates import compile_general, compile_number_conserving, is_number_conserving
from .probability import marginal_probability_general, marginal_probability_nc
from .selftest import run_selftest


def fmt_real(v: float) -> str:
    return f"{v:.15g}"


def fmt_complex(z: complex) -> str:
    re, im = z.real + 0.0, z.imag + 0.0  # normalise -0
    return f"{re:.15g}{im:+.15g}i"


def _state(text: str, n: int, what: str) -> FockState:
    x = FockState.from_string(text)
    if x.n != n:
        raise ValidationError(f"{what} has {x.n} modes, circuit has {n}")
    return x


def parse_pattern(text: str, n: int) -> OutcomeAssignment:
    """Outcome pattern: one character per mode, '0'/'1' measured, '.' free."""
    if len(text) != n or any(ch not in "01." for ch in text):
        raise ValidationError(f"outcome pattern must be {n} characters of 0, 1 or '.': {text!r}")
    return OutcomeAssignment.of(n, {m: int(ch) for m, ch in enumerate(text) if ch != "."})


def _modes(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(f"modes must be comma-separated integers: {text!r}") from None


def cmd_amplitude(args, out):
    doc = load_circuit(args.file)
    x, y = _state(args.x, doc.n, "x"), _state(args.y, doc.n, "y")
    if not is_number_conserving(doc.gates):
        raise ValidationError("amplitudes need a number-conserving circuit")
    circuit = compile_number_conserving(doc.gates, doc.n)
    amp = transition_amplitude(circuit, x, y)
    print(f"amplitude x={x} y={y} value={fmt_complex(amp)} probability={fmt_real(abs(amp) ** 2)}",
          file=out)


def cmd_prob(args, out):
    doc = load_circuit(args.file)
    x = _state(args.x, doc.n, "x")
    y = parse_pattern(args.y, doc.n)
    if is_number_conserving(doc.gates) and args.path != "general":
        p = marginal_probability_nc(compile_number_conserving(doc.gates, doc.n), x, y)
        path = "number-conserving"
    else:
        p = marginal_probability_general(compile_general(doc.gates, doc.n), x, y)
        path = "general"
    print(f"probability x={x} y={args.y} path={path} value={fmt_real(p)}", file=out)


def _print_counts(records, shots, out):
    counts = Counter(" ".join(to_bitstring(b) for b in r.outcomes) for r in records)
    probs = {}
    for r in records:
        probs.setdefault(" ".join(to_bitstring(b) for b in r.outcomes), r.joint)
    for key in sorted(counts):
        print(f"outcome bits={key.replace(' ', '|') or '-'} count={counts[key]} "
              f"frequency={fmt_real(counts[key] / shots)} probability={fmt_real(probs[key])}",
              file=out)


def cmd_sample(args, out):
    doc = load_circuit(args.file)
    x = _state(args.x, doc.n, "x")
    modes = _modes(args.modes) if args.modes is not None else list(range(doc.n))
    program = AdaptiveProgram(doc.n, (Stage.fixed(doc.gates, modes),))
    records = sample_records(program, x, args.shots, args.seed)
    print(f"sample x={x} modes={','.join(map(str, sorted(modes)))} shots={args.shots} "
          f"seed={args.seed} rng={records[0].rng_algorithm.replace(' ', '_') if records else '-'}",
          file=out)
    _print_counts(records, args.shots, out)


def cmd_run(args, out):
    doc = load_circuit(args.file)
    x = _state(args.x, doc.n, "x")
    program = doc.default_program()
    if args.shots == 1:
        record = run_adaptive(program, x, args.seed)
        for line in record.lines():
            print(line, file=out)
        return
    records = sample_records(program, x, args.shots, args.seed)
    print(f"run x={x} shots={args.shots} seed={args.seed} stages={len(program.stages)}", file=out)
    _print_counts(records, args.shots, out)


def cmd_selftest(args, out):
    results = run_selftest(args.max_n, args.seed)
    for r in results:
        print(r.line(), file=out)
    ok = all(r.passed for r in results)
    print(f"selftest max_n={args.max_n} status={'pass' if ok else 'FAIL'}", file=out)
    if not ok:
        failed = ",".join(r.name for r in results if not r.passed)
        raise OracleMismatchError(f"suites disagree with the dense oracle: {failed}")


def cmd_bench(args, out):
    sizes = _modes(args.sizes)
    rows = [bench_size(n, args.gates_per_mode, args.seed) for n in sizes]
    lines = [CSV_HEADER] + [r.csv() for r in rows]
    for line in lines:
        print(line, file=out)
    if len(rows) >= 2:
        slope = loglog_slope([r.n for r in rows], [r.total_s for r in rows])
        print(f"# loglog_slope={slope:.3f}", file=out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("\n".join(lines) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fermisim",
                                description="Classical simulation of matchgate / free-fermion circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("amplitude", help="<y|U|x> of a number-conserving circuit")
    a.add_argument("file")
    a.add_argument("--x", required=True, help="input bitstring, mode 0 first")
    a.add_argument("--y", required=True, help="output bitstring")
    a.set_defaults(func=cmd_amplitude)

    pr = sub.add_parser("prob", help="marginal probability of an outcome pattern")
    pr.add_argument("file")
    pr.add_argument("--x", required=True)
    pr.add_argument("--y", required=True, help="pattern such as 1.0. ('.' = not measured)")
    pr.add_argument("--path", choices=["auto", "general"], default="auto")
    pr.set_defaults(func=cmd_prob)

    s = sub.add_parser("sample", help="sample a measurement of a mode subset")
    s.add_argument("file")
    s.add_argument("--x", required=True)
    s.add_argument("--modes", help="comma-separated modes (default: all)")
    s.add_argument("--shots", type=_positive, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_sample)

    r = sub.add_parser("run", help="run the adaptive program of a circuit file")
    r.add_argument("file")
    r.add_argument("--x", required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--shots", type=_positive, default=1)
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("selftest", help="oracle-equivalence suites up to max_n modes")
    t.add_argument("--max-n", type=_positive, default=8)
    t.add_argument("--seed", type=int, default=20240101)
    t.set_defaults(func=cmd_selftest)

    b = sub.add_parser("bench", help="size vs wall time of compile + full sample")
    b.add_argument("--sizes", default="32,64,128,256")
    b.add_argument("--gates-per-mode", type=_positive, default=8)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", help="also write the rows to this CSV file")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        args.func(args, out)
    except FermiSimError as exc:
        msg = json.dumps(" ".join(str(exc).split()))
        print(f"error kind={exc.kind} code={exc.exit_code} message={msg}", file=err)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
