"""Circuit documents: JSON with a schema version, gates and an optional
adaptive section.

    {
      "schema_version": 1,
      "n": 4,
      "gates": [
        {"type": "pauli", "qubits": [0, 1], "alpha2": 0.785, "beta2": 0.785},
        {"type": "number_conserving", "modes": [0, 2],
         "b": [[0.1, [0.3, -0.2]], [[0.3, 0.2], 0.0]]},
        {"type": "general_quadratic", "modes": [1, 3], "alpha": [[0, 1, 0, 0], ...]}
      ],
      "adaptive": {
        "stages": [
          {"measure": [0]},
          {"branches": {"0": {"gates": [...], "measure": [2]},
                        "1": {"gates": [], "measure": [3]}}}
        ]
      }
    }

Top-level gates run before the first measurement.  A stage is either
unconditioned ({"gates", "measure"}) or a decision table ({"branches"}) keyed
by the concatenated outcome bits of all earlier stages, mode 0 leftmost;
"*" matches any history.  Complex numbers are [re, im] pairs.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .adaptive import AdaptiveProgram, Branch, Stage
from .errors import FermiSimError, ParseError, ValidationError
from .gates import (GateSpec, GeneralQuadraticGateSpec, NumberConservingGateSpec,
                    PauliGateSpec)

SCHEMA_VERSION = 1
MAX_TOTALITY_HISTORIES = 4096
_PAULI_FIELDS = ("alpha1", "beta1", "alpha2", "beta2", "alpha3", "beta3")


@dataclass(frozen=True)
class CircuitDocument:
    schema_version: int
    n: int
    gates: tuple
    program: AdaptiveProgram | None = None

    def default_program(self, measure=None) -> AdaptiveProgram:
        """The adaptive program, or one stage measuring ``measure`` (all modes)."""
        if self.program is not None:
            return self.program
        modes = range(self.n) if measure is None else measure
        return AdaptiveProgram(self.n, (Stage.fixed(self.gates, modes),))


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(value):
        raise ValidationError(f"{where}: number is not finite")
    return float(value)


def _complex(value, where: str) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise ValidationError(f"{where}: complex numbers are [re, im] pairs")
        return complex(_number(value[0], where), _number(value[1], where))
    return complex(_number(value, where))


def _int_list(value, where: str, length=None) -> list[int]:
    if not isinstance(value, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ValidationError(f"{where}: expected a list of integers, got {value!r}")
    if length is not None and len(value) != length:
        raise ValidationError(f"{where}: expected {length} entries, got {len(value)}")
    return value


def _matrix(value, shape, where: str, conv) -> np.ndarray:
    if not isinstance(value, list) or len(value) != shape[0]:
        raise ValidationError(f"{where}: expected a {shape[0]}x{shape[1]} nested list")
    rows = []
    for r, row in enumerate(value):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ValidationError(f"{where}[{r}]: expected {shape[1]} entries")
        rows.append([conv(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)])
    return np.array(rows)


def parse_gate(record: Any, n: int, where: str) -> GateSpec:
    if not isinstance(record, dict) or "type" not in record:
        raise ValidationError(f"{where}: gate must be an object with a 'type'")
    kind = record["type"]
    try:
        if kind == "pauli":
            unknown = set(record) - {"type", "qubits", *_PAULI_FIELDS}
            if unknown:
                raise ValidationError(f"unknown fields {sorted(unknown)}")
            qubits = _int_list(record.get("qubits"), f"{where}.qubits", 2)
            coeffs = [_number(record.get(f, 0.0), f"{where}.{f}") for f in _PAULI_FIELDS]
            gate = PauliGateSpec(tuple(qubits), *coeffs)
        elif kind == "number_conserving":
            modes = _int_list(record.get("modes"), f"{where}.modes", 2)
            b = _matrix(record.get("b"), (2, 2), f"{where}.b", _complex)
            gate = NumberConservingGateSpec(tuple(modes), b)
        elif kind == "general_quadratic":
            modes = _int_list(record.get("modes"), f"{where}.modes", 2)
            alpha = _matrix(record.get("alpha"), (4, 4), f"{where}.alpha", _number)
            gate = GeneralQuadraticGateSpec(tuple(modes), alpha,
                                            _number(record.get("offset", 0.0), f"{where}.offset"))
        else:
            raise ValidationError(f"unknown gate type {kind!r}")
    except ValidationError as exc:
        msg = str(exc)
        raise ValidationError(msg if msg.startswith(where) else f"{where}: {msg}") from None
    for m in gate.modes:
        if not 0 <= m < n:
            raise ValidationError(f"{where}: mode {m} outside [0, {n})")
    return gate


def _parse_branch(record, n, where, extra_gates=()) -> Branch:
    if not isinstance(record, dict):
        raise ValidationError(f"{where}: expected an object")
    unknown = set(record) - {"gates", "measure"}
    if unknown:
        raise ValidationError(f"{where}: unknown fields {sorted(unknown)}")
    gates = record.get("gates", [])
    if not isinstance(gates, list):
        raise ValidationError(f"{where}.gates: expected a list")
    parsed = [parse_gate(g, n, f"{where}.gates[{k}]") for k, g in enumerate(gates)]
    measure = _int_list(record.get("measure", []), f"{where}.measure")
    if len(set(measure)) != len(measure):
        raise ValidationError(f"{where}.measure: repeated mode")
    for m in measure:
        if not 0 <= m < n:
            raise ValidationError(f"{where}.measure: mode {m} outside [0, {n})")
    return Branch(tuple(extra_gates) + tuple(parsed), tuple(measure))


def _parse_adaptive(section, n, top_gates) -> AdaptiveProgram:
    if not isinstance(section, dict) or not isinstance(section.get("stages"), list):
        raise ValidationError("adaptive: expected an object with a 'stages' list")
    stages = []
    for s, st in enumerate(section["stages"]):
        where = f"adaptive.stages[{s}]"
        extra = top_gates if s == 0 else ()
        if isinstance(st, dict) and "branches" in st:
            if set(st) != {"branches"}:
                raise ValidationError(f"{where}: 'branches' cannot be combined with other fields")
            if not isinstance(st["branches"], dict):
                raise ValidationError(f"{where}.branches: expected an object")
            table = {}
            for key, rec in st["branches"].items():
                if key != "*" and any(ch not in "01" for ch in key):
                    raise ValidationError(f"{where}.branches: key {key!r} is not a bitstring")
                if s == 0 and key not in ("", "*"):
                    raise ValidationError(f"{where}.branches: the first stage has no prior outcomes")
                table[key] = _parse_branch(rec, n, f"{where}.branches[{key!r}]", extra)
            stages.append(Stage(table=table))
        else:
            stages.append(Stage(table={"*": _parse_branch(st, n, where, extra)}))
    if not stages:
        raise ValidationError("adaptive: at least one stage is required")
    program = AdaptiveProgram(n, tuple(stages))
    validate_program(program)
    return program


def validate_program(program: AdaptiveProgram):
    """Walk every reachable history: tables must be total, measured modes
    disjoint, later gates off measured modes.  Large trees are walked up to
    MAX_TOTALITY_HISTORIES histories."""
    frontier: list[tuple] = [()]
    visited = 0
    for s in range(len(program.stages)):
        nxt = []
        for history in frontier:
            visited += 1
            if visited > MAX_TOTALITY_HISTORIES:
                return
            try:
                _, subset = program.select(s, history)
            except ValidationError as exc:
                raise ValidationError(f"adaptive.stages[{s}]: {exc}") from None
            k = len(subset)
            for code in range(2 ** k):
                nxt.append(history + (tuple((code >> (k - 1 - t)) & 1 for t in range(k)),))
        frontier = nxt


def parse_circuit(data: bytes | str) -> CircuitDocument:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ValidationError("document must be a JSON object")
    unknown = set(doc) - {"schema_version", "n", "gates", "adaptive", "description"}
    if unknown:
        raise ValidationError(f"unknown top-level fields {sorted(unknown)}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(
            f"schema_version must be {SCHEMA_VERSION}, got {doc.get('schema_version')!r}"
        )
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    gates = doc.get("gates", [])
    if not isinstance(gates, list):
        raise ValidationError("gates: expected a list")
    parsed = tuple(parse_gate(g, n, f"gates[{k}]") for k, g in enumerate(gates))
    program = None
    if "adaptive" in doc:
        program = _parse_adaptive(doc["adaptive"], n, parsed)
    return CircuitDocument(SCHEMA_VERSION, n, parsed, program)


def load_circuit(path) -> CircuitDocument:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_circuit(data)


def gate_to_record(g: GateSpec) -> dict:
    if isinstance(g, PauliGateSpec):
        rec = {"type": "pauli", "qubits": list(g.qubits)}
        rec.update({f: getattr(g, f) for f in _PAULI_FIELDS})
        return rec
    if isinstance(g, NumberConservingGateSpec):
        return {"type": "number_conserving", "modes": list(g.modes),
                "b": [[[float(v.real), float(v.imag)] for v in row] for row in g.b]}
    if isinstance(g, GeneralQuadraticGateSpec):
        rec = {"type": "general_quadratic", "modes": list(g.modes),
               "alpha": [[float(v) for v in row] for row in g.alpha]}
        if g.offset:
            rec["offset"] = g.offset
        return rec
    raise TypeError(f"not a gate spec: {g!r}")


def dump_circuit(n: int, gates, adaptive_stages: list | None = None) -> str:
    """Serialize; ``adaptive_stages`` is a list of JSON-ready stage records."""
    doc: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "n": n,
                           "gates": [gate_to_record(g) for g in gates]}
    if adaptive_stages is not None:
        doc["adaptive"] = {"stages": adaptive_stages}
    return json.dumps(doc, indent=1)


__all__ = ["CircuitDocument", "parse_circuit", "load_circuit", "dump_circuit",
           "gate_to_record", "validate_program", "FermiSimError"]
