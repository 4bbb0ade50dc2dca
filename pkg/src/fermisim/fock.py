"""Occupation-number basis states and mode subsets.

Convention (used everywhere, including the oracle): bit index == mode index,
and text bitstrings are written mode 0 first (leftmost).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class FockState:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValidationError(f"occupations must be 0 or 1, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "FockState":
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ValidationError(f"bitstring may contain only '0'/'1': {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def vacuum(cls, n: int) -> "FockState":
        return cls((0,) * n)

    @classmethod
    def from_occupied(cls, n: int, modes: Iterable[int]) -> "FockState":
        bits = [0] * n
        for m in modes:
            if not 0 <= m < n:
                raise ValidationError(f"mode {m} out of range for n={n}")
            bits[m] = 1
        return cls(tuple(bits))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def hamming_weight(self) -> int:
        return sum(self.bits)

    @property
    def occupied(self) -> tuple[int, ...]:
        """Occupied modes in increasing order."""
        return tuple(i for i, b in enumerate(self.bits) if b)

    def index(self) -> int:
        """Position in a 2^n statevector (mode 0 is the most significant bit)."""
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    @classmethod
    def from_index(cls, index: int, n: int) -> "FockState":
        return cls(tuple((index >> (n - 1 - m)) & 1 for m in range(n)))

    def __str__(self) -> str:
        return to_bitstring(self.bits)


def to_bitstring(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def parity(x: FockState) -> int:
    return x.hamming_weight % 2


def jw_sign(x: FockState, i: int) -> int:
    """Jordan-Wigner string sign (-1)^(number of occupied modes below i)."""
    if not 0 <= i < x.n:
        raise ValidationError(f"mode {i} out of range for n={x.n}")
    return -1 if sum(x.bits[:i]) % 2 else 1


@dataclass(frozen=True)
class ModeSubset:
    n: int
    modes: tuple[int, ...]

    def __post_init__(self):
        modes = tuple(int(m) for m in self.modes)
        if any(not 0 <= m < self.n for m in modes):
            raise ValidationError(f"subset {modes} has modes outside [0, {self.n})")
        if len(set(modes)) != len(modes):
            raise ValidationError(f"subset {modes} repeats a mode")
        if list(modes) != sorted(modes):
            raise ValidationError(f"subset {modes} must be strictly increasing")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def of(cls, n: int, modes: Iterable[int]) -> "ModeSubset":
        modes = list(modes)
        if len(set(modes)) != len(modes):
            raise ValidationError(f"subset {modes} repeats a mode")
        return cls(n, tuple(sorted(modes)))

    def __len__(self) -> int:
        return len(self.modes)

    def __iter__(self):
        return iter(self.modes)


@dataclass(frozen=True)
class OutcomeAssignment:
    """Measurement outcome bits aligned with ``subset.modes``."""

    subset: ModeSubset
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != len(self.subset):
            raise ValidationError(
                f"{len(bits)} outcome bits for a subset of size {len(self.subset)}"
            )
        if any(b not in (0, 1) for b in bits):
            raise ValidationError(f"outcome bits must be 0 or 1, got {self.bits}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def of(cls, n: int, assignment: dict[int, int]) -> "OutcomeAssignment":
        modes = sorted(assignment)
        return cls(ModeSubset(n, tuple(modes)), tuple(assignment[m] for m in modes))

    @classmethod
    def empty(cls, n: int) -> "OutcomeAssignment":
        return cls(ModeSubset(n, ()), ())

    @property
    def n(self) -> int:
        return self.subset.n

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.subset.modes, self.bits))
