"""Finite automata with uniform transitions and an optional end-marker, and the
MODXOR constructions.

A machine has one matrix per input symbol (0 and 1), shared by every step,
plus an optional matrix applied once after the last symbol.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .constructions import flip_entry, select_matrix
from .functions import shiftx_int
from .numeric import (
    INV_SQRT2,
    DimensionError,
    Matrix,
    QuadExt,
    magnitude_squared,
    to_dense,
    validate_affine,
    validate_orthogonal,
    validate_stochastic,
    vector,
)
from .obdd import (
    BudgetExceeded,
    CertificationReport,
    Mode,
    ModelError,
    RunOutcome,
    _check_partition,
    _is_zero_one_function,
    _split,
    certify,
    sweep_budget,
    weigh,
)

VARIANTS = ("deterministic", "probabilistic", "unitary", "affine")
END_MARKER = "$"

_CHECKS = {
    "deterministic": _is_zero_one_function,
    "probabilistic": validate_stochastic,
    "unitary": validate_orthogonal,
    "affine": validate_affine,
}


@dataclass(frozen=True, eq=False)
class AutomatonModel:
    variant: str
    size: int
    initial: tuple
    symbols: tuple  # (T_0, T_1)
    accepting: frozenset
    end_marker: Matrix | None = None
    neutral: frozenset = frozenset()
    labels: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ModelError(f"unknown automaton variant {self.variant!r}")
        if self.variant == "unitary":
            init = tuple(QuadExt.coerce(v) for v in self.initial)
        else:
            init = vector(self.initial)
        object.__setattr__(self, "initial", init)
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "neutral", frozenset(self.neutral))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(init) != self.size:
            raise DimensionError("initial state", self.size, len(init))
        if len(self.symbols) != 2:
            raise ModelError("the alphabet is {0, 1}: one matrix per symbol")
        self._check_initial()
        _check_partition(self.size, self.accepting, self.neutral, "automaton")
        check = _CHECKS[self.variant]
        named = [(str(b), t) for b, t in enumerate(self.symbols)]
        if self.end_marker is not None:
            named.append((END_MARKER, self.end_marker))
        for name, t in named:
            if t.rows != self.size or t.cols != self.size:
                raise DimensionError(f"matrix for symbol {name}", self.size, t.rows)
            if not check(t):
                raise ModelError(f"matrix for symbol {name} fails the {self.variant} check")

    def _check_initial(self) -> None:
        v = self.initial
        if self.variant == "unitary":
            if sum((a.square() for a in v), QuadExt(0)) != 1:
                raise ModelError("initial state does not have unit l2 norm")
        elif self.variant == "affine":
            if sum(v) != 1:
                raise ModelError("initial affine state does not sum to 1")
        else:
            if any(isinstance(a, QuadExt) or a < 0 for a in v) or sum(v) != 1:
                raise ModelError("initial state is not a probability distribution")
            if self.variant == "deterministic" and sorted(v).count(1) != 1:
                raise ModelError("deterministic automaton needs a point-mass start")

    @property
    def width(self) -> int:
        return self.size


@dataclass(frozen=True)
class AddressedState:
    """State ``(p, s)`` of the MODXOR automata: phase bit and a ``k``-bit register."""
    p: int
    s: tuple

    def __post_init__(self) -> None:
        if self.p not in (0, 1) or any(b not in (0, 1) for b in self.s):
            raise ValueError(f"bad addressed state ({self.p}, {self.s})")

    def index(self) -> int:
        v = 0
        for b in self.s:
            v = (v << 1) | b
        return self.p * 2 ** len(self.s) + v

    @classmethod
    def from_index(cls, idx: int, k: int) -> AddressedState:
        p, v = divmod(idx, 2 ** k)
        return cls(p, tuple((v >> (k - 1 - j)) & 1 for j in range(k)))

    def __str__(self) -> str:
        return f"(p{self.p},{''.join(map(str, self.s))})"


def _steps(m: AutomatonModel, w: Sequence[int]):
    for pos, c in enumerate(w):
        if c not in (0, 1):
            raise ValueError(f"symbol {c!r} at position {pos + 1} is outside the alphabet {{0,1}}")
        yield m.symbols[c]
    if m.end_marker is not None:
        yield m.end_marker


def evolve_automaton(m: AutomatonModel, w: Sequence[int]) -> dict:
    state = {i: v for i, v in enumerate(m.initial) if v != 0}
    for t in _steps(m, w):
        state = t.apply_sparse(state)
    return state


def trace_automaton(m: AutomatonModel, w: Sequence[int]) -> list[tuple]:
    """Dense state before the first step and after every step (end-marker included)."""
    state = {i: v for i, v in enumerate(m.initial) if v != 0}
    out = [to_dense(state, m.size)]
    for t in _steps(m, w):
        state = t.apply_sparse(state)
        out.append(to_dense(state, m.size))
    return out


def run_automaton(m: AutomatonModel, w: Sequence[int]) -> RunOutcome:
    final = evolve_automaton(m, w)
    if m.variant == "affine":
        return weigh(final, m.accepting, m.neutral)
    if m.variant == "unitary":
        return _split(final, m.accepting, m.neutral, magnitude_squared)
    return _split(final, m.accepting, m.neutral, lambda v: v)


def shortlex(maxlen: int):
    for length in range(maxlen + 1):
        yield from itertools.product((0, 1), repeat=length)


def sweep_strings(m: AutomatonModel, oracle: Callable[[tuple], int], maxlen: int, mode: Mode,
                  budget: int | None = None) -> CertificationReport:
    """Check ``mode`` on every string of length ``<= maxlen`` in shortlex order.

    Violations are listed in the same order, so the first one is a shortest
    counterexample.
    """
    cap = sweep_budget(budget)
    required = 2 ** (maxlen + 1) - 1
    if required > cap:
        raise BudgetExceeded(required, cap)
    return certify(((w, run_automaton(m, w), int(bool(oracle(w)))) for w in shortlex(maxlen)), mode)


# --- MODXOR --------------------------------------------------------------------------

def _modxor_permutations(k: int) -> list[list[int]]:
    size = 2 ** k
    out = []
    for x in (0, 1):
        target = [size + i for i in range(size)]  # (p_0, s) -> (p_1, s)
        target += [shiftx_int(i, x, k) for i in range(size)]  # (p_1, s) -> (p_0, shiftx(s, x))
        out.append(target)
    return out


def _modxor_partition(k: int) -> tuple[set[int], set[int]]:
    size = 2 ** k
    neutral = set(range(size))
    accepting = {size + i for i in range(size) if (i >> (k - 1)) & 1}
    return accepting, neutral


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"MODXOR needs k >= 1, got {k}")


def build_modxor_lv_pfa(k: int) -> AutomatonModel:
    """Las Vegas PFA with ``2 * 2^k`` states and success probability 1/2.

    State ``(p, s)`` sits at index ``p * 2^k + s``.  The two paths differ only in
    their starting phase, so each of them samples the input bits at one parity of
    positions; ``p_0`` states are neutral at the end, ``p_1`` states decide on the
    leading bit of ``s``.
    """
    _check_k(k)
    size = 2 * 2 ** k
    mats = [Matrix.from_mapping(size, t) for t in _modxor_permutations(k)]
    initial = [Fraction(0)] * size
    initial[2 ** k] = Fraction(1, 2)
    initial[0] = Fraction(1, 2)
    accepting, neutral = _modxor_partition(k)
    return AutomatonModel(
        variant="probabilistic", size=size, initial=initial, symbols=tuple(mats),
        accepting=accepting, neutral=neutral,
        labels=tuple(str(AddressedState.from_index(i, k)) for i in range(size)),
        metadata={"builder": "modxor-lv-pfa", "params": {"k": k}},
    )


def build_modxor_lv_ufa(k: int) -> AutomatonModel:
    """Unitary counterpart of the LV-PFA: same permutations, amplitudes ``1/sqrt 2``."""
    _check_k(k)
    size = 2 * 2 ** k
    mats = [Matrix.from_mapping(size, t, QuadExt(1)) for t in _modxor_permutations(k)]
    initial = [QuadExt(0)] * size
    initial[0] = INV_SQRT2
    initial[2 ** k] = INV_SQRT2
    accepting, neutral = _modxor_partition(k)
    return AutomatonModel(
        variant="unitary", size=size, initial=initial, symbols=tuple(mats),
        accepting=accepting, neutral=neutral,
        labels=tuple(str(AddressedState.from_index(i, k)) for i in range(size)),
        metadata={"builder": "modxor-lv-ufa", "params": {"k": k}},
    )


def build_modxor_afa(k: int) -> AutomatonModel:
    """Zero-error affine automaton with ``2k + 1`` states.

    Entries ``0..2k-1`` are a rotating window of XOR accumulators, the last entry
    keeps the sum at 1.  Every step rotates the window right by one and, on a 1,
    flips the accumulator now in front.  The end-marker rotates once more and
    folds the accumulator for the right residue into ``e_0``.
    """
    _check_k(k)
    size = 2 * k + 1
    last = 2 * k
    rotate = Matrix.from_mapping(size, [(j + 1) % last for j in range(last)] + [last])
    flip = flip_entry(size, 0, last)
    end = select_matrix(size, 0) @ rotate
    initial = [0] * last + [1]
    return AutomatonModel(
        variant="affine", size=size, initial=initial, symbols=(rotate, flip @ rotate),
        accepting={0}, end_marker=end,
        labels=tuple(f"e{j}" for j in range(size)),
        metadata={"builder": "modxor-afa", "params": {"k": k}},
    )
