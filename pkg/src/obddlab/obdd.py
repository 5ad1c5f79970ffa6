"""Leveled OBDD models and their run semantics.

A model reads its ``n`` input bits in the order ``pi(1), ..., pi(n)``; level ``j``
(1-based) owns the pair of matrices applied when the bit it reads is 0 or 1.
Final states are partitioned into accepting, neutral ("don't know") and
rejecting states, the rejecting cell being everything else.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, Union

from .numeric import (
    DegenerateStateError,
    DimensionError,
    Matrix,
    QuadExt,
    Scalar,
    magnitude_squared,
    to_dense,
    validate_affine,
    validate_orthogonal,
    validate_stochastic,
    vector,
)

DEFAULT_BUDGET = 2 ** 20


class ModelError(ValueError):
    """A model failed one of its structural or validity invariants."""


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int) -> None:
        super().__init__(f"sweep needs {required} evaluations, budget is {budget} "
                         f"(raise it with OBDDLAB_BUDGET)")
        self.required = required
        self.budget = budget


def sweep_budget(budget: int | None = None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get("OBDDLAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class VariableOrder:
    pi: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.pi)
        if sorted(self.pi) != list(range(1, n + 1)):
            raise ModelError(f"{self.pi} is not a permutation of 1..{n}")

    @classmethod
    def identity(cls, n: int) -> VariableOrder:
        return cls(tuple(range(1, n + 1)))

    def __len__(self) -> int:
        return len(self.pi)

    def __iter__(self):
        return iter(self.pi)

    def is_identity(self) -> bool:
        return self.pi == tuple(range(1, len(self.pi) + 1))


@dataclass(frozen=True)
class RunOutcome:
    accept: Scalar
    reject: Scalar
    dontknow: Scalar = Fraction(0)

    def total(self) -> Scalar:
        return self.accept + self.reject + self.dontknow

    def triple(self) -> tuple[Scalar, Scalar, Scalar]:
        return (self.accept, self.reject, self.dontknow)

    def __str__(self) -> str:
        from .numeric import format_scalar
        return (f"accept {format_scalar(self.accept)} reject {format_scalar(self.reject)} "
                f"dontknow {format_scalar(self.dontknow)}")


def _check_partition(m: int, accepting: frozenset, neutral: frozenset, what: str) -> None:
    if any(not 0 <= s < m for s in accepting | neutral):
        raise ModelError(f"{what}: decision states outside 0..{m - 1}")
    if accepting & neutral:
        raise ModelError(f"{what}: accepting and neutral states overlap")


def _check_levels(levels, n: int, m: int, check: Callable[[Matrix], bool], what: str) -> None:
    if len(levels) != n:
        raise ModelError(f"{what}: {len(levels)} levels for {n} variables")
    seen: set[int] = set()
    for j, pair in enumerate(levels, start=1):
        if len(pair) != 2:
            raise ModelError(f"{what}: level {j} needs one matrix per bit")
        for b, t in enumerate(pair):
            if t.rows != m or t.cols != m:
                raise DimensionError(f"{what} level {j} bit {b}", m, t.rows)
            if id(t) in seen:
                continue
            if not check(t):
                raise ModelError(f"{what}: level {j} bit {b} matrix fails validation")
            seen.add(id(t))


@dataclass(frozen=True, eq=False)
class ProbabilisticObdd:
    n: int
    width: int
    initial: tuple
    accepting: frozenset
    order: VariableOrder
    levels: tuple  # levels[j-1] = (T_j^0, T_j^1)
    neutral: frozenset = frozenset()
    labels: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "initial", vector(self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "neutral", frozenset(self.neutral))
        if len(self.initial) != self.width:
            raise DimensionError("initial distribution", self.width, len(self.initial))
        if len(self.order) != self.n:
            raise ModelError(f"order has {len(self.order)} entries for n = {self.n}")
        if any(isinstance(v, QuadExt) or v < 0 for v in self.initial) or sum(self.initial) != 1:
            raise ModelError("initial state is not a probability distribution")
        _check_partition(self.width, self.accepting, self.neutral, "POBDD")
        _check_levels(self.levels, self.n, self.width, self._matrix_check, type(self).__name__)

    _matrix_check = staticmethod(validate_stochastic)


def _is_zero_one_function(t: Matrix) -> bool:
    return all(len(col) == 1 and col[0][1] == 1 for col in t.columns)


@dataclass(frozen=True, eq=False)
class DeterministicObdd(ProbabilisticObdd):
    """A POBDD whose matrices send every state to exactly one successor."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if sorted(self.initial).count(1) != 1:
            raise ModelError("deterministic model needs a point-mass initial state")

    _matrix_check = staticmethod(_is_zero_one_function)

    @property
    def start(self) -> int:
        return self.initial.index(1)

    def successor(self, level: int, state: int, bit: int) -> int:
        return self.levels[level - 1][bit].columns[state][0][0]

    def level_nodes(self) -> list[set[int]]:
        """Reachable states in front of each level, ending with the sink level."""
        layers = [{self.start}]
        for j in range(1, self.n + 1):
            layers.append({self.successor(j, s, b) for s in layers[-1] for b in (0, 1)})
        return layers


@dataclass(frozen=True, eq=False)
class UnitaryObdd:
    n: int
    width: int
    initial: tuple
    accepting: frozenset
    order: VariableOrder
    levels: tuple
    neutral: frozenset = frozenset()
    labels: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "initial", tuple(QuadExt.coerce(v) for v in self.initial))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "neutral", frozenset(self.neutral))
        if len(self.initial) != self.width:
            raise DimensionError("initial state", self.width, len(self.initial))
        if len(self.order) != self.n:
            raise ModelError(f"order has {len(self.order)} entries for n = {self.n}")
        if sum((v.square() for v in self.initial), QuadExt(0)) != 1:
            raise ModelError("initial state does not have unit l2 norm")
        _check_partition(self.width, self.accepting, self.neutral, "UOBDD")
        _check_levels(self.levels, self.n, self.width, validate_orthogonal, "UOBDD")


@dataclass(frozen=True, eq=False)
class AffineObdd:
    n: int
    classical_count: int
    affine_count: int
    initial_classical: int
    classical_accepting: frozenset
    initial: tuple
    affine_accepting: frozenset
    order: VariableOrder
    delta: tuple  # delta[j-1][s] = (successor on 0, successor on 1)
    transitions: tuple  # transitions[j-1][s] = (T_j^{s,0}, T_j^{s,1})
    affine_neutral: frozenset = frozenset()
    classical_labels: tuple | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "initial", vector(self.initial))
        for name in ("classical_accepting", "affine_accepting", "affine_neutral"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        m1, m2 = self.classical_count, self.affine_count
        if len(self.initial) != m2:
            raise DimensionError("initial affine state", m2, len(self.initial))
        if sum(self.initial) != 1:
            raise ModelError("initial affine state does not sum to 1")
        if len(self.order) != self.n:
            raise ModelError(f"order has {len(self.order)} entries for n = {self.n}")
        if not 0 <= self.initial_classical < m1:
            raise ModelError("initial classical state out of range")
        if any(not 0 <= s < m1 for s in self.classical_accepting):
            raise ModelError("classical accepting states out of range")
        _check_partition(m2, self.affine_accepting, self.affine_neutral, "AfOBDD")
        if len(self.delta) != self.n or len(self.transitions) != self.n:
            raise ModelError("AfOBDD needs one classical and one affine table per level")
        seen: set[int] = set()
        for j in range(self.n):
            if len(self.delta[j]) != m1 or len(self.transitions[j]) != m1:
                raise ModelError(f"level {j + 1}: tables must cover all {m1} classical states")
            for s in range(m1):
                for b in (0, 1):
                    if not 0 <= self.delta[j][s][b] < m1:
                        raise ModelError(f"level {j + 1}: delta({s},{b}) out of range")
                    t = self.transitions[j][s][b]
                    if t.rows != m2 or t.cols != m2:
                        raise DimensionError(f"AfOBDD level {j + 1}", m2, t.rows)
                    if id(t) not in seen:
                        if not validate_affine(t):
                            raise ModelError(f"level {j + 1} state {s} bit {b}: not affine")
                        seen.add(id(t))

    @property
    def width(self) -> int:
        return self.classical_count * self.affine_count


ObddModel = Union[ProbabilisticObdd, UnitaryObdd, AffineObdd]


def _bits_in_order(model, x: Sequence[int]) -> Iterator[tuple[int, int]]:
    if len(x) != model.n:
        raise DimensionError("input length", model.n, len(x))
    for j, var in enumerate(model.order.pi, start=1):
        yield j, x[var - 1]


def _split(final: dict, accepting: frozenset, neutral: frozenset, weight) -> RunOutcome:
    acc = rej = dk = Fraction(0)
    for i, v in final.items():
        w = weight(v)
        if i in accepting:
            acc = acc + w
        elif i in neutral:
            dk = dk + w
        else:
            rej = rej + w
    return RunOutcome(acc, rej, dk)


def evolve_probabilistic(m: ProbabilisticObdd, x: Sequence[int]) -> dict[int, Scalar]:
    state = {i: v for i, v in enumerate(m.initial) if v != 0}
    for j, b in _bits_in_order(m, x):
        state = m.levels[j - 1][b].apply_sparse(state)
    return state


def run_probabilistic(m: ProbabilisticObdd, x: Sequence[int]) -> RunOutcome:
    return _split(evolve_probabilistic(m, x), m.accepting, m.neutral, lambda v: v)


def trace_probabilistic(m: ProbabilisticObdd, x: Sequence[int]) -> list[tuple]:
    """Dense state after every level, starting with the initial distribution."""
    state = {i: v for i, v in enumerate(m.initial) if v != 0}
    out = [to_dense(state, m.width)]
    for j, b in _bits_in_order(m, x):
        state = m.levels[j - 1][b].apply_sparse(state)
        out.append(to_dense(state, m.width))
    return out


def run_deterministic(m: DeterministicObdd, x: Sequence[int]) -> int:
    """Follow the unique path; 1 iff it ends in an accepting sink."""
    s = m.start
    for j, b in _bits_in_order(m, x):
        s = m.successor(j, s, b)
    return int(s in m.accepting)


def evolve_unitary(m: UnitaryObdd, x: Sequence[int]) -> dict[int, Scalar]:
    state = {i: v for i, v in enumerate(m.initial) if v != 0}
    for j, b in _bits_in_order(m, x):
        state = m.levels[j - 1][b].apply_sparse(state)
    return state


def trace_unitary(m: UnitaryObdd, x: Sequence[int]) -> list[tuple]:
    state = {i: v for i, v in enumerate(m.initial) if v != 0}
    out = [to_dense(state, m.width)]
    for j, b in _bits_in_order(m, x):
        state = m.levels[j - 1][b].apply_sparse(state)
        out.append(to_dense(state, m.width))
    return out


def run_unitary(m: UnitaryObdd, x: Sequence[int]) -> RunOutcome:
    """Measure the final state in the computational basis."""
    return _split(evolve_unitary(m, x), m.accepting, m.neutral, magnitude_squared)


def trace_affine(m: AffineObdd, x: Sequence[int]) -> list[tuple[int, tuple]]:
    """``(classical state, dense affine state)`` after every level."""
    s = m.initial_classical
    v = {i: a for i, a in enumerate(m.initial) if a != 0}
    out = [(s, to_dense(v, m.affine_count))]
    for j, b in _bits_in_order(m, x):
        v = m.transitions[j - 1][s][b].apply_sparse(v)
        s = m.delta[j - 1][s][b]
        out.append((s, to_dense(v, m.affine_count)))
    return out


def evolve_affine(m: AffineObdd, x: Sequence[int]) -> tuple[int, dict[int, Fraction]]:
    s = m.initial_classical
    v = {i: a for i, a in enumerate(m.initial) if a != 0}
    for j, b in _bits_in_order(m, x):
        v = m.transitions[j - 1][s][b].apply_sparse(v)
        s = m.delta[j - 1][s][b]
    return s, v


def run_affine(m: AffineObdd, x: Sequence[int]) -> RunOutcome:
    s, v = evolve_affine(m, x)
    if s not in m.classical_accepting:
        return RunOutcome(Fraction(0), Fraction(1), Fraction(0))
    return weigh(v, m.affine_accepting, m.affine_neutral)


def weigh(v: dict[int, Fraction], accepting: frozenset, neutral: frozenset) -> RunOutcome:
    norm = sum((abs(a) for a in v.values()), Fraction(0))
    if norm == 0:
        raise DegenerateStateError("final affine state has l1 norm 0")
    out = _split(v, accepting, neutral, abs)
    return RunOutcome(out.accept / norm, out.reject / norm, out.dontknow / norm)


def run(model, x: Sequence[int]) -> RunOutcome:
    """Dispatch on the model variant."""
    if isinstance(model, AffineObdd):
        return run_affine(model, x)
    if isinstance(model, UnitaryObdd):
        return run_unitary(model, x)
    if isinstance(model, ProbabilisticObdd):
        return run_probabilistic(model, x)
    raise TypeError(f"not an OBDD model: {type(model).__name__}")


def width(model) -> int:
    """Declared width: ``m`` for stochastic/unitary models, ``m1 * m2`` for affine ones.

    Deterministic models report the graph width, the largest number of
    reachable nodes on a non-sink level.
    """
    if isinstance(model, DeterministicObdd):
        return max(len(layer) for layer in model.level_nodes()[:-1]) if model.n else 1
    return model.width


# --- certification -----------------------------------------------------------

@dataclass(frozen=True)
class Exact:
    def __str__(self) -> str:
        return "exact"


@dataclass(frozen=True)
class LasVegas:
    p: Fraction

    def __str__(self) -> str:
        return f"lasvegas({self.p})"


@dataclass(frozen=True)
class Bounded:
    eps: Fraction

    def __str__(self) -> str:
        return f"bounded({self.eps})"


Mode = Union[Exact, LasVegas, Bounded]


def parse_mode(text: str) -> Mode:
    """``exact``, ``lasvegas:1/2`` or ``bounded:1/3``."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "exact":
        return Exact()
    if name in ("lasvegas", "lv"):
        return LasVegas(Fraction(arg or "1/2"))
    if name == "bounded":
        return Bounded(Fraction(arg))
    raise ValueError(f"unknown mode {text!r}")


@dataclass(frozen=True)
class Violation:
    input: tuple
    outcome: RunOutcome
    expected: int
    reason: str


@dataclass
class CertificationReport:
    mode: str
    total: int = 0
    violations: list = field(default_factory=list)
    min_decision: Scalar | None = None
    max_decision: Scalar | None = None
    members: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def counterexample(self) -> tuple | None:
        return self.violations[0].input if self.violations else None

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        ok = self.total - len(self.violations)
        text = f"{verdict} {self.mode}: {ok}/{self.total} inputs"
        if self.violations:
            from .functions import bits_to_str
            v = self.violations[0]
            text += f"; first counterexample {bits_to_str(v.input) or 'ε'} ({v.reason})"
        return text


def check_outcome(outcome: RunOutcome, expected: int, mode: Mode) -> str | None:
    """Reason string when ``outcome`` breaks ``mode`` for an input with value ``expected``."""
    if outcome.total() != 1:
        return f"probabilities sum to {outcome.total()}"
    right = outcome.accept if expected else outcome.reject
    wrong = outcome.reject if expected else outcome.accept
    if isinstance(mode, Exact):
        if outcome.dontknow != 0:
            return "don't-know mass in exact mode"
        if outcome.accept not in (0, 1):
            return f"acceptance probability {outcome.accept} not in {{0,1}}"
        if right != 1:
            return f"expected {expected}, accepted with {outcome.accept}"
        return None
    if isinstance(mode, LasVegas):
        if wrong != 0:
            return f"wrong-side probability {wrong}"
        if right < mode.p:
            return f"decision probability {right} below {mode.p}"
        return None
    if isinstance(mode, Bounded):
        err = 1 - right
        if not err < mode.eps:
            return f"error {err} not below {mode.eps}"
        return None
    raise TypeError(f"unknown mode {mode!r}")


def certify(pairs: Iterable[tuple[tuple, RunOutcome, int]], mode: Mode) -> CertificationReport:
    rep = CertificationReport(str(mode))
    for x, out, expected in pairs:
        rep.total += 1
        rep.members += int(bool(expected))
        right = out.accept if expected else out.reject
        if rep.min_decision is None or right < rep.min_decision:
            rep.min_decision = right
        if rep.max_decision is None or right > rep.max_decision:
            rep.max_decision = right
        reason = check_outcome(out, expected, mode)
        if reason:
            rep.violations.append(Violation(tuple(x), out, expected, reason))
    return rep


def sweep_classify(model, oracle: Callable[[tuple], int], mode: Mode,
                   budget: int | None = None) -> CertificationReport:
    """Run ``model`` on all ``2^n`` inputs and check ``mode`` against ``oracle``."""
    cap = sweep_budget(budget)
    required = 2 ** model.n
    if required > cap:
        raise BudgetExceeded(required, cap)

    def pairs():
        for x in itertools.product((0, 1), repeat=model.n):
            yield x, run(model, x), int(bool(oracle(x)))

    return certify(pairs(), mode)
