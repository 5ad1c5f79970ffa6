"""Lower-bound machinery: subfunction counts, Myhill-Nerode distinguishability
and exact checks of ``bound^(1 - eps) <= size``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .obdd import BudgetExceeded, VariableOrder, sweep_budget
from .truthtable import TruthTable

CUT_CAP = 12
EXHAUSTIVE_ORDER_CAP = 8


@dataclass(frozen=True)
class Cut:
    """Split after the first ``u`` variables of ``pi``; only ``1 < u < n`` is a cut."""
    pi: VariableOrder
    u: int

    def __post_init__(self) -> None:
        if not isinstance(self.pi, VariableOrder):
            object.__setattr__(self, "pi", VariableOrder(tuple(self.pi)))
        n = len(self.pi)
        if not 1 < self.u < n:
            raise ValueError(f"cut position u={self.u} outside 1 < u < {n}")

    @property
    def left(self) -> frozenset:
        return frozenset(self.pi.pi[: self.u])


def cut_positions(n: int) -> range:
    """The admissible cut range, widened to ``1..n-1`` when ``1 < u < n`` is empty."""
    return range(2, n) if n > 2 else range(1, n)


def _count_fixed(f: TruthTable, left: Sequence[int]) -> int:
    """Distinct subfunctions after fixing the variables in ``left``."""
    rest = [v for v in range(1, f.n + 1) if v not in set(left)]
    rows = f.in_order(list(left) + rest).reshape(2 ** len(left), -1)
    return len(np.unique(rows, axis=0))


def _check_cap(f: TruthTable, cap: int) -> None:
    if f.n > cap:
        raise ValueError(f"subfunction counting over {f.n} variables exceeds cap {cap}")


def subfunction_count(f: TruthTable, cut: Cut, cap: int = CUT_CAP) -> int:
    _check_cap(f, cap)
    if len(cut.pi) != f.n:
        raise ValueError(f"order on {len(cut.pi)} variables for a function of {f.n}")
    return _count_fixed(f, cut.pi.pi[: cut.u])


def per_cut_counts(f: TruthTable, pi: VariableOrder | Sequence[int], cap: int = CUT_CAP,
                   memo: dict | None = None) -> dict[int, int]:
    """``u -> N^theta(f)`` over the cut range.  The count depends only on the set of
    fixed variables, so ``memo`` may be shared across orders."""
    _check_cap(f, cap)
    pi = pi if isinstance(pi, VariableOrder) else VariableOrder(tuple(pi))
    out = {}
    for u in cut_positions(f.n):
        key = frozenset(pi.pi[:u])
        if memo is None or key not in memo:
            val = _count_fixed(f, pi.pi[:u])
            if memo is None:
                out[u] = val
                continue
            memo[key] = val
        out[u] = memo[key]
    return out


def subfunction_max(f: TruthTable, pi: VariableOrder | Sequence[int], cap: int = CUT_CAP,
                    memo: dict | None = None) -> int:
    return max(per_cut_counts(f, pi, cap, memo).values(), default=1)


@dataclass
class BoundReport:
    per_cut: dict  # u -> N^theta for ``order``
    n_pi: int
    order: tuple
    n_f: int
    best_order: tuple
    search_mode: str  # "exhaustive" or "sampled"
    orders_examined: int
    seed: int | None = None

    @property
    def is_lower_bound(self) -> bool:
        """Only an exhaustive minimum over orders is N(f); a sampled one is an upper bound."""
        return self.search_mode == "exhaustive"

    def to_dict(self) -> dict:
        return {
            "per_cut": {str(u): c for u, c in self.per_cut.items()},
            "n_pi": self.n_pi, "order": list(self.order),
            "n_f": self.n_f, "n_f_kind": "exact" if self.is_lower_bound else "upper bound",
            "best_order": list(self.best_order), "search_mode": self.search_mode,
            "orders_examined": self.orders_examined, "seed": self.seed,
        }


def n_of(f: TruthTable, mode: str = "exhaustive", samples: int = 1000, seed: int = 0,
         pi: VariableOrder | Sequence[int] | None = None) -> BoundReport:
    """``N(f) = min_pi N^pi(f)``, exhaustively (n <= 8) or over sampled orders."""
    n = f.n
    pi = VariableOrder.identity(n) if pi is None else (
        pi if isinstance(pi, VariableOrder) else VariableOrder(tuple(pi)))
    memo: dict = {}
    if mode == "exhaustive":
        if n > EXHAUSTIVE_ORDER_CAP:
            raise ValueError(f"exhaustive order search over {n} variables exceeds cap {EXHAUSTIVE_ORDER_CAP}")
        orders: Iterable = itertools.permutations(range(1, n + 1))
        used_seed = None
    elif mode == "sample":
        rng = random.Random(seed)
        used_seed = seed

        def draw():
            for _ in range(samples):
                p = list(range(1, n + 1))
                rng.shuffle(p)
                yield tuple(p)
        orders = itertools.chain([pi.pi], draw())
    else:
        raise ValueError(f"unknown search mode {mode!r}")
    best, best_val, count = None, None, 0
    for order in orders:
        count += 1
        val = subfunction_max(f, order, memo=memo)
        if best_val is None or val < best_val:
            best, best_val = tuple(order), val
    per_cut = per_cut_counts(f, pi, memo=memo)
    return BoundReport(
        per_cut=per_cut, n_pi=max(per_cut.values(), default=1), order=pi.pi,
        n_f=best_val, best_order=best,
        search_mode="exhaustive" if mode == "exhaustive" else "sampled",
        orders_examined=count, seed=used_seed,
    )


# --- Myhill-Nerode ---------------------------------------------------------------------

def nerode_class_of(w: Sequence[int], k: int) -> int:
    """Class ``z`` whose bits ``(a_0, ..., a_{2k-1})`` (``a_0`` leading) are the XORs
    of the letters at distance ``j`` mod ``2k`` from the end of ``w``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    a = [0] * (2 * k)
    n = len(w)
    for i, b in enumerate(w, start=1):
        a[(n - i) % (2 * k)] ^= b
    z = 0
    for bit in a:
        z = (z << 1) | bit
    return z


def distinguishing_suffix(z1: int, z2: int, k: int) -> tuple:
    """A suffix placing exactly one word of classes ``z1 != z2`` in MODXOR_k."""
    if z1 == z2:
        raise ValueError("classes coincide")
    diff = z1 ^ z2
    j = 2 * k - 1 - (diff.bit_length() - 1)  # some j with a_j differing
    return (0,) * (2 * k - 1 - j)


def _strings(maxlen: int):
    for length in range(maxlen + 1):
        yield from itertools.product((0, 1), repeat=length)


def distinguishable_count(oracle: Callable[[tuple], bool], prefix_maxlen: int, suffix_maxlen: int,
                          budget: int | None = None) -> int:
    """Number of prefix classes (length ``<= prefix_maxlen``) separated by some suffix
    of length ``<= suffix_maxlen``; a lower bound on the minimal DFA size."""
    cap = sweep_budget(budget)
    required = (2 ** (prefix_maxlen + 1) - 1) * (2 ** (suffix_maxlen + 1) - 1)
    if required > cap:
        raise BudgetExceeded(required, cap)
    suffixes = list(_strings(suffix_maxlen))
    signatures = {tuple(bool(oracle(p + s)) for s in suffixes) for p in _strings(prefix_maxlen)}
    return len(signatures)


# --- inequality ledger -----------------------------------------------------------------

@dataclass(frozen=True)
class InequalityCheck:
    """``bound^(1 - eps) <= size``, compared as ``bound^p <= size^q`` with ``1 - eps = p/q``."""
    name: str
    bound: int
    size: int
    eps: Fraction
    source: str = ""

    def __post_init__(self) -> None:
        if self.bound is None or self.size is None:
            raise ValueError(f"{self.name}: inequality needs both a bound and a size")
        if not 0 <= self.eps < 1:
            raise ValueError(f"{self.name}: eps must lie in [0, 1), got {self.eps}")
        if self.bound < 1 or self.size < 0:
            raise ValueError(f"{self.name}: bound must be positive and size nonnegative")

    @property
    def exponents(self) -> tuple[int, int]:
        e = 1 - Fraction(self.eps)
        return e.numerator, e.denominator

    @property
    def lhs(self) -> int:
        return self.bound ** self.exponents[0]

    @property
    def rhs(self) -> int:
        return self.size ** self.exponents[1]

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs

    def to_dict(self) -> dict:
        p, q = self.exponents
        return {"name": self.name, "source": self.source, "bound": self.bound, "size": self.size,
                "eps": f"{Fraction(self.eps).numerator}/{Fraction(self.eps).denominator}",
                "compared": f"{self.bound}^{p} <= {self.size}^{q}",
                "lhs": str(self.lhs), "rhs": str(self.rhs), "passed": self.passed}


@dataclass
class InequalityLedger:
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def table(self) -> str:
        head = ("name", "bound", "size", "eps", "compared", "result")
        body = [(r.name, str(r.bound), str(r.size), str(Fraction(r.eps)),
                 r.to_dict()["compared"], "PASS" if r.passed else "FAIL") for r in self.rows]
        widths = [max(len(x) for x in col) for col in zip(head, *body)]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip()
                         for line in [head, *body])


def check_inequalities(pairs: Iterable[InequalityCheck | tuple]) -> InequalityLedger:
    """Evaluate every pairing; tuples are ``(name, bound, size, eps[, source])``."""
    rows = []
    for item in pairs:
        if not isinstance(item, InequalityCheck):
            name, bound, size, eps, *rest = item
            item = InequalityCheck(name, bound, size, Fraction(eps), *(rest[:1]))
        rows.append(item)
    return InequalityLedger(rows)

