"""Dense truth tables.

Entry ``index`` holds ``f(x)`` where ``index = sum x_i 2^(n-i)``, i.e. ``x_1`` is
the most significant bit.  Reshaping to ``(2,) * n`` therefore puts ``x_i`` on
axis ``i - 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

MAX_TABLE_VARS = 24


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=np.uint8).reshape(-1)
        if t.size != 2 ** self.n:
            raise ValueError(f"truth table for n={self.n} needs {2 ** self.n} entries, got {t.size}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @classmethod
    def from_function(cls, f: Callable[[tuple], int], n: int) -> TruthTable:
        if n > MAX_TABLE_VARS:
            raise ValueError(f"refusing to tabulate {n} variables (cap {MAX_TABLE_VARS})")
        vals = [int(bool(f(x))) for x in itertools.product((0, 1), repeat=n)]
        return cls(n, np.array(vals, dtype=np.uint8))

    @classmethod
    def from_int(cls, code: int, n: int) -> TruthTable:
        """Function number ``code``: bit ``index`` of ``code`` is ``f`` at ``index``."""
        return cls(n, np.array([(code >> i) & 1 for i in range(2 ** n)], dtype=np.uint8))

    @classmethod
    def from_string(cls, s: str) -> TruthTable:
        s = "".join(s.split())
        n = len(s).bit_length() - 1
        if 2 ** n != len(s) or any(c not in "01" for c in s):
            raise ValueError("a truth table is a 0/1 string of length 2^n")
        return cls(n, np.array([int(c) for c in s], dtype=np.uint8))

    def __call__(self, x: Sequence[int]) -> int:
        idx = 0
        for b in x:
            idx = (idx << 1) | b
        return int(self.table[idx])

    def to_string(self) -> str:
        return "".join(str(int(b)) for b in self.table)

    def cube(self) -> np.ndarray:
        return self.table.reshape((2,) * self.n) if self.n else self.table.reshape(())

    def in_order(self, pi: Sequence[int]) -> np.ndarray:
        """Cube whose axis ``k`` is the variable read at step ``k + 1`` of ``pi``."""
        if sorted(pi) != list(range(1, self.n + 1)):
            raise ValueError(f"{tuple(pi)} is not an order on {self.n} variables")
        return np.transpose(self.cube(), [v - 1 for v in pi])

    def __eq__(self, other) -> bool:
        return isinstance(other, TruthTable) and self.n == other.n and bool(
            np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))
