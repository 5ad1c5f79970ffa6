"""Reference oracles for the Boolean functions and languages under study.

Bit strings are tuples of 0/1 ints.  Mathematical indices are 1-based, so
``x_i`` is ``x[i - 1]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

BitString = tuple


def bits(s: str | Sequence[int]) -> BitString:
    """Parse ``"0110"`` (or any 0/1 sequence) into a bit tuple."""
    if isinstance(s, str):
        if any(c not in "01" for c in s):
            raise ValueError(f"not a binary string: {s!r}")
        return tuple(int(c) for c in s)
    out = tuple(int(b) for b in s)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"not a bit sequence: {s!r}")
    return out


def bits_to_str(x: Sequence[int]) -> str:
    return "".join(str(b) for b in x)


def to_int(x: Sequence[int]) -> int:
    """Most-significant-bit-first decoding."""
    v = 0
    for b in x:
        v = (v << 1) | b
    return v


def from_int(v: int, width: int) -> BitString:
    return tuple((v >> (width - 1 - i)) & 1 for i in range(width))


def hwb(x: Sequence[int]) -> int:
    """Hidden weighted bit: ``x_z`` for ``z = x_1 + ... + x_n``, with ``x_0 = 0``."""
    z = sum(x)
    return 0 if z == 0 else x[z - 1]


@lru_cache(maxsize=None)
def smallest_prime_gt(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    p = n + 1
    while not _is_prime(p):
        p += 1
    return p


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def weighted_sum(x: Sequence[int]) -> int:
    n = len(x)
    p = smallest_prime_gt(max(n, 1))
    return sum(i * b for i, b in enumerate(x, start=1)) % p


def ws(x: Sequence[int]) -> int:
    s = weighted_sum(x)
    return x[s - 1] if 1 <= s <= len(x) else 0


def mws(x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise ValueError(f"MWS needs |x| = |y|, got {len(x)} and {len(y)}")
    i, j = weighted_sum(x), weighted_sum(y)
    if i != j or not 1 <= i <= len(x):
        return 0
    return x[i - 1] ^ y[i - 1]


def mws_joined(xy: Sequence[int]) -> int:
    """MWS on the concatenated input ``x y`` of even length."""
    if len(xy) % 2:
        raise ValueError("MWS input must have even length")
    h = len(xy) // 2
    return mws(xy[:h], xy[h:])


def shiftx(a: Sequence[int], b: int) -> BitString:
    """``(a_1, ..., a_m), b -> (a_2, ..., a_m, a_1 xor b)``."""
    if len(a) == 0:
        raise ValueError("shiftx needs a nonempty register")
    return tuple(a[1:]) + (a[0] ^ b,)


def shiftx_int(v: int, b: int, width: int) -> int:
    """``shiftx`` on the MSB-first ``width``-bit encoding of ``v``."""
    msb = (v >> (width - 1)) & 1
    return ((v << 1) & ((1 << width) - 1)) | (msb ^ b)


@dataclass(frozen=True)
class SsaParams:
    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"SSA needs d >= 1, got {self.d}")

    @property
    def n(self) -> int:
        return 2 * (2 ** self.d + self.d)

    @property
    def storage_len(self) -> int:
        return 2 ** self.d

    @classmethod
    def from_n(cls, n: int) -> SsaParams:
        d = 1
        while 2 * (2 ** d + d) < n:
            d += 1
        if 2 * (2 ** d + d) != n:
            raise ValueError(f"no d with 2^d + d = n/2 for n = {n}")
        return cls(d)


@dataclass(frozen=True)
class StreamSplit:
    i0: tuple[int, ...]
    i1: tuple[int, ...]


def ssa_streams(x: Sequence[int], p: SsaParams | int) -> tuple[StreamSplit, BitString, BitString]:
    """Route even positions into the storage (``I_0``) or address (``I_1``) stream
    and fold ``shiftx`` over each stream in index order."""
    if isinstance(p, int):
        p = SsaParams(p)
    if len(x) != p.n:
        raise ValueError(f"SSA with d={p.d} needs n={p.n} bits, got {len(x)}")
    i0, i1 = [], []
    alpha: BitString = (0,) * p.storage_len
    beta: BitString = (0,) * p.d
    for i in range(1, p.n // 2 + 1):
        if x[2 * i - 2] == 0:
            i0.append(2 * i)
            alpha = shiftx(alpha, x[2 * i - 1])
        else:
            i1.append(2 * i)
            beta = shiftx(beta, x[2 * i - 1])
    return StreamSplit(tuple(i0), tuple(i1)), alpha, beta


def sa(storage: Sequence[int], address: Sequence[int]) -> int:
    """Storage access with the address decoded MSB-first into a 1-based index."""
    if len(storage) != 2 ** len(address):
        raise ValueError(f"storage of length {len(storage)} needs a "
                         f"{len(storage).bit_length() - 1}-bit address, got {len(address)}")
    return storage[to_int(address)]


def ssa(x: Sequence[int], p: SsaParams | int) -> int:
    _, alpha, beta = ssa_streams(x, p)
    return sa(alpha, beta)


def modxor_member(w: Sequence[int], k: int) -> bool:
    """XOR of the bits sitting ``2k - 1`` places before a multiple-of-``2k`` suffix."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(w)
    if n < 2 * k:
        return False
    acc = 0
    for i in range(1, n + 1):
        if (n - i) % (2 * k) == 2 * k - 1:
            acc ^= w[i - 1]
    return acc == 1


def end_member(w: Sequence[int], k: int) -> bool:
    if k < 1:
        raise ValueError("k must be >= 1")
    return len(w) >= k and w[-k] == 1


def parity(x: Sequence[int]) -> int:
    return sum(x) & 1


def majority(x: Sequence[int]) -> int:
    return int(2 * sum(x) > len(x))
