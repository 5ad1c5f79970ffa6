"""Builders for the zero-error affine OBDDs, the Las Vegas OBDDs for shuffled
storage access, and a minimal deterministic OBDD synthesizer.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

import numpy as np

from .functions import SsaParams, shiftx_int, smallest_prime_gt
from .numeric import INV_SQRT2, Matrix, QuadExt
from .obdd import (
    AffineObdd,
    DeterministicObdd,
    ModelError,
    ProbabilisticObdd,
    UnitaryObdd,
    VariableOrder,
)
from .truthtable import TruthTable

MINIMAL_OBDD_CAP = 20

ACCEPT, REJECT, DONTKNOW = 1, 0, 2


# --- affine building blocks ----------------------------------------------------

def _identity_rows(m: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]


def hwb_write_matrix(m2: int, i: int) -> Matrix:
    """Level-``i`` update on reading a 1: ``e_0 <- -(x_1 + ... + x_{i-1})``, ``e_i <- 1``."""
    rows = _identity_rows(m2)
    rows[0] = [Fraction(0)] + [Fraction(-1)] * (i - 1) + [Fraction(0)] * (m2 - i)
    rows[i] = [Fraction(1)] * (i + 1) + [Fraction(0)] * (m2 - i - 1)
    return Matrix.from_rows(rows)


def select_matrix(m2: int, z: int) -> Matrix:
    """Move entry ``z`` into ``e_0`` and everything else into ``e_1``."""
    rows = [[Fraction(0)] * m2 for _ in range(m2)]
    for j in range(m2):
        rows[0 if j == z else 1][j] = Fraction(1)
    return Matrix.from_rows(rows)


def collapse_matrix(m2: int, target: int) -> Matrix:
    return Matrix(m2, m2, [[(target, 1)] for _ in range(m2)])


def set_signed_unit(m2: int, i: int, sign: int) -> Matrix:
    """Write ``sign`` into the (zero) entry ``i``, paying for it from ``e_0``."""
    rows = _identity_rows(m2)
    rows[i] = [Fraction(sign)] * m2
    rows[0] = [rows[0][j] - sign for j in range(m2)]
    rows[0][i] += 1
    return Matrix.from_rows(rows)


def negate_entry(m2: int, i: int) -> Matrix:
    """``e_i <- -e_i``, compensated in ``e_0``."""
    rows = _identity_rows(m2)
    rows[i][i] = Fraction(-1)
    rows[0][i] = Fraction(2)
    return Matrix.from_rows(rows)


def flip_entry(m2: int, i: int, comp: int) -> Matrix:
    """``e_i <- 1 - e_i`` on affine states, compensated in entry ``comp``."""
    rows = _identity_rows(m2)
    rows[i] = [Fraction(1)] * m2
    rows[i][i] = Fraction(0)
    rows[comp] = [rows[comp][j] - 1 for j in range(m2)]
    rows[comp][i] += 2
    return Matrix.from_rows(rows)


def _mapping_matrix(m: int, target: Sequence[int], one=Fraction(1)) -> Matrix:
    return Matrix.from_mapping(m, target, one)


# --- hidden weighted bit ---------------------------------------------------------

def build_hwb_afobdd(n: int) -> AffineObdd:
    """Zero-error id-AfOBDD for HWB_n with ``n`` classical and ``n + 1`` affine states.

    Classical ``s_t`` counts the ones among ``x_1..x_{n-1}``; the affine state after
    step ``i - 1`` is ``(1 - sum, x_1, ..., x_{i-1}, 0, ..., 0)``.
    """
    if n < 2:
        raise ValueError(f"HWB construction needs n >= 2, got {n}")
    m1, m2 = n, n + 1
    ident = Matrix.identity(m2)
    delta, trans = [], []
    for i in range(1, n):
        write = hwb_write_matrix(m2, i)
        delta.append(tuple((t, min(t + 1, m1 - 1)) for t in range(m1)))
        trans.append(tuple((ident, write) for _ in range(m1)))
    to_one = collapse_matrix(m2, 1)
    to_zero = collapse_matrix(m2, 0)
    last = []
    for t in range(m1):
        pair = []
        for xn in (0, 1):
            if t == n - 1:
                pair.append(to_zero)
            elif t == 0 and xn == 0:
                pair.append(to_one)
            else:
                pair.append(select_matrix(m2, t + xn))
        last.append(tuple(pair))
    delta.append(tuple((0, 0) for _ in range(m1)))
    trans.append(tuple(last))
    return AffineObdd(
        n=n, classical_count=m1, affine_count=m2,
        initial_classical=0, classical_accepting={0},
        initial=[1] + [0] * n, affine_accepting={0},
        order=VariableOrder.identity(n), delta=tuple(delta), transitions=tuple(trans),
        classical_labels=tuple(f"s{t}" for t in range(m1)),
        metadata={"builder": "hwb", "params": {"n": n}},
    )


# --- weighted sums ---------------------------------------------------------------

def build_ws_afobdd(n: int) -> AffineObdd:
    """Zero-error id-AfOBDD for WS_n with ``p(n)`` classical and ``n + 1`` affine states."""
    if n < 2:
        raise ValueError(f"WS construction needs n >= 2, got {n}")
    p = smallest_prime_gt(n)
    m2 = n + 1
    ident = Matrix.identity(m2)
    delta, trans = [], []
    for i in range(1, n):
        write = hwb_write_matrix(m2, i)
        delta.append(tuple((j, (j + i) % p) for j in range(p)))
        trans.append(tuple((ident, write) for _ in range(p)))
    to_one = collapse_matrix(m2, 1)
    to_zero = collapse_matrix(m2, 0)
    last = []
    for t in range(p):
        pair = []
        for xn in (0, 1):
            s = (t + n * xn) % p
            if not 1 <= s <= n:
                pair.append(to_one)
            elif s == n:
                pair.append(to_zero if xn else to_one)
            else:
                pair.append(select_matrix(m2, s))
        last.append(tuple(pair))
    delta.append(tuple((0, 0) for _ in range(p)))
    trans.append(tuple(last))
    return AffineObdd(
        n=n, classical_count=p, affine_count=m2,
        initial_classical=0, classical_accepting={0},
        initial=[1] + [0] * n, affine_accepting={0},
        order=VariableOrder.identity(n), delta=tuple(delta), transitions=tuple(trans),
        classical_labels=tuple(f"s{j}" for j in range(p)),
        metadata={"builder": "ws", "params": {"n": n}},
    )


def mws_select_matrix(m2: int, i: int) -> Matrix:
    """``(-e_i, 1 + e_i, 0, ...)``: ``(1, 0)`` when ``x_i != y_i``, ``(-1, 2)`` otherwise."""
    rows = [[Fraction(0)] * m2 for _ in range(m2)]
    rows[0][i] = Fraction(-1)
    rows[1] = [Fraction(1)] * m2
    rows[1][i] = Fraction(2)
    return Matrix.from_rows(rows)


def half_fold_matrix(m2: int) -> Matrix:
    """Add half of the second entry to the first."""
    rows = _identity_rows(m2)
    rows[0][1] = Fraction(1, 2)
    rows[1][1] = Fraction(1, 2)
    return Matrix.from_rows(rows)


def build_mws_afobdd(n: int) -> AffineObdd:
    """Zero-error id-AfOBDD for MWS_n on ``x_1..x_n y_1..y_n``.

    Classical states ``s_{i,j}`` (index ``i * p + j``) track ``s_n(x)`` and ``s_n(y)``;
    the affine part stores ``(-1)^{x_j}`` and then multiplies in ``(-1)^{y_j}``.
    """
    if n < 2:
        raise ValueError(f"MWS construction needs n >= 2, got {n}")
    p = smallest_prime_gt(n)
    m1, m2 = p * p, n + 1
    ident = Matrix.identity(m2)
    delta, trans = [], []

    def idx(i: int, j: int) -> int:
        return i * p + j

    for l in range(1, n + 1):
        plus, minus = set_signed_unit(m2, l, 1), set_signed_unit(m2, l, -1)
        delta.append(tuple((idx(i, j), idx((i + l) % p, j)) for i in range(p) for j in range(p)))
        trans.append(tuple((plus, minus) for _ in range(m1)))
    fold = half_fold_matrix(m2)
    for l in range(1, n + 1):
        neg = negate_entry(m2, l)
        delta.append(tuple((idx(i, j), idx(i, (j + l) % p)) for i in range(p) for j in range(p)))
        if l < n:
            trans.append(tuple((ident, neg) for _ in range(m1)))
            continue
        last = []
        for i in range(p):
            for j in range(p):
                pair = []
                for y in (0, 1):
                    step = neg if y else ident
                    jj = (j + n * y) % p
                    if i == jj and 1 <= i <= n:
                        step = fold @ (mws_select_matrix(m2, i) @ step)
                    pair.append(step)
                last.append(tuple(pair))
        trans.append(tuple(last))
    accepting = {idx(i, i) for i in range(1, n + 1)}
    return AffineObdd(
        n=2 * n, classical_count=m1, affine_count=m2,
        initial_classical=idx(0, 0), classical_accepting=accepting,
        initial=[1] + [0] * n, affine_accepting={0},
        order=VariableOrder.identity(2 * n), delta=tuple(delta), transitions=tuple(trans),
        classical_labels=tuple(f"s{i},{j}" for i in range(p) for j in range(p)),
        metadata={"builder": "mws", "params": {"n": n}},
    )


# --- shuffled storage access -------------------------------------------------------

def ssa_state_index(d: int, s: int, t: int, e: int, a: int, b: int) -> int:
    return (((s * 2 + t) * 2 + e) * 2 ** d + a) * 2 + b


def ssa_states(d: int):
    half = 2 ** d // 2
    return itertools.product(range(2 ** half), (0, 1), (0, 1), range(2 ** d), (0, 1))


def _ssa_decision(d: int, s: int, t: int, a: int, b: int) -> int:
    """Final verdict of one path.

    The path holding ``t`` keeps the storage half at odd positions (``t = 1``) or
    even positions (``t = 0``); it answers when the 1-based index ``a + 1`` lies
    in that half.
    """
    half = 2 ** d // 2
    if b or (a + 1) % 2 != t:
        return DONTKNOW
    pos = a // 2 + 1
    return (s >> (half - pos)) & 1


def build_ssa_lv_pobdd(d: int) -> ProbabilisticObdd:
    """Las Vegas id-POBDD for SSA_n with success probability 1/2.

    States are ``(s, t, e, a, b)`` flattened lexicographically: ``s`` is one half of
    the storage register, ``t`` marks whether the next storage bit is kept, ``e``
    names the path, ``a`` is the address register and ``b`` the pending odd bit.
    """
    params = SsaParams(d)
    n, half = params.n, 2 ** d // 2
    width = 2 ** half * 2 * 2 * 2 ** d * 2
    index = lambda *st: ssa_state_index(d, *st)
    odd, even = [], []
    for x in (0, 1):
        odd.append(_mapping_matrix(width, [index(s, t, e, a, x) for s, t, e, a, b in ssa_states(d)]))
        tgt = []
        for s, t, e, a, b in ssa_states(d):
            if b:
                tgt.append(index(s, t, e, shiftx_int(a, x, d), 0))
            elif t:
                tgt.append(index(shiftx_int(s, x, half), 0, e, a, 0))
            else:
                tgt.append(index(s, 1, e, a, 0))
        even.append(_mapping_matrix(width, tgt))
    levels = tuple((odd[0], odd[1]) if j % 2 == 1 else (even[0], even[1]) for j in range(1, n + 1))
    initial = [Fraction(0)] * width
    initial[index(0, 0, 0, 0, 0)] = Fraction(1, 2)
    initial[index(0, 1, 1, 0, 0)] = Fraction(1, 2)
    accepting, neutral = set(), set()
    for s, t, e, a, b in ssa_states(d):
        verdict = _ssa_decision(d, s, t, a, b)
        if verdict == ACCEPT:
            accepting.add(index(s, t, e, a, b))
        elif verdict == DONTKNOW:
            neutral.add(index(s, t, e, a, b))
    return ProbabilisticObdd(
        n=n, width=width, initial=initial, accepting=accepting, neutral=neutral,
        order=VariableOrder.identity(n), levels=levels,
        labels=tuple(f"({s},{t},{e},{a},{b})" for s, t, e, a, b in ssa_states(d)),
        metadata={"builder": "ssa-lv-pobdd", "params": {"d": d},
                  "encoding": "state (s,t,e,a,b) at index (((s*2+t)*2+e)*2^d+a)*2+b"},
    )


def path_tables(model: ProbabilisticObdd) -> list[np.ndarray]:
    """Verdict table of every deterministic path of ``model``.

    One table per state in the support of the initial distribution, shaped
    ``(2,) * n`` with ``x_i`` on axis ``i - 1``; entries are 1 (accept),
    0 (reject) or 2 (don't know).
    """
    starts = [i for i, v in enumerate(model.initial) if v != 0]
    succ = []
    for j in range(model.n):
        pair = []
        for b in (0, 1):
            cols = model.levels[j][b].columns
            if any(len(c) != 1 for c in cols):
                raise ModelError("paths are only defined for 0/1 transition matrices")
            pair.append([c[0][0] for c in cols])
        succ.append(pair)
    tables = []
    for start in starts:
        tab = np.zeros((2,) * model.n, dtype=np.int8)
        for x in itertools.product((0, 1), repeat=model.n):
            s = start
            for j, var in enumerate(model.order.pi):
                s = succ[j][x[var - 1]][s]
            if s in model.accepting:
                tab[x] = ACCEPT
            elif s in model.neutral:
                tab[x] = DONTKNOW
            else:
                tab[x] = REJECT
        tables.append(tab)
    return tables


def _reversible_layers(tables: Sequence[np.ndarray], order: Sequence[int]):
    """Narrowest permutation program simulating each deterministic path in ``order``.

    A permutation matrix cannot merge two states reached on the same bit, so a
    state at level ``l + 1`` takes at most one predecessor per bit.  States with the
    same residual function are interchangeable, which makes greedy pairing within
    each residual class optimal.
    """
    axes = [v - 1 for v in order]
    states = [(p, np.transpose(t, axes)) for p, t in enumerate(tables)]
    sizes = [len(states)]
    maps = []
    for _ in range(len(order)):
        groups: dict = {}
        for idx, (p, res) in enumerate(states):
            for b in (0, 1):
                sub = res[b]
                g = groups.setdefault((p, sub.tobytes()), ([], [], sub))
                g[b].append(idx)
        new_states, m0, m1 = [], {}, {}
        for (p, _), (l0, l1, sub) in groups.items():
            for k in range(max(len(l0), len(l1))):
                if k < len(l0):
                    m0[l0[k]] = len(new_states)
                if k < len(l1):
                    m1[l1[k]] = len(new_states)
                new_states.append((p, sub))
        maps.append((m0, m1))
        states = new_states
        sizes.append(len(states))
    return sizes, maps, states


def reversible_width(tables: Sequence[np.ndarray], order: Sequence[int]) -> int:
    return max(_reversible_layers(tables, order)[0])


def _complete_permutation(partial: dict[int, int], width: int) -> list[int]:
    used = set(partial.values())
    free = iter(sorted(set(range(width)) - used))
    return [partial[j] if j in partial else next(free) for j in range(width)]


def embed_paths_unitary(tables: Sequence[np.ndarray], order: Sequence[int],
                        metadata: dict | None = None) -> UnitaryObdd:
    """UOBDD running every deterministic path in superposition with equal amplitude.

    Only two paths are supported so that amplitudes stay in ``{0, 1/sqrt 2}``.
    """
    if len(tables) != 2:
        raise ValueError("the unitary embedding splits into exactly two paths")
    order = VariableOrder(tuple(order))
    sizes, maps, final = _reversible_layers(tables, order.pi)
    width = max(sizes)
    one = QuadExt(1)
    levels = []
    cache: dict[tuple, Matrix] = {}
    for m0, m1 in maps:
        pair = []
        for part in (m0, m1):
            perm = tuple(_complete_permutation(part, width))
            if perm not in cache:
                cache[perm] = Matrix.from_mapping(width, perm, one)
            pair.append(cache[perm])
        levels.append(tuple(pair))
    initial = [QuadExt(0)] * width
    initial[0] = INV_SQRT2
    initial[1] = INV_SQRT2
    accepting = {i for i, (_, res) in enumerate(final) if int(res) == ACCEPT}
    neutral = {i for i, (_, res) in enumerate(final) if int(res) == DONTKNOW}
    return UnitaryObdd(
        n=len(order), width=width, initial=initial, accepting=accepting, neutral=neutral,
        order=order, levels=tuple(levels),
        labels=tuple(f"path{p}:{k}" for k, (p, _) in enumerate(final)) + ("unused",) * (width - len(final)),
        metadata=dict(metadata or {}, level_sizes=sizes),
    )


# Narrowest orders known for the permutation embedding: exhaustive over all 720
# orders for d = 1 (width 32), best of a local search for d = 2 (width 316).
SSA_UOBDD_ORDERS = {
    1: (2, 4, 5, 6, 3, 1),
    2: (1, 4, 6, 10, 8, 2, 3, 5, 7, 9, 12, 11),
}


def build_ssa_lv_uobdd(d: int, order: Sequence[int] | None = None) -> UnitaryObdd:
    """Las Vegas UOBDD for SSA_n obtained from the two paths of the LV-POBDD.

    The two deterministic paths are started with amplitude ``1/sqrt 2`` each and
    compiled into permutation matrices; the pending bits that the stochastic
    version overwrites are kept, which is what the width pays for.  Without an
    explicit ``order`` the narrowest known one is used (identity beyond d = 2).
    """
    pobdd = build_ssa_lv_pobdd(d)
    if order is None:
        order = SSA_UOBDD_ORDERS.get(d, tuple(range(1, pobdd.n + 1)))
    return embed_paths_unitary(
        path_tables(pobdd), order,
        metadata={"builder": "ssa-lv-uobdd", "params": {"d": d, "order": list(order)}},
    )


def narrowest_order(tables: Sequence[np.ndarray], limit: int = 8) -> tuple[tuple[int, ...], int]:
    """Exhaustive search for the order minimizing the reversible width (n <= limit)."""
    n = tables[0].ndim
    if n > limit:
        raise ValueError(f"exhaustive order search over {n} variables exceeds limit {limit}")
    best = None
    for pi in itertools.permutations(range(1, n + 1)):
        w = reversible_width(tables, pi)
        if best is None or w < best[1]:
            best = (pi, w)
    return best


def build_ssa_afobdd(d: int) -> AffineObdd:
    """Zero-error AfOBDD for SSA_n with ``2^(d+1)`` classical and ``2^d + 1`` affine states.

    Classical ``(p, i)`` sits at index ``p * 2^d + i``: ``p`` says whether the next
    even bit is storage (0) or address (1), ``i`` is the address so far.  Affine
    entries ``0..2^d - 1`` hold the storage, the last entry keeps the sum at 1.
    """
    params = SsaParams(d)
    n, size = params.n, 2 ** d
    m1, m2 = 2 * size, size + 1
    ident = Matrix.identity(m2)
    shift = _mapping_matrix(m2, [size - 1] + list(range(size - 1)) + [size])
    store = (shift, flip_entry(m2, size - 1, size) @ shift)

    def cidx(p: int, i: int) -> int:
        return p * size + i

    delta, trans = [], []
    for j in range(1, n + 1):
        if j % 2:
            delta.append(tuple((cidx(0, i), cidx(1, i)) for p in (0, 1) for i in range(size)))
            trans.append(tuple((ident, ident) for _ in range(m1)))
            continue
        dl, tl = [], []
        for p in (0, 1):
            for i in range(size):
                if p == 0:
                    dl.append((cidx(0, i), cidx(0, i)))
                    pair = store
                    if j == n:
                        pair = tuple(select_matrix(m2, i) @ m for m in store)
                else:
                    nxt = (shiftx_int(i, 0, d), shiftx_int(i, 1, d))
                    dl.append((cidx(1, nxt[0]), cidx(1, nxt[1])))
                    pair = (ident, ident)
                    if j == n:
                        pair = (select_matrix(m2, nxt[0]), select_matrix(m2, nxt[1]))
                tl.append(tuple(pair))
        delta.append(tuple(dl))
        trans.append(tuple(tl))
    return AffineObdd(
        n=n, classical_count=m1, affine_count=m2,
        initial_classical=cidx(0, 0), classical_accepting=set(range(m1)),
        initial=[0] * size + [1], affine_accepting={0},
        order=VariableOrder.identity(n), delta=tuple(delta), transitions=tuple(trans),
        classical_labels=tuple(f"(p{p},s{i})" for p in (0, 1) for i in range(size)),
        metadata={"builder": "ssa-afobdd", "params": {"d": d},
                  "encoding": "classical (p,i) at index p*2^d+i"},
    )


# --- minimal deterministic OBDD ------------------------------------------------------

def subfunction_layers(f: TruthTable, pi: Sequence[int]) -> list[tuple[np.ndarray, np.ndarray]]:
    """For each level ``u = 0..n``: (distinct subfunction rows, node id of every assignment).

    Node ids are numbered by first occurrence along the assignment order.
    """
    cube = f.in_order(pi)
    out = []
    for u in range(f.n + 1):
        rows = cube.reshape(2 ** u, 2 ** (f.n - u))
        uniq, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        out.append((uniq[np.argsort(first, kind="stable")], rank[inverse.reshape(-1)]))
    return out


def build_minimal_obdd(f: TruthTable, pi: Sequence[int] | VariableOrder | None = None,
                       cap: int = MINIMAL_OBDD_CAP) -> DeterministicObdd:
    """One node per distinct subfunction after fixing the first ``u`` variables of ``pi``."""
    if f.n > cap:
        raise ValueError(f"minimal OBDD synthesis over {f.n} variables exceeds cap {cap}")
    if pi is None:
        pi = VariableOrder.identity(f.n)
    order = pi if isinstance(pi, VariableOrder) else VariableOrder(tuple(pi))
    layers = subfunction_layers(f, order.pi)
    width = max(len(rows) for rows, _ in layers)
    levels = []
    for u in range(f.n):
        _, ids = layers[u]
        _, child = layers[u + 1]
        pair = []
        for b in (0, 1):
            target = [0] * width
            for assignment, node in enumerate(ids):
                target[node] = int(child[2 * assignment + b])
            pair.append(_mapping_matrix(width, target))
        levels.append(tuple(pair))
    sinks, _ = layers[f.n]
    accepting = {k for k, row in enumerate(sinks) if row[0] == 1}
    initial = [1] + [0] * (width - 1)
    return DeterministicObdd(
        n=f.n, width=width, initial=initial, accepting=accepting,
        order=order, levels=tuple(levels),
        metadata={"builder": "minimal-obdd",
                  "params": {"order": list(order.pi), "table": f.to_string()},
                  "level_sizes": [len(rows) for rows, _ in layers]},
    )
