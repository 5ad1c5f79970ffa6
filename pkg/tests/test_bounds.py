import itertools
from fractions import Fraction

import pytest

from obddlab.bounds import (
    Cut,
    InequalityCheck,
    check_inequalities,
    distinguishable_count,
    distinguishing_suffix,
    n_of,
    nerode_class_of,
    subfunction_count,
    subfunction_max,
)
from obddlab.constructions import build_minimal_obdd
from obddlab.functions import bits, end_member, majority, modxor_member, parity, ssa
from obddlab.obdd import VariableOrder, width
from obddlab.truthtable import TruthTable

# regression baselines computed by the tool itself (exhaustive enumeration)
SSA6_ID_CUT3 = 6
SSA6_N = 6


def ssa6():
    return TruthTable.from_function(lambda x: ssa(x, 1), 6)


def test_cut_range():
    Cut(VariableOrder.identity(4), 2)
    for u in (0, 1, 4):
        with pytest.raises(ValueError):
            Cut(VariableOrder.identity(4), u)


def test_subfunction_count_examples():
    par3 = TruthTable.from_function(parity, 3)
    for pi in itertools.permutations((1, 2, 3)):
        assert subfunction_count(par3, Cut(VariableOrder(pi), 2)) == 2
    const = TruthTable.from_function(lambda x: 1, 4)
    assert subfunction_count(const, Cut(VariableOrder.identity(4), 2)) == 1
    assert subfunction_count(ssa6(), Cut(VariableOrder.identity(6), 3)) == SSA6_ID_CUT3


def test_subfunction_count_brute_force():
    """Cross-check against a direct enumeration of restrictions."""
    f = ssa6()
    pi = (3, 1, 6, 2, 5, 4)
    for u in range(2, 6):
        left, right = pi[:u], pi[u:]
        subs = set()
        for a in itertools.product((0, 1), repeat=u):
            row = []
            for b in itertools.product((0, 1), repeat=6 - u):
                x = [0] * 6
                for v, bit in zip(left, a):
                    x[v - 1] = bit
                for v, bit in zip(right, b):
                    x[v - 1] = bit
                row.append(f(x))
            subs.add(tuple(row))
        assert subfunction_count(f, Cut(VariableOrder(pi), u)) == len(subs)


def test_n_of():
    xor = TruthTable.from_function(lambda x: x[0] ^ x[1], 2)
    assert n_of(xor).n_f == 2
    assert n_of(TruthTable.from_function(lambda x: 0, 3)).n_f == 1
    rep = n_of(ssa6())
    assert rep.orders_examined == 720 and rep.is_lower_bound
    assert rep.n_f >= 4
    assert rep.n_f == SSA6_N
    with pytest.raises(ValueError):
        n_of(TruthTable.from_function(parity, 9))


def test_sampled_mode_is_labelled_upper_bound():
    f = TruthTable.from_function(lambda x: ssa(x, 1), 6)
    a = n_of(f, mode="sample", samples=30, seed=7)
    b = n_of(f, mode="sample", samples=30, seed=7)
    assert a == b
    assert not a.is_lower_bound and a.to_dict()["n_f_kind"] == "upper bound"
    assert a.n_f >= SSA6_N


@pytest.mark.parametrize("fn", [parity, majority])
def test_symmetric_functions_order_invariant(fn):
    for n in range(3, 7):
        f = TruthTable.from_function(fn, n)
        vals = {subfunction_max(f, pi) for pi in itertools.permutations(range(1, n + 1))}
        assert len(vals) == 1


def test_minimal_width_equals_subfunction_max_all_small_functions():
    for n in (1, 2, 3):
        for code in range(2 ** 2 ** n):
            f = TruthTable.from_int(code, n)
            for pi in itertools.permutations(range(1, n + 1)):
                assert width(build_minimal_obdd(f, pi)) == subfunction_max(f, pi)


def test_nerode_examples():
    assert nerode_class_of(bits("10"), 1) == 0b01
    assert nerode_class_of(bits(""), 1) == 0
    assert nerode_class_of(bits("11"), 1) == 0b11


def test_nerode_suffixes_separate_classes():
    for k in (1, 2):
        reps = {}
        for w in itertools.chain.from_iterable(itertools.product((0, 1), repeat=L) for L in range(2 * k + 1)):
            reps.setdefault(nerode_class_of(w, k), w)
        assert len(reps) == 2 ** (2 * k)
        for (z1, w1), (z2, w2) in itertools.combinations(reps.items(), 2):
            v = distinguishing_suffix(z1, z2, k)
            assert len(v) <= 2 * k
            assert modxor_member(w1 + v, k) != modxor_member(w2 + v, k)


def test_distinguishable_count():
    assert distinguishable_count(lambda w: modxor_member(w, 1), 6, 6) >= 4
    assert distinguishable_count(lambda w: modxor_member(w, 2), 6, 6) >= 16
    assert distinguishable_count(lambda w: end_member(w, 2), 6, 6) >= 4
    assert distinguishable_count(lambda w: False, 6, 6) == 1


def test_inequalities():
    led = check_inequalities([("ssa", SSA6_N, 32, Fraction(1, 2)), ("modxor", 16, 8, Fraction(1, 2)),
                              ("broken", 16, 1, Fraction(1, 2))])
    assert [r.passed for r in led.rows] == [True, True, False]
    assert not led.passed
    r = led.rows[1]
    assert (r.lhs, r.rhs) == (16, 64)
    assert InequalityCheck("exact", 7, 7, Fraction(0)).passed
    assert not InequalityCheck("exact", 8, 7, Fraction(0)).passed
    # 2^(2/3) <= 2 but 9^(2/3) > 4
    assert InequalityCheck("a", 2, 2, Fraction(1, 3)).passed
    assert not InequalityCheck("b", 9, 4, Fraction(1, 3)).passed
    with pytest.raises(ValueError):
        InequalityCheck("missing", None, 4, Fraction(1, 2))
