"""Oracle values here are worked out by hand from the definitions."""
import pytest

from obddlab.functions import (
    SsaParams,
    bits,
    end_member,
    from_int,
    hwb,
    majority,
    mws,
    mws_joined,
    parity,
    sa,
    shiftx,
    shiftx_int,
    smallest_prime_gt,
    ssa,
    ssa_streams,
    to_int,
    weighted_sum,
    ws,
)


def test_bits_roundtrip():
    assert bits("0110") == (0, 1, 1, 0)
    assert to_int(bits("110")) == 6
    assert from_int(6, 4) == (0, 1, 1, 0)
    with pytest.raises(ValueError):
        bits("012")


@pytest.mark.parametrize("x, want", [("0000", 0), ("0110", 1), ("1000", 1), ("0001", 0), ("1111", 1),
                                     ("1100", 1), ("0011", 0)])
def test_hwb(x, want):
    assert hwb(bits(x)) == want


def test_primes():
    assert [smallest_prime_gt(n) for n in (1, 2, 4, 5, 10, 12)] == [2, 3, 5, 7, 11, 13]


@pytest.mark.parametrize("x, s, want", [("1000", 1, 1), ("0001", 4, 1), ("0011", 2, 0),
                                        ("1111", 0, 0), ("0000", 0, 0), ("0100", 2, 1)])
def test_ws(x, s, want):
    assert weighted_sum(bits(x)) == s
    assert ws(bits(x)) == want


def test_mws():
    assert mws(bits("10"), bits("10")) == 0
    assert mws(bits("001"), bits("110")) == 1  # s = 3 on both sides, x_3 xor y_3 = 1
    assert mws(bits("001"), bits("001")) == 0
    assert mws(bits("100"), bits("010")) == 0
    assert mws_joined(bits("001110")) == 1
    with pytest.raises(ValueError):
        mws(bits("1"), bits("10"))


def test_shiftx():
    assert shiftx((1, 0, 0), 0) == (0, 0, 1)
    assert shiftx((1, 0, 0), 1) == (0, 0, 0)
    for width in (1, 2, 3):
        for v in range(2 ** width):
            for b in (0, 1):
                assert shiftx_int(v, b, width) == to_int(shiftx(from_int(v, width), b))
    with pytest.raises(ValueError):
        shiftx((), 1)


def test_ssa_params():
    assert SsaParams(1).n == 6 and SsaParams(2).n == 12 and SsaParams(3).n == 22
    assert SsaParams.from_n(12).d == 2
    with pytest.raises(ValueError):
        SsaParams.from_n(10)
    with pytest.raises(ValueError):
        SsaParams(0)


def test_storage_access_is_one_based_msb_first():
    assert sa((1, 0), (0,)) == 1
    assert sa((1, 0), (1,)) == 0
    assert sa((0, 0, 1, 0), (1, 0)) == 1


@pytest.mark.parametrize("x, want", [
    ("011100", 0),  # alpha: 00 -> 01 -> 10, beta: 0 -> 1, alpha_2 = 0
    ("011000", 1),  # alpha: 00 -> 01 -> 10, beta: 0 -> 0, alpha_1 = 1
    ("000000", 0),
    ("010011", 0),  # alpha: 00 -> 01 -> 10, beta: 0 -> 1, alpha_2 = 0
    ("010111", 1),  # alpha: 00 -> 01 -> 11, beta: 0 -> 1, alpha_2 = 1
])
def test_ssa_examples(x, want):
    split, alpha, beta = ssa_streams(bits(x), 1)
    assert ssa(bits(x), 1) == want == alpha[to_int(beta)]


def test_ssa_streams_split():
    split, alpha, beta = ssa_streams(bits("010111"), 1)
    assert split.i0 == (2, 4) and split.i1 == (6,)
    assert alpha == (1, 1) and beta == (1,)


def test_languages():
    assert not end_member(bits("1"), 2)
    assert end_member(bits("10"), 2) and not end_member(bits("01"), 2)
    assert parity(bits("1101")) == 1 and majority(bits("1101")) == 1 and majority(bits("10")) == 0
