import numpy as np
import pytest

from obddlab.functions import hwb
from obddlab.truthtable import TruthTable


def test_indexing_is_msb_first():
    f = TruthTable.from_function(lambda x: x[0], 3)
    assert f.to_string() == "00001111"
    assert f((1, 0, 0)) == 1 and f((0, 1, 1)) == 0


def test_constructors_agree():
    f = TruthTable.from_function(hwb, 4)
    assert TruthTable.from_string(f.to_string()) == f
    code = sum(int(b) << i for i, b in enumerate(f.to_string()))
    assert TruthTable.from_int(code, 4) == f
    assert hash(TruthTable.from_string(f.to_string())) == hash(f)
    with pytest.raises(ValueError):
        TruthTable.from_string("011")


def test_in_order_axes():
    f = TruthTable.from_function(lambda x: x[2], 3)
    cube = f.in_order((3, 1, 2))
    assert np.all(cube[0] == 0) and np.all(cube[1] == 1)
    with pytest.raises(ValueError):
        f.in_order((1, 2))
