import json

import pytest

from obddlab import automata, constructions
from obddlab.functions import bits
from obddlab.obdd import ModelError, run
from obddlab.serialize import dumps, loads
from obddlab.truthtable import TruthTable

BUILT = [
    lambda: constructions.build_hwb_afobdd(4),
    lambda: constructions.build_ws_afobdd(4),
    lambda: constructions.build_mws_afobdd(2),
    lambda: constructions.build_ssa_lv_pobdd(1),
    lambda: constructions.build_ssa_lv_uobdd(1),
    lambda: constructions.build_ssa_afobdd(1),
    lambda: automata.build_modxor_lv_pfa(2),
    lambda: automata.build_modxor_lv_ufa(2),
    lambda: automata.build_modxor_afa(2),
    lambda: constructions.build_minimal_obdd(TruthTable.from_string("0110"), (2, 1)),
]


@pytest.mark.parametrize("make", BUILT)
def test_roundtrip_is_byte_identical(make):
    m = make()
    text = dumps(m)
    again = loads(text)
    assert dumps(again) == text
    assert type(again) is type(m)


def test_roundtrip_preserves_behaviour():
    m = constructions.build_ssa_lv_uobdd(1)
    m2 = loads(dumps(m))
    for x in ["000000", "011000", "111111"]:
        assert run(m, bits(x)).triple() == run(m2, bits(x)).triple()


def test_scalars_are_strings():
    doc = json.loads(dumps(constructions.build_ssa_lv_uobdd(1)))
    assert doc["schema_version"] == 1
    assert doc["initial"][0] == {"a": "0/1", "b": "1/2"}
    doc = json.loads(dumps(constructions.build_ssa_lv_pobdd(1)))
    assert "1/2" in doc["initial"]
    assert doc["metadata"]["encoding"].startswith("state (s,t,e,a,b)")


def test_pool_deduplicates():
    doc = json.loads(dumps(constructions.build_hwb_afobdd(6)))
    # identity, five writes, and the final-level selectors and collapses
    assert len(doc["matrices"]) < sum(len(level) * 2 for level in doc["transitions"])


def test_load_rechecks_validity():
    doc = json.loads(dumps(constructions.build_ssa_lv_pobdd(1)))
    doc["matrices"][0]["columns"][0][0][1] = "2/1"
    with pytest.raises(ModelError):
        loads(json.dumps(doc))
    with pytest.raises(ModelError):
        loads("{not json")
    doc = json.loads(dumps(constructions.build_ssa_lv_pobdd(1)))
    doc["schema_version"] = 99
    with pytest.raises(ModelError):
        loads(json.dumps(doc))
    del doc["levels"]
    doc["schema_version"] = 1
    with pytest.raises(ModelError):
        loads(json.dumps(doc))
