"""Exact simulation and certification of deterministic, probabilistic, unitary
and affine OBDDs and finite automata."""
from .automata import (
    AutomatonModel,
    build_modxor_afa,
    build_modxor_lv_pfa,
    build_modxor_lv_ufa,
    run_automaton,
    sweep_strings,
)
from .bounds import Cut, check_inequalities, distinguishable_count, n_of, nerode_class_of, subfunction_count, subfunction_max
from .constructions import (
    build_hwb_afobdd,
    build_minimal_obdd,
    build_mws_afobdd,
    build_ssa_afobdd,
    build_ssa_lv_pobdd,
    build_ssa_lv_uobdd,
    build_ws_afobdd,
)
from .numeric import INV_SQRT2, SQRT2, Matrix, QuadExt
from .obdd import (
    AffineObdd,
    Bounded,
    DeterministicObdd,
    Exact,
    LasVegas,
    ProbabilisticObdd,
    RunOutcome,
    UnitaryObdd,
    VariableOrder,
    run,
    sweep_classify,
    width,
)
from .truthtable import TruthTable

__all__ = [
    "AffineObdd",
    "AutomatonModel",
    "Bounded",
    "Cut",
    "DeterministicObdd",
    "Exact",
    "INV_SQRT2",
    "LasVegas",
    "Matrix",
    "ProbabilisticObdd",
    "QuadExt",
    "RunOutcome",
    "SQRT2",
    "TruthTable",
    "UnitaryObdd",
    "VariableOrder",
    "build_hwb_afobdd",
    "build_minimal_obdd",
    "build_modxor_afa",
    "build_modxor_lv_pfa",
    "build_modxor_lv_ufa",
    "build_mws_afobdd",
    "build_ssa_afobdd",
    "build_ssa_lv_pobdd",
    "build_ssa_lv_uobdd",
    "build_ws_afobdd",
    "check_inequalities",
    "distinguishable_count",
    "n_of",
    "nerode_class_of",
    "run",
    "run_automaton",
    "subfunction_count",
    "subfunction_max",
    "sweep_classify",
    "sweep_strings",
    "width",
]

__version__ = "0.1.0"
