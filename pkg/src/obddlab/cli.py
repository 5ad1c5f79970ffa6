"""Command-line front end: ``obddlab build | eval | certify | bound | check-inequalities | validate``.

Exit codes: 0 pass, 1 certification or inequality failure, 2 refusal
(budget exceeded, bad arguments, unreadable or invalid model file).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import automata, bounds, constructions, functions
from .automata import AutomatonModel, run_automaton, sweep_strings
from .numeric import DimensionError, format_scalar
from .numeric import validate_affine, validate_orthogonal, validate_stochastic
from .obdd import (
    BudgetExceeded,
    ModelError,
    VariableOrder,
    parse_mode,
    run,
    sweep_classify,
    width,
)
from .obdd import _is_zero_one_function
from .serialize import dumps, load
from .serialize import model_variant
from .truthtable import TruthTable

EXIT_PASS, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2


class UsageError(Exception):
    pass


# --- registries ------------------------------------------------------------------------

BUILDERS = {
    "hwb": ("n", constructions.build_hwb_afobdd),
    "ws": ("n", constructions.build_ws_afobdd),
    "mws": ("n", constructions.build_mws_afobdd),
    "ssa-lv-pobdd": ("d", constructions.build_ssa_lv_pobdd),
    "ssa-lv-uobdd": ("d", constructions.build_ssa_lv_uobdd),
    "ssa-afobdd": ("d", constructions.build_ssa_afobdd),
    "modxor-lv-pfa": ("k", automata.build_modxor_lv_pfa),
    "modxor-lv-ufa": ("k", automata.build_modxor_lv_ufa),
    "modxor-afa": ("k", automata.build_modxor_afa),
    "minimal-obdd": (None, None),
}

# name -> (parameter, factory returning an oracle on bit tuples)
BOOLEAN_FUNCTIONS = {
    "hwb": ("n", lambda n: functions.hwb),
    "ws": ("n", lambda n: functions.ws),
    "mws": ("n", lambda n: functions.mws_joined),
    "ssa": ("d", lambda d: lambda x: functions.ssa(x, d)),
    "parity": ("n", lambda n: functions.parity),
    "majority": ("n", lambda n: functions.majority),
}

LANGUAGES = {
    "modxor": lambda k: lambda w: functions.modxor_member(w, k),
    "end": lambda k: lambda w: functions.end_member(w, k),
}


def _param(args, name: str) -> int:
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"--{name} is required")
    return value


def _parse_order(text: str | None, n: int | None = None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        order = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
        VariableOrder(order)
    except ValueError as exc:
        raise UsageError(f"bad order {text!r}: {exc}") from exc
    if n is not None and len(order) != n:
        raise UsageError(f"order has {len(order)} entries for {n} variables")
    return order


def _function_table(name: str, args) -> TruthTable:
    """Tabulate a named function; ``parity-3`` is shorthand for ``parity --n 3``."""
    base, _, suffix = name.partition("-")
    if base not in BOOLEAN_FUNCTIONS:
        raise UsageError(f"unknown function {name!r}; known: {', '.join(BOOLEAN_FUNCTIONS)}")
    pname, factory = BOOLEAN_FUNCTIONS[base]
    value = int(suffix) if suffix else _param(args, pname)
    if pname == "d":
        n = functions.SsaParams(value).n
    elif base == "mws":
        n = 2 * value
    else:
        n = value
    return TruthTable.from_function(factory(value), n)


def _load_table(path: str) -> TruthTable:
    with open(path, encoding="utf-8") as fh:
        return TruthTable.from_string(fh.read())


def build_model(name: str, args):
    if name not in BUILDERS:
        raise UsageError(f"unknown builder {name!r}; known: {', '.join(BUILDERS)}")
    if name == "minimal-obdd":
        if args.table:
            f = _load_table(args.table)
        elif args.function:
            f = _function_table(args.function, args)
        else:
            raise UsageError("minimal-obdd needs --function or --table")
        return constructions.build_minimal_obdd(f, _parse_order(args.order, f.n))
    pname, fn = BUILDERS[name]
    value = _param(args, pname)
    if name == "ssa-lv-uobdd" and args.order:
        return fn(value, _parse_order(args.order))
    return fn(value)


def model_oracle(model, args):
    """Oracle named by ``--oracle`` or implied by the builder recorded in the model."""
    meta = model.metadata or {}
    params = meta.get("params", {})
    name = args.oracle
    if name is None:
        builder = meta.get("builder", "")
        name = {"hwb": "hwb", "ws": "ws", "mws": "mws", "minimal-obdd": "table"}.get(builder)
        if name is None and builder.startswith("ssa"):
            name = "ssa"
        if name is None and builder.startswith("modxor"):
            name = "modxor"
        if name is None:
            raise UsageError("model has no builder metadata; pass --oracle")
    if name == "table":
        table = params.get("table")
        if table is None:
            raise UsageError("model does not record a truth table")
        return TruthTable.from_string(table)
    if name in LANGUAGES:
        k = args.k if args.k is not None else params.get("k")
        if k is None:
            raise UsageError(f"oracle {name} needs --k")
        return LANGUAGES[name](k)
    if name == "ssa":
        return lambda x: functions.ssa(x, functions.SsaParams.from_n(len(x)))
    if name in BOOLEAN_FUNCTIONS:
        return BOOLEAN_FUNCTIONS[name][1](None)
    raise UsageError(f"unknown oracle {name!r}")


def default_mode(model) -> str:
    builder = (model.metadata or {}).get("builder", "")
    return "lasvegas:1/2" if "-lv-" in builder else "exact"


def model_size(model) -> int:
    return model.size if isinstance(model, AutomatonModel) else width(model)


def describe(model) -> dict:
    out = {"builder": (model.metadata or {}).get("builder"), "width": model_size(model)}
    if isinstance(model, AutomatonModel):
        out.update(kind="automaton", variant=model.variant, states=model.size)
    elif hasattr(model, "classical_count"):
        out.update(kind="obdd", variant="affine", n=model.n,
                   classical=model.classical_count, affine=model.affine_count)
    else:
        out.update(kind="obdd", variant=model_variant(model)[1], n=model.n, states=model.width)
    return out


# --- output ----------------------------------------------------------------------------

def emit(args, payload: dict, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def table(rows: list[tuple], head: tuple) -> str:
    rows = [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(x) for x in col) for col in zip(head, *rows)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip()
                     for line in [head, *rows])


def _outcome_dict(out) -> dict:
    return {"accept": format_scalar(out.accept), "reject": format_scalar(out.reject),
            "dontknow": format_scalar(out.dontknow)}


# --- commands --------------------------------------------------------------------------

def cmd_build(args) -> int:
    model = build_model(args.builder, args)
    doc = dumps(model)
    info = describe(model)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
        print(" ".join(f"{k}={v}" for k, v in info.items()))
    else:
        sys.stdout.write(doc)
    return EXIT_PASS


def cmd_eval(args) -> int:
    model = load(args.model)
    try:
        x = functions.bits(args.input)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if isinstance(model, AutomatonModel):
        out = run_automaton(model, x)
    else:
        if len(x) != model.n:
            raise UsageError(f"input has {len(x)} bits, model reads {model.n}")
        out = run(model, x)
    print(out)
    return EXIT_PASS


def cmd_certify(args) -> int:
    model = load(args.model)
    oracle = model_oracle(model, args)
    mode = parse_mode(args.mode or default_mode(model))
    if isinstance(model, AutomatonModel):
        if args.maxlen is None:
            raise UsageError("automata need --maxlen")
        rep = sweep_strings(model, oracle, args.maxlen, mode, args.budget)
    else:
        rep = sweep_classify(model, oracle, mode, args.budget)
    payload = {
        "command": "certify", "model": args.model, "mode": str(mode), "passed": rep.passed,
        "total": rep.total, "members": rep.members,
        "min_decision": None if rep.min_decision is None else format_scalar(rep.min_decision),
        "max_decision": None if rep.max_decision is None else format_scalar(rep.max_decision),
        "violations": [{"input": functions.bits_to_str(v.input), "expected": v.expected,
                        "outcome": _outcome_dict(v.outcome), "reason": v.reason}
                       for v in rep.violations[:args.max_violations]],
        "violation_count": len(rep.violations),
    }
    rows = [("result", "PASS" if rep.passed else "FAIL"), ("mode", str(mode)),
            ("inputs", rep.total), ("members", rep.members),
            ("decision range", f"{payload['min_decision']} .. {payload['max_decision']}"),
            ("violations", len(rep.violations))]
    text = table(rows, ("field", "value"))
    if rep.violations:
        v = rep.violations[0]
        text += f"\ncounterexample {functions.bits_to_str(v.input) or 'ε'}: {v.outcome} ({v.reason})"
    emit(args, payload, text)
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_bound(args) -> int:
    payload: dict = {"command": "bound", "function": args.function}
    rows = []
    passed = True
    if args.function in LANGUAGES:
        k = _param(args, "k")
        plen = args.prefix_maxlen if args.prefix_maxlen is not None else 2 * k + 2
        slen = args.suffix_maxlen if args.suffix_maxlen is not None else 2 * k + 2
        count = bounds.distinguishable_count(LANGUAGES[args.function](k), plen, slen, args.budget)
        payload.update(k=k, prefix_maxlen=plen, suffix_maxlen=slen, distinguishable=count)
        rows.append(("distinguishable classes", count))
        if args.expect_at_least is not None:
            passed = count >= args.expect_at_least
    else:
        f = _load_table(args.function) if args.function.endswith(".txt") else _function_table(args.function, args)
        pi = _parse_order(args.order, f.n)
        if args.sample is not None:
            rep = bounds.n_of(f, mode="sample", samples=args.sample, seed=args.seed, pi=pi)
        else:
            rep = bounds.n_of(f, mode="exhaustive", pi=pi)
        payload.update(n=f.n, report=rep.to_dict())
        rows += [(f"N^theta u={u}", c) for u, c in rep.per_cut.items()]
        rows.append((f"N^pi pi={','.join(map(str, rep.order))}", rep.n_pi))
        label = "N(f)" if rep.is_lower_bound else "N(f) upper bound (sampled)"
        rows.append((label, rep.n_f))
        rows.append(("best order", ",".join(map(str, rep.best_order))))
        rows.append(("orders examined", rep.orders_examined))
        if args.expect_at_least is not None:
            passed = rep.is_lower_bound and rep.n_f >= args.expect_at_least
    if args.expect_at_least is not None:
        payload["expect_at_least"] = args.expect_at_least
        rows.append((f"assert >= {args.expect_at_least}", "PASS" if passed else "FAIL"))
    payload["passed"] = passed
    emit(args, payload, table(rows, ("quantity", "value")))
    return EXIT_PASS if passed else EXIT_FAIL


DEFAULT_INEQUALITIES = {
    "models": {
        "ssa-pobdd-d1": {"builder": "ssa-lv-pobdd", "params": {"d": 1}},
        "ssa-pobdd-d2": {"builder": "ssa-lv-pobdd", "params": {"d": 2}},
        "ssa-uobdd-d1": {"builder": "ssa-lv-uobdd", "params": {"d": 1}},
        "ssa-uobdd-d2": {"builder": "ssa-lv-uobdd", "params": {"d": 2}},
        "modxor-pfa-k1": {"builder": "modxor-lv-pfa", "params": {"k": 1}},
        "modxor-pfa-k2": {"builder": "modxor-lv-pfa", "params": {"k": 2}},
        "modxor-ufa-k1": {"builder": "modxor-lv-ufa", "params": {"k": 1}},
        "modxor-ufa-k2": {"builder": "modxor-lv-ufa", "params": {"k": 2}},
    },
    "bounds": {
        "obdd-ssa-d1": {"function": "ssa", "params": {"d": 1}},
        "obdd-ssa-d2": {"value": 16, "source": "2^(2^d) storage-access lower bound, d = 2"},
        "dfa-modxor-k1": {"language": "modxor", "params": {"k": 1}},
        "dfa-modxor-k2": {"language": "modxor", "params": {"k": 2}},
    },
    "pairs": [
        {"bound": "obdd-ssa-d1", "model": "ssa-pobdd-d1", "eps": "1/2", "relation": "OBDD vs LV-OBDD"},
        {"bound": "obdd-ssa-d2", "model": "ssa-pobdd-d2", "eps": "1/2", "relation": "OBDD vs LV-OBDD"},
        {"bound": "obdd-ssa-d1", "model": "ssa-uobdd-d1", "eps": "1/2", "relation": "OBDD vs unitary LV-OBDD"},
        {"bound": "obdd-ssa-d2", "model": "ssa-uobdd-d2", "eps": "1/2", "relation": "OBDD vs unitary LV-OBDD"},
        {"bound": "dfa-modxor-k1", "model": "modxor-pfa-k1", "eps": "1/2", "relation": "DFA vs LV automaton"},
        {"bound": "dfa-modxor-k2", "model": "modxor-pfa-k2", "eps": "1/2", "relation": "DFA vs LV automaton"},
        {"bound": "dfa-modxor-k1", "model": "modxor-ufa-k1", "eps": "1/2", "relation": "DFA vs LV automaton"},
        {"bound": "dfa-modxor-k2", "model": "modxor-ufa-k2", "eps": "1/2", "relation": "DFA vs LV automaton"},
    ],
}


def _config_model(spec: dict):
    if "file" in spec:
        return load(spec["file"])
    params = dict(spec.get("params", {}))
    ns = argparse.Namespace(n=params.get("n"), d=params.get("d"), k=params.get("k"),
                            order=params.get("order"), function=params.get("function"),
                            table=params.get("table"))
    return build_model(spec["builder"], ns)


def _config_bound(spec: dict, budget: int | None) -> tuple[int, str]:
    if "value" in spec:
        return int(spec["value"]), spec.get("source", "given")
    params = spec.get("params", {})
    if "language" in spec:
        k = params["k"]
        plen = spec.get("prefix_maxlen", 2 * k + 2)
        slen = spec.get("suffix_maxlen", 2 * k + 2)
        return (bounds.distinguishable_count(LANGUAGES[spec["language"]](k), plen, slen, budget),
                f"distinguishable prefixes of {spec['language']}, k={k}")
    ns = argparse.Namespace(**params)
    f = _function_table(spec["function"], ns)
    rep = bounds.n_of(f, mode="exhaustive")
    return rep.n_f, f"N({spec['function']}) over {rep.orders_examined} orders"


def run_inequalities(config: dict, budget: int | None = None) -> bounds.InequalityLedger:
    models, bspecs = config.get("models", {}), config.get("bounds", {})
    built: dict = {}
    computed: dict = {}
    checks = []
    for i, pair in enumerate(config.get("pairs", [])):
        bname, mname = pair.get("bound"), pair.get("model")
        if bname not in bspecs:
            raise UsageError(f"pair {i}: dangling bound reference {bname!r}")
        if mname not in models:
            raise UsageError(f"pair {i}: dangling model reference {mname!r}")
        if bname not in computed:
            computed[bname] = _config_bound(bspecs[bname], budget)
        if mname not in built:
            built[mname] = model_size(_config_model(models[mname]))
        value, source = computed[bname]
        checks.append(bounds.InequalityCheck(
            name=pair.get("name", f"{bname} <= {mname}"), bound=value, size=built[mname],
            eps=Fraction(pair.get("eps", "1/2")),
            source=f"{pair.get('relation', '')}; {source}".strip("; ")))
    return bounds.check_inequalities(checks)


def cmd_check_inequalities(args) -> int:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    else:
        config = DEFAULT_INEQUALITIES
    ledger = run_inequalities(config, args.budget)
    payload = {"command": "check-inequalities", "passed": ledger.passed,
               "rows": [r.to_dict() for r in ledger.rows]}
    emit(args, payload, ledger.table())
    return EXIT_PASS if ledger.passed else EXIT_FAIL


_PREDICATES = {
    "deterministic": ("0/1 function", _is_zero_one_function),
    "probabilistic": ("stochastic", validate_stochastic),
    "unitary": ("orthogonal", validate_orthogonal),
    "affine": ("affine", validate_affine),
}


def cmd_validate(args) -> int:
    from .serialize import decode_matrix, from_document
    with open(args.model, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"not a JSON document: {exc}") from exc
    variant = doc.get("variant")
    if variant not in _PREDICATES:
        raise ModelError(f"unknown variant {variant!r}")
    pname, check = _PREDICATES[variant]
    results = []
    for i, m in enumerate(doc.get("matrices", [])):
        results.append((i, bool(check(decode_matrix(m)))))
    bad = [i for i, ok in results if not ok]
    model_error = None
    if not bad:
        try:
            from_document(doc)
        except (ModelError, DimensionError) as exc:
            model_error = str(exc)
    passed = not bad and model_error is None
    payload = {"command": "validate", "model": args.model, "predicate": pname,
               "matrices": len(results), "failing": bad, "model_error": model_error,
               "passed": passed}
    rows = [("predicate", pname), ("matrices", len(results)),
            ("failing", ",".join(map(str, bad)) or "none"),
            ("model", model_error or "ok"), ("result", "PASS" if passed else "FAIL")]
    emit(args, payload, table(rows, ("field", "value")))
    return EXIT_PASS if passed else EXIT_FAIL


# --- parser ----------------------------------------------------------------------------

def _add_report_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="also write the JSON report to this file")
    p.add_argument("--json", action="store_true", help="print JSON instead of the text table")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="obddlab", description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=None,
                    help="cap on swept inputs (default: $OBDDLAB_BUDGET or 2^20)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="emit a model as JSON")
    p.add_argument("builder", choices=sorted(BUILDERS))
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--order", help="comma-separated variable order, 1-based")
    p.add_argument("--function", help="named function for minimal-obdd, e.g. hwb-4 or ssa --d 1")
    p.add_argument("--table", help="file holding a 0/1 truth table of length 2^n")
    p.add_argument("--out", help="write the model here instead of stdout")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="run a model on one input")
    p.add_argument("model")
    p.add_argument("input", help="0/1 string; empty string allowed for automata")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("certify", help="sweep all inputs against an oracle")
    p.add_argument("model")
    p.add_argument("--oracle", help="hwb, ws, mws, ssa, parity, majority, modxor, end, table")
    p.add_argument("--mode", help="exact | lasvegas:p | bounded:eps (default from builder)")
    p.add_argument("--k", type=int)
    p.add_argument("--maxlen", type=int, help="longest string swept for automata")
    p.add_argument("--max-violations", type=int, default=20)
    _add_report_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("bound", help="subfunction counts or Nerode classes")
    p.add_argument("function", help="hwb, ws, mws, ssa, parity, majority (or name-N), modxor, end, or a .txt table")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--order", help="order for the per-cut table (default identity)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true", help="all n! orders (default)")
    group.add_argument("--sample", type=int, help="number of random orders; reports an upper bound")
    p.add_argument("--seed", type=int, default=0, help="seed for --sample")
    p.add_argument("--prefix-maxlen", type=int)
    p.add_argument("--suffix-maxlen", type=int)
    p.add_argument("--expect-at-least", type=int, help="fail unless the bound reaches this value")
    _add_report_flags(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("check-inequalities", help="bound^(1-eps) <= size ledger")
    p.add_argument("config", nargs="?", help="JSON config (default: built-in pairing)")
    _add_report_flags(p)
    p.set_defaults(func=cmd_check_inequalities)

    p = sub.add_parser("validate", help="re-check every matrix of a model file")
    p.add_argument("model")
    _add_report_flags(p)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (UsageError, ModelError, DimensionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
