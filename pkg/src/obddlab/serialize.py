"""JSON model documents.

Rationals are written as ``"p/q"`` strings, elements of Q(sqrt 2) as
``{"a": "p/q", "b": "p/q"}``.  Matrices live in a deduplicated pool and levels
refer to them by index.  Loading rebuilds the model through its constructor,
so every validity predicate runs again.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .automata import AutomatonModel
from .numeric import Matrix, QuadExt
from .obdd import (
    AffineObdd,
    DeterministicObdd,
    ModelError,
    ProbabilisticObdd,
    UnitaryObdd,
    VariableOrder,
)

SCHEMA_VERSION = 1


def encode_scalar(x) -> str | dict:
    if isinstance(x, QuadExt):
        return {"a": _frac(x.a), "b": _frac(x.b)}
    return _frac(Fraction(x))


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decode_scalar(obj):
    if isinstance(obj, dict):
        if set(obj) != {"a", "b"}:
            raise ModelError(f"bad quadratic scalar {obj!r}")
        return QuadExt(_parse_frac(obj["a"]), _parse_frac(obj["b"]))
    return _parse_frac(obj)


def _parse_frac(s) -> Fraction:
    if not isinstance(s, str):
        raise ModelError(f"scalars are encoded as 'p/q' strings, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {s!r}") from exc


class _Pool:
    def __init__(self) -> None:
        self.index: dict[Matrix, int] = {}
        self.items: list[Matrix] = []

    def add(self, m: Matrix) -> int:
        if m not in self.index:
            self.index[m] = len(self.items)
            self.items.append(m)
        return self.index[m]

    def encode(self) -> list:
        return [{"rows": m.rows, "cols": m.cols,
                 "columns": [[[i, encode_scalar(v)] for i, v in col] for col in m.columns]}
                for m in self.items]


def decode_matrix(obj: dict) -> Matrix:
    try:
        return Matrix(obj["rows"], obj["cols"],
                      [[(int(i), decode_scalar(v)) for i, v in col] for col in obj["columns"]])
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed matrix entry: {exc}") from exc


def model_variant(model) -> tuple[str, str]:
    if isinstance(model, AutomatonModel):
        return "automaton", model.variant
    if isinstance(model, AffineObdd):
        return "obdd", "affine"
    if isinstance(model, UnitaryObdd):
        return "obdd", "unitary"
    if isinstance(model, DeterministicObdd):
        return "obdd", "deterministic"
    if isinstance(model, ProbabilisticObdd):
        return "obdd", "probabilistic"
    raise TypeError(f"cannot serialize {type(model).__name__}")


def to_document(model) -> dict:
    kind, variant = model_variant(model)
    pool = _Pool()
    doc: dict = {"schema_version": SCHEMA_VERSION, "kind": kind, "variant": variant}
    if kind == "automaton":
        doc["size"] = model.size
        doc["initial"] = [encode_scalar(v) for v in model.initial]
        doc["symbols"] = [pool.add(t) for t in model.symbols]
        doc["end_marker"] = None if model.end_marker is None else pool.add(model.end_marker)
        doc["accepting"] = sorted(model.accepting)
        doc["neutral"] = sorted(model.neutral)
        doc["labels"] = None if model.labels is None else list(model.labels)
    elif variant == "affine":
        doc["n"] = model.n
        doc["order"] = list(model.order.pi)
        doc["classical"] = {
            "count": model.classical_count,
            "initial": model.initial_classical,
            "accepting": sorted(model.classical_accepting),
            "delta": [[list(pair) for pair in level] for level in model.delta],
            "labels": None if model.classical_labels is None else list(model.classical_labels),
        }
        doc["affine_count"] = model.affine_count
        doc["initial"] = [encode_scalar(v) for v in model.initial]
        doc["transitions"] = [[[pool.add(t) for t in pair] for pair in level]
                              for level in model.transitions]
        doc["accepting"] = sorted(model.affine_accepting)
        doc["neutral"] = sorted(model.affine_neutral)
    else:
        doc["n"] = model.n
        doc["width"] = model.width
        doc["order"] = list(model.order.pi)
        doc["initial"] = [encode_scalar(v) for v in model.initial]
        doc["levels"] = [[pool.add(t) for t in pair] for pair in model.levels]
        doc["accepting"] = sorted(model.accepting)
        doc["neutral"] = sorted(model.neutral)
        doc["labels"] = None if model.labels is None else list(model.labels)
    doc["matrices"] = pool.encode()
    doc["metadata"] = model.metadata
    return doc


def from_document(doc: dict):
    try:
        return _from_document(doc)
    except (KeyError, TypeError, IndexError) as exc:
        raise ModelError(f"malformed model document: {exc!r}") from exc


def _from_document(doc: dict):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ModelError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    pool = [decode_matrix(m) for m in doc["matrices"]]
    kind, variant = doc["kind"], doc["variant"]
    initial = [decode_scalar(v) for v in doc["initial"]]
    meta = doc.get("metadata") or {}
    labels = tuple(doc["labels"]) if doc.get("labels") is not None else None
    if kind == "automaton":
        end = doc.get("end_marker")
        return AutomatonModel(
            variant=variant, size=doc["size"], initial=initial,
            symbols=tuple(pool[i] for i in doc["symbols"]),
            accepting=doc["accepting"], neutral=doc["neutral"],
            end_marker=None if end is None else pool[end], labels=labels, metadata=meta,
        )
    if kind != "obdd":
        raise ModelError(f"unknown document kind {kind!r}")
    order = VariableOrder(tuple(doc["order"]))
    if variant == "affine":
        c = doc["classical"]
        return AffineObdd(
            n=doc["n"], classical_count=c["count"], affine_count=doc["affine_count"],
            initial_classical=c["initial"], classical_accepting=c["accepting"],
            initial=initial, affine_accepting=doc["accepting"], affine_neutral=doc["neutral"],
            order=order,
            delta=tuple(tuple(tuple(pair) for pair in level) for level in c["delta"]),
            transitions=tuple(tuple(tuple(pool[i] for i in pair) for pair in level)
                              for level in doc["transitions"]),
            classical_labels=tuple(c["labels"]) if c.get("labels") is not None else None,
            metadata=meta,
        )
    cls = {"deterministic": DeterministicObdd, "probabilistic": ProbabilisticObdd,
           "unitary": UnitaryObdd}.get(variant)
    if cls is None:
        raise ModelError(f"unknown OBDD variant {variant!r}")
    return cls(
        n=doc["n"], width=doc["width"], initial=initial, accepting=doc["accepting"],
        neutral=doc["neutral"], order=order,
        levels=tuple(tuple(pool[i] for i in pair) for pair in doc["levels"]),
        labels=labels, metadata=meta,
    )


def dumps(model) -> str:
    return json.dumps(to_document(model), separators=(",", ":"), ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"not a JSON document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    return from_document(doc)


def save(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
