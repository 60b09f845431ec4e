"""JSON file formats: instances, constraint matrices, weight vectors."""

from __future__ import annotations

import json
from typing import Any, Sequence

import numpy as np

from .algebra import DEFAULT_PRIME, balanced, check_prime
from .instance import Instance


class InputError(ValueError):
    """Malformed or invalid input file."""


def instance_to_dict(inst: Instance) -> dict[str, Any]:
    """Canonical form: balanced representatives, fixed key order."""
    p = inst.p
    return {
        "prime": p,
        "n": inst.n,
        "lines": [
            {"a": [balanced(int(v), p) for v in a], "b": [balanced(int(v), p) for v in b]}
            for a, b in zip(inst.a, inst.b)
        ],
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), separators=(", ", ": ")) + "\n"


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InputError("instance must be a JSON object")
    try:
        p = int(doc.get("prime", DEFAULT_PRIME))
        n = int(doc["n"])
        lines = doc.get("lines", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad instance header: {exc}") from None
    try:
        check_prime(p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if n < 0 or not isinstance(lines, list):
        raise InputError("n must be non-negative and lines a list")
    pairs = []
    for k, line in enumerate(lines):
        try:
            a, b = line["a"], line["b"]
        except (KeyError, TypeError):
            raise InputError(f"line {k} needs fields a and b") from None
        if len(a) != n or len(b) != n or not all(isinstance(v, int) for v in [*a, *b]):
            raise InputError(f"line {k}: a and b must be lists of {n} integers")
        pairs.append((a, b))
    try:
        return Instance.from_lines(pairs, n, p)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def loads_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return instance_from_dict(doc)


def load_instance(path: str) -> Instance:
    with open(path) as fh:
        return loads_instance(fh.read())


def dump_instance(inst: Instance, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_instance(inst))


def load_matrix(text: str) -> np.ndarray:
    """D-file: {"rows": r, "cols": c, "entries": nested r x c list or flat row-major list}."""
    try:
        doc = json.loads(text)
        rows, cols = int(doc["rows"]), int(doc["cols"])
        entries = doc["entries"]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix file: {exc}") from None
    arr = np.array(entries, dtype=np.int64)
    if arr.size != rows * cols:
        raise InputError(f"expected {rows * cols} entries, got {arr.size}")
    return arr.reshape(rows, cols)


def dumps_matrix(d: np.ndarray) -> str:
    d = np.asarray(d, dtype=np.int64)
    return json.dumps({"rows": d.shape[0], "cols": d.shape[1], "entries": d.tolist()}) + "\n"


def parse_int_list(text: str) -> list[int]:
    """Integers from a CSV file or string, or from a JSON list."""
    text = text.strip()
    if text.startswith("["):
        try:
            vals = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON list: {exc}") from None
    else:
        vals = [v for v in text.replace("\n", ",").split(",") if v.strip()]
    try:
        return [int(v) for v in vals]
    except (TypeError, ValueError):
        raise InputError(f"expected integers, got {text!r}") from None


def half_integral_json(y2: Sequence[int] | None) -> list[int] | None:
    return None if y2 is None else [int(v) for v in y2]
