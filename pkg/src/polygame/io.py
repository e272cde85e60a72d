"""JSON formats for set functions, instances and solutions.

A set function is either an explicit table::

    {"n": 2, "kind": "submodular", "table": [0, 0.5, 0.5, 0.75]}

where entry ``b`` is the value of ``{i : bit i of b is set}``, or a family::

    {"family": "search_rescue", "params": {"p": [0.5, 0.5], "q": [1, 1]}}

Instances add an optional ``"w"`` (derived from the family parameters
when omitted, all ones for tables), ``"zeta"`` and ``"variant"``.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from polygame.errors import InvalidInput
from polygame.families import (
    queueing_function,
    rescue_function,
    scheduling_function,
    variable_speed_function,
)
from polygame.setfunc import KINDS, SetFunction, TableFunction


def _fmt_float(v: float) -> str:
    if not math.isfinite(v):
        raise InvalidInput(f"cannot serialize non-finite number {v!r}")
    if v == int(v) and abs(v) < 1e17:
        return repr(float(v))
    return format(v, ".17g")


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    sep = ",\n" if indent else ", "
    nl = "\n" if indent else ""
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for k, (key, val) in enumerate(obj.items()):
            out.append(pad + json.dumps(str(key)) + ": ")
            _emit(val, indent, level + 1, out)
            out.append(sep if k < len(obj) - 1 else nl)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in obj):
            out.append("[" + ", ".join(_scalar(v) for v in obj) + "]")
            return
        out.append("[" + nl)
        for k, val in enumerate(obj):
            out.append(pad)
            _emit(val, indent, level + 1, out)
            out.append(sep if k < len(obj) - 1 else nl)
        out.append(end + "]")
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), indent, level, out)
    else:
        out.append(_scalar(obj))


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return json.dumps(str(v))


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits."""
    out: list = []
    _emit(obj, indent, 0, out)
    return "".join(out)


def read_json(source: str):
    """Parse JSON from a path, or from stdin when ``source`` is ``-``."""
    try:
        if source == "-":
            return json.load(sys.stdin)
        if source.lstrip().startswith(("{", "[")):
            return json.loads(source)
        with open(source) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read JSON from {source!r}: {exc}") from None


def _param(params, key, n=None, default=None):
    if key not in params:
        if default is None:
            raise InvalidInput(f"missing parameter {key!r}")
        return np.full(n, float(default))
    return np.asarray(params[key], dtype=np.float64)


def _family(doc):
    name = doc["family"]
    params = doc.get("params", {})
    if not isinstance(params, dict):
        raise InvalidInput("params must be an object")
    if name == "search_rescue":
        p = _param(params, "p")
        q = _param(params, "q", p.size, 1.0)
        return rescue_function(p), q * p / (1 - p), q
    if name == "scheduling":
        t = _param(params, "t")
        d = _param(params, "d", t.size, 1.0)
        return scheduling_function(t), d / t, d
    if name == "variable_speed":
        a = _param(params, "a")
        b = _param(params, "b")
        d = _param(params, "d", a.size, 1.0)
        return variable_speed_function(a, b), d / (a + b), d
    if name == "queueing":
        lam = _param(params, "lambda")
        mu = _param(params, "mu")
        c = _param(params, "c", lam.size, 1.0)
        return queueing_function(lam, mu), c * mu / lam, None
    raise InvalidInput(f"unknown family {name!r}")


def setfunction_from_json(doc) -> SetFunction:
    return _parse(doc)[0]


def _parse(doc):
    if not isinstance(doc, dict):
        raise InvalidInput("set function must be a JSON object")
    if "family" in doc:
        return _family(doc)
    if "table" not in doc:
        raise InvalidInput("set function needs either 'table' or 'family'")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise InvalidInput(f"kind must be one of {KINDS}, got {kind!r}")
    fn = TableFunction(doc["table"], kind)
    if "n" in doc and int(doc["n"]) != fn.n:
        raise InvalidInput(f"table has 2**{fn.n} entries but n = {doc['n']}")
    return fn, np.ones(fn.n), None


def setfunction_to_json(fn: SetFunction, cap=None) -> dict:
    return {"n": fn.n, "kind": fn.kind, "table": fn.table(cap=cap).tolist()}


@dataclass
class Instance:
    fn: SetFunction
    w: np.ndarray
    zeta: np.ndarray | None
    variant: str | None
    doc: dict


def instance_from_json(doc) -> Instance:
    fn, w, zeta = _parse(doc)
    if "w" in doc:
        # a derived zeta only matches the derived weights
        w = np.asarray(doc["w"], dtype=np.float64)
        zeta = None
    if "zeta" in doc and doc["zeta"] is not None:
        zeta = np.asarray(doc["zeta"], dtype=np.float64)
    return Instance(fn, w, zeta, doc.get("variant"), doc)
