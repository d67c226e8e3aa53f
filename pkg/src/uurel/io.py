"""Measurement-file format and report serialisation.

A measurement file is JSON::

    {
      "dim": 4,
      "measurements": [
        {"kind": "basis", "vectors": [[a00, a01, ...], ...]},
        {"kind": "povm", "elements": [[[e000, ...], ...], ...]}
      ]
    }

Basis vectors are listed one per row.  Every scalar may be a number, an
arithmetic expression string such as ``"1/sqrt(2)"`` or ``"-2/sqrt(6)"``,
or an ``[re, im]`` pair of either.  Expressions are evaluated at parse time
with a small whitelist (``+ - * / **``, ``sqrt``, ``exp``, ``cos``, ``sin``,
``pi``).
"""
from __future__ import annotations

import ast
import csv
import json
import math
import operator
from importlib import resources

import numpy as np

from .errors import InvariantError, ParseError
from .multi import MeasurementEnsemble
from .quantum import OrthonormalBasis, Povm

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_FUNCS = {"sqrt": math.sqrt, "exp": math.exp, "cos": math.cos, "sin": math.sin}
_NAMES = {"pi": math.pi}


def evaluate_expression(text: str) -> float:
    """Evaluate a whitelisted real arithmetic expression."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in _FUNCS and len(node.args) == 1 and not node.keywords:
            return _FUNCS[node.func.id](ev(node.args[0]))
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        raise ValueError(f"unsupported syntax {ast.dump(node)[:40]}")

    try:
        return float(ev(ast.parse(text.strip(), mode="eval")))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError, TypeError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from None


def _real(x, where):
    if isinstance(x, bool):
        raise ParseError("booleans are not numbers", where)
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return evaluate_expression(x)
        except ValueError as exc:
            raise ParseError(str(exc), where) from None
    raise ParseError(f"expected a number or expression, got {type(x).__name__}", where)


def _complex(x, where):
    if isinstance(x, list):
        if len(x) != 2:
            raise ParseError("complex numbers are [re, im] pairs", where)
        return complex(_real(x[0], where + "[0]"), _real(x[1], where + "[1]"))
    return complex(_real(x, where), 0.0)


def _matrix(rows, dim, where):
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"expected {dim} rows", where)
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"expected {dim} entries", f"{where}[{i}]")
        for j, x in enumerate(row):
            out[i, j] = _complex(x, f"{where}[{i}][{j}]")
    return out


def parse_measurement(doc, dim, where):
    if not isinstance(doc, dict):
        raise ParseError("measurement must be an object", where)
    kind = doc.get("kind")
    try:
        if kind == "basis":
            vecs = _matrix(doc.get("vectors"), dim, where + ".vectors")
            return OrthonormalBasis(vecs.T)
        if kind == "povm":
            els = doc.get("elements")
            if not isinstance(els, list) or not els:
                raise ParseError("expected a non-empty list of matrices", where + ".elements")
            return Povm(np.array([_matrix(e, dim, f"{where}.elements[{i}]") for i, e in enumerate(els)]))
    except InvariantError as exc:
        raise InvariantError(f"{where}: {exc}") from None
    raise ParseError(f"unknown measurement kind {kind!r} (expected 'basis' or 'povm')", where + ".kind")


def parse_document(doc) -> MeasurementEnsemble:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("dim must be a positive integer", "dim")
    ms = doc.get("measurements")
    if not isinstance(ms, list) or len(ms) < 2:
        raise ParseError("need a list of at least two measurements", "measurements")
    return MeasurementEnsemble(tuple(parse_measurement(m, dim, f"measurements[{i}]") for i, m in enumerate(ms)))


def loads_ensemble(text: str) -> MeasurementEnsemble:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return parse_document(doc)


def load_ensemble(path) -> MeasurementEnsemble:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads_ensemble(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _pair(z):
    return [float(z.real), float(z.imag)]


def ensemble_to_document(ens: MeasurementEnsemble) -> dict:
    ms = []
    for m in ens.measurements:
        if isinstance(m, OrthonormalBasis):
            ms.append({"kind": "basis", "vectors": [[_pair(z) for z in v] for v in m.vectors.T]})
        else:
            ms.append({"kind": "povm", "elements": [[[_pair(z) for z in row] for row in e] for e in m.elements]})
    return {"dim": ens.dim, "measurements": ms}


def example1_text() -> str:
    """The packaged Example 1 fixture with its amplitudes written symbolically."""
    return resources.files("uurel").joinpath("data/example1.json").read_text(encoding="utf-8")


def format_float(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path_or_file, header, rows):
    """Write rows with floats at 17 significant digits; byte-stable for equal input."""

    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_float(v) if isinstance(v, float) else v for v in row])

    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
            emit(fh)


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]
