"""JSON documents for symbols, measures and reports; CSV matrix dumps.

Complex numbers are written as ``[re, im]`` pairs.  Reports are serialized
with a fixed key order and every float printed with 17 significant digits,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from fractions import Fraction

import numpy as np

from .symbols import AtomicMeasure, RadialProfile, Symbol, symbol_from_bipoly

__all__ = [
    "SchemaError",
    "parse_complex",
    "parse_coeffs",
    "parse_symbol",
    "parse_measure",
    "symbol_to_doc",
    "measure_to_doc",
    "complex_to_doc",
    "dumps",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_vector_csv",
]

SYMBOL_KEYS = ("bipoly", "modes", "radial")


class SchemaError(ValueError):
    """Malformed document; ``key`` names the offending field when known."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key


def parse_complex(x, key=None):
    if isinstance(x, bool):
        raise SchemaError(f"expected a number, got {x!r}", key)
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(x[0], x[1])
    raise SchemaError(f"expected a number or [re, im] pair, got {x!r}", key)


def parse_coeffs(seq, key=None):
    if not isinstance(seq, list):
        raise SchemaError(f"expected a list of coefficients, got {seq!r}", key)
    return RadialProfile(tuple(parse_complex(c, key) for c in seq))


def _int(x, key):
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"expected an integer, got {x!r}", key)
    return x


def parse_symbol(doc):
    """Symbol from ``{"bipoly": ...}``, ``{"modes": ...}`` or ``{"radial": ...}``."""
    present = [k for k in SYMBOL_KEYS if k in doc]
    if len(present) != 1:
        raise SchemaError(
            f"exactly one of {', '.join(SYMBOL_KEYS)} is required, found {present or 'none'}",
            present[1] if len(present) > 1 else None,
        )
    key = present[0]
    body = doc[key]
    if key == "radial":
        return Symbol.radial(parse_coeffs(body, key))
    if not isinstance(body, list):
        raise SchemaError(f"{key} must be a list", key)
    if key == "bipoly":
        terms = []
        for t in body:
            if not isinstance(t, list) or len(t) != 3:
                raise SchemaError(f"bipoly term must be [j, k, a], got {t!r}", key)
            j, k = _int(t[0], key), _int(t[1], key)
            if j < 0 or k < 0:
                raise SchemaError("bipoly exponents must be nonnegative", key)
            terms.append((j, k, parse_complex(t[2], key)))
        return symbol_from_bipoly(terms)
    modes = []
    for t in body:
        if not isinstance(t, list) or len(t) != 2:
            raise SchemaError(f"mode entry must be [m, [coeffs...]], got {t!r}", key)
        modes.append((_int(t[0], key), parse_coeffs(t[1], key)))
    try:
        return Symbol(tuple(modes))
    except ValueError as exc:
        raise SchemaError(str(exc), key) from None


def parse_measure(doc):
    atoms = doc.get("atoms")
    if not isinstance(atoms, list):
        raise SchemaError("atoms must be a list of [[re, im], [wre, wim]] pairs", "atoms")
    pairs = []
    for a in atoms:
        if not isinstance(a, list) or len(a) != 2:
            raise SchemaError(f"atom must be [location, weight], got {a!r}", "atoms")
        pairs.append((parse_complex(a[0], "atoms"), parse_complex(a[1], "atoms")))
    radius = doc.get("radius")
    if radius is not None and (isinstance(radius, bool) or not isinstance(radius, (int, float))):
        raise SchemaError("radius must be a positive number", "radius")
    try:
        return AtomicMeasure(tuple(pairs), radius)
    except ValueError as exc:
        raise SchemaError(str(exc), "atoms") from None


def complex_to_doc(z):
    z = complex(z)
    return [z.real, z.imag]


def symbol_to_doc(f):
    return {"modes": [[m, [complex_to_doc(c) for c in p.coeffs]] for m, p in f.modes]}


def measure_to_doc(nu):
    return {
        "atoms": [[complex_to_doc(z), complex_to_doc(w)] for z, w in nu.atoms],
        "radius": nu.radius_bound,
    }


def _fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    if x == 0:
        return "0.0" if math.copysign(1, x) > 0 else "-0.0"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode(complex_to_doc(obj), indent, level)
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [_encode(v, indent, level + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(pad + p for p in parts) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc, indent=2):
    """Deterministic JSON text: insertion key order, floats at 17 digits."""
    return _encode(doc, indent, 0) + "\n"


def write_matrix_csv(path, A):
    """Row-major CSV; each matrix entry takes two columns ``re,im``."""
    a = np.asarray(A, dtype=complex)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in a:
            cells = []
            for z in row:
                cells += [_fmt_float(z.real), _fmt_float(z.imag)]
            w.writerow(cells)


def read_matrix_csv(path):
    with open(path, newline="") as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    if any(len(r) % 2 for r in rows):
        raise SchemaError(f"{path}: rows must hold re,im pairs")
    a = np.array(rows, dtype=float)
    return a[:, 0::2] + 1j * a[:, 1::2]


def write_vector_csv(path, values, header="value"):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", header])
        for i, v in enumerate(values):
            w.writerow([i, _fmt_float(v)])
