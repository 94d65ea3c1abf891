"""Command-line front end: one JSON config in, one JSON report (plus CSV) out.

    bergman-toeplitz <kind> --config run.json [--out DIR] [--tol X] [--n N]
    bergman-toeplitz verify

Exit status: 0 pass, 1 fail verdict, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, io, moments, operators
from .symbols import Symbol

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
N_MAX = 256

KINDS = ("matrix", "eigs", "rank", "zeroset", "detid", "feval", "triangular", "product", "verify")

_SYMBOL = set(io.SYMBOL_KEYS)
_MEASURE = {"atoms", "radius"}
_DET = {"atoms", "radius", "N", "m", "k", "expect", "atol"}

# allowed payload keys per kind, besides "kind"
ALLOWED = {
    "matrix": _SYMBOL | _MEASURE | {"n"},
    "eigs": {"radial", "n"},
    "rank": _SYMBOL | _MEASURE | {"n", "tol", "expect_rank"},
    "zeroset": {"radial", "n", "tol", "expect_indices"},
    "detid": _DET,
    "feval": _DET | {"w"},
    "triangular": _SYMBOL | {"n", "k", "tol"},
    "product": {"g", "f_mid", "f", "n", "tol", "zero_tol", "residual_tol"},
    "verify": set(),
}
NEEDS_N = {"matrix", "eigs", "rank", "zeroset", "triangular", "product"}
TAKES_TOL = {"rank", "zeroset", "triangular", "product"}


class ConfigError(Exception):
    """Input problem, reported as ``path:line: message``."""

    def __init__(self, message, line=1):
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    doc: dict
    n: int | None = None
    tol: float | None = None


def _line_of(text, key):
    if key is None:
        return 1
    needle = json.dumps(key)
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return 1


def load_config(path, kind=None, n=None, tol=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")

    declared = doc.get("kind")
    if declared is not None and declared not in KINDS:
        raise ConfigError(f"unknown kind {declared!r}", _line_of(text, "kind"))
    if kind is not None and declared is not None and declared != kind:
        raise ConfigError(
            f"config declares kind {declared!r} but {kind!r} was requested", _line_of(text, "kind")
        )
    kind = kind or declared
    if kind is None:
        raise ConfigError("config has no kind and none was given on the command line")

    payload = {k: v for k, v in doc.items() if k != "kind"}
    extra = sorted(set(payload) - ALLOWED[kind])
    if extra:
        raise ConfigError(f"field {extra[0]!r} is not allowed for kind {kind!r}", _line_of(text, extra[0]))
    if n is not None:
        payload["n"] = n
    if tol is not None:
        if kind not in TAKES_TOL:
            raise ConfigError(f"--tol does not apply to kind {kind!r}")
        payload["tol"] = tol

    if kind in NEEDS_N:
        nv = payload.get("n")
        if isinstance(nv, bool) or not isinstance(nv, int):
            raise ConfigError("n must be an integer", _line_of(text, "n"))
        if not 1 <= nv <= N_MAX:
            raise ConfigError(f"n must lie in [1, {N_MAX}], got {nv}", _line_of(text, "n"))
    tv = payload.get("tol")
    if tv is not None and (isinstance(tv, bool) or not isinstance(tv, (int, float)) or not 0 < tv < 1):
        raise ConfigError("tol must be a number in (0, 1)", _line_of(text, "tol"))
    cfg = ExperimentConfig(kind, payload, payload.get("n"), payload.get("tol"))
    return cfg, text


def _symbol_or_measure(doc):
    has_symbol = any(k in doc for k in io.SYMBOL_KEYS)
    if has_symbol and "atoms" in doc:
        raise io.SchemaError("give either a symbol or atoms, not both", "atoms")
    if "atoms" in doc:
        return io.parse_measure(doc)
    if "radius" in doc:
        raise io.SchemaError("radius is only meaningful with atoms", "radius")
    return io.parse_symbol(doc)


def _matrix_of(obj, n):
    if isinstance(obj, Symbol):
        return operators.toeplitz_matrix(obj, n)
    return operators.measure_matrix(obj, n)


def _values_doc(values):
    values = np.asarray(values)
    if not np.any(values.imag):
        return [float(v) for v in values.real]
    return [io.complex_to_doc(v) for v in values]


def _int_list(doc, key, N=None):
    v = doc.get(key)
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise io.SchemaError(f"{key} must be a list of integers", key)
    if N is not None and len(v) != N:
        raise io.SchemaError(f"{key} must have N = {N} entries", key)
    if any(x < 0 for x in v):
        raise io.SchemaError(f"{key} entries must be nonnegative", key)
    return v


# handlers return (result, tolerances, ok, failure, csv_writer)


def _run_matrix(cfg):
    A = _matrix_of(_symbol_or_measure(cfg.doc), cfg.n)
    result = {
        "n": A.n,
        "provenance": A.provenance,
        "entries": [[io.complex_to_doc(z) for z in row] for row in A.entries],
    }
    return result, {}, True, None, lambda p: io.write_matrix_csv(p, A.entries)


def _run_eigs(cfg):
    if "radial" not in cfg.doc:
        raise io.SchemaError("eigs needs a radial profile", "radial")
    u = io.parse_coeffs(cfg.doc["radial"], "radial")
    seq = moments.eigenvalue_sequence(u, cfg.n)
    return {"n": seq.n, "values": _values_doc(seq.values)}, {}, True, None, None


def _run_rank(cfg):
    tol = cfg.tol if cfg.tol is not None else operators.DEFAULT_RANK_TOL
    A = _matrix_of(_symbol_or_measure(cfg.doc), cfg.n)
    rep = operators.numerical_rank(A, tol)
    result = {
        "n": A.n,
        "provenance": A.provenance,
        "rank": rep.rank,
        "singular_values": [float(s) for s in rep.singular_values],
    }
    ok, failure = True, None
    if "expect_rank" in cfg.doc:
        want = cfg.doc["expect_rank"]
        ok = rep.rank == want
        failure = None if ok else f"rank {rep.rank} != expected {want}"
    return result, {"rank": tol}, ok, failure, lambda p: io.write_vector_csv(
        p, rep.singular_values, "singular_value"
    )


def _run_zeroset(cfg):
    if "radial" not in cfg.doc:
        raise io.SchemaError("zeroset needs a radial profile", "radial")
    tol = cfg.tol if cfg.tol is not None else analysis.ZERO_TOL
    u = io.parse_coeffs(cfg.doc["radial"], "radial")
    try:
        rep = analysis.zero_set_report(moments.eigenvalue_sequence(u, cfg.n), tol)
    except analysis.ZeroSymbolError as exc:
        raise io.SchemaError(str(exc), "radial") from None
    result = {
        "scan_limit": rep.scan_limit,
        "indices": list(rep.indices),
        "muntz_partial_sum": rep.muntz_partial_sum,
        "muntz_partial_sum_float": float(rep.muntz_partial_sum),
    }
    ok, failure = True, None
    if "expect_indices" in cfg.doc:
        want = _int_list(cfg.doc, "expect_indices")
        ok = list(rep.indices) == sorted(want)
        failure = None if ok else f"indices {list(rep.indices)} != expected {sorted(want)}"
    return result, {"zero": tol}, ok, failure, None


def _det_args(cfg):
    N = cfg.doc.get("N")
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise io.SchemaError("N must be a positive integer", "N")
    nu = io.parse_measure(cfg.doc)
    return nu, N, _int_list(cfg.doc, "m", N), _int_list(cfg.doc, "k", N)


def _det_verdict(cfg, value, scale):
    atol = cfg.doc.get("atol", 1e-12 * max(1.0, scale))
    tolerances = {"atol": float(atol)}
    if "expect" not in cfg.doc:
        return tolerances, True, None
    want = io.parse_complex(cfg.doc["expect"], "expect")
    err = abs(value - want)
    ok = err <= atol
    return tolerances, ok, None if ok else f"|value - expect| = {err:.3e} exceeds atol"


def _run_detid(cfg):
    nu, N, m, k = _det_args(cfg)
    try:
        value, scale = analysis.determinant_identity(nu, N, m, k, return_scale=True)
    except analysis.TupleGuardError as exc:
        raise io.SchemaError(str(exc), "N") from None
    tolerances, ok, failure = _det_verdict(cfg, value, scale)
    result = {"value": io.complex_to_doc(value), "summand_scale": scale, "tuples": len(nu) ** N}
    return result, tolerances, ok, failure, None


def _run_feval(cfg):
    nu, N, m, k = _det_args(cfg)
    if "w" not in cfg.doc:
        raise io.SchemaError("feval needs w", "w")
    w = io.parse_complex(cfg.doc["w"], "w")
    try:
        value, scale = analysis.f_eval(nu, N, m, k, w, return_scale=True)
    except (analysis.TupleGuardError, analysis.OriginAtomError) as exc:
        raise io.SchemaError(str(exc), "atoms") from None
    except ValueError as exc:
        raise io.SchemaError(str(exc), "w") from None
    tolerances, ok, failure = _det_verdict(cfg, value, scale)
    bound = analysis.f_eval_bound(nu, N, m, k)
    result = {
        "value": io.complex_to_doc(value),
        "summand_scale": scale,
        "bound_C": bound,
        "scaled_modulus": abs(value) * nu.radius_bound ** (-2 * N * w.real),
    }
    return result, tolerances, ok, failure, None


def _run_triangular(cfg):
    f = io.parse_symbol(cfg.doc)
    if f.is_zero():
        raise io.SchemaError("triangular needs a nonzero symbol", io.SYMBOL_KEYS[0])
    n = cfg.n
    tol = cfg.tol if cfg.tol is not None else analysis.RESIDUAL_TOL
    M = f.top_mode
    if "k" in cfg.doc:
        ks = cfg.doc["k"]
        ks = [ks] if isinstance(ks, int) and not isinstance(ks, bool) else ks
        if not isinstance(ks, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in ks):
            raise io.SchemaError("k must be an integer or a list of integers", "k")
    else:
        ks = [k for k in range(max(0, 1 - M), n) if 1 <= k + M < n / 2]
    rows, ok, failure = [], True, None
    for k in ks:
        try:
            r = analysis.triangular_reconstruction(f, k, n)
        except analysis.HypothesisViolation as exc:
            rows.append({"k": k, "error": str(exc)})
            ok, failure = False, failure or str(exc)
            continue
        except ValueError as exc:
            raise io.SchemaError(str(exc), "k") from None
        rows.append({"k": k, "residual": r.residual, "leading_coefficient": io.complex_to_doc(r.leading_coefficient)})
        if not r.residual < tol:
            ok = False
            failure = failure or f"residual at k={k} is {r.residual:.3e}"
    return {"top_mode": M, "steps": rows}, {"residual": tol}, ok, failure, None


def _run_product(cfg):
    doc = cfg.doc
    for key in ("g", "f"):
        if not isinstance(doc.get(key, []), list):
            raise io.SchemaError(f"{key} must be a list of coefficient lists", key)
    g = [io.parse_coeffs(c, "g") for c in doc.get("g", [])]
    fl = [io.parse_coeffs(c, "f") for c in doc.get("f", [])]
    mid_doc = doc.get("f_mid", {"radial": [1]})
    if not isinstance(mid_doc, dict):
        raise io.SchemaError("f_mid must be a symbol object", "f_mid")
    f_mid = io.parse_symbol(mid_doc)
    kwargs = {}
    for key, name in (("tol", "tol"), ("zero_tol", "zero_tol"), ("residual_tol", "residual_tol")):
        if key in doc:
            kwargs[name] = doc[key]
    try:
        rep = analysis.product_rank_experiment(g, f_mid, fl, cfg.n, **kwargs)
    except analysis.ZeroSymbolError as exc:
        raise io.SchemaError(str(exc), "g") from None
    result = {
        "predicted_rank": rep.predicted_rank,
        "observed_rank": rep.observed_rank.rank,
        "singular_values": [float(s) for s in rep.observed_rank.singular_values],
        "zero_sets": rep.zero_sets,
        "kernel_indices": list(rep.kernel_indices),
        "residuals": rep.residuals,
        "notes": list(rep.notes),
    }
    failure = None
    if not rep.passed:
        bad = [k for k, v in rep.residuals.items() if not v < rep.tolerances[k]]
        if bad:
            failure = f"residual {bad[0]} = {rep.residuals[bad[0]]:.3e}"
        else:
            failure = f"observed rank {rep.observed_rank.rank} != predicted {rep.predicted_rank}"
    return result, rep.tolerances, rep.passed, failure, lambda p: io.write_vector_csv(
        p, rep.observed_rank.singular_values, "singular_value"
    )


HANDLERS = {
    "matrix": _run_matrix,
    "eigs": _run_eigs,
    "rank": _run_rank,
    "zeroset": _run_zeroset,
    "detid": _run_detid,
    "feval": _run_feval,
    "triangular": _run_triangular,
    "product": _run_product,
}


def _emit(stream, msg, error=False):
    if stream is None:
        stream = sys.stderr if error else sys.stdout
    print(msg, file=stream)


def run_config(path, kind=None, out=None, tol=None, n=None, stream=None):
    """Run one config file and write ``<stem>.<kind>.json`` (and CSV) into ``out``."""
    path = Path(path)
    try:
        cfg, text = load_config(path, kind, n, tol)
    except ConfigError as exc:
        _emit(stream, f"{path}:{exc.line}: {exc}", error=True)
        return EXIT_INPUT
    if cfg.kind == "verify":
        from .verify import verify_suite

        return EXIT_PASS if verify_suite(stream or sys.stdout) else EXIT_FAIL
    try:
        result, tolerances, ok, failure, csv_writer = HANDLERS[cfg.kind](cfg)
    except io.SchemaError as exc:
        _emit(stream, f"{path}:{_line_of(text, exc.key)}: {exc}", error=True)
        return EXIT_INPUT

    report = {
        "kind": cfg.kind,
        "config": {"kind": cfg.kind, **cfg.doc},
        "result": result,
        "tolerances": tolerances,
        "verdict": "pass" if ok else "fail",
    }
    out = Path(out) if out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{path.stem}.{cfg.kind}"
    (out / f"{stem}.json").write_text(io.dumps(report))
    if csv_writer is not None:
        csv_writer(out / f"{stem}.csv")
    if ok:
        _emit(stream, f"{cfg.kind}: pass -> {out / (stem + '.json')}")
        return EXIT_PASS
    _emit(stream, f"{cfg.kind}: FAIL ({failure}) -> {out / (stem + '.json')}")
    return EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bergman-toeplitz",
        description="Toeplitz truncations on the Bergman space and their rank checks.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind)
        p.add_argument("--config", type=Path, required=kind != "verify", help="JSON config document")
        p.add_argument("--out", type=Path, default=Path("."), help="report directory")
        p.add_argument("--tol", type=float, help="override the config tolerance")
        p.add_argument("--n", type=int, help="override the truncation size")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.kind == "verify" and args.config is None:
        from .verify import verify_suite

        return EXIT_PASS if verify_suite() else EXIT_FAIL
    return run_config(args.config, args.kind, args.out, args.tol, args.n)


if __name__ == "__main__":
    sys.exit(main())
