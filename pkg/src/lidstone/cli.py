"""Batch front-end: ``lidstone job.json [--out report.json] [--csv DIR]``.

A job is a JSON object naming a ``command`` (basis, delta, expand,
gontcharoff, classify) plus the inputs it needs.  Reports are canonical
JSON (sorted keys, two-space indent), so repeated runs are byte-identical.

Exit codes: 0 success, 2 malformed job, 3 mathematical precondition
failure, 4 numerical or internal failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from fractions import Fraction

import jsonschema

from .basis import BasisTable, NodeSystem, theta_bound
from .detector import (
    IntegralityConfig,
    Verdict,
    classify_periodic,
    classify_products,
    classify_sequence,
)
from .errors import NumericalError, PreconditionError
from .expansion import expand_periodic
from .functions import (
    Combination,
    Cos,
    Cosh,
    CosPi,
    EntireFunction,
    Exp,
    Expm1OverZ,
    PolyFunction,
    Sin,
    Sinh,
    SinPi,
)
from .gontcharoff import NodeSequence, OmegaTable, expand_gontcharoff
from .kernel import DEFAULT_SAMPLES, DEFAULT_SEARCH_RADIUS, KernelSystem, zero_free_radius
from .poly import Polynomial, format_polynomial
from .scalars import format_exact, gaussian, is_exact, parse_exact

EXIT_OK, EXIT_SCHEMA, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 2, 3, 4

_SCALAR = {
    "oneOf": [
        {"type": "string"},
        {"type": "number"},
        {"type": "object", "required": ["re", "im"], "additionalProperties": False,
         "properties": {"re": {"type": ["string", "number"]},
                        "im": {"type": ["string", "number"]}}},
    ]
}
_NODES = {
    "type": "object", "required": ["s", "r"], "additionalProperties": False,
    "properties": {"s": {"type": "array", "minItems": 1, "items": _SCALAR},
                   "r": {"type": "array", "minItems": 1,
                         "items": {"type": "integer", "minimum": 0}}},
}
_SEQUENCE = {
    "type": "object", "required": ["rule", "values"], "additionalProperties": False,
    "properties": {"rule": {"enum": ["explicit", "periodic", "arithmetic"]},
                   "values": {"type": "array", "minItems": 1, "items": _SCALAR},
                   "tail": _SCALAR,
                   "A": {"type": "number", "exclusiveMinimum": 0}},
}
_FUNCTION = {
    "type": "object", "required": ["kind"], "additionalProperties": False,
    "properties": {
        "kind": {"enum": ["polynomial", "exp", "sin", "cos", "sinh", "cosh", "sin_pi",
                          "cos_pi", "expm1_over_z", "combination"]},
        "params": {"type": "object"},
    },
}
_CONFIG = {
    "type": "object", "additionalProperties": False,
    "properties": {"n_max": {"type": "integer", "minimum": 1},
                   "int_tol": {"type": "number"},
                   "zero_tol": {"type": "number"}},
}

JOB_SCHEMA = {
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": ["basis", "delta", "expand", "gontcharoff", "classify"]},
        "nodes": _NODES,
        "sequence": _SEQUENCE,
        "function": _FUNCTION,
        "config": _CONFIG,
        "N": {"type": "integer", "minimum": 0},
        "search_radius": {"type": "number", "exclusiveMinimum": 0},
        "samples": {"type": "integer", "minimum": 16},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "A": {"type": "number", "minimum": 0},
        "points": {"type": "array", "items": _SCALAR},
        "mode": {"enum": ["periodic", "sequence", "products"]},
        "s": {"type": "array", "minItems": 1, "items": _SCALAR},
        "subsets": {"type": "array", "minItems": 1,
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "theta": {"type": "boolean"},
    },
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"command": {"enum": ["basis", "delta"]}}},
         "then": {"required": ["nodes"]}},
        {"if": {"properties": {"command": {"const": "expand"}}},
         "then": {"required": ["nodes", "function", "N"]}},
        {"if": {"properties": {"command": {"const": "gontcharoff"}}},
         "then": {"required": ["sequence", "N"]}},
        {"if": {"properties": {"command": {"const": "classify"}}},
         "then": {"required": ["function"]}},
    ],
}


class JobError(ValueError):
    """The job file is malformed beyond what the schema catches."""


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_PI = re.compile(r"^\s*(?P<c>[+-]?\s*\d*(?:\.\d+)?(?:/\d+)?)?\s*\*?\s*pi\s*(?:/\s*(?P<d>\d+))?\s*$")


def exact_value(x):
    """Exact scalar from an int, decimal number, rational string or {re, im}."""
    try:
        if isinstance(x, dict):
            return gaussian(Fraction(exact_value(x["re"])), Fraction(exact_value(x["im"])))
        if isinstance(x, bool):
            raise JobError("booleans are not scalars")
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, float):
            return Fraction(repr(x))
        return parse_exact(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise JobError(f"not an exact scalar: {x!r}") from exc


def approx_value(x) -> complex:
    """Like :func:`exact_value` but also accepting multiples of pi such as ``"pi/2"``."""
    if isinstance(x, dict):
        return complex(approx_value(x["re"]).real, approx_value(x["im"]).real)
    if isinstance(x, str):
        m = _PI.match(x)
        if m:
            c = (m.group("c") or "").replace(" ", "")
            coef = float(Fraction(c)) if c not in ("", "+", "-") else (-1.0 if c == "-" else 1.0)
            return complex(coef * math.pi / int(m.group("d") or 1))
    return complex(exact_value(x))


def parse_nodes(obj) -> NodeSystem:
    if len(obj["s"]) != len(obj["r"]):
        raise JobError("nodes.s and nodes.r must have equal length")
    try:
        return NodeSystem(tuple(exact_value(v) for v in obj["s"]), tuple(obj["r"]))
    except ValueError as exc:
        raise JobError(str(exc)) from exc


def parse_sequence(obj) -> NodeSequence:
    vals = tuple(exact_value(v) for v in obj["values"])
    tail = exact_value(obj["tail"]) if "tail" in obj else None
    try:
        return NodeSequence(obj["rule"], vals, tail, obj.get("A"))
    except ValueError as exc:
        raise JobError(str(exc)) from exc


def parse_function(obj) -> EntireFunction:
    kind, p = obj["kind"], obj.get("params", {})
    try:
        if kind == "polynomial":
            coeffs = p.get("coeffs", [])
            try:
                return PolyFunction(Polynomial(exact_value(c) for c in coeffs))
            except JobError:
                return PolyFunction(Polynomial(approx_value(c) for c in coeffs))
        if kind == "combination":
            terms = p.get("terms")
            if not isinstance(terms, list) or not terms:
                raise JobError("combination needs a nonempty list of terms")
            return Combination(tuple((approx_value(t.get("weight", 1)), parse_function(t["function"]))
                                     for t in terms))
        if kind == "expm1_over_z":
            return Expm1OverZ(approx_value(p.get("a", 1)))
        if kind in ("sin_pi", "cos_pi"):
            a, b = approx_value(p.get("a", 1)), approx_value(p.get("b", 0))
            if a.imag or b.imag:
                raise JobError(f"{kind} takes real a and b")
            return (SinPi if kind == "sin_pi" else CosPi)(a.real, b.real)
        cls = {"exp": Exp, "sin": Sin, "cos": Cos, "sinh": Sinh, "cosh": Cosh}[kind]
        return cls(approx_value(p.get("a", 1)), approx_value(p.get("b", 0)))
    except (KeyError, TypeError, AttributeError) as exc:
        raise JobError(f"bad parameters for function kind {kind!r}") from exc
    except ValueError as exc:
        raise JobError(str(exc)) from exc


def parse_config(obj) -> IntegralityConfig:
    try:
        return IntegralityConfig(**(obj or {}))
    except ValueError as exc:
        raise JobError(str(exc)) from exc


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def fmt_complex(z) -> dict:
    z = complex(z)
    return {"re": fmt_real(z.real), "im": fmt_real(z.imag)}


def fmt_scalar(x):
    return format_exact(x) if is_exact(x) else fmt_complex(x)


def fmt_poly(p: Polynomial) -> dict:
    return {"text": format_polynomial(p) if p.is_exact else "approximate",
            "coeffs": [fmt_scalar(c) for c in p.coeffs]}


def _num(x):
    # finite floats stay JSON numbers; the rest become strings
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _nodes_report(nodes: NodeSystem) -> dict:
    return {"s": [format_exact(v) for v in nodes.s], "r": list(nodes.r)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, complex):
        return fmt_complex(obj)
    if isinstance(obj, Polynomial):
        return fmt_poly(obj)
    if is_exact(obj):
        return format_exact(obj)
    return str(obj)


def verdict_report(v: Verdict) -> dict:
    return {
        "outcome": v.outcome,
        "reason": v.reason,
        "detail": v.detail,
        "n_cutoff": v.n_cutoff,
        "certificate": fmt_poly(v.certificate) if v.certificate is not None else None,
        "evidence": _jsonable(v.evidence),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_basis(job, csv_dir):
    nodes = parse_nodes(job["nodes"])
    N = job.get("N", 2)
    out = {"command": "basis", "nodes": _nodes_report(nodes), "D": format_exact(nodes.D),
           "admissible": nodes.admissible}
    table = BasisTable(nodes).extend(N)
    out["lambda"] = [{"n": n, "j": j, "poly": fmt_poly(table[n, j])}
                     for n in range(N + 1) for j in range(nodes.m)]
    if job.get("theta", False):
        tb = theta_bound(nodes)
        out["theta"] = {"theta": tb.theta, "B": tb.B, "A": tb.A}
    return out


def cmd_delta(job, csv_dir):
    nodes = parse_nodes(job["nodes"])
    prof = zero_free_radius(KernelSystem(nodes), job.get("search_radius", DEFAULT_SEARCH_RADIUS),
                            job.get("samples", DEFAULT_SAMPLES))
    return {"command": "delta", "nodes": _nodes_report(nodes),
            "origin_order": prof.origin_order, "zero_free_radius": prof.zero_free_radius,
            "search_radius": prof.search_radius, "contour_samples": prof.contour_samples,
            "theta_floor": prof.theta_floor}


def cmd_expand(job, csv_dir):
    nodes = parse_nodes(job["nodes"])
    f = parse_function(job["function"])
    N = job["N"]
    res = expand_periodic(f, nodes, N, search_radius=job.get("search_radius"))
    m = nodes.m
    out = {"command": "expand", "nodes": _nodes_report(nodes), "N": N,
           "type": res.tau_f, "zero_free_radius": res.tau_hat, "rho": res.rho,
           "rho_f": res.rho_f, "C": res.C,
           "coeffs": [[fmt_complex(res.coeffs[n, j]) for j in range(m)] for n in range(N + 1)],
           "partial_sum": fmt_poly(res.partial_sum)}
    if res.exact_partial_sum is not None:
        out["exact_partial_sum"] = fmt_poly(res.exact_partial_sum)
    evals = []
    for p in job.get("points", []):
        z = approx_value(p)
        fz, sz = f(z), res(z)
        evals.append({"z": fmt_complex(z), "f": fmt_complex(fz), "partial_sum": fmt_complex(sz),
                      "error": fmt_real(abs(fz - sz)),
                      "remainder_bound": fmt_real(res.remainder_bound(z))})
    out["evaluations"] = evals
    if csv_dir:
        _write_csv(os.path.join(csv_dir, "coefficients.csv"), ["n", "j", "re", "im"],
                   [[n, j, fmt_real(res.coeffs[n, j].real), fmt_real(res.coeffs[n, j].imag)]
                    for n in range(N + 1) for j in range(m)])
        _write_csv(os.path.join(csv_dir, "partial_sums.csv"),
                   ["z_re", "z_im", "f_re", "f_im", "sum_re", "sum_im", "error", "bound"],
                   [[e["z"]["re"], e["z"]["im"], e["f"]["re"], e["f"]["im"],
                     e["partial_sum"]["re"], e["partial_sum"]["im"], e["error"],
                     e["remainder_bound"]] for e in evals])
    return out


def cmd_gontcharoff(job, csv_dir):
    seq = parse_sequence(job["sequence"])
    N = job["N"]
    table = OmegaTable(seq).extend(N)
    out = {"command": "gontcharoff", "N": N, "rule": seq.rule,
           "values": [format_exact(v) for v in seq.values],
           "A": _num(seq.A), "omega": [{"n": n, "poly": fmt_poly(table[n])} for n in range(N + 1)]}
    if "function" in job:
        f = parse_function(job["function"])
        r = job.get("radius", seq.A)
        res = expand_gontcharoff(f, seq, r, N)
        out["expansion"] = {"radius": res.r, "type": res.tau_f, "tail_bound": _num(res.tail_bound),
                            "coeffs": [fmt_complex(c) for c in res.coeffs],
                            "partial_sum": fmt_poly(res.partial_sum)}
        if res.exact_partial_sum is not None:
            out["expansion"]["exact_partial_sum"] = fmt_poly(res.exact_partial_sum)
        if csv_dir:
            _write_csv(os.path.join(csv_dir, "coefficients.csv"), ["n", "w_n", "re", "im"],
                       [[n, format_exact(seq(n)), fmt_real(c.real), fmt_real(c.imag)]
                        for n, c in enumerate(res.coeffs)])
    return out


def cmd_classify(job, csv_dir):
    f = parse_function(job["function"])
    cfg = parse_config(job.get("config"))
    mode = job.get("mode")
    if mode is None:
        mode = "periodic" if "nodes" in job else "sequence" if "sequence" in job else "products"
    out = {"command": "classify", "mode": mode}
    if mode == "periodic":
        if "nodes" not in job:
            raise JobError("periodic classification needs nodes")
        nodes = parse_nodes(job["nodes"])
        out["nodes"] = _nodes_report(nodes)
        v = classify_periodic(f, nodes, cfg, A=job.get("A"), search_radius=job.get("search_radius"))
    elif mode == "sequence":
        if "sequence" not in job:
            raise JobError("sequence classification needs a sequence")
        v = classify_sequence(f, parse_sequence(job["sequence"]), cfg)
    else:
        if "s" not in job or "subsets" not in job or "A" not in job:
            raise JobError("product classification needs s, subsets and A")
        s = [exact_value(x) for x in job["s"]]
        v = classify_products(f, s, job["subsets"], job["A"], cfg)
    out["verdict"] = verdict_report(v)
    return out


COMMANDS = {"basis": cmd_basis, "delta": cmd_delta, "expand": cmd_expand,
            "gontcharoff": cmd_gontcharoff, "classify": cmd_classify}


def run(job, csv_dir=None) -> tuple:
    """Validate and execute a job; returns ``(report, exit_code)``."""
    try:
        jsonschema.validate(job, JOB_SCHEMA)
    except jsonschema.ValidationError as exc:
        return _error("SchemaError", exc.message, EXIT_SCHEMA), EXIT_SCHEMA
    try:
        report = COMMANDS[job["command"]](job, csv_dir)
        return _jsonable(report), EXIT_OK
    except JobError as exc:
        return _error("JobError", str(exc), EXIT_SCHEMA), EXIT_SCHEMA
    except PreconditionError as exc:
        return _error(type(exc).__name__, str(exc), EXIT_PRECONDITION), EXIT_PRECONDITION
    except NumericalError as exc:
        return _error(type(exc).__name__, str(exc), EXIT_NUMERICAL), EXIT_NUMERICAL
    except Exception as exc:  # noqa: BLE001  any other failure is internal
        return _error(type(exc).__name__, str(exc), EXIT_NUMERICAL), EXIT_NUMERICAL


def _error(kind, message, code) -> dict:
    return {"error": {"type": kind, "message": message, "exit_code": code}}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="lidstone", description=__doc__.splitlines()[0])
    ap.add_argument("job", help="job file, or - for stdin")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--csv", metavar="DIR", help="also write series tables as CSV into DIR")
    args = ap.parse_args(argv)
    try:
        text = sys.stdin.read() if args.job == "-" else open(args.job).read()
        job = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        report, code = _error(type(exc).__name__, str(exc), EXIT_SCHEMA), EXIT_SCHEMA
    else:
        if args.csv:
            os.makedirs(args.csv, exist_ok=True)
        report, code = run(job, args.csv)
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        print(f"lidstone: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
