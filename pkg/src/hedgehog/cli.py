"""Command-line front end.

    hedgehog <command> [--input FILE] [--search-bound N] [--factor-bound N]

The payload is a JSON object read from ``--input`` or stdin.  The response is
a JSON object ``{"status", "result", "citations"}`` on stdout; the exit code is
0 for ok, 1 for unknown and 2 for error.
"""

from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import engine
from . import exactnum as en
from . import fields as fl
from . import gwring as gw
from . import quadform as qf
from .errors import HedgehogError

OK, UNKNOWN, ERROR = "ok", "unknown", "error"
EXIT_CODES = {OK: 0, UNKNOWN: 1, ERROR: 2}

# -- schemas ------------------------------------------------------------------

_SCALAR = {"type": ["string", "integer"]}
_ELEM = {
    "oneOf": [
        _SCALAR,
        {"type": "array", "items": _SCALAR, "minItems": 2, "maxItems": 2},
    ]
}
_FIELD = {
    "type": "object",
    "properties": {
        "kind": {"enum": list(fl.KINDS)},
        "p": {"type": "integer", "minimum": 2},
        "d": {"type": "integer", "minimum": 2},
    },
    "required": ["kind"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"enum": [fl.FP, fl.PADIC]}}}, "then": {"required": ["p"]}},
        {"if": {"properties": {"kind": {"const": fl.REALQUAD}}}, "then": {"required": ["d"]}},
    ],
}
_COEFFS = {"type": "array", "items": _ELEM, "minItems": 1}
_GW = {
    "type": "object",
    "properties": {"plus": {"type": "array", "items": _ELEM}, "minus": {"type": "array", "items": _ELEM}},
    "additionalProperties": False,
}
_CERT = {
    "type": "object",
    "properties": {
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"linear": {"type": "array", "items": _ELEM}, "constant": _ELEM},
                "required": ["linear"],
            },
        },
        "basis_change": {"type": "array", "items": {"type": "array", "items": _ELEM}},
    },
    "required": ["entries"],
}


def _obj(required, **props):
    return {"type": "object", "properties": {"field": _FIELD, **props}, "required": ["field", *required]}


SCHEMAS = {
    "decide": _obj(["coefficients"], coefficients={**_COEFFS, "minItems": 2}, point=_COEFFS),
    "sphere": _obj(["n"], n={"type": "integer", "minimum": 1}),
    "section": _obj(["coefficients"], coefficients={**_COEFFS, "minItems": 2}),
    "verify": _obj(["coefficients", "certificate"], coefficients={**_COEFFS, "minItems": 2}, certificate=_CERT),
    "isotropy": _obj(["coefficients"], coefficients=_COEFFS, vector={"type": "boolean"}),
    "represent": _obj(["coefficients", "value"], coefficients=_COEFFS, value=_ELEM),
    "invariants": _obj(["element"], element=_GW, compare=_GW),
    "transfer": _obj(
        ["alpha", "element"],
        alpha=_ELEM,
        functional={"enum": [gw.TRACE, gw.S_ONE]},
        element=_GW,
        compare=_GW,
    ),
    "euler": _obj(["n", "coefficients"], n={"type": "integer", "minimum": 1}, coefficients=_COEFFS),
    "level": _obj([]),
    "ideal": _obj(["target", "generators"], target=_GW, generators={"type": "array", "items": _GW}),
    "quotient": _obj(["generators"], generators={"type": "array", "items": _GW}),
}


# -- handlers -----------------------------------------------------------------
# each returns (status, result, citations)


def _problem(k, payload):
    return engine.QuadricProblem(k, payload["coefficients"], payload.get("point"))


def _decision_response(d: engine.Decision):
    status = UNKNOWN if d.verdict == engine.UNKNOWN else OK
    return status, d.to_json(), list(d.citations)


def _decide(k, payload, opts):
    return _decision_response(engine.decide_section(_problem(k, payload), opts.search_bound))


def _sphere(k, payload, opts):
    return _decision_response(engine.sphere_decision(k, payload["n"]))


def _section(k, payload, opts):
    pr = _problem(k, payload)
    if pr.n % 2:
        cert, tag = engine.section_odd(k, pr.coefficients), engine.ODD_PAIRING
    else:
        cert, tag = engine.section_isotropic(pr, opts.search_bound), engine.ISOTROPIC_SPLIT
    return OK, {"certificate": cert.to_json(), "valid": engine.verify_section(pr, cert)}, [tag]


def _verify(k, payload, opts):
    pr = _problem(k, payload)
    cert = engine.SectionCertificate.from_json(k, payload["certificate"])
    return OK, {"valid": engine.verify_section(pr, cert)}, []


def _isotropy(k, payload, opts):
    q = qf.DiagonalForm(k, payload["coefficients"])
    iso = qf.is_isotropic(q)
    out = {"isotropic": iso}
    if iso and payload.get("vector"):
        v = qf.find_isotropic_vector(q, opts.search_bound)
        out["vector"] = [k.elem_json(x) for x in v]
    return OK, out, []


def _represent(k, payload, opts):
    q = qf.DiagonalForm(k, payload["coefficients"])
    return OK, {"represents": qf.represents(q, payload["value"])}, []


def _invariants(k, payload, opts):
    x = gw.GWElem.from_json(k, payload["element"])
    out = {"invariants": gw.invariants_of(x).to_json()}
    if "compare" in payload:
        out["equal"] = gw.gw_equal(x, gw.GWElem.from_json(k, payload["compare"]))
    return OK, out, []


def _transfer(k, payload, opts):
    ext = gw.QuadExtension(k, payload["alpha"], payload.get("functional", gw.TRACE))
    x = gw.GWElem.from_json(ext, payload["element"])
    t = gw.scharlau_transfer(ext, x)
    out = {"transfer": t.to_json()}
    if "compare" in payload:
        out["equal"] = gw.gw_equal(t, gw.GWElem.from_json(k, payload["compare"]))
    return OK, out, []


def _euler(k, payload, opts):
    chi = gw.euler_characteristic(k, payload["n"], payload["coefficients"])
    return OK, {"euler_characteristic": chi.to_json(), "invariants": gw.invariants_of(chi).to_json()}, []


def _level(k, payload, opts):
    s = fl.level(k)
    return OK, {"level": "inf" if s == fl.INFINITE else s}, []


def _ideal(k, payload, opts):
    gens = [gw.GWElem.from_json(k, g) for g in payload["generators"]]
    target = gw.GWElem.from_json(k, payload["target"])
    return OK, {"member": gw.ideal_membership(target, gens)}, []


def _quotient(k, payload, opts):
    gens = [gw.GWElem.from_json(k, g) for g in payload["generators"]]
    return OK, gw.quotient_by_even_ideal(gens, k), []


HANDLERS = {
    "decide": _decide,
    "sphere": _sphere,
    "section": _section,
    "verify": _verify,
    "isotropy": _isotropy,
    "represent": _represent,
    "invariants": _invariants,
    "transfer": _transfer,
    "euler": _euler,
    "level": _level,
    "ideal": _ideal,
    "quotient": _quotient,
}


# -- driver -------------------------------------------------------------------


def _error(kind: str, message: str, **extra):
    return ERROR, {"kind": kind, "message": message, **extra}, []


def _json_path(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def handle(command: str, payload, search_bound: int = qf.DEFAULT_SEARCH_BOUND,
           factor_bound: int = en.DEFAULT_FACTOR_BOUND):
    """Validate and dispatch one request; returns ``(status, result, citations)``."""
    if command not in HANDLERS:
        return _error("unknown_command", f"unknown command {command!r}")
    try:
        jsonschema.validate(payload, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        return _error("schema", exc.message, path=_json_path(exc.absolute_path))
    opts = argparse.Namespace(search_bound=search_bound, factor_bound=factor_bound)
    try:
        with en.factor_bound(factor_bound):
            k = fl.FieldDescriptor.from_json(payload["field"])
            return HANDLERS[command](k, payload, opts)
    except (HedgehogError, en.FactorBoundExceeded) as exc:
        return _error(exc.kind, str(exc))
    except (ValueError, ZeroDivisionError) as exc:
        return _error("invalid_input", str(exc))


def render(status, result, citations) -> str:
    body = {"status": status, "result": result, "citations": citations}
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def run(argv, stdin=None):
    """Run one request; returns ``(stdout_text, exit_code)``."""
    parser = argparse.ArgumentParser(prog="hedgehog", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(HANDLERS))
    parser.add_argument("--input", help="JSON payload file (default: stdin)")
    parser.add_argument("--search-bound", type=int, default=qf.DEFAULT_SEARCH_BOUND)
    parser.add_argument("--factor-bound", type=int, default=en.DEFAULT_FACTOR_BOUND)
    args = parser.parse_args(argv)

    try:
        if args.input:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = (stdin if stdin is not None else sys.stdin).read()
        payload = json.loads(text)
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        status, result, cites = _error("invalid_json", str(exc))
    else:
        if args.search_bound < 1 or args.factor_bound < 2:
            status, result, cites = _error("invalid_input", "bounds must be positive")
        else:
            status, result, cites = handle(command=args.command, payload=payload,
                                           search_bound=args.search_bound, factor_bound=args.factor_bound)
    return render(status, result, cites), EXIT_CODES[status]


def main(argv=None) -> int:
    out, code = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
