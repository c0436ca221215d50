"""Command-line front end: `factorium <command> ...`.

Exit codes: 0 success, 1 some answer is unknown or undetermined, 2 malformed
input or failed hypothesis, 3 missing registry fact, 4 precision cap exceeded.
"""

from __future__ import annotations

import argparse
from fractions import Fraction
import json
import os
import sys

from . import __version__
from .errors import (
    HypothesisError, MagnitudeOverflow, MissingFactError, PrecisionCapExceeded, RegistryError, SpecError,
)
from .exactnum import DEFAULT_PRECISION
from .products import RULES, classify, s_invariant, t_member, t_series_diagnose
from .qlinear import ConstantRegistry, ParseError, parse_expr
from .scaling import distinctness_certificate, symmetric_ttau_vs_T
from .sets import Undetermined
from .specfile import load_registry, load_spec
from .spectra import nested_truncation_check, spec_limit, spec_spectra, truncated_product_spectrum
from .type3zero import criterion_s_prime, lemma_asymptotic_check

EXIT_OK, EXIT_UNKNOWN, EXIT_SCHEMA, EXIT_FACT, EXIT_PRECISION = 0, 1, 2, 3, 4
MIN_III0_PRECISION = 64


class UsageError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)


def _rules_used(certs):
    return {c.rule: RULES[c.rule] for c in certs if c.rule in RULES}


def _registry(args) -> ConstantRegistry:
    path = args.facts or os.environ.get("FACTORIUM_FACTS")
    return load_registry(path) if path else ConstantRegistry()


def _spec(path, args):
    spec = load_spec(path, _registry(args))
    if spec.family is not None and args.precision < MIN_III0_PRECISION:
        raise UsageError(f"--precision must be at least {MIN_III0_PRECISION} bits for type III_0 constructions")
    return spec


def _fraction(text, what):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{what} must be a rational p/q, got {text!r}") from None


# -- commands ----------------------------------------------------------------------------

def cmd_classify(args):
    out, status = [], EXIT_OK
    for path in args.specs:
        spec = _spec(path, args)
        rep = classify(spec)
        body = rep.to_json()
        body["spec"] = spec.to_json()
        body["source"] = os.path.basename(path)
        body["rules"] = _rules_used(rep.certificates)
        body["ttau_vs_T"] = symmetric_ttau_vs_T(rep, spec.registry).to_json()
        if isinstance(rep.s_invariant, Undetermined) or rep.factor_type in ("III", "undetermined"):
            status = EXIT_UNKNOWN
        out.append(body)
    return (out[0] if len(out) == 1 else out), status


def cmd_t_member(args):
    spec = _spec(args.spec, args)
    try:
        t = parse_expr(args.t)
    except (ParseError, ValueError) as exc:
        raise UsageError(f"bad --t expression: {exc}") from None
    ans = t_member(spec, t)
    body = ans.to_json()
    body["t"] = str(t)
    body["rules"] = _rules_used(ans.certificates)
    return body, EXIT_UNKNOWN if ans.unknown else EXIT_OK


def cmd_s_invariant(args):
    spec = _spec(args.spec, args)
    s = s_invariant(spec)
    return {"s_invariant": s.to_json()}, EXIT_UNKNOWN if isinstance(s, Undetermined) else EXIT_OK


def cmd_invariants(args):
    spec = _spec(args.spec, args)
    inv = classify(spec).invariants
    undetermined = any(isinstance(d.value, Undetermined) for _, d in inv.components())
    return {"invariants": inv.to_json()}, EXIT_UNKNOWN if undetermined else EXIT_OK


def cmd_distinguish(args):
    if len(args.specs) < 2:
        raise UsageError("distinguish needs at least two spec files")
    specs = [_spec(p, args) for p in args.specs]
    reg = specs[0].registry
    for s in specs[1:]:
        reg = reg.merged(s.registry)
    triples = [classify(s).invariants for s in specs]
    pairs = distinctness_certificate(triples, reg)
    body = {"specs": [os.path.basename(p) for p in args.specs], "pairs": [p.to_json() for p in pairs]}
    return body, EXIT_OK if all(p.distinct for p in pairs) else EXIT_UNKNOWN


def cmd_verify(args):
    if args.precision < MIN_III0_PRECISION:
        raise UsageError(f"--precision must be at least {MIN_III0_PRECISION} bits for type III_0 commands")
    s = _fraction(args.s, "--s")
    if args.what == "lemma-frac":
        if args.kmin < 1 or args.kmax < args.kmin:
            raise UsageError("need 1 <= kmin <= kmax")
        rep = lemma_asymptotic_check(s, range(args.kmin, args.kmax + 1), precision=args.precision)
        return rep.to_json(), EXIT_OK if rep.verdict else EXIT_UNKNOWN
    if args.sprime is None:
        raise UsageError("verify criterion needs --sprime")
    rep = criterion_s_prime(s, _fraction(args.sprime, "--sprime"), terms=args.terms, precision=args.precision)
    return rep.to_json(), EXIT_OK


def cmd_series(args):
    spec = _spec(args.spec, args)
    try:
        t = parse_expr(args.t)
    except (ParseError, ValueError) as exc:
        raise UsageError(f"bad --t expression: {exc}") from None
    rep = t_series_diagnose(spec, t, args.terms, precision=args.precision,
                            threshold=None if args.threshold is None else _fraction(args.threshold, "--threshold"))
    body = rep.to_json()
    body["t"] = str(t)
    return body, EXIT_OK


def cmd_spectra(args):
    spec = _spec(args.spec, args)
    if args.truncate < 1:
        raise UsageError("--truncate must be >= 1")
    factors = spec_spectra(spec, args.truncate, args.window)
    sp = truncated_product_spectrum(factors)
    body = {"truncate": args.truncate, "window": args.window, "spectrum": sp.to_json(spec.registry)}
    status = EXIT_OK
    try:
        limit = spec_limit(spec)
    except ValueError as exc:
        body["limit"] = {"undetermined": str(exc)}
        status = EXIT_UNKNOWN
    else:
        body["limit"] = limit.to_json()
        body["nesting"] = nested_truncation_check(factors, args.truncate, limit).to_json()
        if limit.kind == "unknown":
            status = EXIT_UNKNOWN
    return body, status


# -- table view ----------------------------------------------------------------------------

def _table(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "(none)"
    return str(v)


# -- argument parsing ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="working precision in bits")
    common.add_argument("--format", choices=("table", "json"), default="json")
    common.add_argument("--facts", help="registry JSON with constants and independence facts")

    p = argparse.ArgumentParser(prog="factorium", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"factorium {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="type, injectivity, S and T")
    c.add_argument("specs", nargs="+")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("t-member", parents=[common], help="decide t in T")
    c.add_argument("spec")
    c.add_argument("--t", required=True)
    c.set_defaults(func=cmd_t_member)

    c = sub.add_parser("s-invariant", parents=[common], help="S via the modular spectrum rule")
    c.add_argument("spec")
    c.set_defaults(func=cmd_s_invariant)

    c = sub.add_parser("invariants", parents=[common], help="scaling invariants T^tau, T^tau_Inn, T^tau_AInn")
    c.add_argument("spec")
    c.set_defaults(func=cmd_invariants)

    c = sub.add_parser("distinguish", parents=[common], help="certify pairwise non-isomorphism")
    c.add_argument("specs", nargs="+")
    c.set_defaults(func=cmd_distinguish)

    c = sub.add_parser("verify", parents=[common], help="type III_0 numerics")
    c.add_argument("what", choices=("lemma-frac", "criterion"))
    c.add_argument("--s", required=True)
    c.add_argument("--sprime")
    c.add_argument("--kmin", type=int, default=5)
    c.add_argument("--kmax", type=int, default=30)
    c.add_argument("--terms", type=int, default=10)
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("series", parents=[common], help="certified partial sums of the T-series")
    c.add_argument("spec")
    c.add_argument("--t", required=True)
    c.add_argument("--terms", type=int, default=100)
    c.add_argument("--threshold")
    c.set_defaults(func=cmd_series)

    c = sub.add_parser("spectra", parents=[common], help="truncated modular spectra and their closure")
    c.add_argument("spec")
    c.add_argument("--truncate", type=int, default=2)
    c.add_argument("--window", type=int, default=1)
    c.set_defaults(func=cmd_spectra)
    return p


def _emit(obj, fmt, stream):
    if fmt == "json":
        stream.write(dumps(obj) + "\n")
    else:
        stream.write("\n".join(_table(obj)) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format
    try:
        body, status = args.func(args)
    except (SpecError, UsageError, HypothesisError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "pointer", None) is not None:
            err["pointer"] = exc.pointer
        if isinstance(exc, HypothesisError):
            err["hypothesis"] = exc.hypothesis
        body, status = err, EXIT_SCHEMA
    except (MissingFactError, RegistryError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "fact", ""):
            err["fact"] = exc.fact
        body, status = err, EXIT_FACT
    except (PrecisionCapExceeded, MagnitudeOverflow) as exc:
        body, status = {"error": type(exc).__name__, "message": str(exc)}, EXIT_PRECISION
    except (ValueError, OSError) as exc:
        body, status = {"error": type(exc).__name__, "message": str(exc)}, EXIT_SCHEMA
    if "error" in body:
        sys.stderr.write(f"factorium: {body['message']}\n")
    _emit(body, fmt, sys.stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
