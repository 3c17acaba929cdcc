"""Command-line interface.

Every verb prints one JSON document (``schemaVersion`` 1, sorted keys) or a
plain-text rendering of it.  Exit codes: 0 for NotFalsified or success, 2 for
Falsified, 1 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .domains import parse_domain
from .errors import SignLabError
from .numeric import DEFAULT_TOL
from .reports import SCHEMA_VERSION, dumps, replay
from .verifier import DEFAULT_BUDGET, DEFAULT_SEED

EXIT_OK, EXIT_ERROR, EXIT_FALSIFIED = 0, 1, 2

GRAMMAR_HELP = """\
function syntax (--fn):
  builtin:power-sign:ALPHA:BETA   alpha sgn(x)|x|^beta on the reals
  builtin:scaled-identity:ALPHA   builtin:scaled-conjugate:ALPHA
  builtin:affine:C:D              builtin:fh-power:BETA
  builtin:irregular:ALPHA:BETA:SEED
  builtin:absolutely-monotonic:M,K,C;M,K,C;...
  or an expression in z: numbers (2, 1.5e-3, 2i), + - * /, unary -,
  conj(z) abs(z) re(z) im(z) sgn(z) pow(base, exponent)
domain syntax (--domain):
  real-line | complex-plane | positive-reals | nonneg-reals
  annulus:LO:HI | interval:LO:HI | inline JSON {"pieces": [...]}
graph syntax (--graph): a file or text with 'n' then 'i j' lines, JSON
  {"n": .., "edges": [[i, j], ...]}, or path:N | cycle:N | star:K | complete:N
"""


@dataclass(frozen=True)
class RunConfig:
    """Options shared by the verification verbs, with their defaults."""

    verb: str
    fn: str | None = None
    domain: str = "real-line"
    n: int = 3
    mode: str = "pd"
    budget: int = DEFAULT_BUDGET
    seed: int = DEFAULT_SEED
    tolerance: float = DEFAULT_TOL
    workers: int = 1
    output: str | None = None
    format: str = "json"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n\n{GRAMMAR_HELP}")
        raise SystemExit(EXIT_ERROR)


def _int(text: str) -> int:
    return int(text, 0)


def _common(p, fn=True, domain=True, n=True, mode=True):
    if fn:
        p.add_argument("--fn", help="function spec, see the grammar below")
    if domain:
        p.add_argument("--domain", default="real-line")
    if n:
        p.add_argument("--n", type=int, default=3)
    if mode:
        p.add_argument("--mode", choices=("pd", "psd"), default="pd")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--seed", type=_int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--workers", type=int, default=1)
    _output(p)


def _output(p):
    p.add_argument("--output", "-o", help="write the report to this file as well")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--json", dest="format", action="store_const", const="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="signlab", description="Entrywise sign-preserver laboratory.",
                     epilog=GRAMMAR_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="search for a counterexample in fixed dimension")
    _common(p)
    p.add_argument("--variant", choices=("plain", "injective"), default="plain")
    p.add_argument("--replay", metavar="REPORT", help="re-execute a stored Falsified report")

    p = sub.add_parser("graph-verify", help="search on graph-patterned matrices")
    _common(p, n=False)
    p.add_argument("--graph", required=True)

    p = sub.add_parser("witness", help="build a named construction")
    p.add_argument("name")
    p.add_argument("--params", default="", help="k=v,k=v; vectors as 1;2;3")
    _output(p)

    p = sub.add_parser("classify", help="fit alpha |x|^beta and measure residuals")
    p.add_argument("--fn", required=True)
    p.add_argument("--domain", default="real-line")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=_int, default=DEFAULT_SEED)
    _output(p)

    p = sub.add_parser("monotone", help="Loewner-order test on nonnegative PSD pairs")
    _common(p, domain=False, mode=False)
    p.add_argument("--order", choices=("psd", "pd", "both"), default="both")

    p = sub.add_parser("fq-enumerate", help="exhaustive sign preservers over F_q")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--modulus", help="monic quadratic coefficients c0,c1,1 (k=2)")
    p.add_argument("--workers", type=int, default=1)
    _output(p)

    p = sub.add_parser("domain-flags", help="structural flags of a domain")
    p.add_argument("--domain", required=True)
    _output(p)
    return parser


# ------------------------------------------------------------ params


def _value(text: str):
    t = text.strip()
    for conv in (int, float):
        try:
            return conv(t)
        except ValueError:
            pass
    try:
        return complex(t.replace("i", "j")) if any(c in t for c in "ij") else t
    except ValueError:
        return t


def parse_params(text: str) -> dict:
    """``k=v,k=v`` with numbers, complex numbers (``1+2i``) or strings as values."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise SignLabError(f"bad parameter {item!r}; expected key=value")
        out[key.strip()] = _value(val)
    return out


# ------------------------------------------------------------ verbs


def _require_fn(args):
    from .transforms import fn_from_spec

    if not args.fn:
        raise SignLabError("--fn is required")
    return fn_from_spec(args.fn)


def _verdict_exit(report: dict) -> int:
    return EXIT_FALSIFIED if report.get("outcome") == "Falsified" else EXIT_OK


def cmd_verify(args):
    from .verifier import check_injective_variant, verify_sign_preserver

    if args.replay:
        with open(args.replay) as fh:
            stored = json.load(fh)
        res = replay(stored, None if args.tol == DEFAULT_TOL else args.tol)
        out = {"schemaVersion": SCHEMA_VERSION, "replay": {
            "ok": res.ok, "reason": res.reason,
            "preVerdict": res.pre.to_dict() if res.pre else None,
            "postVerdict": res.post.to_dict() if res.post else None}}
        return out, EXIT_OK if res.ok else EXIT_ERROR
    f = _require_fn(args)
    d = parse_domain(args.domain)
    if args.variant == "injective":
        rep = check_injective_variant(f, d, args.n, args.mode, args.budget, args.seed, args.tol)
    else:
        rep = verify_sign_preserver(f, d, args.n, args.mode, args.budget, args.seed, args.tol,
                                    args.workers)
    out = rep.to_json()
    return out, _verdict_exit(out)


def _read_graph(text):
    import os
    from .graphs import parse_graph

    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    return parse_graph(text)


def cmd_graph_verify(args):
    from .graph_verifier import verify_graph_preserver

    f = _require_fn(args)
    rep = verify_graph_preserver(f, _read_graph(args.graph), parse_domain(args.domain), args.mode,
                                 args.budget, args.seed, args.tol, args.workers)
    out = rep.to_json()
    return out, _verdict_exit(out)


def cmd_witness(args):
    from .witnesses import build_witness, witness_json

    M, spec, extras = build_witness(args.name, parse_params(args.params))
    out = witness_json(M, spec, extras)
    out["schemaVersion"] = SCHEMA_VERSION
    return out, EXIT_OK


def cmd_classify(args):
    from .verifier import classify_preserver

    f = _require_fn(args)
    rep = classify_preserver(f, parse_domain(args.domain), args.samples, args.seed)
    return {"schemaVersion": SCHEMA_VERSION, "fn": f.spec, "classification": rep.to_json()}, EXIT_OK


def cmd_monotone(args):
    from .verifier import check_monotone_preserver

    f = _require_fn(args)
    orders = ("psd", "pd") if args.order == "both" else (args.order,)
    rep = check_monotone_preserver(f, args.n, args.budget, args.seed, args.tol, orders)
    out = rep.to_json()
    return out, _verdict_exit(out)


def cmd_fq(args):
    from .finite_field import (FqField, bijective_monomials, enumerate_sign_preservers,
                               positive_multiples_of_automorphisms, theorem_scope)

    modulus = tuple(int(c) for c in args.modulus.split(",")) if args.modulus else None
    F = FqField(args.p, args.k, modulus)
    surv = enumerate_sign_preservers(F, args.n, args.workers)
    scope = theorem_scope(F, args.n)
    out = {"schemaVersion": SCHEMA_VERSION,
           "field": {"p": F.p, "k": F.k, "q": F.q, "modulus": list(F.modulus) if F.modulus else None},
           "n": args.n, "survivors": [list(s) for s in surv], "count": len(surv),
           "positives": list(F.positives),
           "equalsPositiveMultiplesOfAutomorphisms": set(surv) == positive_multiples_of_automorphisms(F),
           "equalsBijectiveMonomials": set(surv) == bijective_monomials(F),
           "theoremScope": scope, "outOfTheorem": scope is None}
    return out, EXIT_OK


def _interval_json(iv) -> dict:
    fin = lambda x: None if x in (float("inf"), float("-inf")) else x  # noqa: E731
    return {"lo": fin(iv.lo), "hi": fin(iv.hi), "loClosed": iv.lo_closed, "hiClosed": iv.hi_closed}


def cmd_domain_flags(args):
    d = parse_domain(args.domain)
    out = {"schemaVersion": SCHEMA_VERSION, "domain": d.to_json(),
           "flags": d.flags.to_dict(), "nonnegativePart": [_interval_json(iv) for iv in d.nonneg]}
    return out, EXIT_OK


VERBS = {"verify": cmd_verify, "graph-verify": cmd_graph_verify, "witness": cmd_witness,
         "classify": cmd_classify, "monotone": cmd_monotone, "fq-enumerate": cmd_fq,
         "domain-flags": cmd_domain_flags}


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key in sorted(obj):
        val = obj[key]
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(val)}")
    return "\n".join(lines)


def run_config(args) -> RunConfig:
    return RunConfig(args.verb, getattr(args, "fn", None), getattr(args, "domain", "real-line"),
                     getattr(args, "n", 3), getattr(args, "mode", "pd"),
                     getattr(args, "budget", DEFAULT_BUDGET), getattr(args, "seed", DEFAULT_SEED),
                     getattr(args, "tol", DEFAULT_TOL), getattr(args, "workers", 1),
                     args.output, args.format)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = run_config(args)
    try:
        out, code = VERBS[args.verb](args)
    except (SignLabError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"signlab {args.verb}: error: {exc}\n")
        return EXIT_ERROR
    text = dumps(out) if cfg.format == "json" else render_text(out)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(dumps(out) + "\n")
    sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
