"""Command-line front end.

    tdual dualize --base surface:g=2 --c 3 --t 5 --b 0
    tdual kgroups --base surface:g=1 --chern 2 --twist 3
    tdual cohomology --base cp:r=2 --chern 3
    tdual classify-torus --base s2 --c0 1 --c1 1
    tdual admissibility --theory K --g 1
    tdual verify --suite 4.1,4.4

Classes are integer vectors in the generator order of the base (comma
separated); a base with a single generator in that degree takes a bare
integer. Output is one JSON document, or ``--format text``.
Exit codes: 0 ok, 1 verification failure, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from contextlib import redirect_stderr

from .errors import TDualError, UnsupportedTwist
from .gysin import CircleBundle, euler_obstruction, gysin_cohomology
from .pair import dualize, make_pair
from .space import make_space
from .torus import (
    TorusBundleClass,
    gcd_invariant,
    iterated_dual,
    orbit_equivalent,
    sphere_bundle_h3,
    zero_splittings,
)
from .twistk import k_cpr, k_surface_bundle, k_twisted_3manifold, k_untwisted, t_admissibility
from .verify import DEFAULT_SUITES, SUITES, run_suites


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _class(space, degree, text, flag):
    if text is None:
        return space.zero(degree)
    vals = _ints(text)
    G = space.group(degree)
    if G.ngens == 0 and not any(vals):
        return space.zero(degree)
    if len(vals) != G.ngens:
        raise UsageError(
            f"{flag}: H^{degree}({space.descriptor}) = {G} needs {G.ngens} coefficient(s), got {len(vals)}"
        )
    return space.element(degree, vals)


def _single(text, flag):
    vals = _ints(text) if text is not None else [0]
    if len(vals) != 1:
        raise UsageError(f"{flag} takes a single integer")
    return vals[0]


# ---------------------------------------------------------------------------
# verbs


def cmd_dualize(args):
    B = make_space(args.base)
    p = make_pair(B, _class(B, 2, args.c, "--c"), _class(B, 2, args.t, "--t"), _class(B, 3, args.b, "--b"))
    q = dualize(p)
    chi, _ = euler_obstruction(B, p.c, q.c)
    return 0, {
        "verb": "dualize",
        "input": p.to_json(),
        "dual": q.to_json(),
        "euler_class": chi.to_json(),
    }


def _kgroups(B, chern, twist):
    if B.descriptor.startswith("surface:"):
        g = int(B.descriptor.split("=")[1])
        return k_surface_bundle(g, _single(chern, "--chern"), _single(twist, "--twist"))
    if B.descriptor.startswith("cp:"):
        r = int(B.descriptor.split("=")[1])
        return k_cpr(_single(chern, "--chern"), _single(twist, "--twist"), r)
    c = _class(B, 2, chern, "--chern")
    K = k_untwisted(gysin_cohomology(CircleBundle(B, c)))
    n = _single(twist, "--twist") if twist is not None else 0
    if n == 0:
        return K
    if B.dimension == 2:
        return k_twisted_3manifold(K, n)
    raise UnsupportedTwist(f"twisted K-theory over {B.descriptor} is not covered")


def cmd_kgroups(args):
    B = make_space(args.base)
    K = _kgroups(B, args.chern, args.twist)
    out = {"verb": "kgroups", "base": B.descriptor, "chern": _ints(args.chern or "0"),
           "twist": _ints(args.twist or "0")}
    out.update(K.to_json())
    return 0, out


def cmd_cohomology(args):
    B = make_space(args.base)
    R = gysin_cohomology(CircleBundle(B, _class(B, 2, args.chern, "--chern")))
    rows = []
    for n, d in R.degrees.items():
        rows.append({"degree": n, "group": str(d.assembled), "resolved": bool(d.assembled.resolved),
                     "rule": d.rule, "coker": str(d.coker_part), "ker": str(d.ker_part)})
    return 0, {"verb": "cohomology", "base": B.descriptor, "chern": R.bundle.c.to_json(), "degrees": rows}


def cmd_classify_torus(args):
    B = make_space(args.base)
    f = TorusBundleClass(B, _class(B, 2, args.c0, "--c0"), _class(B, 2, args.c1, "--c1"))
    out = {"verb": "classify-torus", "bundle": f.to_json()}
    G = B.group(2)
    if G.ngens == 1 and G.is_free():
        out["gcd"] = gcd_invariant(f)
    if args.vs0 is not None or args.vs1 is not None:
        g = TorusBundleClass(B, _class(B, 2, args.vs0, "--vs0"), _class(B, 2, args.vs1, "--vs1"))
        out["other"] = g.to_json()
        out["orbit_equivalent"] = orbit_equivalent(B, f, g).to_json()
        return 0, out
    try:
        info = sphere_bundle_h3(B, f.c0, f.c1)
    except TDualError as exc:
        out["splittings"] = None
        out["note"] = str(exc)
        return 0, out
    splits = zero_splittings(B, f.c0, f.c1)
    duals = [iterated_dual(B, f.c0, f.c1, s) for s in splits]
    out["restriction_injective"] = info.injective
    out["splittings"] = [s.to_json() for s in splits]
    out["iterated_duals"] = [d.to_json() for d in duals]
    if len(duals) > 1:
        out["orbit_equivalent"] = orbit_equivalent(B, duals[0].bundle(B), duals[1].bundle(B)).to_json()
    return 0, out


def cmd_admissibility(args):
    return 0, {"verb": "admissibility", **t_admissibility(args.theory, args.g).to_json()}


def cmd_verify(args):
    names = [s.strip() for s in args.suite.split(",") if s.strip()] if args.suite else list(DEFAULT_SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    results = run_suites(names)
    ok = all(r.passed for r in results)
    return (0 if ok else 1), {
        "verb": "verify",
        "pass": ok,
        "suites": [r.to_json(verbose=args.verbose) for r in results],
    }


# ---------------------------------------------------------------------------
# plumbing


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    parser = _Parser(prog="tdual", description="Exact topological T-duality toolkit", allow_abbrev=False)
    parser.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("dualize", parents=[common], allow_abbrev=False, help="T-dual of a pair (c, t, b)")
    p.add_argument("--base", required=True)
    p.add_argument("--c", "--chern", dest="c")
    p.add_argument("--t", "--twist", dest="t")
    p.add_argument("--b")
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("kgroups", parents=[common], allow_abbrev=False, help="(twisted) K-theory of E")
    p.add_argument("--base", required=True)
    p.add_argument("--chern", "--c", dest="chern")
    p.add_argument("--twist", "--t", dest="twist")
    p.set_defaults(func=cmd_kgroups)

    p = sub.add_parser("cohomology", parents=[common], allow_abbrev=False, help="Gysin cohomology of E")
    p.add_argument("--base", required=True)
    p.add_argument("--chern", "--c", dest="chern")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("classify-torus", parents=[common], allow_abbrev=False,
                       help="T^2-bundles: splittings of h = 0 and orbit comparison")
    p.add_argument("--base", required=True)
    p.add_argument("--c0", required=True)
    p.add_argument("--c1", required=True)
    p.add_argument("--vs0")
    p.add_argument("--vs1")
    p.set_defaults(func=cmd_classify_torus)

    p = sub.add_parser("admissibility", parents=[common], allow_abbrev=False, help="T-admissibility check")
    p.add_argument("--theory", required=True, choices=("K", "HR"))
    p.add_argument("--g", required=True, type=int)
    p.set_defaults(func=cmd_admissibility)

    p = sub.add_parser("verify", parents=[common], allow_abbrev=False, help="run embedded table checks")
    p.add_argument("--suite", help=f"comma-separated subset of {', '.join(SUITES)}")
    p.add_argument("--verbose", action="store_true", help="include every check in the report")
    p.set_defaults(func=cmd_verify)
    return parser


def _flat(v):
    # scalars and lists of coefficient vectors print on one line
    if isinstance(v, dict):
        return False
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)
    return True


def _text(obj, prefix=""):
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if not _flat(v) and v:
                lines.append(f"{prefix}{k}:")
                lines += _text(v, prefix + "  ")
            else:
                lines.append(f"{prefix}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            lines.append(f"{prefix}[{i}]")
            lines += _text(v, prefix + "  ")
    else:
        lines.append(f"{prefix}{obj}")
    return lines


def render(payload, fmt):
    if fmt == "text":
        return "\n".join(_text(payload)) + "\n"
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def run(argv, stderr=None):
    """Run one command; returns ``(exit_code, stdout_text)``."""
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        with redirect_stderr(io.StringIO()):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help
        return int(exc.code or 0), parser.format_help()
    except UsageError as exc:
        print(f"tdual: usage error: {exc}", file=stderr)
        return 2, ""
    try:
        code, payload = args.func(args)
    except UsageError as exc:
        print(f"tdual: usage error: {exc}", file=stderr)
        return 2, ""
    except TDualError as exc:
        print(f"tdual: {type(exc).__name__}: {exc}", file=stderr)
        return 2, ""
    except ValueError as exc:
        print(f"tdual: invalid input: {exc}", file=stderr)
        return 2, ""
    return code, render(payload, args.format)


def main(argv=None):
    code, out = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
