"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 precondition violation, 3 cap
exceeded, 4 property-check failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .abelian import ABELIAN, FgAbGroup, ia_abelian, random_finite_commensurability
from .correspondence import Correspondence, certify, compose, index, inverse
from .errors import (
    CapExceeded,
    CommensurError,
    MalformedInput,
    NotASublattice,
    NotCommensurable,
    NotFinite,
    NotInCommutant,
    NotIsogeny,
    NotPrimePower,
    NotSubmodule,
    ObjectMismatch,
    OrderNotSemisimple,
    RankMismatch,
    Singular,
)
from .linalg import parse_rat, rat_str

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CAP, EXIT_PROPERTY = 0, 1, 2, 3, 4

PRECONDITION_ERRORS = (NotCommensurable, RankMismatch, NotInCommutant, Singular, OrderNotSemisimple,
                       NotSubmodule, NotPrimePower, ObjectMismatch, NotIsogeny, NotFinite,
                       NotASublattice)


class PropertyFailure(Exception):
    def __init__(self, result):
        self.result = result
        super().__init__("property check failed")


def _load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise MalformedInput(f"{path}: {exc.strerror}") from exc


def _json_arg(text: str):
    """Inline JSON, or a path to a JSON file."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return _load(text)


def _load_module(obj):
    from .finmod import FiniteModule

    if isinstance(obj, dict) and "grp" in obj:
        return FiniteModule.from_json(obj)
    return FgAbGroup.from_json(obj)


# --- subcommands ----------------------------------------------------------------------


def cmd_ia(args):
    from .finmod import FiniteModule, ia_finite, trivial_module

    left, right = _load_module(_load(args.left)), _load_module(_load(args.right))
    if isinstance(left, FgAbGroup) and isinstance(right, FgAbGroup):
        return ia_abelian(left, right)
    if isinstance(left, FgAbGroup):
        left = trivial_module(left, right.order)
    if isinstance(right, FgAbGroup):
        right = trivial_module(right, left.order)
    if left.order != right.order:
        raise ObjectMismatch("modules over different orders")
    if not isinstance(left, FiniteModule) or not isinstance(right, FiniteModule):
        raise NotFinite("ia needs finite modules")
    return ia_finite(left, right, args.cap)


def cmd_ie(args):
    from .orders import OrderLattice, ie_pair, ie_self

    lat = OrderLattice.from_json(_load(args.lattice))
    if args.alpha is not None and args.right is not None:
        raise MalformedInput("give either --alpha or a right lattice, not both")
    if args.alpha is not None:
        raw = _json_arg(args.alpha)
        if isinstance(raw, dict):
            raw = [raw["entries"][i * raw["cols"]:(i + 1) * raw["cols"]] for i in range(raw["rows"])]
        alpha = [[parse_rat(x) for x in row] for row in raw]
        return ie_self(lat, alpha)
    if args.right is None:
        raise MalformedInput("ie needs --alpha or a right lattice")
    right = OrderLattice.from_json(_load(args.right))
    return ie_pair(lat, right, args.phi)


def cmd_compose(args):
    c = Correspondence.from_json(_load(args.first), ABELIAN)
    d = Correspondence.from_json(_load(args.second), ABELIAN)
    cc, dd = certify(c), certify(d)
    out = compose(cc, dd)
    return {"index": rat_str(out.index), "first_index": rat_str(cc.index),
            "second_index": rat_str(dd.index), "composite": out.base.to_json()}


def _report(name, cases, config):
    failures = [c for c in cases if not c["pass"]]
    result = {"check": name, "config": config, "total": len(cases),
              "passed": len(cases) - len(failures), "failures": failures, "cases": cases}
    if failures:
        raise PropertyFailure(result)
    return result


def check_welldef(args):
    from .orders import alpha_of, ie_correspondence, sample_self_commensurability, standard_suite

    suite = standard_suite(args.group)
    rng = random.Random(args.seed)
    cases = []
    for t in range(args.trials):
        lat = suite[t % len(suite)]
        s = rng.randrange(2 ** 31)
        c = sample_self_commensurability(lat, s)
        val = ie_correspondence(c)
        cases.append({"trial": t, "lattice": str(lat), "sample_seed": s,
                      "alpha": [[rat_str(x) for x in r] for r in alpha_of(c)],
                      "index": rat_str(c.index), "ie": rat_str(val), "pass": val == 1})
    return _report("welldef", cases, {"group": args.group, "trials": args.trials, "seed": args.seed,
                                        "cap": args.cap})


def check_unit_isogenies(args):
    from .finite_ring import check_unit_isogeny, unit_isogeny_catalog

    cases = []
    for name, h in unit_isogeny_catalog():
        rep = check_unit_isogeny(h, args.cap)
        cases.append({"hom": name, **rep.to_json(), "pass": rep.ok})
    return _report("theorem-o", cases, {"cap": args.cap, "seed": args.seed})


def check_unit_exponent(args):
    from .finite_ring import matrix_ring, unit_quotient_exponent

    if args.n is not None or args.q is not None:
        if args.n is None or args.q is None:
            raise MalformedInput("give both --n and --q")
        pairs = [(args.n, args.q)]
    else:
        pairs = [(1, q) for q in (2, 3, 4, 5, 7, 8, 9)] + [(2, 2), (2, 3), (3, 2)]
    cases = []
    for n, q in pairs:
        e = unit_quotient_exponent(matrix_ring(q, n, args.cap), args.cap)
        cases.append({"n": n, "q": q, "exponent": e, "pass": n % e == 0})
    return _report("theorem-w", cases, {"cap": args.cap, "seed": args.seed})


def check_multiplicativity(args):
    rng = random.Random(args.seed)
    cases = []
    for t in range(args.trials):
        c = certify(random_finite_commensurability(rng))
        d = certify(random_finite_commensurability(rng, c.base.right))
        dc = compose(c, d)
        inv = index(inverse(c))
        ok = dc.index == c.index * d.index and inv == 1 / c.index
        cases.append({"trial": t, "index_c": rat_str(c.index), "index_d": rat_str(d.index),
                      "index_dc": rat_str(dc.index), "index_inverse": rat_str(inv), "pass": ok})
    return _report("multiplicativity", cases, {"trials": args.trials, "seed": args.seed,
                                                 "cap": args.cap})


CHECKS = {"welldef": check_welldef, "theorem-o": check_unit_isogenies, "theorem-w": check_unit_exponent,
          "multiplicativity": check_multiplicativity}


def cmd_check(args):
    return CHECKS[args.which](args)


def _ring_from_args(args):
    from .finite_ring import FiniteRing, matrix_ring, zmod

    if args.ring is not None:
        return FiniteRing.from_json(_load(args.ring))
    if args.zmod is not None:
        return zmod(args.zmod)
    return matrix_ring(args.q or 2, args.n or 1, args.cap)


def cmd_finring(args):
    from .finite_ring import jacobson_radical, unit_group

    ring = _ring_from_args(args)
    if args.which == "units":
        elems = unit_group(ring, args.cap)
    else:
        elems = jacobson_radical(ring, args.cap)
    return {"ring": str(ring), "size": ring.size, "count": len(elems),
            "elements": [[str(x) for x in e] for e in elems]}


def cmd_oracle(args):
    from . import oracle

    if args.which == "aut-order":
        grp = _load_module(_load(args.inputs[0]))
        try:
            n = len(oracle.enumerate_auts(grp, args.cap))
            method = "enumeration"
        except CapExceeded:
            if not isinstance(grp, FgAbGroup):
                raise
            n = oracle.aut_order_perm(grp.torsion)
            method = "permutation group"
        return {"aut_order": n, "method": method}
    if len(args.inputs) != 2:
        raise MalformedInput("oracle homs needs two module files")
    a, b = (_load_module(_load(p)) for p in args.inputs)
    homs = oracle.enumerate_homs(a, b, args.cap)
    return {"count": len(homs), "homs": [[[str(x) for x in img] for img in h] for h in homs]}


# --- plumbing -------------------------------------------------------------------------


def _common(parser, cap_default=65536):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--cap", type=int, default=cap_default)
    parser.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commensur", description="Exact commensurability indices.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ia", help="automorphism index of two modules")
    s.add_argument("left")
    s.add_argument("right")
    _common(s, 4096)
    s.set_defaults(func=cmd_ia)

    s = sub.add_parser("ie", help="endomorphism index")
    s.add_argument("lattice")
    s.add_argument("right", nargs="?")
    s.add_argument("--alpha", help="rational matrix as JSON (inline or file)")
    s.add_argument("--phi", type=int, default=0, help="which deterministic isomorphism to use")
    _common(s)
    s.set_defaults(func=cmd_ie)

    s = sub.add_parser("compose", help="compose two abelian-group correspondences")
    s.add_argument("first")
    s.add_argument("second")
    _common(s)
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("check", help="property checks")
    s.add_argument("which", choices=sorted(CHECKS))
    s.add_argument("--group", default="S3", choices=("C2", "C3", "S3"))
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    _common(s)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("finring", help="finite ring units or radical")
    s.add_argument("which", choices=("units", "radical"))
    s.add_argument("--ring", help="FiniteRing JSON file")
    s.add_argument("--zmod", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--q", type=int)
    _common(s)
    s.set_defaults(func=cmd_finring)

    s = sub.add_parser("oracle", help="brute-force reference computations")
    s.add_argument("which", choices=("aut-order", "homs"))
    s.add_argument("inputs", nargs="+")
    _common(s, 200_000)
    s.set_defaults(func=cmd_oracle)
    return p


def _to_text(result) -> str:
    if isinstance(result, Fraction):
        return rat_str(result)
    if isinstance(result, dict) and "check" in result:
        cfg = " ".join(f"{k}={v}" for k, v in sorted(result["config"].items()))
        lines = [f"# {result['check']} {cfg}"]
        if result["check"] == "theorem-w":
            lines += [f"M_{c['n']}(F_{c['q']}): exponent {c['exponent']}" for c in result["cases"]]
        lines.append(f"{result['passed']}/{result['total']} pass")
        for f in result["failures"]:
            lines.append("FAIL " + json.dumps(f, sort_keys=True))
        return "\n".join(lines)
    if isinstance(result, dict):
        return "\n".join(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}"
                         for k, v in result.items())
    return str(result)


def _emit(args, result, stream):
    if args.format == "json":
        payload = rat_str(result) if isinstance(result, Fraction) else result
        stream.write(json.dumps({"version": 1, "seed": args.seed, "result": payload}, sort_keys=True) + "\n")
    else:
        stream.write(_to_text(result) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        result = args.func(args)
    except PropertyFailure as exc:
        _emit(args, exc.result, sys.stdout)
        return EXIT_PROPERTY
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PRECONDITION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (MalformedInput, CommensurError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(args, result, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
