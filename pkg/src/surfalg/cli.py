"""Command line front end.

Four subcommands wrap the library against JSON files: ``hh`` computes a
Hochschild dimension of an algebra or surface, ``dual`` toggles stops
and emits the weak dual, ``deform`` builds the semi-universal family of
a surface with fiber and tangent reports, ``ainf`` verifies structure
identities (a file, or the built-in pillowcase family).

Exit codes: 0 success, 1 input or contract error, 2 result depends on a
truncation window, 3 internal invariant violation.  Reports are JSON
with sorted keys and embed the bounds and seed, so reruns on the same
input are byte identical.
"""

import argparse
import os
import random
import sys
from fractions import Fraction

from .ainfinity import check_stasheff, dg_presentation, pillowcase_family
from .deformation import (
    build_family,
    evaluate_fiber,
    fiber_cohomology,
    kodaira_spencer,
)
from .dual import classify_vertices, weak_dual
from .errors import InputError, InternalInvariantError
from .hochschild import hh_dimension
from .serialize import (
    algebra_to_json,
    dump_json,
    family_to_json,
    fiber_cohomology_to_json,
    fraction_from_text,
    fraction_to_text,
    hh_report_to_json,
    kodaira_spencer_to_json,
    load_input,
    surface_to_json,
)
from .surface import standard_algebra

BOUNDS_ENV = "SURFALG_BOUNDS"

OK = 0
BAD_INPUT = 1
TRUNCATED = 2
INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on flag errors, which collides with
    # the truncation code; route them through the normal error path
    def error(self, message):
        raise InputError(message)


def _positive_ints(text, want, what):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in want:
        raise InputError(f"{what} takes {' or '.join(map(str, sorted(want)))} "
                         f"comma-separated values, got {text!r}")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise InputError(f"{what} must be integers, got {text!r}")
    if any(n < 1 for n in nums):
        raise InputError(f"{what} must be positive, got {text!r}")
    return nums


def _bounds_text(args):
    if args.bounds is not None:
        return args.bounds
    return os.environ.get(BOUNDS_ENV) or None


def _parse_schedule(text):
    """Two stabilization windows: "l1,p1" (second window pads by 2) or
    the explicit "l1,p1,l2,p2"."""
    nums = _positive_ints(text, {2, 4}, "--bounds")
    if len(nums) == 2:
        return ((nums[0], nums[1]), (nums[0] + 2, nums[1] + 2))
    return ((nums[0], nums[1]), (nums[2], nums[3]))


def _parse_window(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise InputError(f"--degree-window takes lo,hi, got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
    except ValueError:
        raise InputError(f"--degree-window must be integers, got {text!r}")
    if lo > hi:
        raise InputError(f"--degree-window is empty: {text!r}")
    return lo, hi


def _parse_lambdas(text):
    parts = [p.strip() for p in text.split(",")]
    return tuple(fraction_from_text(p) for p in parts)


def _surface_algebra(kind, obj, command):
    if kind == "surface":
        return standard_algebra(obj).algebra
    if kind == "algebra":
        return obj
    raise InputError(f"{command} expects an algebra or surface input")


# subcommands -------------------------------------------------------------------


def cmd_hh(args):
    kind, obj = load_input(args.input)
    alg = _surface_algebra(kind, obj, "hh")
    text = _bounds_text(args)
    schedule = _parse_schedule(text) if text else None
    rep = hh_dimension(alg, args.n, trunc_schedule=schedule)
    payload = {"command": "hh", "input": args.input, "input_kind": kind,
               "seed": args.seed}
    payload.update(hh_report_to_json(rep))
    return payload, OK if rep.stable else TRUNCATED


def _loop_vertices(standard, components):
    wanted = set(components)
    return [blk["vertices"][0] for blk in standard.blocks
            if blk["kind"] in ("stopless", "full_stop")
            and blk["index"] in wanted]


def _same_presentation(a, b):
    return (a.quiver.vertices == b.quiver.vertices
            and sorted(a.quiver.arrows) == sorted(b.quiver.arrows)
            and set(a.relations) == set(b.relations)
            and sorted(a.rewrites, key=lambda rw: rw[0].key())
            == sorted(b.rewrites, key=lambda rw: rw[0].key())
            and a.differential == b.differential)


def cmd_dual(args):
    kind, obj = load_input(args.input)
    if kind != "surface":
        raise InputError("dual toggles boundary stops; pass surface data")
    std = standard_algebra(obj)
    chosen = list(classify_vertices(std).smooth)
    comps = sorted({blk["index"] for blk in std.blocks
                    if blk["kind"] == "stopless"
                    and blk["vertices"][0] in set(chosen)})
    dual = weak_dual(std, chosen)
    payload = {"command": "dual", "input": args.input, "seed": args.seed,
               "toggled_vertices": chosen, "toggled_components": comps,
               "surface": surface_to_json(dual.surface),
               "algebra": algebra_to_json(dual.algebra)}
    if args.check_double:
        back = _loop_vertices(dual, comps)
        ddual = weak_dual(dual, back)
        if ddual.surface != std.surface or \
                not _same_presentation(ddual.algebra, std.algebra):
            raise InternalInvariantError(
                "double dual failed to restore the presentation")
        payload["double_dual"] = "restored"
    return payload, OK


def cmd_deform(args):
    kind, obj = load_input(args.input)
    if kind != "surface":
        raise InputError("deform builds the family of a surface; "
                         "pass surface data")
    std = standard_algebra(obj)
    family = build_family(std)
    problems = family.validate()
    if problems:
        raise InternalInvariantError(
            "family identities fail: " + "; ".join(problems[:3]))

    d = family.nvars
    if args.lam is not None:
        lam = _parse_lambdas(args.lam)
        if len(lam) != d:
            raise InputError(
                f"family has {d} directions, got {len(lam)} lambda values")
    else:
        rng = random.Random(args.seed)
        lam = tuple(Fraction(rng.randint(1, 5), rng.randint(1, 3))
                    for _ in range(d))

    zero = tuple(Fraction(0) for _ in range(d))
    if not _same_presentation(evaluate_fiber(family, zero), std.algebra):
        raise InternalInvariantError("zero fiber does not restore the base")

    fiber = evaluate_fiber(family, lam)
    window = _parse_window(args.degree_window) if args.degree_window \
        else (-1, 2)
    fib = fiber_cohomology(fiber, window)
    tangent = [kodaira_spencer_to_json(kodaira_spencer(family, point))
               for point in (zero, lam)]
    payload = {"command": "deform", "input": args.input, "seed": args.seed,
               "lambda": [fraction_to_text(x) for x in lam],
               "degree_window": list(window),
               "family": family_to_json(family),
               "zero_fiber_restores_base": True,
               "fiber": {"algebra": algebra_to_json(fiber),
                         "cohomology": fiber_cohomology_to_json(fib)},
               "kodaira_spencer": tangent}
    return payload, TRUNCATED if fib.truncated else OK


def cmd_ainf(args):
    text = _bounds_text(args)
    window = _positive_ints(text, {1}, "--bounds")[0] if text else None

    if args.input == "pillowcase":
        if args.lam is not None:
            lam = _parse_lambdas(args.lam)
            if len(lam) != 4:
                raise InputError(
                    f"the pillowcase family takes 4 parameters, "
                    f"got {len(lam)}")
        else:
            rng = random.Random(args.seed)
            lam = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                        for _ in range(4))
        pres = pillowcase_family(*lam)
        source = {"kind": "pillowcase",
                  "lambda": [fraction_to_text(x) for x in lam]}
        built_in = True
    else:
        kind, obj = load_input(args.input)
        if kind == "ainfinity":
            pres = obj
        else:
            alg = _surface_algebra(kind, obj, "ainf")
            pres = dg_presentation(alg, path_len=window)
        source = {"kind": kind}
        built_in = False

    report = check_stasheff(pres, args.arity)
    payload = {"command": "ainf", "input": args.input, "seed": args.seed,
               "source": source, "arity_bound": args.arity,
               "path_window": window, "truncated": pres.truncated}
    payload.update({k: report[k] for k in
                    ("ok", "tuples_checked", "problems", "violation")})
    if not report["ok"]:
        # a failing built-in table would be our bug, not the user's
        return payload, INTERNAL if built_in else BAD_INPUT
    return payload, TRUNCATED if pres.truncated else OK


# wiring ------------------------------------------------------------------------


def _build_parser():
    parser = _Parser(prog="surfalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="path to a JSON input file")
        p.add_argument("--seed", type=int, default=2024,
                       help="PRNG seed, recorded in the report")
        p.add_argument("--out", default=None,
                       help="write the report here instead of stdout")

    p = sub.add_parser("hh", help="Hochschild cohomology dimension")
    common(p)
    p.add_argument("--n", type=int, default=2, help="cohomological degree")
    p.add_argument("--bounds", default=None,
                   help="stabilization windows 'l1,p1' or 'l1,p1,l2,p2' "
                        f"(default from ${BOUNDS_ENV})")

    p = sub.add_parser("dual", help="weak dual by stop toggling")
    common(p)
    p.add_argument("--check-double", action="store_true",
                   help="dualize twice and require the original back")

    p = sub.add_parser("deform", help="semi-universal family and fibers")
    common(p)
    p.add_argument("--lambda", dest="lam", default=None,
                   help="fiber coordinates 'v1,v2,...' (default: seeded "
                        "random nonzero values)")
    p.add_argument("--degree-window", default=None,
                   help="cohomology window 'lo,hi' (default -1,2)")

    p = sub.add_parser("ainf", help="structure identity check")
    common(p)
    p.add_argument("--arity", type=int, default=7,
                   help="check identities up to this many inputs")
    p.add_argument("--lambda", dest="lam", default=None,
                   help="pillowcase parameters 'v1,v2,v3,v4'")
    p.add_argument("--bounds", default=None,
                   help="path-length window for infinite bases "
                        f"(default from ${BOUNDS_ENV})")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        handler = {"hh": cmd_hh, "dual": cmd_dual,
                   "deform": cmd_deform, "ainf": cmd_ainf}[args.command]
        payload, code = handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return INTERNAL
    text = dump_json(payload, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
