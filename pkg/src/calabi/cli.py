"""Command-line front end.

Every subcommand writes one JSON report (or CSV for tabular output) to stdout
or ``--output``.  Exit status: 0 success, 1 a checked identity failed,
2 bad parameters, 3 domain error (singular locus, degenerate polytope, ...).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

import mpmath

from . import __version__
from .ansatz import Profile, einstein_constant, is_bach_flat, profile_from_cone, profile_from_local, scalar_curvature
from .classifier import atlas_region, classify
from .conesolver import SWEEP_COLUMNS, admissibility, cone_quadratic, rows_to_csv, sweep_rows
from .convexity import certify_positive
from .curvlab import (
    abreu_scalar,
    conformal_einstein_residual,
    curvature_at,
    derdzinski_scalar_identity,
    diagonal_frame_check,
    laplacian_check,
)
from .errors import CalabiError, DefectError, DomainError, ParameterError
from .exactpoly import Poly, parse_rat, rat_str, real_roots_above
from .surd import to_mpf
from .geoprobe import _complete_end, growth_csv, growth_exponent, ray_length, volume
from .identities import run_suite, suite_names

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _rat(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _report(command: str, inputs: dict, outputs, notes=(), ok: bool = True) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "provenance": list(notes),
        "ok": ok,
    }


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def _profile_from_args(args) -> Profile:
    if getattr(args, "profile", None):
        src = sys.stdin if args.profile == "-" else open(args.profile, encoding="utf-8")
        with src:
            data = json.load(src)
        data = data.get("outputs", {}).get("profile", data)
        return Profile.from_json(data)
    if args.m is None or args.a is None or args.s is None:
        raise ParameterError("give --profile or all of --m, --a, --s")
    return profile_from_local(args.m, args.a, args.s)


def cmd_construct(args) -> tuple[dict, bool]:
    pr = profile_from_local(args.m, args.a, args.s)
    out = {
        "profile": pr.to_json(),
        "bach_flat": is_bach_flat(pr),
        "scal": scalar_curvature(pr).poly.to_json(),
        "einstein_constant": einstein_constant(pr).to_json(),
    }
    inputs = {"m": args.m, "a": rat_str(args.a), "s": rat_str(args.s)}
    return _report("construct", inputs, out, ["local Bach-flat profile closing smoothly at r = a"]), True


def cmd_construct_cone(args) -> tuple[dict, bool]:
    cp = profile_from_cone(args.m, args.a, args.x, args.weight)
    out = {"profile": cp.to_json(), "bach_flat": is_bach_flat(cp.base)}
    inputs = {"m": args.m, "a": rat_str(args.a), "x": rat_str(args.x), "weight": rat_str(args.weight)}
    return _report("construct-cone", inputs, out, ["extremal profile with a cone angle along r = b"]), True


def cmd_classify(args) -> tuple[dict, bool]:
    pr = _profile_from_args(args)
    cl = classify(pr)
    cert = None
    note = []
    if cl.b is not None:
        if cl.b.is_rational:
            cert = certify_positive(pr, cl.b.exact).to_json()
        else:
            note.append("b is irrational; positivity on (a, b) follows from the root isolation above a")
    out = {"profile": pr.to_json(), "classification": cl.to_json(), "certificate": cert}
    return _report("classify", {"m": pr.m, "a": rat_str(pr.a)}, out, ["decision on deg p and its first root above a", *note]), True


def cmd_cone_solve(args) -> tuple[dict, bool]:
    cq = cone_quadratic(args.m, args.x)
    adm = []
    for lab, w in sorted(cq.roots.items()):
        if w > 0:
            entry = {"label": lab, **admissibility(args.m, args.x, w).to_json()}
            entry["weight_approx"] = mpmath.nstr(to_mpf(w), 17)
            adm.append(entry)
    out = {"quadratic": cq.to_json(), "admissibility": adm, "nonexistence": not cq.weights}
    return _report("cone-solve", {"m": args.m, "x": rat_str(args.x)}, out, ["Bach-flatness of the cone family is a quadratic in the weight"]), True


def _sample_points(pr: Profile, n: int, rng: random.Random) -> list[tuple[Fraction, Fraction]]:
    roots = real_roots_above(pr.p_poly, pr.a)
    hi = roots[0].lo if roots else pr.a + 4
    if roots and roots[0].exact is not None:
        hi = Fraction(roots[0].exact) if isinstance(roots[0].exact, Fraction) else roots[0].lo
    pts = []
    for _ in range(n):
        t = Fraction(rng.randint(1, 99), 100)
        r = pr.a + (hi - pr.a) * t
        u = Fraction(rng.randint(1, 99), 100)
        pts.append((r * u, r * (1 - u)))
    return pts


def cmd_verify(args) -> tuple[dict, bool]:
    pr = profile_from_local(args.m, args.a, args.s)
    rng = random.Random(args.seed)
    pts = _sample_points(pr, args.points, rng)
    flat = is_bach_flat(pr)
    rows = []
    ok = True
    for x1, x2 in pts:
        rep = curvature_at(pr, (x1, x2), with_conformal=False)
        checks = dict(rep.checks)
        checks["abreu"] = abreu_scalar(pr, (x1, x2)) == rep.scal_formula
        if flat:
            checks["bach_zero"] = rep.bach_max_entry == 0
        checks["laplacian_r2"] = laplacian_check(pr, Poly([0, 0, 1]), (x1, x2))["residual"] == 0
        frame = diagonal_frame_check(pr, (x1, x2))
        checks["frame_orthogonal"] = frame["orthogonal"]
        ok = ok and all(checks.values())
        rows.append(
            {
                "point": [rat_str(x1), rat_str(x2)],
                "scal": rat_str(rep.scal),
                "bach_max_entry": rat_str(rep.bach_max_entry),
                "radial_coefficient": [k for k, v in frame["matches"].items() if v],
                "checks": checks,
            }
        )
    out = {"points": rows}
    S = einstein_constant(pr).value
    out["S"] = rat_str(S)
    if flat:
        nonzero = [p for p in pts if 2 * pr.q3 + pr.q4 * (p[0] + p[1]) != 0]
        if nonzero:
            ce = conformal_einstein_residual(pr, nonzero)
            out["conformal_einstein"] = ce.to_json()
            ok = ok and ce.max_residual == 0
        sid = derdzinski_scalar_identity(pr, pts)
        out["scalar_identity"] = sid.to_json()
        ok = ok and sid.matches_S
    inputs = {"m": args.m, "a": rat_str(args.a), "s": rat_str(args.s), "points": args.points, "seed": args.seed}
    notes = [
        "Abreu scalar curvature equals 2 q3 + q4 r",
        "W+ spectrum (s/6, -s/12, -s/12) for Kaehler metrics",
        "Bach vanishes iff q3 q1 = q4 q0",
        "scal^-2 g is Einstein with constant S for Bach-flat profiles",
    ]
    return _report("verify", inputs, out, notes, ok), ok


def _grid(text: str) -> list[Fraction]:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = parse_rat(lo), parse_rat(hi), int(n)
    except ValueError as exc:
        raise ParameterError(f"grid must be lo:hi:n, got {text!r}") from exc
    if n < 2:
        return [lo]
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


ATLAS_COLUMNS = ["m", "y", "label", "space", "metric_type", "einstein_scalar_sign", "kind"]


def cmd_atlas(args) -> str:
    rows = []
    for y in _grid(args.y_grid):
        reg = atlas_region(args.m, y)
        try:
            kind = classify(profile_from_local(args.m, 1, y)).kind
        except DomainError as exc:
            kind = type(exc).__name__
        rows.append(
            {
                "m": args.m,
                "y": rat_str(y),
                "label": reg.label,
                "space": reg.space,
                "metric_type": reg.metric_type,
                "einstein_scalar_sign": reg.einstein_scalar_sign,
                "kind": kind,
            }
        )
    return rows_to_csv(rows, ATLAS_COLUMNS)


def cmd_probe(args):
    pr = profile_from_local(args.m, args.a, args.s)
    inputs = {"m": args.m, "a": rat_str(args.a), "s": rat_str(args.s), "conformal": args.conformal}
    if args.growth:
        est = growth_exponent(pr, args.conformal, args.samples)
        if args.csv:
            return growth_csv(est)
        return _report("probe", {**inputs, "mode": "growth"}, est.to_json(), ["distance along the diagonal ray against sublevel volume"])
    hi = args.r_hi
    if hi is None:
        end = _complete_end(pr, args.conformal)
        hi = "inf" if end == mpmath.inf else end
    if args.length:
        rl = ray_length(pr, args.r_lo, hi, args.conformal)
        return _report("probe", {**inputs, "mode": "length", "r_hi": hi if isinstance(hi, str) else rat_str(hi)}, rl.to_json(), ["ray integrand sqrt(r / (2 p(r)))"])
    v = volume(pr, hi, args.conformal)
    return _report("probe", {**inputs, "mode": "volume", "r_hi": hi if isinstance(hi, str) else rat_str(hi)}, {"volume": mpmath.nstr(v, 17)}, ["sublevel volume 2 pi^2 (R^2 - a^2)"])


def cmd_identities(args) -> tuple[dict, bool]:
    ms = None
    if args.ms:
        lo, _, hi = args.ms.partition(":")
        ms = range(int(lo), int(hi or lo) + 1)
    results = []
    ok = True
    for entry, rep in run_suite(args.suite, ms):
        passed = rep.holds == entry.expect
        ok = ok and passed
        results.append(
            {
                "name": entry.name,
                "expected_to_hold": entry.expect,
                "holds": rep.holds,
                "passed": passed,
                "failing_m": sorted(rep.differences),
                "note": entry.note,
            }
        )
    return _report("identities", {"suite": args.suite}, {"results": results}, ["exact expansion per integer m"], ok), ok


def cmd_sweep(args) -> str:
    with open(args.spec, encoding="utf-8") as fh:
        spec = json.load(fh)
    kind = spec.get("kind", "cone")
    if kind == "cone":
        xs = spec["xs"] if isinstance(spec["xs"], list) else _grid(spec["xs"])
        return rows_to_csv(sweep_rows(spec["ms"], xs), SWEEP_COLUMNS)
    if kind == "atlas":
        out = []
        for m in spec["ms"]:
            ns = argparse.Namespace(m=m, y_grid=spec["y_grid"])
            text = cmd_atlas(ns)
            lines = text.splitlines(keepends=True)
            out.extend(lines if not out else lines[1:])
        return "".join(out)
    raise ParameterError(f"unknown sweep kind {kind!r}")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="calabi", description="Exact checks for U(2)-invariant Bach-flat Kaehler metrics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for random point sampling")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="local Bach-flat profile from (m, a, s(a))")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--a", type=_rat, required=True)
    c.add_argument("--s", type=_rat, required=True)

    c = sub.add_parser("construct-cone", help="cone-angle profile from (m, a, x, weight)")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--a", type=_rat, default=Fraction(1))
    c.add_argument("--x", type=_rat, required=True)
    c.add_argument("--weight", type=_rat, required=True)

    c = sub.add_parser("classify", help="global behaviour of a profile")
    c.add_argument("--profile", help="profile JSON file, or - for stdin")
    c.add_argument("--m", type=int)
    c.add_argument("--a", type=_rat)
    c.add_argument("--s", type=_rat)

    c = sub.add_parser("cone-solve", help="Bach-flat weights for (m, x)")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--x", type=_rat, required=True)

    c = sub.add_parser("verify", help="exact curvature checks at random interior points")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--a", type=_rat, required=True)
    c.add_argument("--s", type=_rat, required=True)
    c.add_argument("--points", type=int, default=5)

    c = sub.add_parser("atlas", help="atlas regions over a y grid (CSV)")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--y-grid", required=True, help="lo:hi:n")

    c = sub.add_parser("probe", help="ray length, volume or volume growth")
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--growth", action="store_true")
    mode.add_argument("--length", action="store_true")
    mode.add_argument("--volume", action="store_true")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--a", type=_rat, required=True)
    c.add_argument("--s", type=_rat, required=True)
    c.add_argument("--conformal", action="store_true")
    c.add_argument("--r-lo", type=_rat)
    c.add_argument("--r-hi", type=_rat)
    c.add_argument("--samples", type=int, default=24)
    c.add_argument("--csv", action="store_true", help="growth table as CSV")

    c = sub.add_parser("identities", help="run a named identity suite")
    c.add_argument("--suite", required=True, choices=suite_names())
    c.add_argument("--ms", help="range of m as lo:hi")

    c = sub.add_parser("sweep", help="batch CSV from a JSON spec")
    c.add_argument("--spec", required=True)
    return p


_HANDLERS = {
    "construct": cmd_construct,
    "construct-cone": cmd_construct_cone,
    "classify": cmd_classify,
    "cone-solve": cmd_cone_solve,
    "verify": cmd_verify,
    "atlas": cmd_atlas,
    "probe": cmd_probe,
    "identities": cmd_identities,
    "sweep": cmd_sweep,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        sys.stderr.write(f"calabi: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        result = _HANDLERS[args.command](args)
    except ParameterError as exc:
        sys.stderr.write(f"calabi: parameter error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"calabi: domain error: {exc}\n")
        return EXIT_DOMAIN
    except DefectError as exc:
        sys.stderr.write(f"calabi: check failed: {exc}\n")
        return EXIT_CHECK
    except (OSError, ValueError, KeyError) as exc:
        sys.stderr.write(f"calabi: {exc}\n")
        return EXIT_USAGE
    except CalabiError as exc:
        sys.stderr.write(f"calabi: {exc}\n")
        return EXIT_CHECK
    ok = True
    if isinstance(result, tuple):
        result, ok = result
    _emit(args, result if isinstance(result, str) else _dump(result))
    return EXIT_OK if ok else EXIT_CHECK


def main() -> None:
    sys.exit(run())
