"""Command-line front end.

Exit codes: 0 success, 1 a negative outcome or failed computation, 2 usage
or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bodies import (
    Ellipsoid,
    contains,
    cube,
    minkowski_sum,
    polytopalize,
    scale_translate,
    translative_inclusion,
)
from .errors import ConvexError, InvalidParams, NoViolationExists, NoWitnessPoint
from .identify import (
    projection_driver,
    reuleaux_counterexample,
    section_sum_suite,
    sym_sum_falsifier,
)
from .measures import volume
from .reports import SuiteReport
from .sampling import fixture_rng, random_polytope, random_symmetric_polytope, random_unit, sample_rng
from .serialization import load_body
from .tuples import affine_identify_driver, projective_tuple_witness
from .witness import find_witness

SUITES = ("sums", "sections", "projections", "tuples-affine", "tuples-projective", "reuleaux")


def _as_polytope(K, m=360):
    return polytopalize(K, m) if isinstance(K, Ellipsoid) else K


def _emit(obj, stream=None):
    print(json.dumps(obj, indent=2), file=stream or sys.stdout)


# ------------------------------------------------------------ commands


def cmd_check_inclusion(args) -> int:
    A, B = _as_polytope(load_body(args.A)), _as_polytope(load_body(args.B))
    if args.translate:
        x = translative_inclusion(A, B)
        included, shift = x is not None, x
    else:
        included, shift = contains(B, A), np.zeros(A.dim)
    if included:
        _emit({"included": True, "translate": bool(args.translate), "x0": np.asarray(shift).tolist()})
        return 0
    cert = find_witness(A, B, "volume", 0.5)
    _emit({"included": False, "translate": bool(args.translate), "certificate": cert.to_dict()})
    return 1


def cmd_witness(args) -> int:
    A, B = _as_polytope(load_body(args.A)), _as_polytope(load_body(args.B))
    try:
        cert = find_witness(A, B, args.functional, args.eps)
    except NoWitnessPoint:
        print("A ⊆ B: no witness exists")
        return 1
    data = cert.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh, indent=2)
    print(f"{cert.functional}: F(A) = {cert.value_A!r}, F(B) = {cert.value_B!r}")
    for name, (a, b) in cert.measured.items():
        print(f"  {name}: {a!r} > {b!r}" if a > b else f"  {name}: {a!r} <= {b!r}")
    return 0


def _suite_sums(samples, seed, n=2):
    rep = SuiteReport("sums")
    bad = 0
    for i in range(samples):
        rng = sample_rng(seed, i)
        A = random_symmetric_polytope(rng, n)
        B = scale_translate(random_symmetric_polytope(rng, n), rng.uniform(1.0, 3.0))
        if contains(B, A):
            rep.add(i, {"case": "included"}, volume(A), volume(B), "included")
            continue
        try:
            K, r = sym_sum_falsifier(A, B)
        except NoViolationExists:
            bad += 1
            rep.add(i, {"case": "missed"}, np.nan, np.nan, "missed")
            continue
        Kr = scale_translate(K, r)
        rep.add(i, {"r": r}, volume(minkowski_sum(A, Kr)), volume(minkowski_sum(B, Kr)), "violation")
    rep.verdict = "CONSISTENT" if not bad else "INCONSISTENT"
    return rep


def _suite_sections(samples, seed, n=2):
    rng = fixture_rng(seed)
    A = random_symmetric_polytope(rng, n)
    B = scale_translate(random_symmetric_polytope(rng, n), 1.5)
    return section_sum_suite(A, B, samples, seed)


def _suite_projections(samples, seed, n=3):
    rep = SuiteReport("projections")
    bound = n / (n - 1)
    for i in range(samples):
        rng = sample_rng(seed, i)
        B = random_polytope(rng, n, 10)
        A = scale_translate(random_polytope(rng, n, 10), rng.uniform(0.2, 0.5))
        U = np.array([random_unit(rng, n) for _ in range(16)])
        pr = projection_driver(A, B, U)
        if not pr.all_projections_fit:
            verdict = "projections-fail"
        else:
            verdict = "ok" if pr.factor <= bound + 1e-9 else "bound-exceeded"
        rep.add(i, {"fit": pr.all_projections_fit}, pr.factor, bound, verdict)
    c = rep.counts()
    rep.verdict = "CONSISTENT" if not c.get("bound-exceeded") else "VIOLATION"
    return rep


def _suite_tuples_affine(samples, seed, n=2):
    rng = fixture_rng(seed)
    A = random_symmetric_polytope(rng, n)
    B = scale_translate(A, 1.25)
    K = random_symmetric_polytope(rng, n)
    rep = affine_identify_driver(A, B, [K] * (n - 1), samples, seed)
    return rep


def _suite_tuples_projective(samples, seed, n=2):
    rep = SuiteReport("tuples-projective")
    L = cube(n, 2.0, centered=True)
    bad = 0
    for i in range(samples):
        rng = sample_rng(seed, i)
        K1 = random_polytope(rng, n, 8, scale=rng.uniform(0.6, 1.6))
        if not contains(K1, cube(n, 0.2, centered=True)):
            K1 = scale_translate(K1, 1.0, -K1.vertices.mean(axis=0))
        try:
            r = projective_tuple_witness(K1, L, [L] * (n - 1), [L] * (n - 1))
            rep.add(i, {"eta": r.eta, "halvings": r.halvings}, r.lhs, r.rhs, "reversal", margin=r.margin)
        except NoWitnessPoint:
            rep.add(i, {"case": "included"}, 0.0, 0.0, "included")
        except ConvexError as exc:
            bad += 1
            rep.add(i, {"error": type(exc).__name__}, np.nan, np.nan, "failed")
    rep.verdict = "CONSISTENT" if not bad else "INCONCLUSIVE"
    return rep


def _suite_reuleaux(samples, seed):
    rr = reuleaux_counterexample(360)
    rep = SuiteReport("reuleaux")
    for k, (a, c) in enumerate(zip(rr.angles_deg, rr.chords)):
        rep.add(k, {"angle_deg": float(a)}, c, 2.0, "ok" if c >= 2 - 1e-6 else "short", margin=c - 2.0)
    rep.add(len(rr.angles_deg), {"check": "translate"}, rr.inclusion_slack, 0.0,
            "infeasible" if not rr.translate_exists else "feasible")
    rep.verdict = "COUNTEREXAMPLE" if rr.chord_ok and not rr.translate_exists else "FAILED"
    rep.notes.update(min_chord=rr.min_chord, argmin_deg=rr.argmin_deg)
    return rep


_SUITE_FUNCS = {
    "sums": _suite_sums,
    "sections": _suite_sections,
    "projections": _suite_projections,
    "tuples-affine": _suite_tuples_affine,
    "tuples-projective": _suite_tuples_projective,
    "reuleaux": _suite_reuleaux,
}


def run_suite(name: str, samples: int, seed: int) -> SuiteReport:
    if name not in _SUITE_FUNCS:
        raise InvalidParams(f"unknown suite {name!r}")
    return _SUITE_FUNCS[name](samples, seed)


def cmd_suite(args) -> int:
    if args.samples < 1:
        raise InvalidParams("--samples must be positive")
    rep = run_suite(args.name, args.samples, args.seed)
    if args.csv:
        rep.to_csv(args.csv)
    else:
        sys.stdout.write(rep.csv_text())
    print(rep.summary(), file=sys.stderr if not args.csv else sys.stdout)
    return 0


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convexid", description="Identify inclusion of convex bodies.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-inclusion", help="test A ⊆ B (or A + x ⊆ B); print a witness otherwise")
    c.add_argument("A")
    c.add_argument("B")
    c.add_argument("--translate", action="store_true", help="allow a translation of A")
    c.set_defaults(func=cmd_check_inclusion)

    w = sub.add_parser("witness", help="build a projective witness of A ⊄ B")
    w.add_argument("A")
    w.add_argument("B")
    w.add_argument("--functional", default="volume", help="volume, surface or W<i>")
    w.add_argument("--eps", type=float, default=0.5)
    w.add_argument("--out", help="write the certificate JSON here")
    w.set_defaults(func=cmd_witness)

    s = sub.add_parser("suite", help="run an identification suite and emit CSV")
    s.add_argument("name", choices=SUITES)
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--csv", help="output path (default: stdout)")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidParams, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
