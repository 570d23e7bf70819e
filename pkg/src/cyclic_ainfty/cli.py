"""Command-line front end.

Exit status: 0 when every requested check passes, 1 on a verification
failure, 2 on bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import census as geo
from .ainfty import verify_ainfty, verify_gapped, verify_unit
from .algebra_core import NovikovScalar
from .clifford import build_model, evaluate_alpha, m3_sign_report, provenance_table
from .hochschild import d_hoch, is_cyclic_invariant, verify_connes_descent, verify_hochschild_boundaries
from .io import (algebra_from_doc, algebra_to_doc, chain_from_doc, chain_to_doc,
                 dump_json, load_json)
from .pairing import (m_plus_chain, verify_bar_boundary, verify_cyclic_symmetry,
                      verify_split_pairing, verify_stokes)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def format_scalar(s: NovikovScalar) -> str:
    """Human form, e.g. ``18 T`` or ``3/2 + 1/4*sqrt2 T^2``."""
    if not s:
        return "0"
    parts = []
    for lam, c in s.terms:
        coeff = str(c)
        if lam == 0:
            parts.append(coeff)
            continue
        t = "T" if lam == 1 else f"T^{lam}"
        parts.append(t if coeff == "1" else f"{coeff} {t}")
    return " + ".join(parts)


# --- verify ------------------------------------------------------------------------

def _checks(args) -> Dict[str, Callable]:
    L = args.max_length
    return {
        "ainfty": lambda A, R, P: verify_ainfty(A, max_length=L),
        "cyclic": lambda A, R, P: verify_cyclic_symmetry(A, P, max_length=L),
        "stokes": lambda A, R, P: verify_stokes(R, P),
        "split-pairing": lambda A, R, P: verify_split_pairing(R, P, max_length=L),
        "unit": lambda A, R, P: verify_unit(A),
        "gapped": lambda A, R, P: verify_gapped(A.filtration()),
        "hochschild": lambda A, R, P: verify_hochschild_boundaries(
            R, P, max_length=min(L, 3), n_random=args.samples, seed=args.seed),
        "connes": lambda A, R, P: verify_connes_descent(
            R, P, max_length=min(L, 3), n_random=args.samples, seed=args.seed),
        "bar-boundary": lambda A, R, P: verify_bar_boundary(R, P, max_length=min(L, 3)),
    }


CHECK_NAMES = ("ainfty", "cyclic", "stokes", "split-pairing", "unit", "gapped",
               "hochschild", "connes", "bar-boundary")


def _split_list(text: str, allowed: Sequence[str], what: str) -> List[str]:
    items = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in items if s not in allowed]
    if bad:
        raise ValueError(f"unknown {what}: {', '.join(bad)} (choose from {', '.join(allowed)})")
    return items


def cmd_verify(args) -> int:
    A, P = algebra_from_doc(load_json(args.algebra))
    names = _split_list(args.checks, CHECK_NAMES, "check") if args.checks else list(CHECK_NAMES)
    table = _checks(args)
    R = A.reduced()
    reports = [table[n](A, R, P) for n in names]
    out = {"passed": all(r.passed for r in reports), "checks": [r.to_dict() for r in reports]}
    print(json.dumps(out, indent=2, default=str))
    for r in reports:
        print(r.line(), file=sys.stderr)
    return EXIT_OK if out["passed"] else EXIT_FAIL


# --- mplus -------------------------------------------------------------------------

def cmd_mplus(args) -> int:
    A, P = algebra_from_doc(load_json(args.algebra))
    chain = chain_from_doc(load_json(args.chain), basis=A.basis, e_max=A.e_max)
    if args.scale:
        chain = chain * Fraction(args.scale)
    R = A.reduced()
    value = m_plus_chain(R, P, chain)
    invariant = is_cyclic_invariant(chain, A.basis)
    closed = not R.hat_d(chain)
    if invariant and closed:
        status = "cyclic cycle"
    elif not d_hoch(R, chain):
        status = "Hochschild cycle"
    else:
        status = "not a cycle"
    out = {"m_plus": str(value), "m_plus_display": format_scalar(value), "status": status,
           "cyclic_invariant": invariant, "bar_closed": closed}
    print(json.dumps(out, indent=2))
    if status == "not a cycle":
        print(f"m_plus: {format_scalar(value)} (not a cycle: value is not a homology invariant)",
              file=sys.stderr)
    return EXIT_OK


# --- clifford ----------------------------------------------------------------------

def cmd_clifford(args) -> int:
    bundle = build_model(basis=args.basis)
    if args.emit_model:
        dump_json(algebra_to_doc(bundle.structure, bundle.pairing), args.emit_model)
    if args.emit_alpha:
        dump_json(chain_to_doc(bundle.alpha), args.emit_alpha)
    out = {"basis": args.basis, "completion": bundle.completion.to_dict()}
    ok = True
    if args.verify_alpha or not (args.emit_model or args.emit_alpha):
        R = bundle.reduced
        checks = [verify_ainfty(bundle.structure), verify_cyclic_symmetry(bundle.structure, bundle.pairing),
                  verify_unit(bundle.structure), verify_gapped(bundle.structure.filtration())]
        rep = evaluate_alpha(bundle) if args.basis == "f" else None
        out["checks"] = [c.to_dict() for c in checks]
        if args.basis == "f":
            rows = provenance_table(bundle)
            out["provenance"] = rows
            out["m3_sign"] = m3_sign_report(bundle)
            out["alpha"] = rep.to_dict()
            ok = rep.passed and all(r["match"] for r in rows)
        else:
            value = m_plus_chain(R, bundle.pairing, bundle.alpha)
            out["alpha"] = {"m_plus_alpha": str(value)}
        ok = ok and all(c.passed for c in checks)
        out["passed"] = ok
        print(json.dumps(out, indent=2, default=str))
        value = m_plus_chain(R, bundle.pairing, bundle.alpha)
        print(f"m_plus_alpha: {format_scalar(value)}")
    return EXIT_OK if ok else EXIT_FAIL


# --- geometry ----------------------------------------------------------------------

def _point(text: str, flag: str) -> geo.TorusPoint:
    try:
        return geo.TorusPoint.parse(text)
    except ValueError as exc:
        raise ValueError(f"{flag}: {exc}") from exc


GEO_CHECKS = ("parity", "invariant", "biran-cornea", "discs", "witnesses")


def cmd_count(args) -> int:
    if args.samples is None:
        if not (args.p and args.q and args.r):
            raise ValueError("count needs --p, --q and --r, or --samples")
        p, q, r = _point(args.p, "--p"), _point(args.q, "--q"), _point(args.r, "--r")
        rep = geo.census(p, q, r)
        discs = {}
        for c in geo.CLASSES:
            d = geo.solve_disc([geo.chart_coords(x, c) for x in (p, q, r)])
            discs[c] = None if d is None else {
                "centers": [[z.real, z.imag] for z in d.centers], "phases": list(d.phases),
                "residual": d.residual}
        out = rep.to_dict()
        out["discs"] = discs
        print(json.dumps(out, indent=2))
        return EXIT_OK
    checks = _split_list(args.check, GEO_CHECKS, "check") if args.check else list(GEO_CHECKS)
    st = geo.sample_census(args.samples, seed=args.seed, threads=args.threads)
    results = {}
    if "parity" in checks:
        results["parity"] = set(st.total_hist) <= {0, 2} and set(st.cyclic_hist) <= {0, 1}
    if "invariant" in checks:
        results["invariant"] = len(st.combined_hist) == 1 and len(st.combined_cw_hist) == 1
    if "biran-cornea" in checks:
        results["biran-cornea"] = not st.relation_fail and st.relation_disagree == 0
    if "discs" in checks:
        results["discs"] = st.disc_mismatch == 0 and st.max_residual < geo.RESIDUAL_TOL
    wit = geo.invariance_witnesses(st)
    if "witnesses" in checks:
        results["witnesses"] = "per_class" in wit and "cyclic" in wit
    out = {
        "samples": st.samples, "seed": args.seed, "rejected": st.rejected,
        "total_hist": _sorted(st.total_hist), "cyclic_hist": _sorted(st.cyclic_hist),
        "combined_value": sorted(st.combined_hist), "combined_value_cw": sorted(st.combined_cw_hist),
        "biran_cornea_failures": st.relation_fail, "lift_rule_disagreements": st.relation_disagree,
        "disc_mismatches": st.disc_mismatch, "max_disc_residual": st.max_residual,
        "witnesses": wit, "checks": results, "passed": all(results.values()),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK if out["passed"] else EXIT_FAIL


def _sorted(d: Dict) -> Dict[str, int]:
    return {str(k): d[k] for k in sorted(d)}


def cmd_region(args) -> int:
    p = _point(args.p, "--p") if args.p else geo.DEFAULT_P
    q = _point(args.q, "--q") if args.q else geo.DEFAULT_Q
    if args.resolution < 1:
        raise ValueError("--resolution must be positive")
    rm = geo.region_map(p, q, args.resolution, threads=args.threads)
    csv_path = None
    if args.out:
        rm.write_svg(args.out)
        csv_path = os.path.splitext(args.out)[0] + ".csv"
        rm.write_csv(csv_path)
    pairs = rm.value_pairs()
    allowed = {(0, 0), (2, 0), (2, 1)}
    ok = set(pairs) <= allowed and len(rm.combined_values()) <= 1
    out = {"resolution": args.resolution, "p": list(p.angles), "q": list(q.angles),
           "value_pairs": {f"{a},{b}": n for (a, b), n in sorted(pairs.items())},
           "combined_values": sorted(rm.combined_values()),
           "degenerate_cells": rm.degenerate_cells(), "svg": args.out, "csv": csv_path,
           "passed": ok}
    print(json.dumps(out, indent=2))
    return EXIT_OK if ok else EXIT_FAIL


# --- entry -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclic-ainfty",
                                 description="Exact cyclic A-infinity checks and the disc census.")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run checks on an algebra document")
    v.add_argument("algebra")
    v.add_argument("--checks", help=f"comma list from: {', '.join(CHECK_NAMES)}")
    v.add_argument("--max-length", type=int, default=4)
    v.add_argument("--samples", type=int, default=100, help="random chains for chain-level checks")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mplus", help="evaluate m^+ on a chain document")
    m.add_argument("algebra")
    m.add_argument("chain")
    m.add_argument("--scale", help="rational factor applied to the chain, e.g. 1/3")
    m.set_defaults(func=cmd_mplus)

    c = sub.add_parser("clifford", help="build the Clifford torus model")
    c.add_argument("--basis", choices=("f", "e"), default="f")
    c.add_argument("--emit-model", metavar="PATH")
    c.add_argument("--emit-alpha", metavar="PATH")
    c.add_argument("--verify-alpha", action="store_true")
    c.set_defaults(func=cmd_clifford)

    n = sub.add_parser("count", help="disc census for one triple or a random sample",
                       description="Angles in radians as 'theta1,theta2'; "
                                   "write negative values as --p=-1,2.")
    n.add_argument("--p")
    n.add_argument("--q")
    n.add_argument("--r")
    n.add_argument("--samples", type=int)
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--check", help=f"comma list from: {', '.join(GEO_CHECKS)}")
    n.set_defaults(func=cmd_count)

    g = sub.add_parser("region", help="raster of census values over r for fixed p, q")
    g.add_argument("--p")
    g.add_argument("--q")
    g.add_argument("--resolution", type=int, default=64)
    g.add_argument("--out", help="SVG path; a CSV with the same stem is written beside it")
    g.set_defaults(func=cmd_region)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:  # includes malformed documents and degenerate triples
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
