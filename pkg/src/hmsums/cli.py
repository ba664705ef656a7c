"""Batch front-end: single evaluations and verification campaigns.

Every subcommand prints one JSON report to stdout.  Reports carry the argv
echo, per-case records, and an aggregate block; the process exits 0 when all
case defects are within budget, 1 on a failed check or compute error, and 2
on usage errors.  Randomized campaigns are reproducible via --seed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from fractions import Fraction

from .dedekind_sums import (hecke_defect, reciprocity_defect,
                            reduce_to_fundamental, sum_s)
from .eta_engine import apex_point, classical_dedekind_s, classical_phi_R, phi
from .field_arith import FieldData, ModMatrix, make_field, matrix_S
from .lfunctions import l_a, period_defect
from .quasi_elliptic import classify, psi
from .unit_domain import TruncationParams


class UsageError(ValueError):
    pass


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"bad JSON literal {text!r}")


def _parse_elem(field: FieldData, text: str):
    v = _parse_json(text)
    if isinstance(v, int):
        return field.elem(v)
    if isinstance(v, list) and len(v) <= 2 and all(isinstance(c, int) for c in v):
        return field.elem(*v)
    raise UsageError(f"bad element literal {text!r}: want int or [a, b]")


def _parse_matrix(field: FieldData, text: str) -> ModMatrix:
    v = _parse_json(text)
    if not (isinstance(v, list) and len(v) == 2
            and all(isinstance(row, list) and len(row) == 2 for row in v)):
        raise UsageError(f"bad matrix literal {text!r}: want [[a,b],[c,d]]")

    def elem(e):
        if isinstance(e, int):
            return field.elem(e)
        if isinstance(e, list) and all(isinstance(c, int) for c in e):
            return field.elem(*e)
        raise UsageError(f"bad matrix entry {e!r}")
    return field.matrix(elem(v[0][0]), elem(v[0][1]), elem(v[1][0]), elem(v[1][1]))


def _parse_point(field: FieldData, zs: list) -> tuple:
    # complex literals as "x+yi"
    if len(zs) != field.n - 1:
        raise UsageError(f"need {field.n - 1} off-components, got {len(zs)}")
    out = []
    for t in zs:
        try:
            out.append(complex(t.replace("i", "j").replace(" ", "")))
        except ValueError:
            raise UsageError(f"bad complex literal {t!r}: want 'x+yi'")
    return tuple(out)


def _trunc(args) -> TruncationParams:
    return TruncationParams(weight_bound=args.weight_bound,
                            max_terms=args.max_terms)


def _default_tol(args) -> float:
    if args.tol is not None:
        return args.tol
    return float(os.environ.get("HMSUMS_TOL", "1e-6"))


def _rand_matrix(field: FieldData, rng: random.Random,
                 norm_cap: int = 12) -> ModMatrix:
    """Random short word in S and translations; the series cost scales with
    |N(c)|, so candidates with a large lower-left entry are resampled."""
    while True:
        A = matrix_S(field)
        for _ in range(rng.randint(1, 2)):
            q = field.elem(rng.randint(-2, 2), *([] if field.n == 1
                                                 else [rng.randint(-1, 1)]))
            A = A * field.matrix(field.one, q, field.zero, field.one) \
                * matrix_S(field)
        if not A.c or abs(A.c.norm()) <= norm_cap:
            return A


def _rand_zhat(field: FieldData, rng: random.Random) -> tuple:
    return tuple(rng.uniform(-1, 1) + 1j * rng.uniform(0.5, 2.0)
                 for _ in range(field.n - 1))


# -- subcommand bodies (each returns (report_dict, passed)) --------------------

def _cmd_sum(args):
    F = make_field(args.d)
    d = _parse_elem(F, args.dnum)
    c = _parse_elem(F, args.c)
    z = _parse_point(F, args.z or [])
    v = sum_s(F, d, c, z, args.j, _trunc(args))
    return {"value": v}, True


def _cmd_phi(args):
    F = make_field(args.d)
    A = _parse_matrix(F, args.matrix)
    z = _parse_point(F, args.z) if args.z else None
    if z is not None:
        zj = apex_point(F, A)[args.j] if A.c else 1j
        z = z[:args.j] + (zj,) + z[args.j:]
    v = phi(F, A, z=z, j=args.j, trunc=_trunc(args))
    return {"value": v}, True


def _cmd_psi(args):
    F = make_field(args.d)
    A = _parse_matrix(F, args.matrix)
    v = psi(F, A, trunc=_trunc(args))
    return {"value": v}, True


def _cmd_classify(args):
    F = make_field(args.d)
    A = _parse_matrix(F, args.matrix)
    return {"tags": list(classify(A))}, True


def _cmd_la(args):
    F = make_field(args.d)
    A = _parse_matrix(F, args.matrix)
    la = l_a(A, args.s, args.norm_bound, args.max_terms)
    return {"value_re": la.value.real, "value_im": la.value.imag,
            "tail_error": la.tail_error, "norm_bound": la.norm_bound,
            "heuristic_tail": la.heuristic_tail}, True


def _cmd_theorem5(args):
    F = make_field(args.d)
    A = _parse_matrix(F, args.matrix)
    defect, budget, per, _ = period_defect(
        A, args.s, norm_bound=args.norm_bound, m=args.quad_order,
        trunc=_trunc(args), tol=_default_tol(args), mu_cap=args.mu_cap)
    ok = bool(defect <= budget)
    return {"value_re": float(per.real), "value_im": float(per.imag),
            "defect": float(defect), "budget": float(budget),
            "pass": ok}, ok


def _cmd_classical(args):
    cases = []
    ok = True
    if args.recip:
        d, c = args.dnum, args.c
        if not (0 < d < c and math.gcd(c, d) == 1):
            raise UsageError("--recip wants coprime 0 < d < c")
        lhs = classical_dedekind_s(d, c) + classical_dedekind_s(c % d, d)
        rhs = Fraction(-1, 4) + Fraction(1, 12) * (
            Fraction(c, d) + Fraction(d, c) + Fraction(1, c * d))
        defect = lhs - rhs
        ok &= defect == 0
        cases.append({"check": "reciprocity", "c": c, "d": d,
                      "value": str(classical_dedekind_s(d, c)),
                      "defect": float(defect)})
    if args.rademacher:
        F1 = make_field(1)
        rng = random.Random(args.seed)
        worst = 0
        for _ in range(args.trials):
            A, B = _rand_matrix(F1, rng), _rand_matrix(F1, rng)
            cs = A.c.a * B.c.a * (A * B).c.a
            sgn = (1 if cs > 0 else -1) if cs else 0
            defect = classical_phi_R(A * B) - classical_phi_R(A) \
                - classical_phi_R(B) + 3 * sgn
            worst = max(worst, abs(defect))
        ok &= worst == 0
        cases.append({"check": "rademacher-cocycle", "trials": args.trials,
                      "defect": float(worst)})
    if not cases:
        raise UsageError("classical: pick --recip and/or --rademacher")
    return {"cases": cases}, ok


_VERIFY_TOLS = {"cocycle": 1e-6, "reciprocity": 1e-6, "hecke": 1e-5}


def _cmd_verify(args):
    F = make_field(args.d)
    rng = random.Random(args.seed)
    trunc = _trunc(args)
    tol = args.tol if args.tol is not None else float(
        os.environ.get("HMSUMS_TOL", str(_VERIFY_TOLS[args.what])))
    cases = []
    for trial in range(args.trials):
        if args.what == "cocycle":
            while True:
                A, B = _rand_matrix(F, rng), _rand_matrix(F, rng)
                if A.c and B.c and (A * B).c \
                        and abs((A * B).c.norm()) <= 12:
                    break
            z = tuple(rng.uniform(-1, 1) + 1j * rng.uniform(0.5, 2.0)
                      for _ in range(F.n))
            j = rng.randrange(F.n)
            Bz = tuple(B.moebius(k, z[k]) for k in range(F.n))
            sgn = (A.c * B.c * (A * B).c).sign_emb(j)
            defect = abs(phi(F, A * B, z=z, j=j, trunc=trunc)
                         - phi(F, A, z=Bz, j=j, trunc=trunc)
                         - phi(F, B, z=z, j=j, trunc=trunc)
                         + 0.25 * sgn)
            inputs = {"A": repr(A), "B": repr(B), "j": j}
        elif args.what == "reciprocity":
            while True:
                A = _rand_matrix(F, rng)
                c, d = A.c, A.d
                if c and d and c.sign_emb(0) > 0 and d.sign_emb(0) > 0:
                    break
            z = _rand_zhat(F, rng)
            defect = abs(reciprocity_defect(F, d, c, z, 0, trunc))
            inputs = {"c": repr(c), "d": repr(d)}
        else:  # hecke
            p = F.elem(3, 1) if F.n == 2 else F.elem(2)
            while True:
                A = _rand_matrix(F, rng)
                if A.c:
                    break
            z = _rand_zhat(F, rng)
            defect = abs(hecke_defect(F, A.d, A.c, z, p, 0, trunc))
            inputs = {"c": repr(A.c), "d": repr(A.d), "p": repr(p)}
        cases.append({"trial": trial, "inputs": inputs, "defect": defect})
    worst = max(c["defect"] for c in cases)
    return {"cases": cases, "tol": tol}, worst <= tol


# -- argument plumbing ---------------------------------------------------------

def _add_common(p, field=True):
    if field:
        p.add_argument("--d", type=int, default=7,
                       help="field parameter D (1 for the rational field)")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--weight-bound", type=float, default=35.0)
    p.add_argument("--max-terms", type=int, default=5_000_000)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hmsums", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("sum", help="generalized Dedekind sum s_j(d, c; z)")
    _add_common(p)
    p.add_argument("--dnum", required=True, help="element d as JSON [a,b]")
    p.add_argument("--c", required=True, help="element c as JSON [a,b]")
    p.add_argument("--z", nargs="*", help="off-components as 'x+yi'")
    p.add_argument("--j", type=int, default=0)
    p.set_defaults(fn=_cmd_sum)

    p = sub.add_parser("phi", help="cocycle value phi_j(A)")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--z", nargs="*")
    p.add_argument("--j", type=int, default=0)
    p.set_defaults(fn=_cmd_phi)

    p = sub.add_parser("psi", help="invariant Psi(A)")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=_cmd_psi)

    p = sub.add_parser("classify", help="per-embedding matrix classification")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("la", help="partial L-function L_A(s)")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--norm-bound", type=float, default=2000.0)
    p.set_defaults(fn=_cmd_la)

    p = sub.add_parser("theorem5",
                       help="geodesic period vs Gamma-factor times L_A(s)")
    _add_common(p)
    p.add_argument("--matrix", required=True)
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--norm-bound", type=float, default=2000.0)
    p.add_argument("--quad-order", type=int, default=16)
    p.add_argument("--mu-cap", type=float, default=8000.0)
    p.set_defaults(fn=_cmd_theorem5)

    p = sub.add_parser("classical", help="exact rational degree-1 checks")
    _add_common(p, field=False)
    p.add_argument("--recip", action="store_true")
    p.add_argument("--rademacher", action="store_true")
    p.add_argument("--c", type=int, default=3)
    p.add_argument("--dnum", "--d", dest="dnum", type=int, default=1)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(fn=_cmd_classical)

    p = sub.add_parser("verify", help="randomized identity campaigns")
    p.add_argument("what", choices=sorted(_VERIFY_TOLS))
    _add_common(p)
    p.add_argument("--trials", type=int, default=10)
    p.set_defaults(fn=_cmd_verify)
    return ap


def run(argv: list) -> int:
    t0 = time.monotonic()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    report = {"command": ["hmsums"] + list(argv)}
    try:
        body, ok = args.fn(args)
    except UsageError as e:
        print(f"hmsums: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # compute-level failure
        report["error"] = f"{type(e).__name__}: {e}"
        print(json.dumps(report, sort_keys=True))
        return 1
    report.update(body)
    defects = [c["defect"] for c in body.get("cases", []) if "defect" in c]
    if "defect" in body:
        defects.append(body["defect"])
    report["aggregate"] = {
        "max_defect": max(defects) if defects else 0.0,
        "pass": bool(ok),
        "wall_time": round(time.monotonic() - t0, 3),
    }
    print(json.dumps(report, sort_keys=True))
    return 0 if ok else 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
