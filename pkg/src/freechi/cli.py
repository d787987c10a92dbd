"""Command-line interface.

Exit codes: 0 success or verified, 1 a check ran and came out false,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import partitions as P
from .errors import SizeLimitError, TruncationError
from .rational import format_rational

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2

# brute-force expansion of Q_n^r touches n^(2r) words; refuse beyond this
BRUTE_WORD_BUDGET = 200_000


class UsageError(Exception):
    pass


def _read_text_arg(value: str) -> str:
    """Inline JSON/text, or the contents of a file path."""
    s = value.strip()
    if s.startswith("{") or s.startswith("["):
        return s
    path = Path(value)
    if not path.exists():
        raise UsageError(f"no such file: {value}")
    return path.read_text()


def _load_law(value: str):
    from .laws import law_from_json

    try:
        return law_from_json(json.loads(_read_text_arg(value)))
    except json.JSONDecodeError as e:
        raise UsageError(f"law is not valid JSON: {e}") from None
    except KeyError as e:
        raise UsageError(f"law is missing field {e}") from None


def _load_matrix(value: str):
    from .quadratic_forms import read_matrix

    return read_matrix(_read_text_arg(value))


def _fmt_list(xs) -> str:
    return " ".join(format_rational(x) for x in xs)


def _emit_json(path: str | None, payload) -> None:
    if path:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text)


# ---------------------------------------------------------------- nc


def _parse_sets(text: str | None) -> tuple[tuple[int, ...], ...]:
    if not text:
        return ()
    out = []
    for part in text.split(";"):
        part = part.strip()
        if part:
            out.append(tuple(sorted(int(x) for x in part.split(","))))
    return tuple(out)


def cmd_nc_list(a) -> int:
    if a.n > P.NC_ENUMERATION_CAP:
        raise SizeLimitError(f"n = {a.n} exceeds the enumeration cap of {P.NC_ENUMERATION_CAP}")
    req = _parse_sets(a.required)
    parts = P.enumerate_nc_filtered(a.n, a.kind, _parse_sets(a.forbid), req[0] if req else None)
    if a.count:
        print(len(parts))
    else:
        for p in parts:
            print(p)
    _emit_json(a.json, [p.to_json() for p in parts])
    return EXIT_OK


def cmd_nc_kreweras(a) -> int:
    p = P.Partition.parse(a.partition)
    fn = {"right": P.kreweras_right, "left": P.kreweras_left, "extended": P.kreweras_extended}[a.side]
    q = fn(p)
    print(q)
    _emit_json(a.json, q.to_json())
    return EXIT_OK


def cmd_nc_join(a) -> int:
    p, q = P.Partition.parse(a.p), P.Partition.parse(a.q)
    j = P.nc_join(p, q)
    print(j)
    _emit_json(a.json, {"join": j.to_json(), "is_one": len(j) == 1})
    return EXIT_OK


# ---------------------------------------------------------------- law


def cmd_law_cumulants(a) -> int:
    from .laws import to_cumulants

    kc = to_cumulants(_load_law(a.law), a.order)
    print(_fmt_list(kc))
    _emit_json(a.json, kc.to_json())
    return EXIT_OK


def cmd_law_moments(a) -> int:
    from .laws import to_cumulants
    from .series import moments_from_cumulants

    ms = moments_from_cumulants(to_cumulants(_load_law(a.law), a.order))
    print(_fmt_list(ms))
    _emit_json(a.json, {"order": ms.order, "m": [format_rational(x) for x in ms]})
    return EXIT_OK


# ---------------------------------------------------------------- qn


def _qn_cumulants(kc, n: int, R: int, method: str) -> list[Fraction]:
    from .free_moments import poly_cumulants, sample_variance_poly
    from .quadratic_forms import centering_matrix, quad_cumulant_iid, sample_variance_cumulant
    from .series import symmetrize_even

    if method == "closed":
        return [sample_variance_cumulant(kc, n, r) for r in range(1, R + 1)]
    if method == "rcyclic":
        even = symmetrize_even(kc)
        A = centering_matrix(n)
        return [quad_cumulant_iid(A, even, r) for r in range(1, R + 1)]
    _check_brute(n, R)
    return list(poly_cumulants(sample_variance_poly(n), kc, R))


def _check_brute(n: int, R: int) -> None:
    from .free_moments import WORD_CAP

    if 2 * R > WORD_CAP:
        raise SizeLimitError(f"brute force needs words of length {2 * R}; the cap is {WORD_CAP}")
    if n ** (2 * R) > BRUTE_WORD_BUDGET:
        raise SizeLimitError(f"brute force would expand {n ** (2 * R)} words; the budget is {BRUTE_WORD_BUDGET}")


def _brute_ok(n: int, R: int) -> bool:
    try:
        _check_brute(n, R)
        return True
    except SizeLimitError:
        return False


def cmd_qn_cumulants(a) -> int:
    from .laws import to_cumulants

    if a.n < 2:
        raise UsageError("--n must be at least 2")
    kc = to_cumulants(_load_law(a.law), 2 * a.order)
    vals = _qn_cumulants(kc, a.n, a.order, a.method)
    print(_fmt_list(vals))
    _emit_json(a.json, {"n": a.n, "method": a.method, "k": [format_rational(v) for v in vals]})
    return EXIT_OK


def cmd_qn_verify(a) -> int:
    from .laws import to_cumulants

    if a.n < 2:
        raise UsageError("--n must be at least 2")
    kc = to_cumulants(_load_law(a.law), 2 * a.order)
    k2 = kc[2]
    closed = _qn_cumulants(kc, a.n, a.order, "closed")
    brute = _qn_cumulants(kc, a.n, a.order, "brute") if _brute_ok(a.n, a.order) else None
    rows = []
    ok = True
    print("r  closed  brute  target  verdict")
    for r in range(1, a.order + 1):
        target = (a.n - 1) * k2**r
        c = closed[r - 1]
        b = brute[r - 1] if brute is not None else None
        good = c == target and (b is None or b == c)
        ok &= good
        rows.append(
            {
                "r": r,
                "closed": format_rational(c),
                "brute": None if b is None else format_rational(b),
                "target": format_rational(target),
                "chi_square": good,
            }
        )
        bt = "-" if b is None else format_rational(b)
        print(f"{r}  {format_rational(c)}  {bt}  {format_rational(target)}  {'PASS' if good else 'FAIL'}")
    print("Q_n ~ chi^2(n-1): " + ("yes" if ok else "no"))
    _emit_json(a.json, {"n": a.n, "order": a.order, "chi_square": ok, "orders": rows})
    return EXIT_OK if ok else EXIT_FALSE


# ---------------------------------------------------------------- quadform


def cmd_quadform_cumulants(a) -> int:
    from .free_moments import poly_cumulants, quadratic_form_poly
    from .laws import to_cumulants
    from .quadratic_forms import quad_cumulant_even_family, quad_cumulant_iid

    A = _load_matrix(a.matrix)
    n = A.shape[0]
    kc = to_cumulants(_load_law(a.law), 2 * a.order)
    if a.method == "iid":
        vals = [quad_cumulant_iid(A, kc, r) for r in range(1, a.order + 1)]
    elif a.method == "family":
        vals = [quad_cumulant_even_family(A, [kc] * n, r) for r in range(1, a.order + 1)]
    else:
        _check_brute(n, a.order)
        vals = list(poly_cumulants(quadratic_form_poly(A.tolist()), kc, a.order))
    print(_fmt_list(vals))
    _emit_json(a.json, {"method": a.method, "k": [format_rational(v) for v in vals]})
    return EXIT_OK


def cmd_quadform_cn(a) -> int:
    from .quadratic_forms import coefficient_cn

    rows = []
    for q in P.iter_nc(a.r):
        hat = P.blow_up(q)
        c = coefficient_cn(hat, a.n)
        rows.append({"pi": str(q), "pi_hat": str(hat), "c": format_rational(c)})
        print(f"{hat}  {format_rational(c)}")
    _emit_json(a.json, rows)
    return EXIT_OK


# ---------------------------------------------------------------- fid


def cmd_fid_check(a) -> int:
    from .infdiv import hankel_necessary_check
    from .laws import to_cumulants

    v = hankel_necessary_check(to_cumulants(_load_law(a.law), a.order))
    print(v.label if v.fid_consistent else f"{v.label}: minor k={v.violating_minor} = {format_rational(v.minor_value)}")
    _emit_json(a.json, v.to_json())
    return EXIT_OK if v.fid_consistent else EXIT_FALSE


def cmd_fid_witness(a) -> int:
    from .infdiv import fid_witness_moments, hankel_necessary_check
    from .laws import to_cumulants
    from .quadratic_forms import quad_cumulant_iid
    from .series import CumulantSeq

    A = _load_matrix(a.matrix)
    kc = to_cumulants(_load_law(a.law), 2 * a.order)
    w = fid_witness_moments(A, kc, a.order)
    k = [quad_cumulant_iid(A, kc, r) for r in range(1, a.order + 1)]
    same = w == k
    v = hankel_necessary_check(CumulantSeq(k))
    print("witness: " + _fmt_list(w))
    print("K_r(T):  " + _fmt_list(k))
    print(f"identity: {'holds' if same else 'FAILS'}; hankel: {v.label}")
    _emit_json(
        a.json,
        {
            "witness": [format_rational(x) for x in w],
            "cumulants": [format_rational(x) for x in k],
            "identity": same,
            "hankel": v.to_json(),
        },
    )
    return EXIT_OK if same and v.fid_consistent else EXIT_FALSE


# ---------------------------------------------------------------- density


def cmd_density_emit(a) -> int:
    from .analytic import mp_table, semicircle_table
    from .laws import FreePoisson, Semicircle

    law = _load_law(a.law)
    if isinstance(law, Semicircle):
        if law.sigma2 == 0:
            raise UsageError("degenerate semicircle has no density")
        table = semicircle_table(math.sqrt(float(law.sigma2)), a.points)
    elif isinstance(law, FreePoisson):
        if law.alpha <= 0 or law.lam == 0:
            raise UsageError("free Poisson density needs lambda > 0 and alpha > 0")
        table = mp_table(float(law.lam), float(law.alpha), a.points)
    else:
        raise UsageError("density emit supports semicircle and free_poisson laws")
    text = table.to_csv()
    if a.csv and a.csv != "-":
        Path(a.csv).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- oracle


def cmd_oracle_moment(a) -> int:
    from .free_moments import PolySpec, joint_moment, poly_power_moments
    from .laws import to_cumulants

    law = _load_law(a.law)
    if a.word:
        word = [int(x) for x in a.word.split(",")]
        m = joint_moment(word, to_cumulants(law, len(word)))
        print(format_rational(m))
        _emit_json(a.json, {"moment": format_rational(m)})
        return EXIT_OK
    if not a.poly:
        raise UsageError("give --word or --poly")
    poly = PolySpec.from_json(_read_text_arg(a.poly))
    deg = max(poly.degrees() | {0})
    ms = poly_power_moments(poly, to_cumulants(law, max(1, deg * a.power)), a.power)
    print(" ".join(str(m) for m in ms))
    _emit_json(a.json, {"moments": [str(m) for m in ms]})
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="freechi", description="Exact free cumulant calculus.")
    sub = ap.add_subparsers(dest="group", required=True)

    def add(group_parser, name, fn, help_):
        p = group_parser.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--json", metavar="PATH", help="also write JSON (use - for stdout)")
        return p

    nc = sub.add_parser("nc", help="noncrossing partitions").add_subparsers(dest="cmd", required=True)
    p = add(nc, "list", cmd_nc_list, "enumerate NC(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["all", "pair", "even"], default="all")
    p.add_argument("--forbid", help='forbidden blocks, e.g. "1,2;3"')
    p.add_argument("--required", help='required block, e.g. "2,4"')
    p.add_argument("--count", action="store_true")
    p = add(nc, "kreweras", cmd_nc_kreweras, "Kreweras complement")
    p.add_argument("--side", choices=["right", "left", "extended"], default="right")
    p.add_argument("--partition", required=True)
    p = add(nc, "join", cmd_nc_join, "join in the NC lattice")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)

    law = sub.add_parser("law", help="named laws").add_subparsers(dest="cmd", required=True)
    for name, fn in (("cumulants", cmd_law_cumulants), ("moments", cmd_law_moments)):
        p = add(law, name, fn, f"{name} of a law")
        p.add_argument("--law", required=True, help="LawSpec JSON file or inline JSON")
        p.add_argument("--order", type=int, required=True)

    qn = sub.add_parser("qn", help="free sample variance").add_subparsers(dest="cmd", required=True)
    p = add(qn, "cumulants", cmd_qn_cumulants, "cumulants of Q_n")
    p.add_argument("--law", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--method", choices=["closed", "rcyclic", "brute"], default="closed")
    p = add(qn, "verify-theorem", cmd_qn_verify, "is Q_n free chi-square?")
    p.add_argument("--law", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", type=int, required=True)

    qf = sub.add_parser("quadform", help="quadratic forms").add_subparsers(dest="cmd", required=True)
    p = add(qf, "cumulants", cmd_quadform_cumulants, "cumulants of sum a_ij X_i X_j")
    p.add_argument("--matrix", required=True, help="CSV or JSON matrix file, or inline JSON")
    p.add_argument("--law", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--method", choices=["iid", "family", "brute"], default="iid")
    p = add(qf, "cn-coeffs", cmd_quadform_cn, "coefficients c_n over the even interval")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)

    fid = sub.add_parser("fid", help="free infinite divisibility").add_subparsers(dest="cmd", required=True)
    p = add(fid, "check", cmd_fid_check, "Hankel necessary condition")
    p.add_argument("--law", required=True)
    p.add_argument("--order", type=int, required=True)
    p = add(fid, "witness", cmd_fid_witness, "witness identity for a quadratic form")
    p.add_argument("--matrix", required=True)
    p.add_argument("--law", required=True)
    p.add_argument("--order", type=int, required=True)

    den = sub.add_parser("density", help="closed-form densities").add_subparsers(dest="cmd", required=True)
    p = den.add_parser("emit", help="tabulate a density as CSV")
    p.set_defaults(fn=cmd_density_emit)
    p.add_argument("--law", required=True)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--csv", metavar="PATH")

    orc = sub.add_parser("oracle", help="brute-force moments").add_subparsers(dest="cmd", required=True)
    p = add(orc, "moment", cmd_oracle_moment, "joint moment of a word or powers of a polynomial")
    p.add_argument("--law", required=True)
    p.add_argument("--word", help="comma-separated variable indices")
    p.add_argument("--poly", help="PolySpec JSON file or inline JSON")
    p.add_argument("--power", type=int, default=1)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_USAGE
    for name in ("n", "order", "r", "power", "points"):
        v = getattr(a, name, None)
        if v is not None and v < 1:
            print(f"error: --{name} must be positive", file=sys.stderr)
            return EXIT_USAGE
    try:
        return a.fn(a)
    except (UsageError, ValueError, SizeLimitError, TruncationError, KeyError, OSError) as e:
        msg = str(e).splitlines()[0] if str(e) else type(e).__name__
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
