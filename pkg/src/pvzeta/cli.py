"""Command-line front end.

Exit codes: 0 success, 1 a verification tolerance was breached (or a numerical
failure occurred), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from .errors import IllConditioned, Inconsistent, NearPole, NotFound, OutOfRange, PvZetaError, QuadratureFailure
from .gamma_lab import extract_gamma
from .pvs_registry import BUILTIN_NAMES, builtin_space, format_factors, loads, resolve_space
from .schwartz_lab import PsiCharacter, TestFunction, select
from .suite import run_suite
from .symbolic_weyl import capelli_eigenvalue, denominator, twisted_capelli_eigenvalue
from .tables import dumps_json, fmt, zeta_grid_csv
from .zeta_engine import DEFAULT_CONFIG, EtaVector, residue_estimate


class UsageError(Exception):
    pass


def load_space(name: str):
    if name.endswith(".json"):
        path = Path(name)
        if not path.is_file():
            raise UsageError(f"descriptor file {name} not found")
        return loads(path.read_text())
    try:
        return resolve_space(name)
    except NotFound as exc:
        raise UsageError(str(exc)) from None


def parse_grid(text: str) -> list[complex]:
    """re0:re1:steps,im -> evenly spaced points including both ends."""
    try:
        span, im = text.split(",") if "," in text else (text, "0")
        re0, re1, steps = span.split(":")
        re0, re1, steps, im = float(re0), float(re1), int(steps), float(im)
    except ValueError:
        raise UsageError(f"lambda grid must look like re0:re1:steps,im, got {text!r}") from None
    if steps < 1:
        raise UsageError("lambda grid needs at least one step")
    if steps == 1:
        return [complex(re0, im)]
    return [complex(re0 + (re1 - re0) * j / (steps - 1), im) for j in range(steps)]


def parse_eta(text: str | None, k: int) -> EtaVector:
    if text is None:
        return EtaVector.ones(k)
    try:
        coeffs = [complex(c.strip().replace(" ", "")) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"eta must be comma-separated numbers, got {text!r}") from None
    if len(coeffs) != k:
        raise UsageError(f"eta needs {k} coefficients, got {len(coeffs)}")
    return EtaVector(tuple(coeffs))


def parse_xi(text: str | None, n: int) -> TestFunction:
    if text is None:
        return TestFunction.gaussian(n)
    try:
        nn, deg, idx = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"xi must be n,degree,index, got {text!r}") from None
    if nn != n:
        raise UsageError(f"xi lives in {nn} variables but the space has dimension {n}")
    try:
        return select(nn, deg, idx)
    except (IndexError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def parse_psi(text: str) -> PsiCharacter:
    try:
        return PsiCharacter(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"psi parameter must be a nonzero rational, got {text!r}") from None


def config(args):
    workers = getattr(args, "threads", None)
    if workers is None:
        raw = os.environ.get("PVZETA_THREADS", "").strip() or "1"
        try:
            workers = int(raw)
        except ValueError:
            raise UsageError(f"PVZETA_THREADS must be an integer, got {raw!r}") from None
    if workers < 1:
        raise UsageError("thread count must be positive")
    return replace(DEFAULT_CONFIG, workers=workers)


def emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_spaces(args) -> int:
    rows = [["name", "dim", "rank", "orbits", "b(s)", "kappa"]]
    for name in BUILTIN_NAMES:
        d = builtin_space(name)
        s = d.summary()
        rows.append([s["name"], str(s["dim"]), str(s["rank"]), str(s["orbits"]), s["bfun"],
                     str(Fraction(d.kappa[0]))])
    if args.json:
        sys.stdout.write(dumps_json([builtin_space(n).summary() for n in BUILTIN_NAMES]))
        return 0
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return 0


def cmd_bfun(args) -> int:
    d = load_space(args.space)
    b = d.bfun[0]
    print(f"b(s) = {format_factors(b)}")
    for part in b.factor_strings():
        print(part)
    return 0


def cmd_capelli(args) -> int:
    d = load_space(args.space)
    if args.M < 0:
        raise UsageError("--M must be nonnegative")
    c = capelli_eigenvalue(d, args.M)
    print(f"c(s) = {format_factors(c)}")
    for part in c.factor_strings():
        print(part)
    print("m,twisted_eigenvalue,c(s+mu*m),equal")
    ok = True
    for m in range(-args.twists, args.twists + 1):
        tw = twisted_capelli_eigenvalue(d, args.M, m)
        ref = c.shift(m * d.capelli_mu)
        ok = ok and tw == ref
        print(f"{m},{tw},{ref},{tw == ref}")
    return 0 if ok else 1


def cmd_poles(args) -> int:
    d = load_space(args.space)
    gp = denominator(d)
    print("lambda,factor,argument" + (",residue_re,residue_im,note" if args.residues else ""))
    xi = TestFunction.gaussian(d.dim)
    eta = EtaVector.ones(d.k)
    cfg = config(args)
    for lam in gp.pole_candidates(args.count):
        _, g, m = gp.nearest_pole(complex(lam))
        line = f"{lam},{g.describe()},{-m}"
        if args.residues:
            try:
                r = residue_estimate(d, eta, xi, lam, cfg)
                line += f",{fmt(r.real)},{fmt(r.imag)},"
            except Inconsistent:
                line += ",nan,nan,not_simple"
        print(line)
    return 0


def cmd_zeta(args) -> int:
    d = load_space(args.space)
    lams = parse_grid(args.lambda_grid)
    eta = parse_eta(args.eta, d.k)
    xi = parse_xi(args.xi, d.dim)
    emit(zeta_grid_csv(d, eta, xi, lams, config(args), args.mode), args.out)
    return 0


def cmd_gamma(args) -> int:
    d = load_space(args.space)
    lam = parse_complex(args.lam)
    psi = parse_psi(args.psi)
    if args.basis < 2 * d.k:
        raise UsageError(f"--basis must be at least {2 * d.k}")
    try:
        g = extract_gamma(d, lam, psi, args.basis, config(args), strict=args.strict)
    except (NearPole, OutOfRange) as exc:
        raise UsageError(str(exc)) from None
    emit(dumps_json(g.to_json()), args.out)
    return 1 if g.flags else 0


def cmd_verify(args) -> int:
    d = load_space(args.space)
    results = run_suite(d, config(args))
    for cid, rep in results:
        print(f"[{cid}] {rep.line()}")
    passed = sum(rep.passed for _, rep in results)
    print(f"{passed}/{len(results)} checks passed")
    if args.out:
        payload = {"space": d.name, "passed": passed == len(results),
                   "checks": [dict(rep.to_json(), id=cid) for cid, rep in results]}
        Path(args.out).write_text(dumps_json(payload))
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "name", "passed", "deviation", "tolerance"])
        for cid, rep in results:
            w.writerow([cid, rep.name, rep.passed, fmt(rep.deviation), fmt(rep.tolerance)])
        Path(args.csv).write_text(buf.getvalue())
    return 0 if passed == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pvzeta", description="Local zeta integrals on prehomogeneous spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spaces", help="list the built-in spaces")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_spaces)

    s = sub.add_parser("bfun", help="print the b-function, one factor per line")
    s.add_argument("space")
    s.set_defaults(func=cmd_bfun)

    s = sub.add_parser("capelli", help="Capelli eigenvalue and twist-shift table")
    s.add_argument("space")
    s.add_argument("--M", type=int, default=1)
    s.add_argument("--twists", type=int, default=2, help="table covers m in -twists..twists")
    s.set_defaults(func=cmd_capelli)

    s = sub.add_parser("poles", help="pole candidates from the Gamma-product denominator")
    s.add_argument("space")
    s.add_argument("--count", type=int, default=3, help="poles per Gamma factor")
    s.add_argument("--residues", action="store_true", help="contour residues for the Gaussian")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_poles)

    s = sub.add_parser("zeta", help="evaluate Z on a lambda grid, CSV output")
    s.add_argument("space")
    s.add_argument("--eta", help="comma-separated orbit coefficients (default all ones)")
    s.add_argument("--xi", help="test function as n,degree,index (default the Gaussian)")
    s.add_argument("--lambda-grid", required=True, help="re0:re1:steps,im")
    s.add_argument("--mode", choices=("zeta", "lz"), default="zeta")
    s.add_argument("--out")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("gamma", help="extract the gamma matrix, JSON output")
    s.add_argument("space")
    s.add_argument("--lambda", dest="lam", required=True)
    s.add_argument("--psi", default="1")
    s.add_argument("--basis", type=int, default=8)
    s.add_argument("--strict", action="store_true", help="fail on an ill-conditioned system")
    s.add_argument("--out")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("verify", help="run the identity suite")
    s.add_argument("space")
    s.add_argument("--out", help="JSON report path")
    s.add_argument("--csv", help="CSV summary path")
    s.add_argument("--threads", type=int)
    s.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureFailure, IllConditioned, Inconsistent, NearPole) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PvZetaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
