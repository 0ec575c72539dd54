"""Batch command-line front end with deterministic JSON envelopes.

Every command prints {"command", "inputs_digest", "outputs"} as canonical
JSON.  Input JSON comes from --in or standard input and may be either a bare
payload or the envelope of a previous command, so commands chain with pipes.
Exit codes: 0 ok, 2 argument error, 3 truncation or resource limit,
4 mathematical inconsistency.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import geometry, hecke, jacobi, lfn, reduction, theta
from .elliptic import e6_delta_qexp
from .errors import ArgumentError, InconsistencyError, ResourceError, SiegelError, TruncationError
from .exactmat import SiegelPoint, fraction_str, matrix_from_json, matrix_to_json
from .expansion import FourierExpansion
from .lattice import DEFAULT_BUDGET, lattice_by_name

EXIT_OK, EXIT_ARGS, EXIT_TRUNC, EXIT_INCONSISTENT = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ArgumentError(message)


# -- JSON helpers -----------------------------------------------------------


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _complex_json(z) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def cmatrix_to_json(m) -> list:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[_complex_json(z) for z in row] for row in m]


def cmatrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict) and "rows" in obj:
        obj = obj["rows"]
    try:
        return np.array([[complex(e["re"], e["im"]) for e in row] for row in obj], dtype=complex)
    except (KeyError, TypeError) as exc:
        raise ArgumentError(f"complex matrix expected as rows of {{'re', 'im'}}: {exc}") from None


def qi_str(x: Fraction, y: Fraction) -> str:
    """x + iy as '(a+bi)/d' with a common denominator."""
    d = math.lcm(x.denominator, y.denominator)
    a, b = int(x * d), int(y * d)
    body = f"{a}{'+' if b >= 0 else '-'}{abs(b)}i" if a else f"{b}i"
    return body if d == 1 else f"({body})/{d}"


def siegel_point_to_json(z: SiegelPoint) -> dict:
    out = {"X": matrix_to_json(z.X), "Y": matrix_to_json(z.Y)}
    out["entries"] = [[qi_str(z.X[i][j], z.Y[i][j]) for j in range(z.g)] for i in range(z.g)]
    return out


def siegel_point_from_json(obj) -> SiegelPoint:
    if "X" not in obj or "Y" not in obj:
        raise ArgumentError("Siegel point JSON needs 'X' and 'Y' matrices")
    return SiegelPoint(matrix_from_json(obj["X"]), matrix_from_json(obj["Y"]))


def _read_input(args):
    if args.infile:
        with open(args.infile, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    if not text.strip():
        raise ArgumentError("no JSON input (use --in FILE or pipe JSON on standard input)")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError(f"input is not valid JSON: {exc}") from None
    if isinstance(obj, dict) and {"command", "outputs"} <= obj.keys():
        obj = obj["outputs"]
    return obj


def _expansion_in(obj) -> FourierExpansion:
    if isinstance(obj, dict) and "expansion" in obj:
        obj = obj["expansion"]
    return FourierExpansion.from_json_obj(obj)


def _fracs(text: str) -> list[Fraction]:
    return [Fraction(x) for x in text.replace(",", " ").split()]


def _tol(args) -> geometry.Tolerances:
    if args.tolerance is None:
        return geometry.DEFAULT_TOL
    t = args.tolerance
    return geometry.Tolerances(symmetry=t, min_eig=t, riemann=t, cross_ratio=t, roundtrip=t)


# -- commands ------------------------------------------------------------------


def cmd_reduce(args, obj):
    if args.mode == "minkowski":
        y = matrix_from_json(obj["Y"] if "Y" in obj and "X" not in obj else obj)
        res = reduction.minkowski_reduce(y, budget=args.budget)
        reduced = matrix_to_json(res.reduced)
    else:
        res = reduction.siegel_reduce(siegel_point_from_json(obj))
        reduced = siegel_point_to_json(res.reduced)
    return {
        "mode": args.mode,
        "reduced": reduced,
        "transform": matrix_to_json(res.transform),
        "steps": res.steps,
        "det_history": [fraction_str(d) for d in res.det_history],
    }


def cmd_volume(args, obj):
    vol = reduction.siegel_volume(args.genus)
    out = {"genus": args.genus, "rational": fraction_str(vol.rational), "pi_power": vol.pi_power, "float": vol.float_value}
    if args.samples:
        if args.genus != 1:
            raise ArgumentError("the Monte Carlo estimate is available for genus 1")
        out["monte_carlo"] = reduction.monte_carlo_volume_f1(args.samples, seed=args.seed)
    return out


def cmd_distance(args, obj):
    tol = _tol(args)
    d = geometry.geodesic_distance(cmatrix_from_json(obj["omega0"]), cmatrix_from_json(obj["omega1"]), tol)
    return {"distance": d}


def cmd_cayley(args, obj):
    tol = _tol(args)
    if args.inverse:
        return {"w": cmatrix_to_json(geometry.cayley_inv(cmatrix_from_json(obj["omega"]), tol))}
    return {"omega": cmatrix_to_json(geometry.cayley(cmatrix_from_json(obj["w"]), tol))}


def cmd_torus_ip(args, obj):
    omega = cmatrix_from_json(obj["omega"])
    i1 = geometry.TorusCharIndex(obj["A1"], obj["B1"])
    i2 = geometry.TorusCharIndex(obj["A2"], obj["B2"])
    val = geometry.torus_inner_product(omega, i1, i2, grid_n=args.grid)
    return {"inner_product": _complex_json(val), "grid": args.grid}


def cmd_theta(args, obj):
    lat = lattice_by_name(args.lattice)
    f = theta.theta_expansion(lat, args.genus, args.bound, budget=args.budget)
    return {"lattice": lat.name, "expansion": f.to_json_obj()}


def cmd_theta_const(args, obj):
    bits = [int(c) for c in args.char if c in "01"]
    if len(bits) % 2 or not bits:
        raise ArgumentError("--char needs 2g binary digits (eps' followed by eps'')")
    g = len(bits) // 2
    eps = theta.ThetaCharacteristic(tuple(bits[:g]), tuple(bits[g:]))
    f = theta.theta_constant(eps, args.bound)
    return {"char": args.char, "even": eps.is_even, "expansion": f.to_json_obj()}


def cmd_chi10(args, obj):
    return theta.chi10(args.bound).to_json_obj()


def cmd_eisenstein(args, obj):
    return theta.eisenstein_witt(args.k, args.genus, args.bound).to_json_obj()


def cmd_phi(args, obj):
    return theta.siegel_phi(_expansion_in(obj)).to_json_obj()


def cmd_hecke(args, obj):
    if args.p is None:
        raise ArgumentError("--p is required")
    if args.cosets:
        e = hecke.coset_reps(args.op, args.p, args.genus)
        return e.to_json_obj()
    f = _expansion_in(obj)
    out = {"op": args.op, "p": args.p}
    if args.mode in ("eigen", "both"):
        out["eigenvalue"] = fraction_str(hecke.eigenvalue(f, args.op, args.p))
    if args.mode in ("apply", "both"):
        out["image"] = hecke.hecke_apply(f, args.op, args.p).to_json_obj()
    return out


def cmd_satake(args, obj):
    if args.p is None or args.k is None or args.ev is None:
        raise ArgumentError("satake needs --p, --k and --ev")
    ev = _fracs(args.ev)
    if args.genus == 1:
        if len(ev) != 1:
            raise ArgumentError("genus 1 takes one eigenvalue a(p)")
        sd = hecke.satake_solve_g1(ev[0], args.k, args.p)
    else:
        if len(ev) != 3:
            raise ArgumentError("genus 2 takes three eigenvalues: T(p), T1(p2), T2(p2)")
        sd = hecke.satake_solve(args.genus, args.k, args.p, *ev)
    return sd.to_json_obj()


def cmd_fj(args, obj):
    return jacobi.fourier_jacobi(_expansion_in(obj), args.m).to_json_obj()


def cmd_vlift(args, obj):
    if isinstance(obj, dict) and "index" in obj:
        phi = jacobi.JacobiFormExpansion.from_json_obj(obj)
    else:
        phi = jacobi.fourier_jacobi(_expansion_in(obj), 1)
    bound = args.bound
    if bound is None:
        bound = max(b for b in range(2, 4 * phi.nmax + 3) if jacobi.lift_requirement(b) <= phi.nmax)
    return jacobi.maass_lift(phi, bound).to_json_obj()


def cmd_maass_check(args, obj):
    f = _expansion_in(obj)
    return {"maass": jacobi.is_maass_space(f), "bound": fraction_str(f.bound)}


def _satake_from_args(args, obj):
    ev = _fracs(args.ev) if args.ev else None
    if args.genus == 1:
        if ev is None or len(ev) != 1:
            raise ArgumentError("genus 1 needs --ev a(p)")
        return hecke.satake_solve_g1(ev[0], args.k, args.p)
    if ev is None:
        f = _expansion_in(obj)
        ev = [hecke.eigenvalue(f, op, args.p) for op in ("T(p)", "T1(p2)", "T2(p2)")]
    if len(ev) != 3:
        raise ArgumentError("genus 2 needs three eigenvalues: T(p), T1(p2), T2(p2)")
    return hecke.satake_solve(2, args.k, args.p, *ev)


def cmd_euler(args, obj):
    if args.p is None or args.k is None:
        raise ArgumentError("euler needs --p and --k")
    if args.type == "hecke":
        if not args.ev:
            raise ArgumentError("euler --type hecke needs --ev a(p)")
        return lfn.hecke_factor_g1(_fracs(args.ev)[0], args.k, args.p).to_json_obj()
    sd = _satake_from_args(args, obj)
    fac = lfn.spinor_factor(sd) if args.type == "spinor" else lfn.standard_factor(sd)
    return fac.to_json_obj()


def cmd_sk_check(args, obj):
    if args.p is None or args.k is None:
        raise ArgumentError("sk-check needs --p and --k")
    args.genus = 2
    sd = _satake_from_args(args, obj)
    if args.af is not None:
        af = Fraction(args.af)
    elif args.k == 10:
        af = Fraction(e6_delta_qexp(args.p)[args.p])
    else:
        raise ArgumentError("--af is required unless k = 10 (weight-18 eigenform built in)")
    return {"p": args.p, "k": args.k, "a_f": fraction_str(af), "holds": lfn.sk_factorization_check(sd, af, args.k)}


COMMANDS = {
    "reduce": cmd_reduce,
    "volume": cmd_volume,
    "distance": cmd_distance,
    "cayley": cmd_cayley,
    "torus-ip": cmd_torus_ip,
    "theta": cmd_theta,
    "theta-const": cmd_theta_const,
    "chi10": cmd_chi10,
    "eisenstein": cmd_eisenstein,
    "phi": cmd_phi,
    "hecke": cmd_hecke,
    "satake": cmd_satake,
    "fj": cmd_fj,
    "vlift": cmd_vlift,
    "maass-check": cmd_maass_check,
    "euler": cmd_euler,
    "sk-check": cmd_sk_check,
}

NEEDS_INPUT = {"reduce", "distance", "cayley", "torus-ip", "phi", "fj", "vlift", "maass-check"}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="siegellab", description="Exact computations with Siegel modular forms.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--in", dest="infile", help="input JSON file (default: standard input)")
        sp.add_argument("--out", dest="outfile", help="write the envelope here instead of standard output")
        sp.add_argument("--pipe", action="store_true", help="read the input JSON from standard input")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="node cap for enumerations")
        return sp

    sp = add("reduce", "Minkowski or Siegel reduction")
    sp.add_argument("--mode", choices=("minkowski", "siegel"), default="siegel")

    sp = add("volume", "exact volume of the Siegel fundamental domain")
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--samples", type=int, default=0, help="also run the genus-1 Monte Carlo estimate")
    sp.add_argument("--seed", type=int, default=0)

    for name, text in (("distance", "geodesic distance"), ("cayley", "Cayley transform"), ("torus-ip", "torus character pairing")):
        sp = add(name, text)
        sp.add_argument("--tolerance", type=float, default=None)
        if name == "cayley":
            sp.add_argument("--inverse", action="store_true")
        if name == "torus-ip":
            sp.add_argument("--grid", type=int, default=64)

    sp = add("theta", "theta series of a built-in even unimodular lattice")
    sp.add_argument("--lattice", default="E8")
    sp.add_argument("--genus", type=int, default=1)
    sp.add_argument("--bound", type=int, required=True)

    sp = add("theta-const", "theta constant with characteristic")
    sp.add_argument("--char", required=True, help="2g binary digits, e.g. 0001")
    sp.add_argument("--bound", type=int, required=True)

    sp = add("chi10", "the genus-2 cusp form of weight 10")
    sp.add_argument("--bound", type=int, required=True)

    sp = add("eisenstein", "genus-g Eisenstein series of weight 4 via E8")
    sp.add_argument("--k", type=int, default=4)
    sp.add_argument("--genus", type=int, default=2)
    sp.add_argument("--bound", type=int, required=True)

    add("phi", "Siegel Phi operator")

    sp = add("hecke", "Hecke operator action or eigenvalue")
    sp.add_argument("--op", default="T(p)")
    sp.add_argument("--p", type=int)
    sp.add_argument("--genus", type=int, default=2, help="genus for --cosets")
    sp.add_argument("--mode", choices=("eigen", "apply", "both"), default="eigen")
    sp.add_argument("--cosets", action="store_true", help="list coset representatives only")

    sp = add("satake", "Satake data from Hecke eigenvalues")
    sp.add_argument("--genus", type=int, default=2)
    sp.add_argument("--k", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--ev", help="comma-separated eigenvalues")

    sp = add("fj", "Fourier-Jacobi coefficient")
    sp.add_argument("--m", type=int, default=1)

    sp = add("vlift", "Maass lift of an index-1 Jacobi form (or of the first layer of an expansion)")
    sp.add_argument("--bound", type=int, default=None)

    add("maass-check", "test the Maass relation")

    sp = add("euler", "local Euler factor")
    sp.add_argument("--type", choices=("spinor", "standard", "hecke"), default="spinor")
    sp.add_argument("--genus", type=int, default=2)
    sp.add_argument("--k", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--ev", help="eigenvalues; omitted for genus 2 means: compute them from the input expansion")

    sp = add("sk-check", "Saito-Kurokawa factorization of the spinor factor")
    sp.add_argument("--k", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--ev")
    sp.add_argument("--af", help="a(p) of the elliptic eigenform of weight 2k - 2")
    return parser


def _digest(args, obj) -> str:
    skip = {"infile", "outfile", "pipe"}
    payload = {"args": {k: v for k, v in sorted(vars(args).items()) if k not in skip}, "input": obj}
    return hashlib.sha256(canonical(payload).encode()).hexdigest()


def _check_threads():
    raw = os.environ.get("SIEGELLAB_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ArgumentError(f"SIEGELLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ArgumentError(f"SIEGELLAB_THREADS must be a positive integer, got {raw!r}")
    return n


def _wants_input(args) -> bool:
    if args.command in NEEDS_INPUT or args.infile or args.pipe:
        return True
    if args.command == "hecke":
        return not args.cosets
    if args.command == "euler":
        return args.type != "hecke" and args.genus == 2 and not args.ev
    if args.command == "sk-check":
        return not args.ev
    return False


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start = time.perf_counter()
    try:
        _check_threads()
        args = build_parser().parse_args(argv)
        obj = _read_input(args) if _wants_input(args) else None
        outputs = COMMANDS[args.command](args, obj)
        envelope = {"command": argv, "inputs_digest": _digest(args, obj), "outputs": outputs}
        text = canonical(envelope) + "\n"
        if args.outfile:
            with open(args.outfile, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        print(f"{args.command}: {time.perf_counter() - start:.3f} s", file=sys.stderr)
        return EXIT_OK
    except (TruncationError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNC
    except InconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (ArgumentError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except SiegelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "canonical", "qi_str", "cmatrix_to_json", "cmatrix_from_json"]
