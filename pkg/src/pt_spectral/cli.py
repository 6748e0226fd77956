"""Command-line interface.

Coefficients are given as the vector a = (a_1, ..., a_{m-1}) of
P(z) = a_1 z^{m-1} + ... + a_{m-1} z.  ``--cubic alpha,beta,gamma`` instead
describes the potential alpha i z^3 + beta z^2 + gamma i z (m = 3) and is
converted to a = (beta c^4, -gamma c^3), c = alpha^{-1/5}; reported
eigenvalues are then converted back to that potential.

Exit codes: 0 success (for ``check``: proved positive real), 10 proved real
given real, 20 unknown, 2 invalid input, 3 solver did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import criteria, spectral
from .errors import InvalidSpecError, SpectralError
from .integrator import DEFAULT_REL_TOL, RaySpec
from .potential import PotentialSpec, asymptotic_eigenvalue
from .rootfind import Rect

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCOMPLETE = 3

TOL_ENV = "PT_SPECTRAL_TOL"
VALUE_FLAGS = ("--a", "--cubic", "--range", "--window", "--grid")


# --------------------------------------------------------------------------- output


def _fmt(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def to_json(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits and keys in insertion order."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag}, indent)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format(x, ".17g") if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --------------------------------------------------------------------------- parsing


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _interval(text: str):
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    if len(vals) != 2 or not vals[0] < vals[1]:
        raise argparse.ArgumentTypeError(f"expected lo:hi with lo < hi, got {text!r}")
    return tuple(vals)


def _window(text: str) -> Rect:
    parts = text.split(":")
    try:
        x0, x1, y0, y1 = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re0:re1:im0:im1, got {text!r}")
    if not (x0 < x1 and y0 < y1):
        raise argparse.ArgumentTypeError("window must have re0 < re1 and im0 < im1")
    return Rect(x0, x1, y0, y1)


def _grid(text: str):
    parts = text.split(",")
    try:
        nx, ny = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected nx,ny, got {text!r}")
    if nx < 2 or ny < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points per axis")
    return nx, ny


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _positive_float(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pt-spectral", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="JSON file with the command and its options")
    sub = parser.add_subparsers(dest="command")

    def common(p, needs_spec=True):
        if needs_spec:
            p.add_argument("--m", type=int, required=False, help="degree m >= 2")
            g = p.add_mutually_exclusive_group()
            g.add_argument("--a", type=_floats, help="coefficients a_1,...,a_{m-1}")
            g.add_argument("--cubic", type=_floats, help="alpha,beta,gamma of alpha i z^3 + beta z^2 + gamma i z")
        p.add_argument("--tol", type=_positive_float, help=f"integrator tolerance (env {TOL_ENV})")
        p.add_argument("--radius", type=_positive_float, help="fixed seeding radius")
        p.add_argument("--output", "-o", help="output file (default stdout)")

    p = sub.add_parser("spectrum", help="lowest eigenvalues as JSON")
    common(p)
    p.add_argument("--count", type=_positive_int, default=5)
    p.add_argument("--window", type=_window, help="search rectangle re0:re1:im0:im1")

    p = sub.add_parser("determinant-grid", help="eigencondition on a rectangular grid (CSV)")
    common(p)
    p.add_argument("--window", type=_window, required=True)
    p.add_argument("--grid", type=_grid, default=(21, 21), help="nx,ny")

    p = sub.add_parser("sweep", help="follow eigenvalues while one coefficient varies")
    common(p)
    p.add_argument("--coeff", type=int, required=True, help="index k of the swept a_k")
    p.add_argument("--range", type=_interval, required=True, help="lo:hi")
    p.add_argument("--steps", type=int, default=31)
    p.add_argument("--count", type=_positive_int, default=2)

    p = sub.add_parser("check", help="which sufficient conditions hold (JSON)")
    common(p)

    p = sub.add_parser("associated", help="associated half-line eigenvalues (JSON)")
    common(p)
    p.add_argument("--bc", choices=[spectral.DIRICHLET, spectral.NEUMANN], default=spectral.DIRICHLET)
    p.add_argument("--count", type=_positive_int, default=6)

    p = sub.add_parser("asymptotics", help="computed eigenvalues against the large-k law (CSV)")
    common(p)
    p.add_argument("--count", type=_positive_int, default=10)
    return parser


def _normalize_argv(argv: Sequence[str]) -> List[str]:
    """Glue values that start with '-' (e.g. ``--a -1,2``) to their flag."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def _config_argv(path: str) -> List[str]:
    """Translate a JSON config document into command-line tokens."""
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict) or "command" not in cfg:
        raise InvalidSpecError("config must be a JSON object with a 'command' field")
    argv = [str(cfg.pop("command"))]
    for key, val in cfg.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, list):
            sep = ":" if key in ("range", "window") else ","
            val = sep.join(str(v) for v in val)
        argv.append(f"{flag}={val}")
    return argv


# --------------------------------------------------------------------------- commands


class Problem:
    def __init__(self, args):
        self.cubic_factor = None
        if args.cubic is not None:
            if len(args.cubic) != 3:
                raise InvalidSpecError("--cubic needs exactly three numbers")
            if args.m not in (None, 3):
                raise InvalidSpecError("--cubic implies m = 3")
            self.spec, self.cubic_factor = criteria.cubic_to_spec(*args.cubic)
        else:
            if args.m is None:
                raise InvalidSpecError("--m is required")
            self.spec = PotentialSpec(args.m, args.a if args.a is not None else ())
        tol = args.tol
        if tol is None:
            env = os.environ.get(TOL_ENV)
            try:
                tol = float(env) if env else DEFAULT_REL_TOL
            except ValueError:
                raise InvalidSpecError(f"{TOL_ENV} must be a number, got {env!r}")
            if not tol > 0:
                raise InvalidSpecError(f"{TOL_ENV} must be positive")
        self.tol = tol
        self.ray = RaySpec(radius=args.radius, rel_tol=tol)

    def to_user(self, lam: complex) -> complex:
        return lam * self.cubic_factor if self.cubic_factor else lam

    def header(self) -> dict:
        return {"m": self.spec.m, "a": list(self.spec.a)}


def cmd_spectrum(args, prob: Problem) -> int:
    eigs = spectral.find_eigenvalues(prob.spec, args.count, window=args.window, ray=prob.ray)
    doc = prob.header()
    doc["eigenvalues"] = [
        {"re": prob.to_user(e.lam).real, "im": prob.to_user(e.lam).imag, "index": e.index,
         "residual": e.residual, "class": e.classification}
        for e in eigs
    ]
    doc["radiusUsed"] = max([e.radius_used for e in eigs] + [0.0])
    doc["tol"] = prob.tol
    doc["incomplete"] = not eigs.complete
    if eigs.diagnostics:
        doc["diagnostics"] = list(eigs.diagnostics)
    _emit(to_json(doc), args.output)
    return EXIT_OK if eigs.complete else EXIT_INCOMPLETE


def cmd_grid(args, prob: Problem) -> int:
    nx, ny = args.grid
    w = args.window
    rows = []
    for y in np.linspace(w.y0, w.y1, ny):
        for x in np.linspace(w.x0, w.x1, nx):
            M = spectral.eigencondition(prob.spec, complex(x, y), prob.ray)
            rows.append((float(x), float(y), M.real, M.imag, math.log(abs(M)) if M != 0 else -math.inf))
    _emit(_csv_text(["re_lambda", "im_lambda", "re_M", "im_M", "log_abs_M"], rows), args.output)
    return EXIT_OK


def cmd_sweep(args, prob: Problem) -> int:
    if args.steps < 2:
        raise InvalidSpecError("--steps must be >= 2")
    res = spectral.sweep_coefficient(prob.spec, args.coeff, args.range, args.steps, args.count, prob.ray)
    rows = []
    for v, traj in zip(res.parameter_values, res.trajectories):
        for i, lam in enumerate(traj):
            lam = prob.to_user(lam)
            rows.append((float(v), i, lam.real, lam.imag, spectral.REAL if spectral.is_real(lam) else spectral.PAIR))
    table = _csv_text(["parameter", "index", "re_lambda", "im_lambda", "class"], rows)
    events = {"coeff": args.coeff, "events": res.events,
              "incomplete": bool(res.incomplete_steps), "incompleteSteps": res.incomplete_steps}
    if args.output:
        _emit(table, args.output)
        _emit(to_json(events), args.output + ".events.json")
    else:
        _emit(table + "\n" + to_json(events), None)
    return EXIT_INCOMPLETE if res.incomplete_steps else EXIT_OK


def report_dict(rep: criteria.HypothesisReport) -> dict:
    return {
        "m": rep.m,
        "a": list(rep.a),
        "theoremMainWitness": rep.main_witness,
        "extThmRealityBound": rep.extension_reality_bound,
        "extThmPositivityBound": rep.extension_positivity_bound,
        "smallMBounds": list(rep.small_m_bounds) if rep.small_m_bounds else None,
        "exactlySolvableVerdict": rep.exactly_solvable,
        "overallVerdict": rep.overall,
        "notes": list(rep.notes),
    }


def cmd_check(args, prob: Problem) -> int:
    rep = criteria.hypothesis_report(prob.spec)
    _emit(to_json(report_dict(rep)), args.output)
    return rep.exit_code


def cmd_associated(args, prob: Problem) -> int:
    res = spectral.associated_spectrum(prob.spec, args.bc, args.count, ray=prob.ray)
    doc = [{"E": {"re": e.E.real, "im": e.E.imag}, "bc": e.bc, "im_omega2_E": e.signed_im,
            "residual": e.residual} for e in res]
    _emit(to_json(doc), args.output)
    return EXIT_OK if res.complete and len(res) == args.count else EXIT_INCOMPLETE


def cmd_asymptotics(args, prob: Problem) -> int:
    if prob.spec.m < 3:
        raise InvalidSpecError("the large-k law needs m >= 3")
    eigs = spectral.find_eigenvalues(prob.spec, args.count, ray=prob.ray)
    rows = []
    for e in eigs:
        k = e.index + 1
        asym = asymptotic_eigenvalue(prob.spec.m, k)
        rows.append((k, e.lam.real, e.lam.imag, asym, e.lam.real / asym))
    _emit(_csv_text(["k", "re_lambda", "im_lambda", "asymptotic", "ratio"], rows), args.output)
    return EXIT_OK if eigs.complete else EXIT_INCOMPLETE


COMMANDS = {
    "spectrum": cmd_spectrum,
    "determinant-grid": cmd_grid,
    "sweep": cmd_sweep,
    "check": cmd_check,
    "associated": cmd_associated,
    "asymptotics": cmd_asymptotics,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if "--config" in argv or any(a.startswith("--config=") for a in argv):
            pre, _ = parser.parse_known_args(_normalize_argv(argv))
            argv = _config_argv(pre.config)
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    try:
        prob = Problem(args)
        return COMMANDS[args.command](args, prob)
    except (InvalidSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SpectralError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.output:
            _emit(to_json({"incomplete": True, "error": str(exc)}), args.output)
        else:
            _emit(to_json({"incomplete": True, "error": str(exc)}), None)
        return EXIT_INCOMPLETE
