"""Command-line interface.

Subcommands::

    slsys eval      --h 0.5+0.5i --mu 1 --potential free --points -1,i
    slsys classify  --h 1+i --mu 0 --potential free
    slsys scan-mu   --h 1+i --potential free --branch stieltjes --mu-grid 2.5,3,5
    slsys weyl      --potential const:2 --points i,-1
    slsys verify    [--example 1|2] [--suite NAME]

Complex literals use the grammar ``a+bi`` / ``a-bi`` with no spaces; ``i``
alone means ``0+1i``.  ``--mu inf`` selects the mu = +inf system.  Potentials
are ``free``, ``const:<c>`` or ``table:<csv path>`` (CSV header ``x,q``,
comment lines starting '#').  CSV output uses 17 significant digits and '.'
decimals; JSON never contains NaN and serializes infinities as the string
"inf".  Exit codes: 0 success, 1 verification failure, 2 input/domain error,
3 non-accretive boundary parameter.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field

import numpy as np

from .branchcut import ext_to_json, fmt_g17, parse_extended
from .errors import InputError, NotAccretiveError, PoleError, SlsysError
from .lsystem import (
    ScanResult,
    SchrodingerLSystem,
    full_report,
    impedance,
    scan_mu,
    transfer,
)
from .verification import SUITES, run_suites
from .weyl import Potential, SolverSettings, WeylFunction

_FLOAT_RE = re.compile(r"\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?")


def parse_complex(text: str) -> complex:
    """Parse the ``a+bi`` grammar; errors report the failing position."""

    def fail(pos: int, what: str):
        raise InputError(f"cannot parse complex literal {text!r}: {what} at position {pos}")

    s = text
    for ch in " \t":
        if ch in s:
            fail(s.index(ch), "whitespace not allowed")
    if not s:
        fail(0, "empty literal")

    pos = 0
    sign = 1.0
    if s[pos] in "+-":
        sign = -1.0 if s[pos] == "-" else 1.0
        pos += 1
    if s[pos:] == "i":
        return complex(0.0, sign)
    m = _FLOAT_RE.match(s, pos)
    if m is None:
        fail(pos, "expected a number")
    first = sign * float(m.group())
    pos = m.end()
    if pos == len(s):
        return complex(first, 0.0)
    if s[pos] == "i":
        if pos + 1 != len(s):
            fail(pos + 1, "trailing characters after 'i'")
        return complex(0.0, first)
    if s[pos] not in "+-":
        fail(pos, "expected '+', '-' or 'i'")
    sign2 = -1.0 if s[pos] == "-" else 1.0
    pos += 1
    if s[pos:] == "i":
        return complex(first, sign2)
    m = _FLOAT_RE.match(s, pos)
    if m is None:
        fail(pos, "expected a number")
    second = sign2 * float(m.group())
    pos = m.end()
    if s[pos:] != "i":
        fail(pos, "expected 'i'")
    return complex(first, second)


def parse_mu(text: str) -> float:
    try:
        mu = parse_extended(text)
    except ValueError:
        raise InputError(f"cannot parse mu {text!r}: expected a real number or 'inf'") from None
    if math.isnan(mu) or mu == -math.inf:
        raise InputError(f"mu must be a finite real or +inf, got {text!r}")
    return mu


def parse_points(text: str) -> list[complex]:
    items = [t for t in text.split(",") if t != ""]
    if not items:
        raise InputError("empty point list")
    return [parse_complex(t) for t in items]


def build_weyl(spec: str, numeric: bool = False,
               settings: SolverSettings | None = None) -> WeylFunction:
    """Construct the Weyl evaluator named by a potential spec string."""
    if spec == "free":
        if numeric:
            return WeylFunction.numeric(Potential.free(), settings)
        return WeylFunction.free()
    if spec.startswith("const:"):
        try:
            c = float(spec[len("const:"):])
        except ValueError:
            raise InputError(f"cannot parse potential {spec!r}: bad constant") from None
        if numeric:
            return WeylFunction.numeric(Potential.constant(c), settings)
        return WeylFunction.constant(c)
    if spec.startswith("table:"):
        return WeylFunction.numeric(Potential.from_csv(spec[len("table:"):]), settings)
    raise InputError(
        f"cannot parse potential {spec!r}: expected free, const:<c> or table:<path>"
    )


@dataclass
class RunConfig:
    """Parsed invocation; one instance drives exactly one command run."""

    command: str
    h: complex | None = None
    mu: float | None = None
    potential: str = "free"
    points: list[complex] = field(default_factory=list)
    output: str = "csv"
    seed: int = 0
    numeric: bool = False
    neg_zero: bool = False
    branch: str = "stieltjes"
    mu_grid: list[float] = field(default_factory=list)
    mu_star: float | None = None
    suites: list[str] | None = None
    out_path: str | None = None


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="slsys",
        description="Impedance/transfer evaluation and sector classification "
                    "of half-line Schroedinger boundary systems.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, with_system=True):
        if with_system:
            p.add_argument("--h", required=True, help="boundary parameter, e.g. 0.5+0.5i (Im h > 0)")
            p.add_argument("--mu", required=True, help="extension parameter; real or 'inf'")
        p.add_argument("--potential", default="free",
                       help="free | const:<c> | table:<csv path> (default: free)")
        p.add_argument("--output", choices=("csv", "json"), default="csv",
                       help="output format (default: csv)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed recorded in reports (default: 0)")
        p.add_argument("--out", default=None, help="write output to this file instead of stdout")

    p = sub.add_parser("eval", help="evaluate impedance V and transfer W at points")
    common(p)
    p.add_argument("--points", required=True, help="comma-separated complex points, e.g. -1,0.5+0.5i,i")

    p = sub.add_parser("classify", help="full sector classification as JSON")
    common(p)

    p = sub.add_parser("scan-mu", help="tabulate the angle function over a mu grid")
    p.add_argument("--h", required=True, help="boundary parameter, e.g. 1+i (Im h > 0)")
    p.add_argument("--branch", choices=("stieltjes", "inverse"), required=True,
                   help="which branch of the mu axis to scan")
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--mu-grid", help="comma-separated mu values")
    grid.add_argument("--mu-range", help="MIN:MAX:COUNT linear grid")
    p.add_argument("--mu-star", default=None,
                   help="designated mu* for the summary bound "
                        "(default: the grid point nearest the branch edge)")
    common(p, with_system=False)

    p = sub.add_parser("weyl", help="evaluate the Weyl function m(lambda)")
    p.add_argument("--points", default=None, help="comma-separated complex lambdas")
    p.add_argument("--neg-zero", action="store_true", help="print the limit m(-0) instead")
    p.add_argument("--numeric", action="store_true",
                   help="force the numeric solver for free/const potentials")
    common(p, with_system=False)

    p = sub.add_parser("verify", help="run the built-in verification suites")
    p.add_argument("--example", choices=("1", "2"), default=None,
                   help="run only one worked-example suite")
    p.add_argument("--suite", action="append", choices=sorted(SUITES), default=None,
                   help="run a named suite (repeatable)")
    p.add_argument("--out", default=None)
    return top


_VALUE_FLAGS = frozenset((
    "--h", "--mu", "--points", "--potential", "--output", "--seed", "--out",
    "--branch", "--mu-grid", "--mu-range", "--mu-star", "--example", "--suite",
))


def _normalize_argv(argv: list[str]) -> list[str]:
    """Join value flags with '=' so values may start with '-' (e.g. --points -1,i)."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _config(argv) -> RunConfig:
    ns = _parser().parse_args(_normalize_argv(list(argv)))
    cfg = RunConfig(command=ns.command)
    cfg.out_path = getattr(ns, "out", None)
    if hasattr(ns, "output"):
        cfg.output = ns.output
    if hasattr(ns, "seed"):
        cfg.seed = ns.seed
    if hasattr(ns, "potential"):
        cfg.potential = ns.potential
    if getattr(ns, "h", None) is not None:
        cfg.h = parse_complex(ns.h)
    if getattr(ns, "mu", None) is not None:
        cfg.mu = parse_mu(ns.mu)
    if getattr(ns, "points", None) is not None:
        cfg.points = parse_points(ns.points)
    if ns.command == "scan-mu":
        cfg.branch = "inverse_stieltjes" if ns.branch == "inverse" else "stieltjes"
        if ns.mu_grid is not None:
            cfg.mu_grid = [parse_mu(t) for t in ns.mu_grid.split(",") if t != ""]
        else:
            parts = ns.mu_range.split(":")
            if len(parts) != 3:
                raise InputError(f"cannot parse --mu-range {ns.mu_range!r}: expected MIN:MAX:COUNT")
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or not hi >= lo:
                raise InputError("--mu-range needs MAX >= MIN and COUNT >= 1")
            cfg.mu_grid = [float(x) for x in np.linspace(lo, hi, count)]
        if ns.mu_star is not None:
            cfg.mu_star = parse_mu(ns.mu_star)
    if ns.command == "weyl":
        cfg.numeric = ns.numeric
        cfg.neg_zero = ns.neg_zero
        if not cfg.neg_zero and not cfg.points:
            raise InputError("weyl needs --points or --neg-zero")
    if ns.command == "verify":
        if ns.example is not None:
            cfg.suites = [f"example{ns.example}"]
        elif ns.suite:
            cfg.suites = list(ns.suite)
    return cfg


def _cell(x: float) -> str:
    return fmt_g17(x)


def run_eval(cfg: RunConfig, sink) -> int:
    sys_ = SchrodingerLSystem(cfg.h, cfg.mu, build_weyl(cfg.potential))
    rows = []
    for z in cfg.points:
        try:
            v = impedance(sys_, z)
            v_vals = (v.real, v.imag)
        except PoleError:
            v_vals = ("pole", "pole")
        try:
            w = transfer(sys_, z)
            w_vals = (w.real, w.imag)
        except PoleError:
            w_vals = ("pole", "pole")
        rows.append((z.real, z.imag) + v_vals + w_vals)
    if cfg.output == "csv":
        sink.write("re_z,im_z,re_V,im_V,re_W,im_W\n")
        for row in rows:
            sink.write(",".join(x if isinstance(x, str) else _cell(x) for x in row) + "\n")
    else:
        keys = ("re_z", "im_z", "re_V", "im_V", "re_W", "im_W")
        payload = {"rows": [dict(zip(keys, row)) for row in rows], "seed": cfg.seed}
        sink.write(json.dumps(payload) + "\n")
    return 0


def run_classify(cfg: RunConfig, sink) -> int:
    sys_ = SchrodingerLSystem(cfg.h, cfg.mu, build_weyl(cfg.potential))
    rep = full_report(sys_)
    payload = {
        "class": rep.class_label,
        "tan_alpha1": ext_to_json(rep.tan_a1),
        "tan_alpha2": ext_to_json(rep.tan_a2),
        "tan_alpha": ext_to_json(rep.alpha_tan),
        "tan_beta": ext_to_json(rep.beta_tan),
        "tan_theta": ext_to_json(rep.theta_tan),
        "theta_exact": rep.theta_exact,
        "mu0_stieltjes": ext_to_json(rep.mu0_stieltjes),
        "mu0_inverse": ext_to_json(rep.mu0_inverse),
        "state_operator": rep.state_operator.to_json(),
        "associated_operator": rep.associated_operator.to_json(),
        "seed": cfg.seed,
    }
    sink.write(json.dumps(payload) + "\n")
    return 0


def _scan_csv(result: ScanResult, sink) -> None:
    sink.write("mu,class,tan_a1,tan_a2,f_mu,flags\n")
    for r in result.rows:
        flags = "|".join(sorted(r.flags))
        sink.write(",".join((
            _cell(r.mu), r.class_label, _cell(r.tan_a1), _cell(r.tan_a2),
            _cell(r.f_of_mu), flags,
        )) + "\n")
    s = result.summary
    sink.write(
        f"# summary mu_star={_cell(s.mu_star)} tan_beta={_cell(s.tan_beta)} "
        f"direction={s.direction} bound={s.bound_side} bound_holds={str(s.bound_holds).lower()}\n"
    )


def run_scan(cfg: RunConfig, sink) -> int:
    weyl = build_weyl(cfg.potential)
    result = scan_mu(cfg.h, weyl, cfg.branch, cfg.mu_grid, cfg.mu_star)
    if cfg.output == "csv":
        _scan_csv(result, sink)
    else:
        s = result.summary
        payload = {
            "rows": [
                {
                    "mu": ext_to_json(r.mu), "class": r.class_label,
                    "tan_a1": ext_to_json(r.tan_a1), "tan_a2": ext_to_json(r.tan_a2),
                    "f_mu": ext_to_json(r.f_of_mu), "flags": sorted(r.flags),
                }
                for r in result.rows
            ],
            "summary": {
                "mu_star": ext_to_json(s.mu_star), "tan_beta": ext_to_json(s.tan_beta),
                "direction": s.direction, "bound_side": s.bound_side,
                "bound_holds": s.bound_holds,
            },
            "seed": cfg.seed,
        }
        sink.write(json.dumps(payload) + "\n")
    return 0


def run_weyl(cfg: RunConfig, sink) -> int:
    wf = build_weyl(cfg.potential, numeric=cfg.numeric)
    if cfg.neg_zero:
        sink.write(fmt_g17(wf.m_at_neg_zero) + "\n")
        return 0
    sink.write("re_lambda,im_lambda,re_m,im_m\n")
    for lam in cfg.points:
        m = wf(lam)
        sink.write(",".join((
            _cell(lam.real), _cell(lam.imag), _cell(m.real), _cell(m.imag),
        )) + "\n")
    return 0


def run_verify(cfg: RunConfig, sink) -> int:
    results = run_suites(cfg.suites)
    for r in results:
        sink.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    sink.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return 0 if not failed else 1


_RUNNERS = {
    "eval": run_eval,
    "classify": run_classify,
    "scan-mu": run_scan,
    "weyl": run_weyl,
    "verify": run_verify,
}


def main(argv=None) -> int:
    try:
        cfg = _config(sys.argv[1:] if argv is None else list(argv))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.out_path is not None:
            with open(cfg.out_path, "w") as sink:
                return _RUNNERS[cfg.command](cfg, sink)
        return _RUNNERS[cfg.command](cfg, sys.stdout)
    except NotAccretiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SlsysError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
