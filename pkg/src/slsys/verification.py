"""Built-in verification suites behind the ``verify`` CLI command.

Each suite re-derives its expected values independently of the code path it
exercises (closed forms, direct complex arithmetic) and reports one line per
criterion.  Seeds are fixed constants and are echoed in the output so every
run is reproducible bit for bit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .branchcut import sqrt_cut
from .errors import SlsysError
from .herglotz import (
    build_sector_kernel,
    is_psd,
    min_sector_angle,
    random_upper_points,
)
from .lsystem import (
    SchrodingerLSystem,
    full_report,
    impedance,
    impedance_from_transfer,
    impedance_function,
    transfer,
)
from .weyl import Potential, WeylFunction, weyl_m, weyl_m_neg_zero

SEED_POINTS = 20250811
SEED_ROUNDTRIP = 1729
SEED_KERNELS = 424242

TAN_PI_4 = 1.0
TAN_PI_6 = math.tan(math.pi / 6.0)
TAN_PI_3 = math.tan(math.pi / 3.0)


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}"


def _offcut_points(rng: np.random.Generator, n: int) -> list[complex]:
    """Seeded points off [0, inf): both half-planes, arguments clear of the cut."""
    pts = []
    while len(pts) < n:
        r = math.exp(rng.uniform(math.log(1e-2), math.log(1e2)))
        arg = rng.uniform(0.1, 2.0 * math.pi - 0.1)
        pts.append(complex(r * math.cos(arg), r * math.sin(arg)))
    return pts


def _impedance_match(sys, closed_form, n_points, tol, seed) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for z in _offcut_points(rng, n_points):
        v = impedance(sys, z)
        want = closed_form(z)
        worst = max(worst, abs(v - want) / max(1e-300, abs(want)))
    return worst <= tol, f"max_rel_err={worst:.3g} (tol {tol:g}, seed {seed})"


def suite_example1() -> list[CriterionResult]:
    """First worked system: h = 0.5+0.5i, mu = 1, free potential."""
    out = []
    sys = SchrodingerLSystem(0.5 + 0.5j, 1.0, WeylFunction.free())
    ok, detail = _impedance_match(sys, lambda z: 1.0 + 1j / sqrt_cut(z), 20, 1e-10, SEED_POINTS)
    out.append(CriterionResult("example1/impedance-closed-form", ok, detail))

    rep = full_report(sys)
    checks = [
        ("class", rep.class_label == "stieltjes", rep.class_label),
        ("tan_a1", abs(rep.tan_a1 - 1.0) <= 1e-8, f"{rep.tan_a1!r}"),
        ("tan_a2", math.isinf(rep.tan_a2), f"{rep.tan_a2!r}"),
        ("mu0", abs(rep.mu0_stieltjes - 1.0) <= 1e-12, f"{rep.mu0_stieltjes!r}"),
        ("state-op", rep.state_operator.kind == "accretive_not_sectorial",
         rep.state_operator.kind),
        ("tan_theta", abs(rep.theta_tan - 1.0) <= 1e-10 and rep.theta_exact,
         f"{rep.theta_tan!r} exact={rep.theta_exact}"),
    ]
    for name, ok, got in checks:
        out.append(CriterionResult(f"example1/{name}", ok, f"got {got}"))
    return out


def suite_example2() -> list[CriterionResult]:
    """Second worked system: h = 1+i, mu = 0, free potential."""
    out = []
    sys = SchrodingerLSystem(1.0 + 1.0j, 0.0, WeylFunction.free())

    def closed(z):
        s = sqrt_cut(z)
        return -s / (s + 2j)

    ok, detail = _impedance_match(sys, closed, 20, 1e-10, SEED_POINTS)
    out.append(CriterionResult("example2/impedance-closed-form", ok, detail))

    rep = full_report(sys)
    assoc = rep.associated_operator
    checks = [
        ("class", rep.class_label == "inverse_stieltjes", rep.class_label),
        ("tan_a1", abs(rep.tan_a1 - 0.0) <= 1e-8, f"{rep.tan_a1!r}"),
        ("tan_a2", abs(rep.tan_a2 - 1.0) <= 1e-8, f"{rep.tan_a2!r}"),
        ("tan_theta", abs(rep.theta_tan - 1.0) <= 1e-10 and rep.theta_exact,
         f"{rep.theta_tan!r} exact={rep.theta_exact}"),
        ("associated-op", assoc.kind == "alpha_sectorial"
         and assoc.tan_alpha is not None and abs(assoc.tan_alpha - 1.0) <= 1e-8,
         f"{assoc.kind}({assoc.tan_alpha!r})"),
    ]
    for name, ok, got in checks:
        out.append(CriterionResult(f"example2/{name}", ok, f"got {got}"))
    return out


def suite_weyl_oracle() -> list[CriterionResult]:
    """Numeric m-function against the closed forms, with per-point timing."""
    out = []
    free = Potential.free()
    const2 = Potential.constant(2.0)
    lams = (1j, 1 + 1j, -1 + 0j, -4 + 0j, 2 + 3j, -0.01 + 0j)
    for pot, shift, tag in ((free, 0.0, "free"), (const2, 2.0, "const2")):
        worst = 0.0
        slowest = 0.0
        for lam in lams:
            t0 = time.perf_counter()
            got = weyl_m(pot, lam)
            slowest = max(slowest, time.perf_counter() - t0)
            want = -1j * sqrt_cut(lam - shift)
            worst = max(worst, abs(got - want) / abs(want))
        out.append(CriterionResult(
            f"weyl/{tag}-vs-closed-form", worst <= 1e-6 and slowest < 1.0,
            f"max_rel_err={worst:.3g} (tol 1e-06), slowest point {slowest * 1e3:.1f} ms",
        ))
    m0_free = weyl_m_neg_zero(free)
    out.append(CriterionResult("weyl/neg-zero-free", abs(m0_free) <= 1e-6,
                               f"got {m0_free!r} (tol 1e-06)"))
    m0_c2 = weyl_m_neg_zero(const2)
    out.append(CriterionResult("weyl/neg-zero-const2", abs(m0_c2 - math.sqrt(2.0)) <= 1e-6,
                               f"got {m0_c2!r} vs sqrt(2) (tol 1e-06)"))
    return out


def suite_round_trip() -> list[CriterionResult]:
    """V = i(W-1)/(W+1) across 200 seeded random systems and points."""
    rng = np.random.default_rng(SEED_ROUNDTRIP)
    free = WeylFunction.free()
    worst = 0.0
    for _ in range(200):
        h = complex(rng.uniform(-3.0, 3.0), rng.uniform(0.05, 2.0))
        pick = rng.uniform()
        if pick < 0.15:
            mu = math.inf
        elif pick < 0.3:
            mu = float(rng.choice([-1e6, 1e6]))
        else:
            mu = float(rng.uniform(-5.0, 5.0))
        sys = SchrodingerLSystem(h, mu, free)
        z = random_upper_points(rng, 1)[0]
        v = impedance(sys, z)
        v2 = impedance_from_transfer(transfer(sys, z))
        worst = max(worst, abs(v - v2) / max(1e-300, abs(v)))
    ok = worst <= 1e-10
    return [CriterionResult("round-trip/impedance-transfer", ok,
                            f"max_rel_err={worst:.3g} (tol 1e-10, seed {SEED_ROUNDTRIP})")]


def suite_kernels() -> list[CriterionResult]:
    """Sector-kernel positivity around the known exact angle pi/4."""
    out = []
    free = WeylFunction.free()
    sys_inf = SchrodingerLSystem(1.0 + 1.0j, math.inf, free)
    v_inf = impedance_function(sys_inf, "V[mu=inf, h=1+i]")

    rng = np.random.default_rng(SEED_KERNELS)
    worst_min = math.inf
    for _ in range(50):
        pts = random_upper_points(rng, 4)
        verdict = is_psd(build_sector_kernel(v_inf, pts, TAN_PI_4), tol=1e-8)
        worst_min = min(worst_min, verdict.min_eigenvalue)
    out.append(CriterionResult(
        "kernels/psd-at-exact-angle", worst_min >= -1e-8,
        f"min eig {worst_min:.3g} over 50 four-point kernels at tan(pi/4) (seed {SEED_KERNELS})",
    ))

    rng = np.random.default_rng(SEED_KERNELS + 1)
    found, trials = _find_violation(v_inf, TAN_PI_6, rng, 200)
    out.append(CriterionResult(
        "kernels/violation-below-exact-angle", found is not None,
        f"min eig {found:.3g} at tan(pi/6) after {trials} trials (seed {SEED_KERNELS + 1})"
        if found is not None else f"no violation in {trials} trials",
    ))

    est = min_sector_angle(v_inf, seed=SEED_KERNELS + 2)
    deg = math.degrees(math.atan(est.tan_alpha))
    out.append(CriterionResult(
        "kernels/min-angle-estimate", abs(deg - 45.0) <= 2.0,
        f"estimated {deg:.2f} deg vs 45 deg (tol 2 deg, seed {est.seed})",
    ))

    sys1 = SchrodingerLSystem(0.5 + 0.5j, 1.0, free)
    v1 = impedance_function(sys1, "V[example 1]")
    rng = np.random.default_rng(SEED_KERNELS + 3)
    found, trials = _find_violation(v1, TAN_PI_3, rng, 200)
    out.append(CriterionResult(
        "kernels/example1-violation-at-pi3", found is not None,
        f"min eig {found:.3g} at tan(pi/3) after {trials} trials (seed {SEED_KERNELS + 3})"
        if found is not None else f"no violation in {trials} trials",
    ))
    return out


def _find_violation(f, tan_alpha, rng, max_trials, threshold=-1e-6):
    for trial in range(1, max_trials + 1):
        pts = random_upper_points(rng, 4)
        verdict = is_psd(build_sector_kernel(f, pts, tan_alpha), tol=1e-8)
        if verdict.min_eigenvalue < threshold:
            return verdict.min_eigenvalue, trial
    return None, max_trials


SUITES = {
    "example1": suite_example1,
    "example2": suite_example2,
    "weyl": suite_weyl_oracle,
    "round-trip": suite_round_trip,
    "kernels": suite_kernels,
}


def run_suites(names=None) -> list[CriterionResult]:
    results = []
    for name in names or SUITES:
        try:
            results.extend(SUITES[name]())
        except SlsysError as exc:
            results.append(CriterionResult(f"{name}/execution", False, f"raised {exc!r}"))
    return results
