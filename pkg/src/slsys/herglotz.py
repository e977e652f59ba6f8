"""Numerical analysis of scalar Herglotz-Nevanlinna functions.

Implements the membership tests and derived quantities used to classify
impedance-type functions on the cut plane C \\ [0, +inf):

* pointwise positivity checks (Herglotz, Stieltjes, inverse Stieltjes),
* finite Hermitian sector kernels whose positive semidefiniteness encodes
  sectoriality with half-angle alpha, plus a self-contained PSD verdict,
* a seeded sampling estimator for the minimal sector angle,
* real-axis limits at -0 and -inf via geometric ladders with Aitken
  acceleration,
* recovery of the underlying measure by smoothed boundary-value quadrature
  (classical inversion of the Cauchy transform), including the 1/t-weighted
  integral that equals the sector-angle tangent.

All angle arithmetic is in tangents; ``math.inf`` encodes a right angle.
Everything here is a pure function of its inputs: evaluators may be called
from concurrent workers, and all reductions use a fixed summation order so
results do not depend on worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

from . import backend
from .errors import (
    AccuracyError,
    ClassError,
    DomainError,
    EvaluationError,
    InputError,
    InternalConsistencyError,
)
from .numerics import (
    gauss_panels,
    geometric_edges,
    limit_along,
    linear_edges,
    neville_zero,
)

Variant = Literal["stieltjes", "inverse_stieltjes"]

_LIMIT_LADDER_N = 21          # base ladders x_n = -4**(-n) and -4**n, n = 0..20
_LIMIT_EXTEND_N = 41
_DIVERGENCE = 1e12
_HERM_DEFECT_MAX = 1e-10
_KERNEL_POINTS_MAX = 8        # conditioning degrades quickly beyond this
_TAN_CEILING = 1e9            # no PSD bracket below this tangent => not sectorial


@dataclass(frozen=True)
class AnalyticFunction:
    """A deterministic evaluator on the cut plane, with a printable label."""

    evaluator: Callable[[complex], complex]
    description: str = ""

    def __call__(self, z: complex) -> complex:
        try:
            return complex(self.evaluator(complex(z)))
        except Exception as exc:  # noqa: BLE001 - contract: name the point
            raise EvaluationError(complex(z), str(exc)) from exc

    def symmetry_defect(self, samples: Sequence[complex]) -> float:
        """max |f(conj z) - conj f(z)| over the samples (Herglotz symmetry)."""
        return max(abs(self(z.conjugate()) - self(z).conjugate()) for z in samples)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: complex | None = None
    value: complex | None = None

    def __bool__(self) -> bool:
        return self.passed


def herglotz_check(f: AnalyticFunction, samples: Sequence[complex], tol: float = 1e-9) -> CheckResult:
    """Im f(z) >= -tol at every sample in the open upper half-plane."""
    if tol <= 0.0:
        raise InputError("tol must be positive")
    for z in samples:
        z = complex(z)
        if not z.imag > 0.0:
            raise DomainError(f"sample {z!r} is not in the open upper half-plane")
        v = f(z)
        if v.imag < -tol:
            return CheckResult(False, witness=z, value=v)
    return CheckResult(True)


def stieltjes_check(
    f: AnalyticFunction,
    samples: Sequence[complex],
    tol: float = 1e-9,
    variant: Variant = "stieltjes",
) -> CheckResult:
    """Sign test Im[z f(z)]/Im z >= -tol, or Im[f(z)/z]/Im z for the inverse variant."""
    if tol <= 0.0:
        raise InputError("tol must be positive")
    _require_variant(variant)
    for z in samples:
        z = complex(z)
        if z.imag == 0.0:
            raise DomainError(f"sample {z!r} lies on the real axis")
        v = f(z)
        g = z * v if variant == "stieltjes" else v / z
        if g.imag / z.imag < -tol:
            return CheckResult(False, witness=z, value=v)
    return CheckResult(True)


def _require_variant(variant: str) -> None:
    if variant not in ("stieltjes", "inverse_stieltjes"):
        raise InputError(f"unknown variant {variant!r}")


@dataclass(frozen=True, eq=False)
class SectorKernel:
    """Finite Hermitian sector-test matrix over upper-half-plane points.

    The weight vector of the defining quadratic form is absorbed: the form
    is nonnegative for every weight choice exactly when ``matrix`` is PSD,
    so ``weights_applied`` stays False.
    """

    points: tuple[complex, ...]
    alpha_tan: float
    variant: Variant
    matrix: np.ndarray
    herm_defect: float
    weights_applied: bool = False


def _kernel_parts(f: AnalyticFunction, points: Sequence[complex], variant: Variant):
    """Pick-type part P and rank-one product part Q of the sector kernel."""
    pts = [complex(z) for z in points]
    if not pts:
        raise InputError("need at least one point")
    if len(pts) > _KERNEL_POINTS_MAX:
        raise InputError(f"kernel capped at {_KERNEL_POINTS_MAX} points, got {len(pts)}")
    for z in pts:
        if not z.imag > 0.0:
            raise DomainError(f"kernel point {z!r} is not in the open upper half-plane")
    if len(set(pts)) != len(pts):
        raise InputError("kernel points must be distinct")
    vals = [f(z) for z in pts]
    if variant == "stieltjes":
        gs = [z * v for z, v in zip(pts, vals)]
        ws = vals
    else:
        gs = [v / z for z, v in zip(pts, vals)]
        ws = gs
    n = len(pts)
    p = np.empty((n, n), dtype=complex)
    q = np.empty((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            p[k, l] = (gs[k] - gs[l].conjugate()) / (pts[k] - pts[l].conjugate())
            q[k, l] = ws[l].conjugate() * ws[k]
    return pts, p, q


def _symmetrize(m: np.ndarray) -> tuple[np.ndarray, float]:
    defect = float(np.max(np.abs(m - m.conj().T))) / 2.0
    return (m + m.conj().T) / 2.0, defect


def build_sector_kernel(
    f: AnalyticFunction,
    points: Sequence[complex],
    alpha_tan: float,
    variant: Variant = "stieltjes",
) -> SectorKernel:
    """Assemble the sector kernel for angle alpha given as tan(alpha).

    ``alpha_tan = inf`` encodes alpha = pi/2 (cot alpha = 0), i.e. the plain
    class membership kernel with no product term.
    """
    _require_variant(variant)
    if not (alpha_tan > 0.0):
        raise InputError("alpha_tan must be positive (or inf for a right angle)")
    cot = 0.0 if math.isinf(alpha_tan) else 1.0 / alpha_tan
    pts, p, q = _kernel_parts(f, points, variant)
    m, defect = _symmetrize(p - cot * q)
    return SectorKernel(points=tuple(pts), alpha_tan=float(alpha_tan), variant=variant,
                        matrix=m, herm_defect=defect)


@dataclass(frozen=True)
class PsdVerdict:
    psd: bool
    min_eigenvalue: float

    def __bool__(self) -> bool:
        return self.psd


def is_psd(kernel: SectorKernel | np.ndarray, tol: float = 1e-8) -> PsdVerdict:
    """PSD verdict from the smallest eigenvalue of the Hermitian kernel.

    Eigenvalues come from the package's own Jacobi solver (see
    ``slsys.backend``), not from LAPACK.
    """
    if tol < 0.0:
        raise InputError("tol must be nonnegative")
    matrix = kernel.matrix if isinstance(kernel, SectorKernel) else np.asarray(kernel, dtype=complex)
    defect = float(np.max(np.abs(matrix - matrix.conj().T))) / 2.0
    if defect > _HERM_DEFECT_MAX:
        raise InternalConsistencyError(f"matrix is not Hermitian (defect {defect:.3g})")
    eigs = backend.hermitian_eigenvalues((matrix + matrix.conj().T) / 2.0)
    mn = float(eigs[0])
    return PsdVerdict(psd=mn >= -tol, min_eigenvalue=mn)


def random_upper_points(rng: np.random.Generator, n: int) -> list[complex]:
    """Seeded upper-half-plane sample: log-uniform modulus on [1e-3, 1e3],
    uniform argument on (0, pi).  The classes under test are scale
    heterogeneous, hence the log-uniform radius."""
    pts: list[complex] = []
    while len(pts) < n:
        r = math.exp(rng.uniform(math.log(1e-3), math.log(1e3)))
        arg = rng.uniform(0.0, math.pi)
        if arg <= 1e-12 or arg >= math.pi - 1e-12:
            continue
        z = complex(r * math.cos(arg), r * math.sin(arg))
        if z in pts:
            continue
        pts.append(z)
    return pts


@dataclass(frozen=True)
class AngleEstimate:
    """Sampling-based estimate of the minimal sector angle (as a tangent).

    A lower bound on the true tangent that grows toward it as sampling is
    increased; it is an estimate, never a certificate.
    """

    tan_alpha: float
    seed: int
    n_trials: int
    points_per_trial: int
    label: str = field(default="estimated")


def min_sector_angle(
    f: AnalyticFunction,
    variant: Variant = "stieltjes",
    seed: int = 0,
    n_trials: int = 50,
    points_per_trial: int = 4,
    tol: float = 1e-8,
) -> AngleEstimate:
    """Smallest tan(alpha) keeping every sampled sector kernel PSD.

    Bisection on the angle (monotone: the kernel grows as cot alpha falls)
    over ``n_trials`` seeded random point sets, to multiplicative tolerance
    1 + 1e-3.  Returns inf when no PSD bracket exists below tan = 1e9.
    Raises :class:`ClassError` when the function fails the plain membership
    screening for the requested variant.
    """
    _require_variant(variant)
    if points_per_trial > _KERNEL_POINTS_MAX:
        raise InputError(f"points_per_trial capped at {_KERNEL_POINTS_MAX}")
    rng = np.random.default_rng(seed)
    screening = random_upper_points(rng, 32)
    res = stieltjes_check(f, screening, tol=1e-7, variant=variant)
    if not res:
        raise ClassError(
            f"screening failed for variant {variant!r} at {res.witness!r}"
        )
    trials = []
    for _ in range(n_trials):
        pts = random_upper_points(rng, points_per_trial)
        _, p, q = _kernel_parts(f, pts, variant)
        trials.append((_symmetrize(p)[0], _symmetrize(q)[0]))

    def all_psd(tan_a: float) -> bool:
        cot = 0.0 if math.isinf(tan_a) else 1.0 / tan_a
        return all(is_psd(p - cot * q, tol).psd for p, q in trials)

    if not all_psd(math.inf):
        return AngleEstimate(math.inf, seed, n_trials, points_per_trial)
    # geometric bracket around the PSD/non-PSD transition
    if all_psd(1.0):
        hi = 1.0
        lo = hi / 2.0
        while all_psd(lo):
            hi = lo
            lo /= 2.0
            if lo < 1e-12:
                return AngleEstimate(lo, seed, n_trials, points_per_trial)
    else:
        lo = 1.0
        hi = lo * 2.0
        while not all_psd(hi):
            lo = hi
            hi *= 2.0
            if hi > _TAN_CEILING:
                return AngleEstimate(math.inf, seed, n_trials, points_per_trial)
    while hi / lo > 1.0 + 1e-3:
        mid = math.sqrt(lo * hi)
        if all_psd(mid):
            hi = mid
        else:
            lo = mid
    return AngleEstimate(hi, seed, n_trials, points_per_trial)


def _real_on_negative_axis(f: AnalyticFunction) -> Callable[[float], float]:
    def eval_real(x: float) -> float:
        v = f(complex(x, 0.0))
        if abs(v.imag) > 1e-9 * max(1.0, abs(v.real)):
            raise DomainError(
                f"f({x:g}) = {v!r} has imaginary residue beyond 1e-9 on the negative axis"
            )
        return v.real
    return eval_real


def limit_neg_zero(f: AnalyticFunction, tol: float = 1e-8) -> float:
    """Limit of f along x_n = -4**-n, Aitken-accelerated; +/-inf on blowup."""
    ev = _real_on_negative_axis(f)
    ladder = [-(4.0 ** -n) for n in range(_LIMIT_LADDER_N)]
    extension = [-(4.0 ** -n) for n in range(_LIMIT_LADDER_N, _LIMIT_EXTEND_N)]
    return limit_along(ev, ladder, tol, extension=extension, divergence_threshold=_DIVERGENCE)


def limit_neg_infinity(f: AnalyticFunction, tol: float = 1e-8) -> float:
    """Limit of f along x_n = -4**n, Aitken-accelerated; +/-inf on blowup."""
    ev = _real_on_negative_axis(f)
    ladder = [-(4.0 ** n) for n in range(_LIMIT_LADDER_N)]
    extension = [-(4.0 ** n) for n in range(_LIMIT_LADDER_N, _LIMIT_EXTEND_N)]
    return limit_along(ev, ladder, tol, extension=extension, divergence_threshold=_DIVERGENCE)


def _smoothed_mass(
    f: AnalyticFunction,
    edges: Sequence[float],
    epsilon_ladder: Sequence[float],
    n_points: int,
    weight: Callable[[float], float] | None,
    tol: float,
) -> float:
    eps = [float(e) for e in epsilon_ladder]
    if not eps or any(e <= 0.0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
        raise InputError("epsilon ladder must be strictly decreasing and positive")

    def smoothed(e: float, pts: int) -> float:
        def integrand(t: float) -> float:
            v = f(complex(t, e)).imag / math.pi
            return v if weight is None else v * weight(t)
        return gauss_panels(integrand, edges, pts)

    values = [smoothed(e, n_points) for e in eps]
    if len(values) == 1:
        mass, extrap_err = values[0], abs(values[0]) * 1e-3
    else:
        mass, extrap_err = neville_zero(eps, values)
    quad_err = abs(smoothed(eps[-1], n_points + n_points // 2) - values[-1])
    achieved = max(extrap_err, quad_err)
    if achieved > tol * max(1.0, abs(mass)):
        raise AccuracyError(
            f"inversion quadrature reached {achieved:.3g}, wanted {tol:.3g}",
            achieved=achieved,
        )
    return mass


def stieltjes_inversion_slice(
    f: AnalyticFunction,
    t1: float,
    t2: float,
    epsilon_ladder: Sequence[float],
    quadrature_points: int = 24,
    panels: int = 16,
    tol: float = 1e-4,
) -> float:
    """Mass of the representing measure on [t1, t2].

    Computes (1/pi) * integral of Im f(t + i*eps) over [t1, t2] by composite
    Gauss-Legendre panels for each eps on the ladder, then extrapolates
    eps -> 0.  Endpoint atoms are not resolved (no half-weight convention):
    choose t1, t2 off any atom.
    """
    if not (0.0 <= t1 < t2):
        raise InputError("need 0 <= t1 < t2")
    return _smoothed_mass(f, linear_edges(t1, t2, panels), epsilon_ladder,
                          quadrature_points, None, tol)


def measure_angle_integral(
    f: AnalyticFunction,
    t1: float = 1e-6,
    t2: float = 1e6,
    epsilon_ladder: Sequence[float] = (1e-8, 5e-9, 2.5e-9),
    quadrature_points: int = 24,
    panels_per_decade: int = 4,
    tol: float = 5e-3,
) -> float:
    """The 1/t-weighted measure integral over [t1, t2] by direct inversion.

    For a Stieltjes function this approximates the full integral of dG(t)/t,
    i.e. the sector-angle tangent; the windowing to [t1, t2] is the caller's
    accuracy/latency tradeoff (the integrand is sampled on geometric panels
    because it typically decays like a power on both ends).
    """
    if not (0.0 < t1 < t2):
        raise InputError("need 0 < t1 < t2")
    decades = math.log10(t2 / t1)
    panels = max(4, int(math.ceil(decades * panels_per_decade)))
    return _smoothed_mass(f, geometric_edges(t1, t2, panels), epsilon_ladder,
                          quadrature_points, lambda t: 1.0 / t, tol)


def angle_from_measure(
    f: AnalyticFunction,
    tol: float = 1e-8,
    cross_check: bool = False,
    cross_check_rtol: float = 0.02,
) -> float:
    """tan(alpha) of a Stieltjes function as f(-0) - f(-inf).

    The difference of the two real-axis limits equals the integral of
    dG(t)/t because the -inf limit recovers the representation constant and
    the -0 limit adds the full weighted mass.  Returns inf when the -0 limit
    diverges (no finite sector angle).  With ``cross_check=True`` the value
    is compared against the direct inversion quadrature.
    """
    v0 = limit_neg_zero(f, tol)
    if math.isinf(v0):
        return math.inf
    vinf = limit_neg_infinity(f, tol)
    tan_alpha = v0 - vinf
    if cross_check:
        quad = measure_angle_integral(f)
        if abs(quad - tan_alpha) > cross_check_rtol * max(1.0, abs(tan_alpha)):
            raise InternalConsistencyError(
                f"limit-based angle {tan_alpha:.6g} and inversion quadrature "
                f"{quad:.6g} disagree beyond {cross_check_rtol:.0%}"
            )
    return tan_alpha


@dataclass(frozen=True)
class IntegralRepresentation:
    """Numerically extracted pieces of the integral representation.

    For the direct class: f(z) = gamma + integral dG(t)/(t-z), gamma >= 0.
    For the inverse class: f(z) = gamma + z*beta + integral (1/(t-z) - 1/t) dG,
    gamma <= 0 and beta >= 0 (``linear_coeff`` is that beta).
    ``measure_slices`` holds (t1, t2, mass) windows of G.
    """

    gamma: float
    linear_coeff: float
    measure_slices: tuple[tuple[float, float, float], ...]
    inverse_variant: bool = False

    def __post_init__(self):
        for t1, t2, mass in self.measure_slices:
            if mass < -1e-10:
                raise InternalConsistencyError(
                    f"negative measure mass {mass:.3g} on [{t1:g}, {t2:g}]"
                )
        if self.inverse_variant:
            if self.gamma > 1e-10:
                raise InternalConsistencyError("inverse variant requires gamma <= 0")
            if self.linear_coeff < -1e-10:
                raise InternalConsistencyError("inverse variant requires linear_coeff >= 0")
        elif self.gamma < -1e-10:
            raise InternalConsistencyError("direct variant requires gamma >= 0")


def extract_representation(
    f: AnalyticFunction,
    slice_bounds: Sequence[tuple[float, float]],
    inverse_variant: bool = False,
    epsilon_ladder: Sequence[float] = (2e-2, 1e-2, 5e-3, 2.5e-3),
    quadrature_points: int = 24,
    panels: int = 16,
    tol: float = 1e-3,
    limit_tol: float = 1e-8,
) -> IntegralRepresentation:
    """Recover (gamma, linear coefficient, measure windows) from f."""
    if inverse_variant:
        gamma = limit_neg_zero(f, limit_tol)
        over_x = AnalyticFunction(lambda z: f(z) / z, f"({f.description})/z")
        beta = limit_neg_infinity(over_x, limit_tol)
    else:
        gamma = limit_neg_infinity(f, limit_tol)
        beta = 0.0
    slices = tuple(
        (float(t1), float(t2),
         stieltjes_inversion_slice(f, t1, t2, epsilon_ladder, quadrature_points, panels, tol))
        for t1, t2 in slice_bounds
    )
    return IntegralRepresentation(gamma=gamma, linear_coeff=beta,
                                  measure_slices=slices, inverse_variant=inverse_variant)
