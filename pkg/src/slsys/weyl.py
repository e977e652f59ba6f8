"""Weyl-Titchmarsh function of -y'' + q(x) y on a half-line [a, +inf).

Normalization used throughout: with the canonical solutions

    phi1(a) = 0, phi1'(a) = 1        phi2(a) = -1, phi2'(a) = 0

m(lambda) is the coefficient making phi2 + m*phi1 square-integrable at +inf.
Under this normalization the free half-line gives m(lambda) = -i*sqrt(lambda)
(branch with Im sqrt >= 0), so -m, not m, is the classical Herglotz
transform: Im m(lambda) <= 0 on the upper half-plane.

The numeric path seeds the log-derivative u = psi'/psi at a far right
endpoint b from the constant-tail value u(b) = i*sqrt(lambda - q(b)),
propagates it down to a (see ``slsys.backend``), maps m = -u(a), and grows
b geometrically until successive values of m agree.  A naive Dirichlet
regularization m = -phi2(b)/phi1(b) is kept as a cross-check for small
|lambda|; it overflows quickly and is never the primary route.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import backend
from .branchcut import sqrt_cut
from .errors import (
    AccuracyError,
    ConvergenceError,
    DomainError,
    InputError,
    InternalConsistencyError,
)
from .numerics import limit_along

_NEG_ZERO_LADDER_N = 13     # x_n = -4**-n, n = 0..12
_NEG_ZERO_EXTEND_N = 41
_DIVERGENCE = 1e12


@dataclass(frozen=True, eq=False)
class Potential:
    """Real potential on [a, +inf): free, constant, or tabulated.

    Tabulated potentials interpolate linearly between strictly increasing
    nodes (first node at a) and are constant equal to ``tail`` beyond the
    last node; that keeps them locally summable and limit-point at +inf.
    """

    kind: str
    a: float = 0.0
    c: float = 0.0
    xs: np.ndarray = field(default_factory=lambda: np.empty(0))
    qs: np.ndarray = field(default_factory=lambda: np.empty(0))
    tail: float = 0.0
    description: str = ""

    @classmethod
    def free(cls, a: float = 0.0) -> "Potential":
        return cls(kind="free", a=float(a), description="free")

    @classmethod
    def constant(cls, c: float, a: float = 0.0) -> "Potential":
        return cls(kind="constant", a=float(a), c=float(c), tail=float(c),
                   description=f"constant {c:g}")

    @classmethod
    def table(cls, nodes, tail: float | None = None, description: str = "") -> "Potential":
        xs = np.asarray([float(x) for x, _ in nodes], dtype=float)
        qs = np.asarray([float(q) for _, q in nodes], dtype=float)
        if xs.size == 0:
            raise InputError("table potential needs at least one node")
        if np.any(np.diff(xs) <= 0.0):
            raise InputError("table nodes must be strictly increasing in x")
        t = float(qs[-1]) if tail is None else float(tail)
        return cls(kind="table", a=float(xs[0]), xs=xs, qs=qs, tail=t,
                   description=description or f"table[{xs.size} nodes]")

    @classmethod
    def from_csv(cls, path) -> "Potential":
        """Load a table potential from a CSV file with header ``x,q``.

        Comment lines start with '#'; x must be strictly increasing.
        """
        nodes = []
        try:
            with open(path, newline="") as fh:
                plain = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        except OSError as exc:
            raise InputError(f"cannot read potential table {path}: {exc}") from None
        reader = csv.reader(plain)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty potential table") from None
        if [h.strip().lower() for h in header] != ["x", "q"]:
            raise InputError(f"{path}: expected header 'x,q', got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise InputError(f"{path}: row {lineno}: expected 2 columns, got {len(row)}")
            try:
                nodes.append((float(row[0]), float(row[1])))
            except ValueError as exc:
                raise InputError(f"{path}: row {lineno}: {exc}") from None
        if not nodes:
            raise InputError(f"{path}: no data rows")
        return cls.table(nodes, description=f"table:{path}")

    def q(self, x: float) -> float:
        return backend.q_eval(*self._kernel_args(), float(x))

    def spectrum_floor(self) -> float:
        """Bottom of the essential spectrum: the constant tail value."""
        if self.kind == "free":
            return 0.0
        if self.kind == "constant":
            return self.c
        return self.tail

    def _kernel_args(self):
        if self.kind == "free":
            return backend.POT_FREE, 0.0, _EMPTY, _EMPTY, 0.0
        if self.kind == "constant":
            return backend.POT_CONST, self.c, _EMPTY, _EMPTY, self.c
        return backend.POT_TABLE, 0.0, self.xs, self.qs, self.tail


_EMPTY = np.empty(0)


@dataclass(frozen=True)
class SolverSettings:
    """Knobs for the numeric m-function computation."""

    b_initial: float | None = None   # default: a + 20, pushed past table nodes
    b_growth: float = 2.0
    rel_tol: float = 1e-9
    convergence_tol: float = 1e-8
    max_doublings: int = 8


@dataclass(frozen=True, eq=False)
class CauchySolution:
    """Canonical solutions phi1, phi2 sampled on the accepted-step grid."""

    lam: complex
    grid_x: np.ndarray
    phi1: np.ndarray
    phi1_prime: np.ndarray
    phi2: np.ndarray
    phi2_prime: np.ndarray

    def wronskian(self) -> np.ndarray:
        return self.phi1 * self.phi2_prime - self.phi1_prime * self.phi2

    def wronskian_drift(self) -> float:
        """Max deviation of the Wronskian from 1, relative to its term sizes.

        The Wronskian is a difference of products that grow like the
        solutions squared, so drift is measured against that scale.
        """
        size = np.maximum(
            1.0,
            np.abs(self.phi1 * self.phi2_prime) + np.abs(self.phi1_prime * self.phi2),
        )
        return float(np.max(np.abs(self.wronskian() - 1.0) / size))


def solve_cauchy(p: Potential, lam: complex, x_max: float, rel_tol: float = 1e-9) -> CauchySolution:
    """Integrate both canonical initial-value problems out to x_max.

    The contract on the result is a Wronskian drift of at most 10*rel_tol;
    since local control at rel_tol can accumulate past that over long
    oscillatory spans, the internal tolerance is tightened and the solve
    retried until the drift bound holds.
    """
    if not (1e-13 < rel_tol < 1e-3):
        raise InputError(f"rel_tol must lie in (1e-13, 1e-3), got {rel_tol:g}")
    if not x_max > p.a:
        raise InputError(f"x_max must exceed the left endpoint {p.a:g}")
    internal = float(rel_tol)
    drift = math.inf
    for _ in range(3):
        g, p1, p1p, p2, p2p = backend.cauchy_integrate(
            *p._kernel_args(), complex(lam), p.a, float(x_max), internal
        )
        sol = CauchySolution(lam=complex(lam), grid_x=g, phi1=p1, phi1_prime=p1p,
                             phi2=p2, phi2_prime=p2p)
        drift = sol.wronskian_drift()
        if drift <= 10.0 * rel_tol:
            return sol
        internal = max(2e-13, internal * min(0.1, 3.0 * rel_tol / drift))
    raise AccuracyError(
        f"Wronskian drift {drift:.3g} exceeds 10*rel_tol after retries", achieved=drift
    )


def _check_lambda_domain(p: Potential, lam: complex) -> complex:
    lam = complex(lam)
    if lam.imag == 0.0 and lam.real >= p.spectrum_floor():
        raise DomainError(
            f"lambda={lam.real:g} lies in the essential spectrum "
            f"[{p.spectrum_floor():g}, inf); m is only defined off it"
        )
    return lam


def _default_b(p: Potential, settings: SolverSettings) -> float:
    if settings.b_initial is not None:
        if settings.b_initial <= p.a:
            raise InputError("b_initial must exceed the left endpoint")
        return settings.b_initial
    b = p.a + 20.0
    if p.kind == "table":
        b = max(b, float(p.xs[-1]) + 1.0)
    return b


def weyl_m(p: Potential, lam: complex, settings: SolverSettings | None = None) -> complex:
    """Numeric m(lambda) via backward log-derivative propagation.

    The right endpoint b grows geometrically (its distance from a is
    multiplied by ``b_growth``) until two successive values of m agree to
    ``convergence_tol``; with a constant tail the seed is exact once b
    clears the last node, so the ladder settles immediately.
    """
    settings = settings or SolverSettings()
    lam = _check_lambda_domain(p, lam)
    args = p._kernel_args()
    b = _default_b(p, settings)
    m_prev = None
    history = []
    for _ in range(settings.max_doublings + 1):
        u_b = 1j * sqrt_cut(lam - p.q(b))
        u_a = backend.riccati_backward(*args, lam, p.a, b, u_b, settings.rel_tol)
        m = -u_a
        history.append(m)
        if m_prev is not None and abs(m - m_prev) <= settings.convergence_tol * max(1.0, abs(m)):
            return m
        m_prev = m
        b = p.a + (b - p.a) * settings.b_growth
    raise ConvergenceError(
        f"m did not settle after {settings.max_doublings} endpoint doublings "
        f"(last two iterates {history[-2]!r}, {history[-1]!r})",
        last_iterates=history[-2:],
    )


def weyl_m_dirichlet(p: Potential, lam: complex, b: float | None = None,
                     rel_tol: float = 1e-9) -> complex:
    """Cross-check value m = -phi2(b)/phi1(b) (Dirichlet cutoff at b).

    Only trustworthy for small |lambda|: the canonical solutions grow like
    exp(|sqrt(lambda)| x) and wipe out the answer in double precision long
    before b is large enough for tight convergence.
    """
    lam = _check_lambda_domain(p, lam)
    if b is None:
        b = p.a + 20.0
    sol = solve_cauchy(p, lam, b, rel_tol)
    if sol.phi1[-1] == 0.0:
        raise DomainError("phi1 vanishes at the cutoff; Dirichlet quotient undefined")
    return -sol.phi2[-1] / sol.phi1[-1]


def weyl_m_neg_zero(p: Potential, settings: SolverSettings | None = None,
                    tol: float = 1e-7) -> float:
    """Limit of m along x_n = -4**-n, extrapolated; +inf on monotone blowup."""
    settings = settings or SolverSettings()

    def eval_m(x: float) -> float:
        m = weyl_m(p, complex(x), settings)
        if abs(m.imag) > 1e-6 * max(1.0, abs(m.real)):
            raise InternalConsistencyError(
                f"m({x:g}) = {m!r} is not real on the negative axis"
            )
        return m.real

    ladder = [-(4.0 ** -n) for n in range(_NEG_ZERO_LADDER_N)]
    extension = [-(4.0 ** -n) for n in range(_NEG_ZERO_LADDER_N, _NEG_ZERO_EXTEND_N)]
    return limit_along(eval_m, ladder, tol, extension=extension,
                       divergence_threshold=_DIVERGENCE)


def _audit_free_branch(settings: SolverSettings, a: float) -> None:
    """Sign/normalization audit: the numeric path must reproduce -i*sqrt."""
    free = Potential.free(a)
    for lam in (1j, -1.0 + 0.0j):
        got = weyl_m(free, lam, settings)
        want = -1j * sqrt_cut(lam)
        if abs(got - want) > 1e-6 * abs(want):
            raise InternalConsistencyError(
                f"free-potential audit failed at lambda={lam!r}: "
                f"numeric {got!r} vs closed form {want!r}"
            )


@dataclass(frozen=True, eq=False)
class WeylFunction:
    """Evaluator for m(lambda) with its cached limit m(-0).

    Immutable after construction (the limit is computed eagerly), so an
    instance can be shared freely between concurrent evaluations.
    """

    source: str
    m_at_neg_zero: float
    evaluator: Callable[[complex], complex]
    potential: Potential | None = None
    settings: SolverSettings | None = None
    description: str = ""

    @classmethod
    def free(cls) -> "WeylFunction":
        return cls(
            source="closed_form_free",
            m_at_neg_zero=0.0,
            evaluator=lambda lam: -1j * sqrt_cut(_check_lambda_domain(_FREE, lam)),
            potential=_FREE,
            description="m(z) = -i sqrt(z)",
        )

    @classmethod
    def constant(cls, c: float) -> "WeylFunction":
        c = float(c)
        if c < 0.0:
            raise DomainError(
                f"constant potential {c:g}: essential spectrum reaches -0, m(-0) undefined"
            )
        pot = Potential.constant(c)
        return cls(
            source="closed_form_constant",
            m_at_neg_zero=math.sqrt(c),
            evaluator=lambda lam: -1j * sqrt_cut(_check_lambda_domain(pot, lam) - c),
            potential=pot,
            description=f"m(z) = -i sqrt(z - {c:g})",
        )

    @classmethod
    def numeric(cls, potential: Potential, settings: SolverSettings | None = None,
                audit: bool = True) -> "WeylFunction":
        settings = settings or SolverSettings()
        if audit:
            _audit_free_branch(settings, potential.a)
        m0 = weyl_m_neg_zero(potential, settings)
        return cls(
            source="numeric",
            m_at_neg_zero=m0,
            evaluator=lambda lam: weyl_m(potential, lam, settings),
            potential=potential,
            settings=settings,
            description=f"numeric m for {potential.description}",
        )

    def __call__(self, lam: complex) -> complex:
        return self.evaluator(complex(lam))


_FREE = Potential.free()
