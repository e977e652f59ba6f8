"""Impedance/transfer calculus for half-line Schroedinger boundary triples.

A system here is the triple (h, mu, m): a dissipative boundary parameter h
(Im h > 0) for the condition h*y(a) = y'(a), a real extension parameter mu
(with +inf as a first-class value), and a Weyl function m with finite limit
m(-0).  The two scalar characteristic functions are

    V(z) = (m(z) + mu) * Im h / ((mu - Re h) * m(z) + mu*Re h - |h|^2)
    W(z) = (mu - h)/(mu - conj h) * (m(z) + conj h)/(m(z) + h)

with their analytic mu -> inf limits V = Im h/(m + Re h) and
W = (m + conj h)/(m + h) built in rather than approximated by large numbers.

Everything downstream is closed-form bookkeeping on tangents: the mu-axis
splits into an inverse-Stieltjes branch [-m(-0), Re h], a gap, and a
Stieltjes branch [mu0, +inf]; each branch carries limit angles (a1, a2),
the sector angle of the relevant state-space operator, and a universal
angle valid across the whole branch.  Equality tie-breaks (mu at a branch
edge) use relative tolerance 1e-12 and always classify the boundary as the
accretive-but-not-sectorial case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

from .branchcut import INF, close_eq
from .errors import (
    ClassError,
    DomainError,
    InputError,
    InternalConsistencyError,
    NotAccretiveError,
    PoleError,
    SingularRelationError,
)
from .herglotz import AnalyticFunction, limit_neg_infinity, limit_neg_zero
from .weyl import WeylFunction

Branch = Literal["stieltjes", "inverse_stieltjes", "neither"]

_POLE_REL = 1e-14


@dataclass(frozen=True)
class BoundaryParameter:
    """Boundary coupling h of the dissipative condition h*y(a) = y'(a)."""

    h: complex

    def __post_init__(self):
        if not complex(self.h).imag > 0.0:
            raise InputError(f"boundary parameter needs Im h > 0, got {self.h!r}")


@dataclass(frozen=True)
class ExtensionParameter:
    """Real extension parameter; +inf is a valid value, -inf and NaN are not."""

    mu: float

    def __post_init__(self):
        mu = float(self.mu)
        if math.isnan(mu) or mu == -INF:
            raise InputError(f"mu must be a finite real or +inf, got {self.mu!r}")


@dataclass(frozen=True, eq=False)
class SchrodingerLSystem:
    """The triple (h, mu, m) driving all impedance/transfer evaluations."""

    h: complex
    mu: float
    weyl: WeylFunction

    def __post_init__(self):
        BoundaryParameter(self.h)
        ExtensionParameter(self.mu)
        if not math.isfinite(self.weyl.m_at_neg_zero):
            raise DomainError(
                "m(-0) must be finite; this parametrization assumes it throughout"
            )

    @property
    def m_neg_zero(self) -> float:
        return self.weyl.m_at_neg_zero


def impedance(sys: SchrodingerLSystem, z: complex) -> complex:
    """V(z); raises :class:`PoleError` at genuine impedance poles."""
    m = sys.weyl(z)
    h = complex(sys.h)
    if math.isinf(sys.mu):
        num = complex(h.imag)
        den = m + h.real
    else:
        num = (m + sys.mu) * h.imag
        den = (sys.mu - h.real) * m + sys.mu * h.real - abs(h) ** 2
    if abs(den) < _POLE_REL * max(1.0, abs(num)):
        raise PoleError(f"impedance pole at z={z!r}")
    return num / den


def transfer(sys: SchrodingerLSystem, z: complex) -> complex:
    """W(z); raises :class:`PoleError` where m(z) = -h (main-operator eigenvalue)."""
    m = sys.weyl(z)
    h = complex(sys.h)
    den = m + h
    if abs(den) < _POLE_REL * max(1.0, abs(m), abs(h)):
        raise PoleError(f"transfer pole at z={z!r}: m(z) = -h")
    w = (m + h.conjugate()) / den
    if not math.isinf(sys.mu):
        w *= (sys.mu - h) / (sys.mu - h.conjugate())
    return w


def impedance_from_transfer(w: complex) -> complex:
    """Recover the impedance value i*(W - 1)/(W + 1) from a transfer value."""
    w = complex(w)
    if abs(w + 1.0) < _POLE_REL * max(1.0, abs(w)):
        raise SingularRelationError("relation is singular at W = -1")
    return 1j * (w - 1.0) / (w + 1.0)


def impedance_function(sys: SchrodingerLSystem, description: str = "") -> AnalyticFunction:
    return AnalyticFunction(lambda z: impedance(sys, z),
                            description or f"V[h={sys.h:g}, mu={sys.mu:g}]")


def transfer_function(sys: SchrodingerLSystem, description: str = "") -> AnalyticFunction:
    return AnalyticFunction(lambda z: transfer(sys, z),
                            description or f"W[h={sys.h:g}, mu={sys.mu:g}]")


def _accretivity_gap(h: complex, m0: float) -> float:
    return h.real + m0


def _require_accretive(h: complex, m0: float) -> None:
    if _accretivity_gap(h, m0) < 0.0 and not close_eq(h.real, -m0):
        raise NotAccretiveError(
            f"main operator is not accretive: Re h = {h.real:g} < -m(-0) = {-m0:g}"
        )


def mu0_stieltjes(h: complex, m_neg_zero: float) -> float:
    """Left edge of the Stieltjes branch: (Im h)^2/(m(-0)+Re h) + Re h.

    Degenerates to +inf when Re h = -m(-0): the main operator is then
    accretive but not sectorial and only mu = +inf stays accretive.
    """
    h = complex(h)
    _require_accretive(h, m_neg_zero)
    gap = _accretivity_gap(h, m_neg_zero)
    if gap <= 0.0 or close_eq(h.real, -m_neg_zero):
        return INF
    return h.imag ** 2 / gap + h.real


def mu0_inverse(h: complex) -> float:
    """Right edge of the inverse branch: Re h."""
    return complex(h).real


class THReport(NamedTuple):
    """Accretivity/sectoriality of the main boundary operator."""

    accretive: bool
    sectorial: bool
    theta_tan: float | None
    exact: bool


def t_h_report(h: complex, m_neg_zero: float) -> THReport:
    """Classify the main operator: accretive iff Re h >= -m(-0), sectorial iff
    strict, with exact angle tan(theta) = Im h / (Re h + m(-0))."""
    h = complex(h)
    boundary = close_eq(h.real, -m_neg_zero)
    accretive = boundary or h.real > -m_neg_zero
    if not accretive:
        return THReport(False, False, None, False)
    if boundary:
        return THReport(True, False, INF, False)
    return THReport(True, True, h.imag / _accretivity_gap(h, m_neg_zero), True)


def classify_extension(sys: SchrodingerLSystem) -> Branch:
    """Place mu on the three-way split of the extension axis.

    Stieltjes branch: mu >= mu0 (mu = +inf always qualifies; when
    Re h = -m(-0) the bound degenerates and only +inf qualifies).  Inverse
    branch: -m(-0) <= mu <= Re h.  The open gap between them is 'neither'.
    Raises :class:`NotAccretiveError` when Re h < -m(-0).
    """
    h = complex(sys.h)
    m0 = sys.m_neg_zero
    _require_accretive(h, m0)
    mu = sys.mu
    mu0s = mu0_stieltjes(h, m0)
    if math.isinf(mu) or mu > mu0s or close_eq(mu, mu0s):
        return "stieltjes"
    lo, hi = -m0, h.real
    if (lo < mu < hi) or close_eq(mu, lo) or close_eq(mu, hi):
        return "inverse_stieltjes"
    return "neither"


def class_angles(sys: SchrodingerLSystem, cross_validate: bool = False) -> tuple[float, float]:
    """Limit angles (tan a1, tan a2) of the impedance on its branch.

    Closed forms from the real-axis limits of V; on the inverse branch the
    limits are the negated tangents, consistent with angles measured from
    pi.  With ``cross_validate=True`` the closed forms are checked against
    the numerical limits of the actual impedance evaluator (1e-6).
    """
    branch = classify_extension(sys)
    if branch == "neither":
        raise ClassError("mu sits in the gap between branches; no class angles")
    h = complex(sys.h)
    hr, hi = h.real, h.imag
    m0 = sys.m_neg_zero
    mu = sys.mu
    if branch == "stieltjes":
        if math.isinf(mu):
            t1 = 0.0
            t2 = t_h_report(h, m0).theta_tan
        else:
            t1 = hi / (mu - hr)
            if close_eq(mu, mu0_stieltjes(h, m0)):
                t2 = INF
            else:
                t2 = (m0 + mu) * hi / ((mu - hr) * (m0 + hr) - hi ** 2)
    else:
        den = (mu - hr) * (m0 + hr) - hi ** 2
        t1 = -(m0 + mu) * hi / den
        t2 = INF if close_eq(mu, hr) else hi / (hr - mu)
    t1 = max(0.0, float(t1))
    if not t1 <= t2 + 1e-12 * max(1.0, t1):
        raise InternalConsistencyError(f"angle ordering violated: {t1!r} > {t2!r}")
    if cross_validate:
        _cross_validate_angles(sys, branch, t1, t2)
    return t1, float(t2)


def _cross_validate_angles(sys, branch, t1, t2):
    v = impedance_function(sys)
    if branch == "stieltjes":
        num1 = limit_neg_infinity(v, 1e-8)
        num2 = limit_neg_zero(v, 1e-8)
    else:
        num1 = -limit_neg_zero(v, 1e-8)
        num2 = -limit_neg_infinity(v, 1e-8)
    for name, closed, numeric in (("tan_a1", t1, num1), ("tan_a2", t2, num2)):
        if not close_eq(closed, numeric, rel=1e-6):
            raise InternalConsistencyError(
                f"{name}: closed form {closed!r} vs numerical limit {numeric!r}"
            )


def alpha_from_class(tan_a1: float, tan_a2: float) -> float:
    """Sector angle of the state-space operator from the class angles:
    tan(alpha) = tan(a2) + 2*sqrt(tan(a1)*(tan(a2) - tan(a1))).

    Returns inf when tan(a2) is infinite: the operator is accretive but not
    sectorial for any angle below a right angle.
    """
    if not 0.0 <= tan_a1 <= tan_a2:
        raise InputError(f"need 0 <= tan_a1 <= tan_a2, got ({tan_a1!r}, {tan_a2!r})")
    if math.isinf(tan_a2):
        return INF
    if tan_a1 == 0.0:
        return tan_a2
    return tan_a2 + 2.0 * math.sqrt(tan_a1 * (tan_a2 - tan_a1))


class UniversalBeta(NamedTuple):
    tan_beta: float
    degenerate: bool


def universal_beta(tan_a1: float, tan_a2: float) -> UniversalBeta:
    """Branch-wide sector angle tan(beta) = tan(a1) + 2*sqrt(tan(a1)*tan(a2)).

    tan(a1) = 0 collapses the formula to 0, which carries no information;
    that case is flagged degenerate.  tan(a2) = inf with tan(a1) > 0 gives
    +inf.
    """
    if tan_a1 < 0.0:
        raise InputError("tan_a1 must be nonnegative")
    if tan_a1 == 0.0:
        return UniversalBeta(0.0, True)
    if math.isinf(tan_a2):
        return UniversalBeta(INF, False)
    return UniversalBeta(tan_a1 + 2.0 * math.sqrt(tan_a1 * tan_a2), False)


def f_mu(h: complex, m_neg_zero: float, mu: float, branch: str) -> float:
    """The mu-family angle function on either branch.

    Both branches use the same two building blocks,

        F1 = (m(-0) + mu) * Im h / ((mu - Re h)(m(-0) + Re h) - (Im h)^2)
        F2 = Im h / (mu - Re h)

    combined as f(mu) = |F1| + 2*sqrt(F1*F2); the product F1*F2 is the
    (nonnegative) product of the branch's limit-angle tangents.  On the
    Stieltjes branch f decreases from +inf at mu0 to tan(theta) as
    mu -> +inf (that limit is returned analytically for mu = +inf); on the
    inverse branch it is observed to increase toward +inf at Re h.
    """
    if branch not in ("stieltjes", "inverse_stieltjes"):
        raise InputError(f"unknown branch {branch!r}")
    h = complex(h)
    hr, hi = h.real, h.imag
    m0 = m_neg_zero
    if branch == "stieltjes":
        mu0s = mu0_stieltjes(h, m0)
        if math.isinf(mu):
            th = t_h_report(h, m0).theta_tan
            if th is None or math.isinf(th):
                raise DomainError("main operator not sectorial; f has no mu -> inf limit")
            return th
        if not mu > mu0s or close_eq(mu, mu0s):
            raise DomainError(f"mu={mu:g} not inside the Stieltjes branch (mu0={mu0s:g})")
    else:
        if math.isinf(mu) or not (-m0 <= mu < hr) or close_eq(mu, hr):
            raise DomainError(f"mu={mu:g} not inside [{-m0:g}, Re h={hr:g})")
    f1 = (m0 + mu) * hi / ((mu - hr) * (m0 + hr) - hi ** 2)
    f2 = hi / (mu - hr)
    return abs(f1) + 2.0 * math.sqrt(max(0.0, f1 * f2))


@dataclass(frozen=True)
class OperatorStatus:
    """Sectoriality verdict for a state-space (or associated) operator."""

    kind: Literal["alpha_sectorial", "accretive_not_sectorial", "not_accretive"]
    tan_alpha: float | None = None

    @classmethod
    def sectorial(cls, tan_alpha: float) -> "OperatorStatus":
        if math.isinf(tan_alpha):
            return cls("accretive_not_sectorial")
        return cls("alpha_sectorial", tan_alpha)

    def to_json(self):
        from .branchcut import ext_to_json

        if self.kind == "alpha_sectorial":
            return {"alpha_sectorial": ext_to_json(self.tan_alpha)}
        return self.kind


@dataclass(frozen=True)
class SectorReport:
    """Every derived angle and critical parameter for one (h, mu) system."""

    class_label: Branch
    tan_a1: float | None
    tan_a2: float | None
    theta_tan: float | None
    theta_exact: bool
    mu0_stieltjes: float
    mu0_inverse: float
    alpha_tan: float | None
    beta_tan: float | None
    beta_degenerate: bool
    state_operator: OperatorStatus
    associated_operator: OperatorStatus

    def __post_init__(self):
        if self.tan_a1 is not None and self.tan_a2 is not None:
            if not self.tan_a1 <= self.tan_a2 + 1e-12 * max(1.0, self.tan_a1):
                raise InternalConsistencyError("tan_a1 must not exceed tan_a2")
        for name in ("tan_a1", "tan_a2", "alpha_tan", "beta_tan"):
            v = getattr(self, name)
            if v is not None and v < 0.0:
                raise InternalConsistencyError(f"{name} must be nonnegative, got {v!r}")


_NOT_ACCRETIVE = OperatorStatus("not_accretive")


def full_report(sys: SchrodingerLSystem) -> SectorReport:
    """Assemble the complete classification of one system.

    Statuses follow the branch-edge dichotomy: on the Stieltjes branch the
    state-space operator keeps the main operator's exact angle only at
    mu = +inf and loses sectoriality exactly at mu = mu0; on the inverse
    branch the same happens for the associated operator at mu = -m(-0) and
    mu = Re h respectively.  In between, the angle comes from
    :func:`alpha_from_class`.
    """
    h = complex(sys.h)
    m0 = sys.m_neg_zero
    th = t_h_report(h, m0)
    if not th.accretive:
        raise NotAccretiveError(
            f"main operator is not accretive: Re h = {h.real:g} < -m(-0) = {-m0:g}"
        )
    branch = classify_extension(sys)
    mu0s = mu0_stieltjes(h, m0)
    mu0i = mu0_inverse(h)
    mu = sys.mu

    if branch == "neither":
        return SectorReport(
            class_label="neither", tan_a1=None, tan_a2=None,
            theta_tan=th.theta_tan, theta_exact=th.exact,
            mu0_stieltjes=mu0s, mu0_inverse=mu0i,
            alpha_tan=None, beta_tan=None, beta_degenerate=False,
            state_operator=_NOT_ACCRETIVE, associated_operator=_NOT_ACCRETIVE,
        )

    t1, t2 = class_angles(sys)
    alpha = alpha_from_class(t1, t2)
    beta = universal_beta(t1, t2)

    if branch == "stieltjes":
        if math.isinf(mu):
            state = OperatorStatus.sectorial(th.theta_tan)
        elif close_eq(mu, mu0s):
            state = OperatorStatus("accretive_not_sectorial")
        else:
            state = OperatorStatus.sectorial(alpha)
        associated = _NOT_ACCRETIVE
    else:
        if close_eq(mu, -m0):
            associated = OperatorStatus.sectorial(th.theta_tan)
        elif close_eq(mu, mu0i):
            associated = OperatorStatus("accretive_not_sectorial")
        else:
            associated = OperatorStatus.sectorial(alpha)
        state = _NOT_ACCRETIVE

    return SectorReport(
        class_label=branch, tan_a1=t1, tan_a2=t2,
        theta_tan=th.theta_tan, theta_exact=th.exact,
        mu0_stieltjes=mu0s, mu0_inverse=mu0i,
        alpha_tan=alpha, beta_tan=beta.tan_beta, beta_degenerate=beta.degenerate,
        state_operator=state, associated_operator=associated,
    )


@dataclass(frozen=True)
class MuScanRow:
    mu: float
    class_label: Branch
    tan_a1: float
    tan_a2: float
    f_of_mu: float
    flags: frozenset[str]


@dataclass(frozen=True)
class ScanSummary:
    mu_star: float
    tan_beta: float
    direction: str          # 'decreasing' | 'increasing' | 'non-monotonic'
    bound_side: str         # 'mu>=mu_star' | 'mu<=mu_star'
    bound_holds: bool


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[MuScanRow, ...]
    summary: ScanSummary


def scan_mu(
    h: complex,
    weyl: WeylFunction,
    branch: str,
    mu_grid: Sequence[float],
    mu_star: float | None = None,
) -> ScanResult:
    """Tabulate the angle function over a mu grid inside one branch.

    The summary designates a mu* (by default the grid point nearest the
    branch edge) and reports tan(beta) = f(mu*) together with the observed
    monotonicity direction and whether f stays below tan(beta) on the bound
    side of mu*: mu >= mu* on the Stieltjes branch, mu <= mu* on the inverse
    branch (where the direction is empirical, not asserted).
    """
    if branch not in ("stieltjes", "inverse_stieltjes"):
        raise InputError(f"unknown branch {branch!r}")
    grid = sorted(float(m) for m in mu_grid)
    if not grid:
        raise InputError("empty mu grid")
    m0 = weyl.m_at_neg_zero
    rows = []
    for mu in grid:
        sys = SchrodingerLSystem(h, mu, weyl)
        got = classify_extension(sys)
        if got != branch:
            raise DomainError(
                f"mu={mu:g} classifies as {got!r}, outside the requested {branch!r} branch"
            )
        edge = mu0_stieltjes(h, m0) if branch == "stieltjes" else mu0_inverse(h)
        at_mu0 = (not math.isinf(mu)) and close_eq(mu, edge)
        t1, t2 = class_angles(sys)
        fval = INF if at_mu0 else f_mu(h, m0, mu, branch)
        flags = {"at_mu0"} if at_mu0 else set()
        flags.add("accretive_only" if math.isinf(fval) or at_mu0 else "sectorial")
        rows.append(MuScanRow(mu=mu, class_label=branch, tan_a1=t1, tan_a2=t2,
                              f_of_mu=fval, flags=frozenset(flags)))

    usable = [r for r in rows if "at_mu0" not in r.flags]
    if not usable:
        raise InputError("grid contains only the branch edge mu0; nothing to scan")
    if mu_star is None:
        mu_star = usable[0].mu if branch == "stieltjes" else usable[-1].mu
    star_rows = [r for r in usable if close_eq(r.mu, mu_star)]
    if not star_rows:
        raise InputError(f"designated mu_star={mu_star:g} is not on the grid")
    tan_beta = star_rows[0].f_of_mu

    fs = [r.f_of_mu for r in usable]
    if all(b < a for a, b in zip(fs, fs[1:])):
        direction = "decreasing"
    elif all(b > a for a, b in zip(fs, fs[1:])):
        direction = "increasing"
    else:
        direction = "non-monotonic"

    side = "mu>=mu_star" if branch == "stieltjes" else "mu<=mu_star"
    if branch == "stieltjes":
        covered = [r for r in usable if r.mu >= mu_star or close_eq(r.mu, mu_star)]
    else:
        covered = [r for r in usable if r.mu <= mu_star or close_eq(r.mu, mu_star)]
    bound_holds = all(r.f_of_mu <= tan_beta * (1.0 + 1e-12) for r in covered)

    return ScanResult(
        rows=tuple(rows),
        summary=ScanSummary(mu_star=float(mu_star), tan_beta=tan_beta,
                            direction=direction, bound_side=side, bound_holds=bound_holds),
    )
