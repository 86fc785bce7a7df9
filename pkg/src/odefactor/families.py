"""Five equation families with their factor pairs and particular solutions.

Every closed-form solution here solves the inner first-order equation
``u' = phi1(u) u`` of its factor pair, so its first and second derivatives
are available exactly through that equation:

    u'  = R(u),        R(u) = phi1(u) u
    u'' = R'(u) R(u)

Branch conventions
------------------
``root`` ("plus" / "minus") selects the fitting-parameter root with the
``+`` or ``-`` in front of the square root of the discriminant; ``sign``
(+1 / -1) selects the ``1 +/- exp(...)`` (or overall ``+/-``) choice printed
in the solution.  For the modified Emden solution, the plus root
corresponds to the second printed form with ``alpha - sqrt(alpha^2 - 8 beta)``
in the denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, ClassVar, NamedTuple, Optional, Union

from .errors import ComplexRootsError, DiscriminantError, DomainError, InvalidParam, NonMonotonicError
from .factorization import FactorPair, LienardForm, compose, first_order_rhs, swap
from .genpoly import EXPONENT_TOL, GeneralizedPolynomial
from .numerics import GridSpec, invert_implicit, sample_monotonic, solve_quadratic

INF = math.inf
SQRT2 = math.sqrt(2.0)
WHOLE_LINE = ((-INF, INF),)

P = GeneralizedPolynomial


def _const(c):
    return P.constant(c)


def _mono(c, p):
    return P.monomial(c, p)


def _is_odd_integer(x: float) -> bool:
    return abs(x - round(x)) <= EXPONENT_TOL and round(x) % 2 == 1


def _branch_sign(branch) -> int:
    if branch in (1, "+", "plus", "+1"):
        return 1
    if branch in (-1, "-", "minus", "-1"):
        return -1
    raise InvalidParam(f"branch must be plus or minus, got {branch!r}")


def _root_name(branch) -> str:
    return "plus" if _branch_sign(branch) > 0 else "minus"


def _log_abs_one_plus(s: int, z: float) -> tuple[int, float]:
    """Sign and log-magnitude of ``1 + s*exp(z)``, stable for large |z|."""
    if s > 0:
        return 1, (z + math.log1p(math.exp(-z)) if z > 0 else math.log1p(math.exp(z)))
    if z == 0.0:
        raise DomainError("singular point")
    if z < 0:
        return 1, math.log(-math.expm1(z))
    if z < 30.0:
        return -1, math.log(math.expm1(z))
    return -1, z + math.log1p(-math.exp(-z))


def _real_power(sign: int, log_abs: float, p: float, odd_root_ok: bool) -> float:
    """``x**p`` for x given as (sign, log|x|); negative x only for odd roots."""
    if sign < 0 and not odd_root_ok:
        raise DomainError("negative base under a fractional power")
    return sign * math.exp(p * log_abs)


def _side(rate: float, tau0: float, negative: bool) -> tuple[float, float]:
    """Half-line where ``rate*(tau - tau0)`` is negative (or positive)."""
    if (rate > 0) == negative:
        return (-INF, tau0)
    return (tau0, INF)


def _split(tau_star: float) -> tuple[tuple[float, float], ...]:
    return ((-INF, tau_star), (tau_star, INF))


# -- solution containers ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class ClosedFormSolution:
    """A particular solution u(tau) with its factor pair and target equation.

    ``identities`` holds ``(name, equation value, value read off compose(pair).g)``
    triples; ``extras`` holds ``(name, value, source)`` with source ``"printed"``
    for printed formulas and ``"derived"`` for values obtained by composition.
    """

    family: str
    case: int
    pair: FactorPair
    target: LienardForm
    formula: Callable[[float], float] = field(repr=False)
    domain: tuple[tuple[float, float], ...]
    tau0: float = 0.0
    param: float = float("nan")
    param_name: str = "a1"
    root_branch: Optional[str] = None
    sign_branch: Optional[int] = None
    identities: tuple[tuple[str, float, float], ...] = ()
    extras: tuple[tuple[str, float, str], ...] = ()

    def __post_init__(self):
        if not self.domain:
            raise DomainError(f"{self.label}: empty validity domain")
        rhs = first_order_rhs(self.pair)
        object.__setattr__(self, "_rhs", rhs)
        object.__setattr__(self, "_drhs", rhs.derivative())

    @property
    def label(self) -> str:
        parts = [f"{self.family} case {self.case}"]
        if self.root_branch is not None:
            parts.append(f"root={self.root_branch}")
        if self.sign_branch is not None:
            parts.append(f"sign={'+' if self.sign_branch > 0 else '-'}")
        return " ".join(parts)

    @property
    def rhs(self) -> GeneralizedPolynomial:
        return self._rhs

    @property
    def singularities(self) -> tuple[float, ...]:
        ends = {e for iv in self.domain for e in iv if math.isfinite(e)}
        return tuple(sorted(ends))

    def contains(self, tau: float, standoff: float = 0.0) -> bool:
        slack = standoff * (1.0 - 1e-9)
        for lo, hi in self.domain:
            if standoff > 0:
                if lo + slack <= tau <= hi - slack:
                    return True
            elif lo < tau < hi:
                return True
        return False

    def u(self, tau: float) -> float:
        if not self.contains(tau):
            raise DomainError(f"{self.label}: tau = {tau} outside validity domain {self.domain}")
        try:
            val = self.formula(tau)
        except (OverflowError, ZeroDivisionError) as exc:
            raise DomainError(f"{self.label}: cannot evaluate at tau = {tau}") from exc
        if not math.isfinite(val):
            raise DomainError(f"{self.label}: non-finite value at tau = {tau}")
        return val

    __call__ = u

    def udot(self, tau: float) -> float:
        return self._rhs(self.u(tau))

    def uddot(self, tau: float) -> float:
        u = self.u(tau)
        return self._drhs(u) * self._rhs(u)

    def state(self, tau: float) -> tuple[float, float, float]:
        u = self.u(tau)
        r = self._rhs(u)
        return u, r, self._drhs(u) * r

    def windows(self, width: float = 10.0, standoff: float = 1e-3,
                count: int = 200) -> list[GridSpec]:
        """One residual grid per domain interval, kept ``standoff`` off singularities."""
        out = []
        for lo, hi in self.domain:
            if math.isinf(lo) and math.isinf(hi):
                a, b = self.tau0 - width, self.tau0 + width
            elif math.isinf(hi):
                a, b = lo + standoff, lo + width
            elif math.isinf(lo):
                a, b = hi - width, hi - standoff
            else:
                a, b = lo + standoff, hi - standoff
            out.append(GridSpec(a, b, count))
        return out

    def spans(self, span: float = 5.0, margin: float = 1.0) -> list[tuple[float, float]]:
        """One integration span per domain interval, ``margin`` away from singularities."""
        out = []
        for lo, hi in self.domain:
            if math.isinf(lo) and math.isinf(hi):
                out.append((self.tau0 - span / 2, self.tau0 + span / 2))
            elif math.isinf(hi):
                out.append((lo + margin, lo + margin + span))
            elif math.isinf(lo):
                out.append((hi - margin - span, hi - margin))
            else:
                mid, half = 0.5 * (lo + hi), min(span, hi - lo - 2 * margin) / 2
                if half > 0:
                    out.append((mid - half, mid + half))
        return out


@dataclass(frozen=True)
class ImplicitRelation:
    """tau(u) for  u' = a1 (A u + B u^2 + C u^3),  C != 0, A != 0.

        a1 (tau - tau0) = ln(u^3/F3)^(1/(2A)) - ln((2Cu+B-D)/(2Cu+B+D))^(B/(2A D))

    with D = sqrt(B^2 - 4AC).  ``bracket`` is the maximal open u-interval
    around ``seed`` on which both logarithm arguments stay positive; it is
    bounded by consecutive roots of F3, so tau is strictly monotone there.
    """

    A: float
    B: float
    C: float
    a1: float
    tau0: float = 0.0
    seed: float = 1.0
    Delta: float = field(init=False)
    bracket: tuple[float, float] = field(init=False)

    def __post_init__(self):
        if self.A == 0:
            raise InvalidParam("A = 0: the exponents 1/(2A) are undefined")
        if self.C == 0:
            raise InvalidParam("C = 0: the logarithmic term is undefined")
        if self.a1 == 0:
            raise InvalidParam("a1 must be nonzero")
        d2 = self.B ** 2 - 4 * self.A * self.C
        if not d2 > 0:
            raise DiscriminantError(f"B^2 - 4AC = {d2} must be positive")
        object.__setattr__(self, "Delta", math.sqrt(d2))
        roots = sorted({0.0, (-self.B + self.Delta) / (2 * self.C),
                        (-self.B - self.Delta) / (2 * self.C)})
        if self.seed in roots:
            raise InvalidParam(f"seed {self.seed} is a root of F3")
        cuts = [-INF, *roots, INF]
        for lo, hi in zip(cuts, cuts[1:]):
            if lo < self.seed < hi:
                object.__setattr__(self, "bracket", (lo, hi))
        if not self._real_at(self.seed):
            raise InvalidParam(
                f"seed u = {self.seed}: logarithm arguments are not positive there")

    def _args(self, u):
        q = self.A + self.B * u + self.C * u * u
        ratio = (2 * self.C * u + self.B - self.Delta) / (2 * self.C * u + self.B + self.Delta)
        return u * u / q, ratio

    def _real_at(self, u) -> bool:
        first, ratio = self._args(u)
        return first > 0 and ratio > 0

    def F3(self, u: float) -> float:
        return u * (self.A + self.B * u + self.C * u * u)

    def tau_of(self, u: float) -> float:
        """tau - tau0 at ``u``; u^3/F3 is evaluated as u^2/(A + Bu + Cu^2)."""
        if not self.bracket[0] < u < self.bracket[1]:
            raise DomainError(f"u = {u} outside bracket {self.bracket}")
        first, ratio = self._args(u)
        A, B, C, D = self.A, self.B, self.C, self.Delta
        # For large |u| both arguments approach constants; log1p of the exact
        # deviation keeps tau accurate where it flattens out.
        q = A + B * u + C * u * u
        dev_first = -(A + B * u) / q          # C u^2/q - 1
        dev_ratio = -2 * D / (2 * C * u + B + D)  # ratio - 1
        log_first = (math.log1p(dev_first) - math.log(C) if abs(dev_first) < 0.5
                     else math.log(first))
        log_ratio = math.log1p(dev_ratio) if abs(dev_ratio) < 0.5 else math.log(ratio)
        return (log_first / (2 * A) - B / (2 * A * D) * log_ratio) / self.a1

    def tau(self, u: float) -> float:
        return self.tau0 + self.tau_of(u)

    def dtau_du(self, u: float) -> float:
        return 1.0 / (self.a1 * self.F3(u))

    def check_monotonic(self) -> None:
        if not sample_monotonic(self.dtau_du, self.bracket):
            raise NonMonotonicError(f"tau(u) is not monotone on {self.bracket}")

    def image(self) -> tuple[float, float]:
        """Range of ``tau_of`` over the bracket (relative to tau0)."""
        lo, hi = self.bracket
        # u -> +-inf: u^2/Q -> 1/C and the ratio -> 1; finite ends are log poles.
        limit = math.log(1.0 / self.C) / (2 * self.A * self.a1)
        at_lo = limit if math.isinf(lo) else None
        at_hi = limit if math.isinf(hi) else None
        if self.dtau_du(self.seed) > 0:
            return (-INF if at_lo is None else at_lo, INF if at_hi is None else at_hi)
        return (-INF if at_hi is None else at_hi, INF if at_lo is None else at_lo)

    def as_solution(self) -> ClosedFormSolution:
        lo, hi = self.image()
        pair = lienard_pair_case2(self.A, self.B, self.C, self.a1)
        form = compose(pair)
        return ClosedFormSolution(
            family="lienard", case=2, pair=pair,
            target=LienardForm(lienard_g2(self.A, self.B, self.C, self.a1), lienard_F3(self.A, self.B, self.C)),
            formula=lambda tau: invert_implicit(self, tau),
            domain=((self.tau0 + lo, self.tau0 + hi),), tau0=self.tau0, param=self.a1,
            identities=(("A", self.A, form.F.coefficient(1)),),
        )


# -- modified Emden ---------------------------------------------------------

class RootPair(NamedTuple):
    plus: float
    minus: float

    @property
    def roots(self) -> tuple[float, ...]:
        return (self.plus,) if self.plus == self.minus else (self.plus, self.minus)

    def pick(self, branch) -> float:
        return self.plus if _branch_sign(branch) > 0 else self.minus


class QuadraticFit(NamedTuple):
    plus: float
    minus: float
    nu: Callable[[float, float], float]

    @property
    def roots(self) -> tuple[float, ...]:
        return (self.plus,) if self.plus == self.minus else (self.plus, self.minus)

    def pick(self, branch) -> float:
        return self.plus if _branch_sign(branch) > 0 else self.minus


def _check_beta(beta):
    if not beta > 0:
        raise InvalidParam(f"beta must be positive, got {beta}")


def emden_pair_case1(beta: float, a1: float) -> FactorPair:
    sb = math.sqrt(beta)
    return FactorPair(_mono(a1 * sb, 1), _mono(sb / a1, 1))


def emden_pair_case2(beta: float, a1: float) -> FactorPair:
    sb = math.sqrt(beta)
    return FactorPair(_mono(a1 * sb, 2), _const(sb / a1))


def emden_form(alpha: float, beta: float) -> LienardForm:
    return LienardForm(_mono(alpha, 1), _mono(beta, 3))


def emden_fit(alpha: float, beta: float) -> RootPair:
    """Roots of  2 sqrt(beta) a1^2 + alpha a1 + sqrt(beta) = 0."""
    _check_beta(beta)
    sb = math.sqrt(beta)
    roots = solve_quadratic(2 * sb, alpha, sb)
    if not roots:
        raise ComplexRootsError(
            f"no real factorization (alpha^2 < 8 beta): alpha = {alpha}, beta = {beta}")
    fit = RootPair(roots[-1], roots[0])
    if alpha > 0:
        assert fit.plus < 0 and fit.minus < 0
    return fit


def emden_second_form(alpha: float, beta: float, sign: int, tau: float, tau0: float = 0.0) -> float:
    """The explicit-parameter form  4 / ((alpha +/- sqrt(alpha^2 - 8 beta)) (tau - tau0))."""
    return 4.0 / ((alpha + _branch_sign(sign) * math.sqrt(alpha ** 2 - 8 * beta)) * (tau - tau0))


def emden_solution_case1(alpha: float, beta: float, branch="plus", tau0: float = 0.0) -> ClosedFormSolution:
    a1 = emden_fit(alpha, beta).pick(branch)
    c = a1 * math.sqrt(beta)
    pair = emden_pair_case1(beta, a1)
    return ClosedFormSolution(
        family="emden", case=1, pair=pair, target=emden_form(alpha, beta),
        formula=lambda tau: -1.0 / (c * (tau - tau0)),
        domain=_split(tau0), tau0=tau0, param=a1, root_branch=_root_name(branch),
        identities=(("alpha", alpha, compose(pair).g.coefficient(1)),),
        extras=(("a1", a1, "printed"),),
    )


def emden_solution_case2(beta: float, a1: float, tau0: float = 0.0) -> ClosedFormSolution:
    """u = [-2 a1 sqrt(beta) (tau - tau0)]^(-1/2).

    Solves the cubic-damping equation  u'' - sqrt(beta)(1/a1 + 3 a1 u^2) u' + beta u^3 = 0,
    a Duffing-van der Pol instance with A = 0 and G E = 3 beta.
    """
    _check_beta(beta)
    if a1 == 0:
        raise InvalidParam("a1 must be nonzero")
    sb = math.sqrt(beta)
    c = a1 * sb
    G, E = -sb / a1, -3 * a1 * sb
    pair = emden_pair_case2(beta, a1)
    form = compose(pair)
    return ClosedFormSolution(
        family="emden", case=2, pair=pair, target=dvp_form(G, E, 0.0, cubic=beta),
        formula=lambda tau: (-2.0 * c * (tau - tau0)) ** -0.5,
        domain=(_side(c, tau0, negative=True),), tau0=tau0, param=a1,
        identities=(("G", G, form.g.coefficient(0)), ("E", E, form.g.coefficient(2)),
                    ("G*E", 3 * beta, G * E)),
        extras=(("G", G, "derived"), ("E", E, "derived")),
    )


# -- generalized Lienard ----------------------------------------------------

def _lienard_delta(A, B, C) -> float:
    d2 = B * B - 4 * A * C
    if not d2 > 0:
        raise DiscriminantError(f"Delta^2 = B^2 - 4AC = {d2} must be positive")
    return math.sqrt(d2)


def lienard_F3(A: float, B: float, C: float) -> GeneralizedPolynomial:
    return P([(A, 1), (B, 2), (C, 3)])


def lienard_pair_case1(A, B, C, a1, branch="plus") -> FactorPair:
    D = _branch_sign(branch) * _lienard_delta(A, B, C)
    return FactorPair(P([(a1 * (B + D) / 2, 0), (a1 * C, 1)]),
                      P([((B - D) / (2 * C) / a1, 0), (1 / a1, 1)]))


def lienard_pair_case2(A, B, C, a1) -> FactorPair:
    return FactorPair(P([(a1 * A, 0), (a1 * B, 1), (a1 * C, 2)]), _const(1 / a1))


def lienard_g1(A, B, C, a1, branch="plus") -> GeneralizedPolynomial:
    D = _branch_sign(branch) * _lienard_delta(A, B, C)
    return -P([((B + D) / 2 * a1 + (B - D) / (2 * C) / a1, 0), (2 * C * a1 + 1 / a1, 1)])


def lienard_g2(A, B, C, a1) -> GeneralizedPolynomial:
    return -P([(a1 * A + 1 / a1, 0), (2 * a1 * B, 1), (3 * a1 * C, 2)])


def lienard_solution_case1(A: float, B: float, C: float, a1: float, tau0: float = 0.0,
                           branch="plus") -> ClosedFormSolution:
    """u = k / (exp(-a1 k (tau - tau0)) - C),  k = (B +/- Delta)/2.

    ``branch`` picks the sign of Delta; the minus branch is the same ansatz
    with the two roots of A + Bu + Cu^2 exchanged.
    """
    if C == 0:
        raise InvalidParam("C must be nonzero")
    if a1 == 0:
        raise InvalidParam("a1 must be nonzero")
    s = _branch_sign(branch)
    D = s * _lienard_delta(A, B, C)
    k = (B + D) / 2

    def formula(tau):
        z = -a1 * k * (tau - tau0)
        if z > 700:
            return k * math.exp(-z) / (1.0 - C * math.exp(-z))
        return k / (math.exp(z) - C)

    if C > 0 and k != 0:
        domain = _split(tau0 - math.log(C) / (a1 * k))
    else:
        domain = WHOLE_LINE
    pair = lienard_pair_case1(A, B, C, a1, branch)
    return ClosedFormSolution(
        family="lienard", case=1, pair=pair,
        target=LienardForm(lienard_g1(A, B, C, a1, branch), lienard_F3(A, B, C)),
        formula=formula, domain=domain, tau0=tau0, param=a1, root_branch=_root_name(branch),
        identities=(("A", A, compose(pair).F.coefficient(1)),),
    )


def lienard_implicit_case2(A: float, B: float, C: float, a1: float, tau0: float = 0.0,
                           seed: float = 1.0) -> ImplicitRelation:
    return ImplicitRelation(A, B, C, a1, tau0, seed)


# -- Duffing-van der Pol ----------------------------------------------------

def dvp_form(G: float, E: float, A: float, cubic: float = 1.0) -> LienardForm:
    return LienardForm(P([(G, 0), (E, 2)]), P([(A, 1), (cubic, 3)]))


def dvp_pair(A: float, a1: float) -> FactorPair:
    return FactorPair(P([(a1 * A, 0), (a1, 2)]), _const(1 / a1))


def dvp_fit(E: float, A: float) -> tuple[float, float]:
    """a1 = -E/3 and G = (A E^2 + 9) / (3 E)."""
    if E == 0:
        raise InvalidParam("E must be nonzero")
    return -E / 3.0, (A * E * E + 9.0) / (3.0 * E)


def chandrasekar_case(E: float, A: float, tol: float = 1e-9) -> bool:
    """True for the special instance E = beta, A = 3/beta^2."""
    return E != 0 and abs(A - 3.0 / (E * E)) <= tol


def dvp_solution(E: float, A: float, branch=1, tau0: float = 0.0,
                 G: Optional[float] = None) -> ClosedFormSolution:
    """u = +/- sqrt(A X / (1 - X)),  X = exp(-(2/3) A E (tau - tau0)).

    ``G`` defaults to the fitted value; any other value gives the target
    equation a damping the solution does not satisfy.
    """
    if A == 0:
        raise InvalidParam("A = 0 is the cubic-damping Emden case; use emden_solution_case2")
    a1, G_fit = dvp_fit(E, A)
    G = G_fit if G is None else G
    s = _branch_sign(branch)
    rate = 2 * a1 * A

    def formula(tau):
        z = rate * (tau - tau0)
        w = A / math.expm1(-z) if z > 0 else A * math.exp(z) / -math.expm1(z)
        return s * math.sqrt(w)

    pair = dvp_pair(A, a1)
    form = compose(pair)
    return ClosedFormSolution(
        family="dvp", case=1, pair=pair, target=dvp_form(G, E, A), formula=formula,
        domain=(_side(rate, tau0, negative=A > 0),), tau0=tau0, param=a1, sign_branch=s,
        identities=(("G", G, form.g.coefficient(0)), ("E", E, form.g.coefficient(2))),
        extras=(("a1", a1, "printed"), ("G", G_fit, "printed"),
                ("chandrasekar", float(chandrasekar_case(E, A)), "printed")),
    )


# -- convective Fisher ------------------------------------------------------

def _check_mu(mu):
    if not mu > 0:
        raise InvalidParam(f"mu must be positive, got {mu}")


def fisher_form(mu: float, nu: float) -> LienardForm:
    return LienardForm(P([(2 * nu, 0), (-2 * mu, 1)]), P([(2.0, 1), (-2.0, 2)]))


def fisher_pair(a1: float) -> FactorPair:
    return FactorPair(P([(SQRT2 * a1, 0), (-SQRT2 * a1, 1)]), _const(SQRT2 / a1))


def fisher_fit_case1(mu: float) -> tuple[float, float]:
    _check_mu(mu)
    return -mu / SQRT2, mu / 2 + 1 / mu


def fisher_fit_case2(mu: float) -> tuple[float, float]:
    """a1 = -sqrt(2) mu for the exchanged pair; nu read off the composed damping."""
    _check_mu(mu)
    a1 = -SQRT2 * mu
    g = compose(swap(fisher_pair(a1))).g
    return a1, g.coefficient(0) / 2


def fisher_solution_case1(mu: float, branch=1, tau0: float = 0.0) -> ClosedFormSolution:
    """u = 1 / (1 +/- exp(mu (tau - tau0)))."""
    a1, nu = fisher_fit_case1(mu)
    s = _branch_sign(branch)

    def formula(tau):
        sign, log_q = _log_abs_one_plus(s, mu * (tau - tau0))
        return sign * math.exp(-log_q)

    pair = fisher_pair(a1)
    g = compose(pair).g
    return ClosedFormSolution(
        family="fisher", case=1, pair=pair, target=fisher_form(mu, nu), formula=formula,
        domain=WHOLE_LINE if s > 0 else _split(tau0), tau0=tau0, param=a1, sign_branch=s,
        identities=(("nu", nu, g.coefficient(0) / 2), ("mu", mu, -g.coefficient(1) / 2)),
        extras=(("a1", a1, "printed"), ("nu", nu, "printed")),
    )


def fisher_solution_case2(mu: float, branch=1, tau0: float = 0.0) -> ClosedFormSolution:
    """u = +/- exp(-(tau - tau0) / mu)."""
    a1, nu = fisher_fit_case2(mu)
    s = _branch_sign(branch)
    pair = swap(fisher_pair(a1))
    g = compose(pair).g
    return ClosedFormSolution(
        family="fisher", case=2, pair=pair, target=fisher_form(mu, nu),
        formula=lambda tau: s * math.exp(-(tau - tau0) / mu),
        domain=WHOLE_LINE, tau0=tau0, param=a1, sign_branch=s,
        identities=(("nu", mu + 1 / (2 * mu), g.coefficient(0) / 2),
                    ("mu", mu, -g.coefficient(1) / 2)),
        extras=(("a1", a1, "printed"), ("nu", nu, "derived")),
    )


# -- generalized Burgers-Huxley ---------------------------------------------

def _check_bh(beta, delta):
    _check_beta(beta)
    if not delta > 0:
        raise InvalidParam(f"delta must be positive, got {delta}")


def bh_form(alpha: float, beta: float, gamma: float, delta: float, nu: float) -> LienardForm:
    F = _mono(beta, 1) * (1 - _mono(1.0, delta)) * (_mono(1.0, delta) - gamma)
    return LienardForm(P([(nu, 0), (-alpha, delta)]), F)


def bh_pair_case1(beta: float, gamma: float, delta: float, a1: float) -> FactorPair:
    sb = math.sqrt(beta)
    return FactorPair(P([(sb * a1, 0), (-sb * a1, delta)]),
                      P([(-sb * gamma / a1, 0), (sb / a1, delta)]))


def bh_pair_case2(beta: float, gamma: float, delta: float, e1: float) -> FactorPair:
    sb = math.sqrt(beta)
    return FactorPair(P([(-sb * e1 * gamma, 0), (sb * e1, delta)]),
                      P([(sb / e1, 0), (-sb / e1, delta)]))


def bh_fit_case1(alpha: float, beta: float, delta: float) -> QuadraticFit:
    """Roots of  sqrt(beta)(1+delta) a1^2 + alpha a1 - sqrt(beta) = 0."""
    _check_bh(beta, delta)
    sb = math.sqrt(beta)
    disc = alpha ** 2 + 4 * beta * (1 + delta)
    assert disc > 0
    lo, hi = solve_quadratic(sb * (1 + delta), alpha, -sb)
    return QuadraticFit(hi, lo, lambda a1, gamma: -sb * (a1 - gamma / a1))


def bh_fit_case2(alpha: float, beta: float, delta: float) -> QuadraticFit:
    """Roots of  sqrt(beta)(1+delta) e1^2 - alpha e1 - sqrt(beta) = 0.

    This follows from matching the composed damping to  nu - alpha u^delta;
    at delta = 1 it reproduces  e1 = (alpha +/- sqrt(alpha^2 + 8 beta)) / (4 sqrt(beta)).
    """
    _check_bh(beta, delta)
    sb = math.sqrt(beta)
    lo, hi = solve_quadratic(sb * (1 + delta), -alpha, -sb)
    return QuadraticFit(hi, lo, lambda e1, gamma: sb * (gamma * e1 - 1 / e1))


def bh_e1_delta1(alpha: float, beta: float) -> tuple[float, float]:
    """The printed delta = 1 roots (plus, minus)."""
    r = math.sqrt(alpha ** 2 + 8 * beta)
    return (alpha + r) / (4 * math.sqrt(beta)), (alpha - r) / (4 * math.sqrt(beta))


def _bh_domain(rate, tau0, s, delta, want_positive=True):
    """Intervals where ``1 + s exp(rate (tau - tau0))`` has the wanted sign.

    Odd-integer delta admits both signs (real odd roots), bounded only by the pole.
    """
    if s > 0:
        return WHOLE_LINE if want_positive or _is_odd_integer(delta) else ()
    if _is_odd_integer(delta):
        return _split(tau0)
    return (_side(rate, tau0, negative=want_positive),)


def bh_solution_case1(alpha: float, beta: float, gamma: float, delta: float, root_branch="plus",
                      sign_branch=1, tau0: float = 0.0) -> ClosedFormSolution:
    """u = (1 +/- exp(-a1 sqrt(beta) delta (tau - tau0)))^(-1/delta)."""
    fit = bh_fit_case1(alpha, beta, delta)
    a1 = fit.pick(root_branch)
    nu = fit.nu(a1, gamma)
    s = _branch_sign(sign_branch)
    rate = -a1 * math.sqrt(beta) * delta
    odd = _is_odd_integer(delta)

    def formula(tau):
        sign, log_q = _log_abs_one_plus(s, rate * (tau - tau0))
        return _real_power(sign, log_q, -1.0 / delta, odd)

    pair = bh_pair_case1(beta, gamma, delta, a1)
    g = compose(pair).g
    return ClosedFormSolution(
        family="burgers-huxley", case=1, pair=pair, target=bh_form(alpha, beta, gamma, delta, nu),
        formula=formula, domain=_bh_domain(rate, tau0, s, delta), tau0=tau0, param=a1,
        root_branch=_root_name(root_branch), sign_branch=s,
        identities=(("alpha", alpha, -g.coefficient(delta)), ("nu", nu, g.coefficient(0))),
        extras=(("a1", a1, "printed"), ("nu", nu, "printed")),
    )


def bh_solution_case2(alpha: float, beta: float, gamma: float, delta: float, root_branch="plus",
                      sign_branch=1, tau0: float = 0.0) -> ClosedFormSolution:
    """u = (gamma / (1 +/- exp(e1 sqrt(beta) gamma delta (tau - tau0))))^(1/delta)."""
    if gamma == 0:
        raise InvalidParam("gamma must be nonzero for the second factorization")
    fit = bh_fit_case2(alpha, beta, delta)
    e1 = fit.pick(root_branch)
    nu = fit.nu(e1, gamma)
    s = _branch_sign(sign_branch)
    rate = e1 * math.sqrt(beta) * gamma * delta
    odd = _is_odd_integer(delta)
    gsign = 1 if gamma > 0 else -1

    def formula(tau):
        sign, log_q = _log_abs_one_plus(s, rate * (tau - tau0))
        return _real_power(sign * gsign, math.log(abs(gamma)) - log_q, 1.0 / delta, odd)

    pair = bh_pair_case2(beta, gamma, delta, e1)
    g = compose(pair).g
    exact = abs(delta - 1.0) <= EXPONENT_TOL
    return ClosedFormSolution(
        family="burgers-huxley", case=2, pair=pair, target=bh_form(alpha, beta, gamma, delta, nu),
        formula=formula, domain=_bh_domain(rate, tau0, s, delta, want_positive=gamma > 0),
        tau0=tau0, param=e1, param_name="e1", root_branch=_root_name(root_branch), sign_branch=s,
        identities=(("alpha", alpha, -g.coefficient(delta)), ("nu", nu, g.coefficient(0))),
        extras=(("e1", e1, "printed" if exact else "derived"), ("nu", nu, "printed")),
    )


# -- family records ---------------------------------------------------------

def _feasible(builders) -> list[ClosedFormSolution]:
    out = []
    for build in builders:
        try:
            out.append(build())
        except (DomainError, InvalidParam):
            continue
    return out


@dataclass(frozen=True)
class ModifiedEmden:
    """u'' + alpha u u' + beta u^3 = 0.  ``a1`` is the free parameter of case 2."""

    alpha: float
    beta: float
    a1: float = -1.0

    name: ClassVar[str] = "emden"
    title: ClassVar[str] = "modified Emden equation"
    params: ClassVar[tuple[str, ...]] = ("alpha", "beta", "a1")
    constraints: ClassVar[str] = "beta > 0; case 1 requires alpha^2 >= 8*beta; case 2 requires a1 != 0"
    cases: ClassVar[int] = 2

    def __post_init__(self):
        _check_beta(self.beta)

    def solutions(self, tau0: float = 0.0) -> list[ClosedFormSolution]:
        builders = []
        try:
            roots = emden_fit(self.alpha, self.beta).roots
        except ComplexRootsError:
            roots = ()
        for name, _ in zip(("plus", "minus"), roots):
            builders.append(lambda name=name: emden_solution_case1(self.alpha, self.beta, name, tau0))
        builders.append(lambda: emden_solution_case2(self.beta, self.a1, tau0))
        return _feasible(builders)


@dataclass(frozen=True)
class GeneralizedLienard:
    """u'' + g(u) u' + A u + B u^2 + C u^3 = 0 with g induced by the chosen factorization."""

    A: float
    B: float
    C: float
    a1: float
    seed: float = 1.0

    name: ClassVar[str] = "lienard"
    title: ClassVar[str] = "generalized Lienard equation"
    params: ClassVar[tuple[str, ...]] = ("A", "B", "C", "a1", "seed")
    constraints: ClassVar[str] = "B^2 - 4*A*C > 0; C != 0; a1 != 0; case 2 requires A != 0"
    cases: ClassVar[int] = 2

    def __post_init__(self):
        _lienard_delta(self.A, self.B, self.C)
        if self.C == 0 or self.a1 == 0:
            raise InvalidParam("C and a1 must be nonzero")

    def implicit(self, tau0: float = 0.0) -> ImplicitRelation:
        return lienard_implicit_case2(self.A, self.B, self.C, self.a1, tau0, self.seed)

    def solutions(self, tau0: float = 0.0) -> list[ClosedFormSolution]:
        args = (self.A, self.B, self.C, self.a1, tau0)
        return _feasible([
            lambda: lienard_solution_case1(*args, branch="plus"),
            lambda: lienard_solution_case1(*args, branch="minus"),
            lambda: self.implicit(tau0).as_solution(),
        ])


@dataclass(frozen=True)
class DuffingVanDerPol:
    """u'' + (G + E u^2) u' + A u + u^3 = 0.  ``G=None`` takes the fitted value."""

    E: float
    A: float
    G: Optional[float] = None

    name: ClassVar[str] = "dvp"
    title: ClassVar[str] = "Duffing-van der Pol oscillator"
    params: ClassVar[tuple[str, ...]] = ("E", "A", "G")
    constraints: ClassVar[str] = "E != 0; factorizable iff G = (A*E^2 + 9)/(3*E)"
    cases: ClassVar[int] = 1

    def __post_init__(self):
        if self.E == 0:
            raise InvalidParam("E must be nonzero")

    def solutions(self, tau0: float = 0.0) -> list[ClosedFormSolution]:
        if self.A == 0:
            sol = emden_solution_case2(1.0, -self.E / 3, tau0)
            if self.G is not None:
                sol = replace(sol, target=dvp_form(self.G, self.E, 0.0))
            return [sol]
        return _feasible([lambda s=s: dvp_solution(self.E, self.A, s, tau0, self.G) for s in (1, -1)])


@dataclass(frozen=True)
class ConvectiveFisher:
    """u'' + 2 (nu - mu u) u' + 2 u (1 - u) = 0 with nu fixed by the factorization."""

    mu: float

    name: ClassVar[str] = "fisher"
    title: ClassVar[str] = "convective Fisher equation (travelling wave)"
    params: ClassVar[tuple[str, ...]] = ("mu",)
    constraints: ClassVar[str] = "mu > 0"
    cases: ClassVar[int] = 2

    def __post_init__(self):
        _check_mu(self.mu)

    def solutions(self, tau0: float = 0.0) -> list[ClosedFormSolution]:
        return _feasible([lambda s=s, f=f: f(self.mu, s, tau0)
                          for f in (fisher_solution_case1, fisher_solution_case2) for s in (1, -1)])


@dataclass(frozen=True)
class BurgersHuxley:
    """u'' + (nu - alpha u^delta) u' + beta u (1 - u^delta)(u^delta - gamma) = 0."""

    alpha: float
    beta: float
    gamma: float
    delta: float

    name: ClassVar[str] = "burgers-huxley"
    title: ClassVar[str] = "generalized Burgers-Huxley equation (travelling wave)"
    params: ClassVar[tuple[str, ...]] = ("alpha", "beta", "gamma", "delta")
    constraints: ClassVar[str] = "beta > 0; delta > 0; case 2 requires gamma != 0"
    cases: ClassVar[int] = 2

    def __post_init__(self):
        _check_bh(self.beta, self.delta)

    def solutions(self, tau0: float = 0.0) -> list[ClosedFormSolution]:
        p = (self.alpha, self.beta, self.gamma, self.delta)
        return _feasible([lambda f=f, r=r, s=s: f(*p, r, s, tau0)
                          for f in (bh_solution_case1, bh_solution_case2)
                          for r in ("plus", "minus") for s in (1, -1)])


EquationFamily = Union[ModifiedEmden, GeneralizedLienard, DuffingVanDerPol, ConvectiveFisher, BurgersHuxley]

FAMILIES: dict[str, type] = {
    cls.name: cls for cls in (ModifiedEmden, GeneralizedLienard, DuffingVanDerPol,
                              ConvectiveFisher, BurgersHuxley)
}
