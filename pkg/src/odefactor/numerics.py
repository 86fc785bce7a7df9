"""Independent verification machinery: RK4, residual scans, root solving."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import BlowUpError, DomainError, InvalidParam, NonMonotonicError, OutOfRangeError
from .genpoly import GeneralizedPolynomial

BLOWUP = 1e12
DEFAULT_STANDOFF = 1e-3
DEFAULT_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class Trajectory:
    taus: np.ndarray
    us: np.ndarray
    vs: np.ndarray
    h: float

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.taus.tolist(), self.us.tolist(), self.vs.tolist()))

    def __len__(self):
        return len(self.taus)


@dataclass(frozen=True)
class GridSpec:
    start: float
    end: float
    count: int = 200

    def __post_init__(self):
        if self.count < 2:
            raise InvalidParam("grid count must be at least 2")
        if not self.end > self.start:
            raise InvalidParam(f"empty grid [{self.start}, {self.end}]")

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.end, self.count)

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        """Parse ``a:b:n``."""
        try:
            a, b, n = text.split(":")
            return cls(float(a), float(b), int(n))
        except ValueError as exc:
            raise InvalidParam(f"bad grid {text!r}, expected a:b:n") from exc


@dataclass(frozen=True)
class ResidualReport:
    grid: list[float]
    residuals: list[float]
    max_abs_relative: float
    tolerance_used: float
    passed: bool


def integrate_rk4(g: GeneralizedPolynomial, F: GeneralizedPolynomial, u0: float, v0: float,
                  tau_span: tuple[float, float], h: float) -> Trajectory:
    """Classical RK4 on  u' = v,  v' = -g(u) v - F(u).

    The step is shrunk to ``span / round(span / h)`` so the grid lands
    exactly on both ends of ``tau_span``.
    """
    a, b = map(float, tau_span)
    if h <= 0:
        raise InvalidParam("step size must be positive")
    if not b > a:
        raise InvalidParam(f"empty span [{a}, {b}]")
    n = max(1, round((b - a) / h))
    h = (b - a) / n

    def rhs(u, v):
        return v, -g(u) * v - F(u)

    us = np.empty(n + 1)
    vs = np.empty(n + 1)
    u, v = float(u0), float(v0)
    us[0], vs[0] = u, v
    for k in range(1, n + 1):
        k1u, k1v = rhs(u, v)
        k2u, k2v = rhs(u + 0.5 * h * k1u, v + 0.5 * h * k1v)
        k3u, k3v = rhs(u + 0.5 * h * k2u, v + 0.5 * h * k2v)
        k4u, k4v = rhs(u + h * k3u, v + h * k3v)
        u += h * (k1u + 2.0 * (k2u + k3u) + k4u) / 6.0
        v += h * (k1v + 2.0 * (k2v + k3v) + k4v) / 6.0
        if not (abs(u) <= BLOWUP and abs(v) <= BLOWUP):
            raise BlowUpError(f"|u| or |u'| exceeded {BLOWUP:g} at tau = {a + k * h}")
        us[k], vs[k] = u, v
    taus = np.linspace(a, b, n + 1)
    return Trajectory(taus=taus, us=us, vs=vs, h=h)


def residual_scan(g: GeneralizedPolynomial, F: GeneralizedPolynomial, sol,
                  grid: GridSpec | Iterable[float] | None = None, *,
                  tol: float = DEFAULT_RESIDUAL_TOL,
                  standoff: float = DEFAULT_STANDOFF) -> ResidualReport:
    """Evaluate  u'' + g(u) u' + F(u)  along a closed-form solution.

    ``sol`` supplies ``state(tau) -> (u, u', u'')`` and ``contains(tau, standoff)``.
    Residuals are normalized by ``1 + |F(u)|``.  With no grid, the solution's
    first default window is used.
    """
    if grid is None:
        grid = sol.windows(standoff=standoff)[0]
    taus = grid.points() if isinstance(grid, GridSpec) else np.asarray(list(grid), float)
    residuals = []
    for tau in taus:
        if not sol.contains(tau, standoff):
            raise DomainError(
                f"tau = {tau} is within {standoff} of a singularity or outside "
                f"the validity domain {sol.domain}")
        u, ud, udd = sol.state(tau)
        Fu = F(u)
        residuals.append((udd + g(u) * ud + Fu) / (1.0 + abs(Fu)))
    worst = max(abs(r) for r in residuals)
    return ResidualReport(grid=taus.tolist(), residuals=residuals, max_abs_relative=worst,
                          tolerance_used=tol, passed=worst <= tol)


def solve_quadratic(a: float, b: float, c: float, *, rel_tol: float = 1e-14) -> tuple[float, ...]:
    """Real roots of  a x^2 + b x + c,  ascending, without cancellation.

    A discriminant within ``rel_tol`` of zero (relative to ``b^2``, ``|4ac|``)
    is treated as a double root and returned once.
    """
    if a == 0:
        raise InvalidParam("leading coefficient must be nonzero")
    disc = b * b - 4.0 * a * c
    scale = max(b * b, abs(4.0 * a * c))
    if disc < -rel_tol * scale:
        return ()
    if disc <= rel_tol * scale:
        return (-b / (2.0 * a),)
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    return tuple(sorted((q / a, c / q)))


def _toward(u: float, end: float, k: int) -> float:
    """k-th probe from ``u`` toward ``end`` (geometric for finite, doubling for infinite)."""
    if math.isinf(end):
        return u + math.copysign(max(1.0, abs(u)) * 2.0 ** k, end)
    return end + (u - end) * 0.5 ** (k + 1)


def invert_implicit(rel, tau: float, *, guess: float | None = None, tol: float = 1e-10) -> float:
    """Solve ``rel.tau0 + rel.tau_of(u) = tau`` for u inside ``rel.bracket``.

    Bracketing by probing toward the end of the bracket the target lies in,
    bisection to a loose tolerance, then safeguarded Newton with
    ``rel.dtau_du``.
    """
    lo_t, hi_t = rel.image()
    t = tau - rel.tau0
    if not lo_t < t < hi_t:
        raise OutOfRangeError(
            f"tau = {tau} outside the image ({rel.tau0 + lo_t}, {rel.tau0 + hi_t})")
    rel.check_monotonic()
    lo_u, hi_u = rel.bracket
    increasing = rel.dtau_du(rel.seed) > 0

    def f(u):
        return rel.tau_of(u) - t

    u0 = rel.seed if guess is None or not lo_u < guess < hi_u else guess
    f0 = f(u0)
    if f0 == 0.0:
        return u0
    go_up = (f0 < 0) == increasing
    end = hi_u if go_up else lo_u
    a, fa = u0, f0
    for k in range(4000):
        b = _toward(u0, end, k)
        if not lo_u < b < hi_u or b == a:
            raise OutOfRangeError(f"could not bracket tau = {tau}")
        fb = f(b)
        if fb == 0.0:
            return b
        if (fa < 0) != (fb < 0):
            break
        a, fa = b, fb
    else:
        raise OutOfRangeError(f"could not bracket tau = {tau}")

    lo, hi, flo = (a, b, fa) if a < b else (b, a, fb)
    for _ in range(200):
        if hi - lo <= 1e-6 * (abs(lo) + abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid

    u = 0.5 * (lo + hi)
    for _ in range(60):
        fu = f(u)
        if (fu < 0) == (flo < 0):
            lo, flo = u, fu
        else:
            hi = u
        nxt = u - fu / rel.dtau_du(u)
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - u) <= 4 * np.finfo(float).eps * abs(u) or fu == 0.0:
            u = nxt
            break
        u = nxt
    if abs(f(u)) > max(tol, 64 * np.finfo(float).eps * max(1.0, abs(t))):
        raise OutOfRangeError(f"inversion at tau = {tau} did not converge (|dtau| = {abs(f(u)):.3g})")
    return u


def sample_monotonic(derivative, bracket: tuple[float, float], n: int = 64) -> bool:
    """True if ``derivative`` keeps one strict sign on ``n`` interior sample points."""
    lo, hi = bracket
    if math.isinf(lo) and math.isinf(hi):
        pts = np.sinh(np.linspace(-20, 20, n))
    elif math.isinf(hi):
        pts = lo + np.exp(np.linspace(-20, 20, n))
    elif math.isinf(lo):
        pts = hi - np.exp(np.linspace(-20, 20, n))
    else:
        pts = lo + (hi - lo) * (0.5 + 0.5 * np.tanh(np.linspace(-8, 8, n)))
    signs = set()
    for p in pts:
        if not lo < p < hi:
            continue
        d = derivative(float(p))
        if not math.isfinite(d) or d == 0:
            return False
        signs.add(d > 0)
    return len(signs) == 1


def track_closed_form(sol, tau_span: tuple[float, float], h: float = 1e-3,
                      tol: float = 1e-6) -> tuple[float, str]:
    """Max |u_rk4 - u| with RK4 seeded exactly from ``sol`` at one end of the span.

    Forward integration is tried first; if it blows up or misses ``tol``,
    the time-reversed equation  u'' - g u' + F = 0  is integrated from the
    right end instead (particular solutions are often unstable forward).
    """
    a, b = tau_span
    g, F = sol.target.g, sol.target.F
    best = (math.inf, "forward")
    for direction in ("forward", "backward"):
        try:
            if direction == "forward":
                u0, v0, _ = sol.state(a)
                traj = integrate_rk4(g, F, u0, v0, (a, b), h)
                exact = [sol.u(t) for t in traj.taus]
            else:
                u0, v0, _ = sol.state(b)
                traj = integrate_rk4(-g, F, u0, -v0, (-b, -a), h)
                exact = [sol.u(-t) for t in traj.taus]
        except (BlowUpError, DomainError, OverflowError):
            continue
        dev = max_deviation(traj, exact)
        if dev < best[0]:
            best = (dev, direction)
        if dev <= tol:
            break
    return best


def max_deviation(traj: Trajectory, exact: Sequence[float] | np.ndarray) -> float:
    return float(np.max(np.abs(traj.us - np.asarray(exact, float))))
