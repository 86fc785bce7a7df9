"""Operator factorization of  u'' + g(u) u' + F(u) = 0.

Writing the equation as ``[D - phi2(u)][D - phi1(u)] u = 0`` and expanding
gives the matching conditions

    g = -(phi1 + phi2 + u * dphi1/du)
    F = phi1 * phi2 * u

Any solution of the inner first-order equation ``u' = phi1(u) u`` then
solves the full second-order equation.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParam
from .genpoly import U, GeneralizedPolynomial


@dataclass(frozen=True)
class FactorPair:
    """Ordered factor pair; ``phi1`` is the inner (right-hand) factor."""

    phi1: GeneralizedPolynomial
    phi2: GeneralizedPolynomial

    def __post_init__(self):
        if self.phi1.is_zero() or self.phi2.is_zero():
            raise InvalidParam("factor pair members must be nonzero polynomials")


@dataclass(frozen=True)
class LienardForm:
    """Damping ``g`` and restoring force ``F`` of  u'' + g(u) u' + F(u) = 0."""

    g: GeneralizedPolynomial
    F: GeneralizedPolynomial

    def __post_init__(self):
        if abs(self.F.coefficient(0.0)) > 0.0:
            raise InvalidParam(f"F must vanish at u = 0, got F = {self.F}")

    def residual(self, u: float, udot: float, uddot: float) -> float:
        return uddot + self.g(u) * udot + self.F(u)


def compose(pair: FactorPair) -> LienardForm:
    # u * phi1' is taken as (phi1*u)' - phi1 so fractional exponents below one
    # never produce negative powers of u.
    inner = pair.phi1 * U
    g = -(pair.phi2 + inner.derivative())
    F = inner * pair.phi2
    return LienardForm(g=g, F=F)


def verify_factorization(target: LienardForm, pair: FactorPair, tol: float = 1e-12) -> bool:
    form = compose(pair)
    return form.g.approx_equal(target.g, tol) and form.F.approx_equal(target.F, tol)


def first_order_rhs(pair: FactorPair) -> GeneralizedPolynomial:
    """Right-hand side ``phi1(u) * u`` of the compatible equation u' = phi1(u) u."""
    return pair.phi1 * U


def swap(pair: FactorPair) -> FactorPair:
    return FactorPair(phi1=pair.phi2, phi2=pair.phi1)
