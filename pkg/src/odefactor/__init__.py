"""Particular solutions of u'' + g(u) u' + F(u) = 0 by operator factorization."""
from .errors import (BlowUpError, ComplexRootsError, DiscriminantError, DomainError, InvalidParam,
                     NonMonotonicError, OdeFactorError, OutOfRangeError)
from .factorization import FactorPair, LienardForm, compose, first_order_rhs, swap, verify_factorization
from .families import (FAMILIES, BurgersHuxley, ClosedFormSolution, ConvectiveFisher, DuffingVanDerPol,
                       GeneralizedLienard, ImplicitRelation, ModifiedEmden)
from .genpoly import GeneralizedPolynomial
from .numerics import GridSpec, ResidualReport, Trajectory, integrate_rk4, invert_implicit, residual_scan

__version__ = "0.1.0"
