"""Sparse polynomials in one variable ``u`` with real coefficients and real exponents.

Terms are kept canonical: sorted by exponent, exponents closer than
``EXPONENT_TOL`` merged, and coefficients smaller than the drop tolerance
removed.  Instances are immutable.

>>> p = GeneralizedPolynomial.parse("1 - u^0.5")
>>> p(4.0)
-1.0
>>> str(p * GeneralizedPolynomial.monomial(2.0, 1.5))
'2*u^1.5 - 2*u^2'
"""
from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, Union

from .errors import DomainError, InvalidParam

EXPONENT_TOL = 1e-12
DROP_TOL = 1e-14

Number = Union[int, float]
TermsLike = Union[Iterable[tuple[float, float]], Mapping[float, float]]


def _is_integer(p: float) -> bool:
    return abs(p - round(p)) <= EXPONENT_TOL


class GeneralizedPolynomial:
    """Sum of ``c * u**p`` terms, ``p`` real.

    ``terms`` is an iterable of ``(coefficient, exponent)`` pairs or a mapping
    ``{exponent: coefficient}``.  Exponents must be nonnegative; the only
    operation that can leave that range is :meth:`derivative` applied to a
    fractional power below one.
    """

    __slots__ = ("_terms", "_compiled", "_has_fractional", "drop_tol")

    def __init__(self, terms: TermsLike = (), *, drop_tol: float = DROP_TOL,
                 _allow_negative: bool = False):
        if isinstance(terms, Mapping):
            pairs = [(float(c), float(p)) for p, c in terms.items()]
        else:
            pairs = [(float(c), float(p)) for c, p in terms]
        for c, p in pairs:
            if not (math.isfinite(c) and math.isfinite(p)):
                raise InvalidParam(f"non-finite term {c}*u^{p}")
            if p < 0 and not _allow_negative:
                raise InvalidParam(f"negative exponent {p} not allowed")
        self.drop_tol = drop_tol
        self._terms = self._canonicalize(pairs, drop_tol)
        self._compiled = tuple(
            (c, int(round(p)) if _is_integer(p) else p) for c, p in self._terms
        )
        self._has_fractional = any(isinstance(p, float) for _, p in self._compiled)

    @staticmethod
    def _canonicalize(pairs, drop_tol):
        pairs = sorted(pairs, key=lambda t: t[1])
        merged: list[list[float]] = []
        for c, p in pairs:
            if merged and abs(p - merged[-1][1]) <= EXPONENT_TOL:
                merged[-1][0] += c
            else:
                merged.append([c, p])
        return tuple((c, p) for c, p in merged if abs(c) >= drop_tol)

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: float) -> GeneralizedPolynomial:
        return cls([(c, 0.0)])

    @classmethod
    def monomial(cls, c: float, p: float) -> GeneralizedPolynomial:
        return cls([(c, p)])

    @classmethod
    def zero(cls) -> GeneralizedPolynomial:
        return cls()

    @classmethod
    def parse(cls, text: str) -> GeneralizedPolynomial:
        """Parse the ``c1*u^p1 + c2*u^p2`` grammar produced by ``str()``.

        Accepts ``^`` or ``**`` for powers, bare ``u`` and bare constants.
        """
        pos = 0
        terms = []
        text = text.strip()
        if not text:
            raise InvalidParam("empty polynomial text")
        first = True
        while pos < len(text):
            m = _TERM_RE.match(text, pos)
            if m is None or m.end() == pos or (not first and m.group("sign") is None):
                raise InvalidParam(f"cannot parse polynomial at {text[pos:]!r}")
            sign = -1.0 if m.group("sign") == "-" else 1.0
            if m.group("coef") is not None:
                c = float(m.group("coef"))
                if m.group("var1") is None:
                    p = 0.0
                else:
                    p = float(m.group("exp1")) if m.group("exp1") else 1.0
            else:
                c = 1.0
                p = float(m.group("exp2")) if m.group("exp2") else 1.0
            terms.append((sign * c, p))
            pos = m.end()
            first = False
        return cls(terms)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[float, float], ...]:
        return self._terms

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(p for _, p in self._terms)

    @property
    def degree(self) -> float:
        """Largest exponent; ``-inf`` for the zero polynomial."""
        return self._terms[-1][1] if self._terms else -math.inf

    def coefficient(self, p: float) -> float:
        for c, q in self._terms:
            if abs(q - p) <= EXPONENT_TOL:
                return c
        return 0.0

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, GeneralizedPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, float)):
            return self._terms == GeneralizedPolynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(self._terms)

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, u: float) -> float:
        if u < 0 and self._has_fractional:
            raise DomainError(f"u = {u} < 0 with a non-integer exponent in {self}")
        total = 0.0
        for c, p in self._compiled:
            if p == 0:
                total += c
            elif u == 0 and p < 0:
                raise DomainError(f"negative power of u at u = 0 in {self}")
            else:
                total += c * u ** p
        return total

    __call__ = evaluate

    # -- algebra ------------------------------------------------------------

    def _coerce(self, other) -> GeneralizedPolynomial:
        if isinstance(other, GeneralizedPolynomial):
            return other
        if isinstance(other, (int, float)):
            return GeneralizedPolynomial.constant(other)
        return NotImplemented

    def _new(self, pairs, other=None) -> GeneralizedPolynomial:
        tol = self.drop_tol if other is None else min(self.drop_tol, other.drop_tol)
        return GeneralizedPolynomial(pairs, drop_tol=tol, _allow_negative=True)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new(self._terms + other._terms, other)

    __radd__ = __add__

    def __neg__(self):
        return self._new([(-c, p) for c, p in self._terms])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self._new([(c * other, p) for c, p in self._terms])
        if not isinstance(other, GeneralizedPolynomial):
            return NotImplemented
        return self._new(
            [(c1 * c2, p1 + p2) for c1, p1 in self._terms for c2, p2 in other._terms],
            other,
        )

    __rmul__ = __mul__

    def scale(self, c: float) -> GeneralizedPolynomial:
        return self * float(c)

    def derivative(self) -> GeneralizedPolynomial:
        """d/du, termwise ``(c, p) -> (c*p, p-1)``; constant terms vanish."""
        return self._new([(c * p, p - 1.0) for c, p in self._terms if p != 0.0])

    def approx_equal(self, other: GeneralizedPolynomial, tol: float = 1e-12) -> bool:
        """Coefficientwise comparison after canonicalization.

        A term present on one side only is compared against zero, so a
        leftover of size below ``tol`` does not count as a structural mismatch.
        """
        a, b = list(self._terms), list(other._terms)
        i = j = 0
        while i < len(a) or j < len(b):
            if j >= len(b) or (i < len(a) and a[i][1] < b[j][1] - EXPONENT_TOL):
                diff = abs(a[i][0])
                i += 1
            elif i >= len(a) or b[j][1] < a[i][1] - EXPONENT_TOL:
                diff = abs(b[j][0])
                j += 1
            else:
                diff = abs(a[i][0] - b[j][0])
                i += 1
                j += 1
            if diff > tol:
                return False
        return True

    # -- text ---------------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for k, (c, p) in enumerate(self._terms):
            mag = f"{abs(c):.12g}"
            if p == 0:
                body = mag
            elif p == 1:
                body = f"{mag}*u"
            else:
                body = f"{mag}*u^{p:.12g}"
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"GeneralizedPolynomial({list(self._terms)!r})"


_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_POW = r"\s*(?:\^|\*\*)\s*"
_TERM_RE = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?:"
    rf"(?P<coef>{_NUM})(?:\s*\*\s*(?P<var1>u)(?:{_POW}(?P<exp1>{_NUM}))?)?"
    rf"|u(?:{_POW}(?P<exp2>{_NUM}))?"
    rf")\s*"
)

U = GeneralizedPolynomial.monomial(1.0, 1.0)


def evaluate(p: GeneralizedPolynomial, u: float) -> float:
    return p.evaluate(u)


def add(p: GeneralizedPolynomial, q: GeneralizedPolynomial) -> GeneralizedPolynomial:
    return p + q


def multiply(p: GeneralizedPolynomial, q: GeneralizedPolynomial) -> GeneralizedPolynomial:
    return p * q


def scale(p: GeneralizedPolynomial, c: float) -> GeneralizedPolynomial:
    return p.scale(c)


def derivative(p: GeneralizedPolynomial) -> GeneralizedPolynomial:
    return p.derivative()


def approx_equal(p: GeneralizedPolynomial, q: GeneralizedPolynomial, tol: float = 1e-12) -> bool:
    return p.approx_equal(q, tol)
