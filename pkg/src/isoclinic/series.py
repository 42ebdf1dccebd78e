"""Truncated ramified Laurent (Puiseux) series with precision tracking.

A series lives in C((u)) with u = t^(1/m); exponents are integers in u.
`precision` is an exclusive upper bound: coefficients at exponents >= P
are unknown.  P = INF marks an exactly-known (Laurent polynomial) series.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionUnderflow
from .linalg import _nz

INF = float("inf")


class PuiseuxSeries:
    __slots__ = ("ramification", "terms", "precision")

    def __init__(self, ramification: int, terms: dict, precision=INF):
        self.ramification = ramification
        self.terms = {k: c for k, c in terms.items() if k < precision and _nz(c)}
        self.precision = precision

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, ramification: int = 1, precision=INF):
        return cls(ramification, {}, precision)

    @classmethod
    def monomial(cls, coeff, k: int, ramification: int = 1, precision=INF):
        return cls(ramification, {k: coeff}, precision)

    # -- queries --------------------------------------------------------
    def order(self):
        """Smallest exponent with nonzero coefficient, or +inf when none known."""
        return min(self.terms) if self.terms else INF

    def effective_order(self):
        # lower bound usable in precision bookkeeping: an empty series is
        # only known to vanish below its precision
        return min(self.terms) if self.terms else self.precision

    def coefficient(self, k: int):
        if k >= self.precision:
            raise PrecisionUnderflow(f"coefficient u^{k} beyond precision {self.precision}")
        return self.terms.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if self.ramification != other.ramification:
            a, b = match_ramification(self, other)
            return a == b
        if self.precision != other.precision:
            return False
        return self.support() == other.support() and all(
            self.terms[k] == other.terms[k] for k in self.terms
        )

    def __repr__(self):
        parts = [f"({c})u^{k}" for k, c in sorted(self.terms.items())] or ["0"]
        tail = "" if self.precision == INF else f" + O(u^{self.precision})"
        return f"<{' + '.join(parts)}{tail}; ram={self.ramification}>"

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            # scalar: a constant series, exactly known
            other = PuiseuxSeries(self.ramification, {0: other})
        a, b = match_ramification(self, other)
        prec = min(a.precision, b.precision)
        terms = dict(a.terms)
        for k, c in b.terms.items():
            terms[k] = terms.get(k, Fraction(0)) + c
        return PuiseuxSeries(a.ramification, terms, prec)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.ramification, {k: -c for k, c in self.terms.items()}, self.precision)

    def __sub__(self, other):
        return self + (-other if isinstance(other, PuiseuxSeries) else -1 * other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            a, b = match_ramification(self, other)
            prec = min(
                a.precision + b.effective_order(),
                b.precision + a.effective_order(),
            )
            terms = {}
            for k1, c1 in a.terms.items():
                for k2, c2 in b.terms.items():
                    k = k1 + k2
                    if k < prec:
                        terms[k] = terms.get(k, Fraction(0)) + c1 * c2
            return PuiseuxSeries(a.ramification, terms, prec)
        # scalar
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c):
        return PuiseuxSeries(
            self.ramification, {k: c * v for k, v in self.terms.items()}, self.precision
        )

    def shift(self, j: int):
        """Multiply by u^j."""
        return PuiseuxSeries(
            self.ramification, {k + j: c for k, c in self.terms.items()}, self.precision + j
        )

    def truncate(self, new_precision):
        prec = min(self.precision, new_precision)
        return PuiseuxSeries(self.ramification, self.terms, prec)

    def log_derivative(self):
        """u * d/du."""
        return PuiseuxSeries(
            self.ramification, {k: k * c for k, c in self.terms.items()}, self.precision
        )

    def residue(self):
        """u^0 coefficient: the residue of (this series) du/u."""
        return self.coefficient(0)

    # -- ramification ---------------------------------------------------
    def re_ramify(self, factor: int):
        """Pass from u to w = u^(1/factor): exponents scale by factor."""
        prec = self.precision if self.precision == INF else self.precision * factor
        return PuiseuxSeries(
            self.ramification * factor,
            {k * factor: c for k, c in self.terms.items()},
            prec,
        )

    def restrict(self, factor: int):
        """Inverse of re_ramify(factor); all exponents must be divisible."""
        assert self.ramification % factor == 0
        assert all(k % factor == 0 for k in self.terms)
        prec = self.precision
        if prec != INF:
            # round up to keep a safe (possibly pessimistic) bound
            prec = -((-prec) // factor)
        return PuiseuxSeries(
            self.ramification // factor,
            {k // factor: c for k, c in self.terms.items()},
            prec,
        )


def match_ramification(a: PuiseuxSeries, b: PuiseuxSeries):
    if a.ramification == b.ramification:
        return a, b
    from math import gcd

    m = a.ramification * b.ramification // gcd(a.ramification, b.ramification)
    return a.re_ramify(m // a.ramification), b.re_ramify(m // b.ramification)
