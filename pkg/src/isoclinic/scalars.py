"""Exact scalar arithmetic: rationals and cyclotomic numbers.

Rationals are plain `fractions.Fraction`.  Cyclotomic numbers are residues
mod the L-th cyclotomic polynomial with rational coefficients; arithmetic
is exact and canonical (always fully reduced), so equality is coefficient
equality.  A floating backend is available through `to_complex`, which
maps any supported scalar to a Python complex.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "CycField",
    "Cyc",
    "cyclotomic_polynomial",
    "euler_phi",
    "zeta",
    "to_complex",
    "as_fraction",
    "is_zero",
]


def euler_phi(n: int) -> int:
    result, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            p = 1
            while m % k == 0:
                m //= k
                p *= k
            result *= p - p // k
        k += 1
    if m > 1:
        result *= m - 1
    return result


def _int_poly_div(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, used only for cyclotomics
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        q, r = divmod(num[i + len(den) - 1], den[-1])
        assert r == 0
        out[i] = q
        for j, d in enumerate(den):
            num[i + j] -= q * d
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n == 1:
        return (-1, 1)
    poly = [0] * n + [1]
    poly[0] = -1  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _int_poly_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


class CycField:
    """The field Q(zeta_L), with precomputed reduction data."""

    _cache: dict[int, "CycField"] = {}

    def __new__(cls, order: int):
        if order in cls._cache:
            return cls._cache[order]
        self = super().__new__(cls)
        self.order = order
        poly = cyclotomic_polynomial(order)
        self.degree = len(poly) - 1
        self.modulus = tuple(Fraction(c) for c in poly)
        # x^k mod Phi_L for k = degree .. 2*degree-2
        tables = []
        cur = [Fraction(0)] * self.degree
        # cur represents x^(degree-1) shifted once each loop
        cur = [-Fraction(c) for c in poly[: self.degree]]  # x^degree
        tables.append(tuple(cur))
        for _ in range(self.degree - 2):
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            for i in range(self.degree):
                cur[i] -= top * poly[i]
            tables.append(tuple(cur))
        self.power_table = tables
        cls._cache[order] = self
        return self

    def __repr__(self):
        return f"CycField({self.order})"

    def zero(self) -> "Cyc":
        return Cyc(self, (Fraction(0),) * self.degree)

    def one(self) -> "Cyc":
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(1)
        return Cyc(self, tuple(c))

    def from_rational(self, q) -> "Cyc":
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(q)
        return Cyc(self, tuple(c))

    def monomial(self, k: int) -> "Cyc":
        """zeta_L^k as a field element."""
        k %= self.order
        if k < self.degree:
            c = [Fraction(0)] * self.degree
            c[k] = Fraction(1)
            return Cyc(self, tuple(c))
        c = [Fraction(0)] * (k + 1)
        c[k] = Fraction(1)
        return Cyc(self, self._reduce(c))

    def _reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        d = self.degree
        out = list(coeffs[:d]) + [Fraction(0)] * max(0, d - len(coeffs))
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c:
                if k - d < len(self.power_table):
                    row = self.power_table[k - d]
                    for i in range(d):
                        out[i] += c * row[i]
                else:
                    # rare: fold one power at a time
                    tmp = [Fraction(0)] * (k + 1)
                    tmp[k] = c
                    red = self._reduce_slow(tmp)
                    for i in range(d):
                        out[i] += red[i]
        return tuple(out)

    def _reduce_slow(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        cs = list(coeffs)
        d = self.degree
        for k in range(len(cs) - 1, d - 1, -1):
            c = cs[k]
            if c:
                cs[k] = Fraction(0)
                for i in range(d + 1):
                    cs[k - d + i] -= c * self.modulus[i]
        return tuple(cs[:d])


class Cyc:
    """An element of Q(zeta_L) in the power basis 1, zeta, ..., zeta^(phi(L)-1)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)
        assert len(self.coeffs) == field.degree

    # -- coercion -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.field is self.field:
                return other
            return _promote_pair(self, other)[1]
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return None

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        if other.field is not self.field:
            a, b = _promote_pair(self, other)
            return a.coeffs == b.coeffs
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field.order, self.coeffs))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.field is not self.field:
            a, b = _promote_pair(self, o)
            return a + b
        return Cyc(self.field, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyc(self.field, tuple(x * q for x in self.coeffs))
        if not isinstance(other, Cyc):
            return NotImplemented
        if other.field is not self.field:
            a, b = _promote_pair(self, other)
            return a * b
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyc(self.field, self.field._reduce(prod))

    __rmul__ = __mul__

    def inverse(self) -> "Cyc":
        if not self:
            raise ZeroDivisionError("cyclotomic division by zero")
        # extended Euclid in Q[x] against the cyclotomic modulus
        from .linalg import poly_xgcd

        g, s, _ = poly_xgcd(list(self.coeffs), list(self.field.modulus))
        assert len(g) == 1  # modulus irreducible
        inv = [c / g[0] for c in s]
        return Cyc(self.field, self.field._reduce(inv))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.field is not self.field:
            a, b = _promote_pair(self, o)
            return a * b.inverse()
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- queries --------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return self.coeffs[0]

    def promote(self, field: CycField) -> "Cyc":
        """Embed into Q(zeta_M) for self.field.order | M."""
        L, M = self.field.order, field.order
        if L == M:
            return self
        assert M % L == 0
        step = M // L
        acc = [Fraction(0)] * (step * (self.field.degree - 1) + 1 if self.field.degree > 1 else 1)
        for k, c in enumerate(self.coeffs):
            if c:
                acc[step * k] += c
        return Cyc(field, field._reduce(acc))

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.field.order)
        return sum(complex(c) * z**k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return f"Cyc({self.field.order}; {self.coeffs[0]})"
        return f"Cyc({self.field.order}; {list(map(str, self.coeffs))})"


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _promote_pair(a: Cyc, b: Cyc) -> tuple[Cyc, Cyc]:
    field = CycField(_lcm(a.field.order, b.field.order))
    return a.promote(field), b.promote(field)


def zeta(order: int, power: int = 1) -> Cyc:
    """Primitive root of unity zeta_order**power as an exact scalar."""
    return CycField(order).monomial(power)


def to_complex(x) -> complex:
    if isinstance(x, Cyc):
        return complex(x)
    return complex(x)


def as_fraction(x) -> Fraction:
    """Extract a rational value from any exact scalar, or raise ValueError."""
    if isinstance(x, Cyc):
        return x.rational_value()
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    raise ValueError(f"not an exact rational: {x!r}")


def is_zero(x) -> bool:
    if isinstance(x, complex):
        return abs(x) < 1e-12
    return not x
