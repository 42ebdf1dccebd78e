"""Airy-type connection family on P^1 minus a point.

The family d + (t^(-2)p_{-1} + v_n t^(-3)p_n + sum_i v_i t^(-2)p_i)dt is
polynomial in 1/t, restricts at the origin to an isoclinic connection of
slope (1+h)/h, and is holomorphic at infinity in the chart s = 1/t.
`globalize` extends any minimal-form oper by the exponent shift
-j-1 -> -j+2d_i-3 on each p_i coefficient, with p_{-1} placed at t^(-2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import liealg, linalg, oper as oper_mod
from .connection import FormalConnection, GSeries
from .errors import DomainError, LeadingNotRegularSemisimple, NotMinimalForm


@dataclass
class GlobalConnection:
    """d + A(t)dt with A a g-valued Laurent polynomial (finite support)."""

    algebra: object
    coeff: dict  # t-exponent -> g-vector

    def support(self):
        return sorted(self.coeff)

    def ds_exponents(self):
        """Exponents in the chart s = 1/t, where t^k dt = -s^(-k-2) ds."""
        return sorted(-k - 2 for k in self.coeff)


def airy_family(algebra, v_n, lower=None) -> GlobalConnection:
    """d + (t^(-2)p_{-1} + v_n t^(-3)p_n + sum_i v_i t^(-2)p_i)dt.

    `lower` maps the Kostant index i to the scalar v_{i,2d_i-1}; the
    element p_{-1} + v_n p_n must be regular semisimple.
    """
    lower = dict(lower or {})
    kb = algebra.kostant_basis
    n = algebra.rank
    lead = linalg.vec_add(
        list(algebra.p_minus), linalg.vec_scale(list(kb[n - 1]), Fraction(v_n))
    )
    if not liealg.is_regular_semisimple(algebra, tuple(lead)):
        raise LeadingNotRegularSemisimple("p_{-1} + v_n p_n is not regular semisimple")
    coeff = {-3: tuple(algebra.scale(kb[n - 1], v_n)), -2: tuple(algebra.p_minus)}
    if algebra.is_zero_vec(coeff[-3]):
        del coeff[-3]
    for i, c in lower.items():
        if not 1 <= i <= n:
            raise DomainError(f"Kostant index {i} out of range")
        if c:
            coeff[-2] = tuple(algebra.add(coeff[-2], algebra.scale(kb[i - 1], c)))
    return GlobalConnection(algebra, coeff)


def ks_airy(algebra) -> GlobalConnection:
    """The normalized instance v_n = 1, all lower coefficients zero."""
    return airy_family(algebra, Fraction(1), {})


def globalize(oper: oper_mod.OperForm, nu: Fraction) -> GlobalConnection:
    """Extend a minimal-form oper of slope nu to P^1 minus infinity."""
    algebra = oper.algebra
    N, m = nu.numerator, nu.denominator
    idx = oper_mod.ell_index(algebra, N, m)
    coeff = {-2: tuple(algebra.p_minus)}
    kb = algebra.kostant_basis
    for (i, j), c in oper.v:
        if (i, j) not in idx.a_tilde:
            raise NotMinimalForm(f"coefficient {(i, j)} is outside the slope-{nu} index set")
        d = algebra.degrees[i - 1]
        k = -j + 2 * d - 3
        vec = algebra.scale(kb[i - 1], c)
        coeff[k] = tuple(
            algebra.add(coeff.get(k, algebra.zero()), vec)
        )
    return GlobalConnection(algebra, {k: v for k, v in coeff.items() if not algebra.is_zero_vec(v)})


def restrict_to_zero(gc: GlobalConnection) -> FormalConnection:
    """The formal connection at the origin: A(t)dt = (t A(t)) dt/t."""
    terms = {k + 1: v for k, v in gc.coeff.items()}
    return FormalConnection(gc.algebra, GSeries(gc.algebra, 1, terms))


def infinity_check(gc: GlobalConnection, nu=None) -> dict:
    """Behavior in the chart s = 1/t.

    regular: all ds-exponents >= -1 (at worst a simple pole).
    trivial_monodromy: all ds-exponents >= 0, i.e. the connection is
    holomorphic at s = 0 — the certificate used for nu >= 1; families
    with nu < 1 may leave a genuine simple pole and are not certified.
    """
    exps = gc.ds_exponents()
    regular = all(e >= -1 for e in exps)
    trivial = all(e >= 0 for e in exps)
    report = {"regular": regular, "trivial_monodromy": trivial}
    if nu is not None:
        report["nu_at_least_one"] = Fraction(nu) >= 1
    return report


def airy_slope(algebra) -> Fraction:
    h = algebra.coxeter_number
    return Fraction(1 + h, h)


def airy_minimal_oper(algebra, v_n, lower=None) -> oper_mod.OperForm:
    """The minimal oper form whose globalization is the Airy family
    member: leading slot (n, 2h), lower slots (i, 2d_i - 1)."""
    h = algebra.coxeter_number
    lower = dict(lower or {})
    leading = {(algebra.rank, 2 * h): Fraction(v_n)}
    low = {(i, 2 * algebra.degrees[i - 1] - 1): c for i, c in lower.items() if c}
    return oper_mod.minimal_oper_form(algebra, h + 1, h, leading, low)
