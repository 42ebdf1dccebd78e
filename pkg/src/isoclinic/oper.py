"""Opers against the Kostant slice and their canonical forms.

An oper is stored through its finite coefficient table v[(i, j)], the
scalar of t^(-j-1) p_i in

    d + (p_{-1} + sum_i v_i(t) p_i) dt,    v_i(t) = sum_j v[i,j] t^(-j-1).

The index arithmetic l_{i,j} = (d_i-1)N + m(d_i-1-j) organizes the
coefficients by the order they contribute to after the cocharacter gauge;
the sets A_nu (strictly above the leading order) and tA_nu (including it)
parametrize minimal forms of slope nu = N/m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import connection, liealg, linalg
from .connection import FormalConnection, GSeries, cocharacter_power
from .errors import (
    DomainError,
    LeadingNotRegularSemisimple,
    SingularBlock,
    SlopeZero,
)


@dataclass(frozen=True)
class OperForm:
    algebra: object
    v: tuple  # sorted ((i, j), scalar) pairs, zero entries dropped

    @classmethod
    def from_dict(cls, algebra, coefficients):
        items = tuple(sorted(((int(i), int(j)), c) for (i, j), c in coefficients.items() if c))
        for (i, _), _c in items:
            if not 1 <= i <= algebra.rank:
                raise DomainError(f"oper coefficient index i={i} out of range")
        return cls(algebra, items)

    def coefficients(self) -> dict:
        return dict(self.v)

    def coefficient(self, i, j):
        return dict(self.v).get((i, j), Fraction(0))

    def is_zero(self):
        return not self.v


def oper_slope(oper: OperForm) -> Fraction:
    """sup{0, max_i (-ord v_i)/d_i - 1}; the all-zero oper has slope 0."""
    slope = Fraction(0)
    degrees = oper.algebra.degrees
    for (i, j), _c in oper.v:
        slope = max(slope, Fraction(j + 1, degrees[i - 1]) - 1)
    return slope


# ---------------------------------------------------------------------------
# index sets


def ell_of(algebra, N, m, i, j):
    d = algebra.degrees[i - 1]
    return (d - 1) * N + m * (d - 1 - j)


@dataclass(frozen=True)
class IndexSet:
    algebra: object
    N: int
    m: int
    ell: tuple  # sorted (((i, j), l) ...) for -N <= l <= -1
    a_set: frozenset  # A_nu: -N < l <= -1
    a_tilde: frozenset  # tA_nu: -N <= l <= -1

    def ell_map(self):
        return dict(self.ell)

    def positions_at(self, l):
        return sorted(ij for ij, ell in self.ell if ell == l)


def ell_index(algebra, N, m) -> IndexSet:
    if N <= 0 or m <= 0 or gcd(N, m) != 1:
        raise DomainError(f"(N, m) = ({N}, {m}) must be coprime positive integers")
    table = []
    for i in range(1, algebra.rank + 1):
        d = algebra.degrees[i - 1]
        # l decreases by m as j increases; solve the window -N <= l <= -1
        for j in range(0, d * (N + m) // m + 2):
            l = ell_of(algebra, N, m, i, j)
            if -N <= l <= -1:
                table.append(((i, j), l))
    table.sort()
    a_tilde = frozenset(ij for ij, _l in table)
    a_set = frozenset(ij for ij, l in table if l > -N)
    return IndexSet(algebra, N, m, tuple(table), a_set, a_tilde)


def dim_match_check(algebra, m, N) -> dict:
    """|A_{nu,l}| versus dim(centralizer(X) ∩ g_l) for every l in (-N, -1]."""
    if m not in liealg.regular_elliptic_numbers(algebra):
        raise DomainError(f"m={m} is not a regular elliptic number for {algebra.cartan_type}")
    idx = ell_index(algebra, N, m)
    X = liealg.graded_regular_semisimple(algebra, m, N)
    cent = liealg.centralizer(algebra, [X])
    grading = liealg.grading_by_principal_cocharacter(algebra, m)
    table = {}
    ok = True
    for l in range(-N + 1, 0):
        count = len(idx.positions_at(l))
        piece = grading.piece_basis(l)
        inter = linalg.intersect_spans(
            [list(v) for v in cent], [list(v) for v in piece]
        )
        dim = len(inter)
        table[l] = (count, dim)
        if count != dim:
            ok = False
    return {"table": table, "pass": ok, "X": X}


# ---------------------------------------------------------------------------
# oper -> canonical form


def oper_connection(oper: OperForm, ramification: int) -> FormalConnection:
    """The oper as a du/u-connection at the given ramification.

    A(t)dt = m u^m A(u^m) du/u, so p_{-1} lands at u^m and the
    v_{i,j} t^(-j-1) term at u^(-jm), each scaled by m.
    """
    algebra = oper.algebra
    m = ramification
    terms = {m: algebra.scale(algebra.p_minus, Fraction(m))}
    kb = algebra.kostant_basis
    for (i, j), c in oper.v:
        k = -j * m
        vec = algebra.scale(kb[i - 1], Fraction(m) * c)
        terms[k] = algebra.add(terms.get(k, algebra.zero()), vec)
    return FormalConnection(algebra, GSeries(algebra, m, terms))


def oper_to_canonical(oper: OperForm, precision=None):
    """Reduce an oper of positive slope to its canonical form.

    Ramifies at the slope denominator m, gauges by the rho-check
    cocharacter power N+m (leading term becomes the Kostant-section
    element at u^-N), truncates to the default working precision
    h*(N+m), and runs the staged reduction.
    """
    algebra = oper.algebra
    nu = oper_slope(oper)
    if nu == 0:
        raise SlopeZero("oper has slope 0; canonical reduction targets irregular opers")
    N, m = nu.numerator, nu.denominator
    conn = oper_connection(oper, m)
    conn = connection.apply_atom(conn, cocharacter_power(algebra.rho_check, N + m))
    prec = precision if precision is not None else algebra.coxeter_number * (N + m)
    conn = FormalConnection(algebra, conn.coeff.truncate(prec))
    cf, _word = connection.reduce_to_canonical(conn)
    return cf


# ---------------------------------------------------------------------------
# minimal forms


def minimal_oper_form(algebra, N, m, leading, lower=None) -> OperForm:
    """The minimal-form oper with the given leading (l = -N) and lower
    (A_nu) coefficients; the leading Kostant element must be regular
    semisimple."""
    idx = ell_index(algebra, N, m)
    leading = dict(leading)
    lower = dict(lower or {})
    lead_slots = idx.a_tilde - idx.a_set
    for key in leading:
        if key not in lead_slots:
            raise DomainError(f"coefficient {key} is not a leading (l=-N) slot")
    for key in lower:
        if key not in idx.a_set:
            raise DomainError(f"coefficient {key} is not an A_nu slot")
    X = list(algebra.p_minus)
    for (i, _j), c in leading.items():
        X = linalg.vec_add(X, linalg.vec_scale(list(algebra.kostant_basis[i - 1]), c))
    if not liealg.is_regular_semisimple(algebra, tuple(X)):
        raise LeadingNotRegularSemisimple(
            "p_{-1} + leading coefficients is not regular semisimple"
        )
    v = dict(leading)
    v.update(lower)
    return OperForm.from_dict(algebra, v)


def minimal_leading_element(oper: OperForm, idx: IndexSet):
    """p_{-1} + sum of the l = -N coefficients, the Kostant-section leading term."""
    algebra = oper.algebra
    lead_slots = idx.a_tilde - idx.a_set
    X = list(algebra.p_minus)
    for (i, j), c in oper.v:
        if (i, j) in lead_slots:
            X = linalg.vec_add(X, linalg.vec_scale(list(algebra.kostant_basis[i - 1]), c))
    return tuple(X)


def canonical_to_minimal_oper(cf, max_precision=None) -> OperForm:
    """Invert oper_to_canonical on isoclinic canonical forms.

    Solves the triangular block system by instrumented forward
    reduction: the leading block is read off through invariant
    coordinates, then each l-block (increasing l) is solved by exact
    unit-coefficient probes of the reduction map.
    """
    from . import hitchin

    algebra = cf.algebra
    if not connection.is_isoclinic(cf):
        raise DomainError("canonical form is not isoclinic")
    nu = cf.slope
    N, m = nu.numerator, nu.denominator
    if m not in liealg.regular_elliptic_numbers(algebra):
        raise DomainError(f"slope denominator m={m} is not regular elliptic")
    idx = ell_index(algebra, N, m)
    # leading block: D_1 lies in the class of m * X, X the section element
    # with coordinates v_i at the l = -N slots; quasi-homogeneity gives
    # c_i(D_1) = m^{d_i} v_i.
    coords = hitchin.invariant_coordinates(algebra, cf.leading())
    lead_slots = sorted(idx.a_tilde - idx.a_set)
    v = {}
    for i in range(1, algebra.rank + 1):
        d = algebra.degrees[i - 1]
        c = coords[i - 1]
        slots = [key for key in lead_slots if key[0] == i]
        if slots:
            v[slots[0]] = c / Fraction(m) ** d
        elif c:
            raise SingularBlock(
                f"leading class has a degree-{d} invariant but no l=-N slot"
            )

    def reduce_current():
        return oper_to_canonical(OperForm.from_dict(algebra, v), precision=max_precision)

    base = reduce_current()
    for l in range(-N + 1, 0):
        r = Fraction(-l, m)
        target = list(cf.coefficient_at_slope(r))
        positions = [key for key in idx.positions_at(l) if key in idx.a_set]
        current = list(base.coefficient_at_slope(r))
        if not positions:
            if any(x - y for x, y in zip(target, current)):
                raise SingularBlock(f"no free coefficients at l={l} but targets differ")
            continue
        cols = []
        for key in positions:
            probe = dict(v)
            probe[key] = probe.get(key, Fraction(0)) + 1
            pcf = oper_to_canonical(OperForm.from_dict(algebra, probe), precision=max_precision)
            cols.append(
                linalg.vec_sub(list(pcf.coefficient_at_slope(r)), current)
            )
        mat = [[cols[c][row] for c in range(len(cols))] for row in range(algebra.dim)]
        if linalg.rank(mat) != len(positions):
            raise SingularBlock(f"block matrix at l={l} is not injective")
        sol = linalg.solve(mat, linalg.vec_sub(target, current))
        if sol is None:
            raise SingularBlock(f"block system at l={l} is inconsistent")
        for c, key in zip(sol, positions):
            if c:
                v[key] = v.get(key, Fraction(0)) + c
        base = reduce_current()
        got = list(base.coefficient_at_slope(r))
        assert not any(x - y for x, y in zip(target, got)), "block solve is not exact"
    if not connection.irregular_part_equal(base, cf):
        raise SingularBlock("inversion did not reproduce the irregular part")
    return OperForm.from_dict(algebra, v)


def fiber_independence_check(oper1: OperForm, oper2: OperForm) -> bool:
    """True iff the two opers reduce to termwise-equal irregular parts.

    Opers differing only in coefficients with l_{i,j} >= 0 always pass.
    """
    cf1 = oper_to_canonical(oper1)
    cf2 = oper_to_canonical(oper2)
    return connection.irregular_part_equal(cf1, cf2)
