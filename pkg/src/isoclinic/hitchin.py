"""Invariant-theoretic layer: section coordinates, the classical local
Hitchin map, its image lattice, fibers, and the character-to-oper recipe.

Section coordinates c_1..c_n are the polynomial coordinates on g
characterized by c(p_{-1} + sum c_i p_i) = (c_1, ..., c_n); they are
homogeneous of degree d_i and are computed from characteristic-polynomial
invariants of the stored matrix realization by triangular inversion.
The local Hitchin map sends a connection coefficient A to the tuple of
invariant series h_i = c_i(A) (dt)^(d_i), rewritten in the unramified
variable t when A is given against du/u.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

from . import ktype, liealg, linalg
from .connection import GSeries
from .errors import (
    DomainError,
    NotRegularLeading,
    NotRegularSemisimple,
    RankTooLarge,
    SurjectivityWitnessFailed,
)
from .linalg import ZERO
from .series import INF, PuiseuxSeries


# ---------------------------------------------------------------------------
# section coordinates


def _weighted_monomials(degrees, target):
    """Exponent tuples a with sum a_j d_j = target."""
    if not degrees:
        return [()] if target == 0 else []
    head, rest = degrees[0], degrees[1:]
    out = []
    for a0 in range(target // head + 1):
        for tail in _weighted_monomials(rest, target - a0 * head):
            out.append((a0,) + tail)
    return out


def _rep_matrix(algebra, x):
    mats = algebra.rep_matrices
    n = len(mats[0])
    out = [[ZERO] * n for _ in range(n)]
    for k, c in enumerate(x):
        if c:
            mk = mats[k]
            for r in range(n):
                row = mk[r]
                for s in range(n):
                    if row[s]:
                        out[r][s] = out[r][s] + c * row[s]
    return out


def _raw_invariants_scalar(algebra, x):
    """Char-poly coefficients of the matrix realization at degrees d_i."""
    mat = _rep_matrix(algebra, list(x))
    chi = linalg.char_poly(mat)
    n = len(mat)
    return [chi[n - d] for d in algebra.degrees]


@lru_cache(maxsize=None)
def _invariant_tables(cartan_type):
    """Per-degree interpolation of the raw invariants on the section.

    Restricted to the section, the degree-d_i raw invariant is a
    quasi-homogeneous polynomial sum_a kappa_a prod_j c_j^(a_j) over
    monomials with sum a_j d_j = d_i; the tables hold the kappa_a,
    solved exactly from integer sample points, with kappa at the pure
    monomial e_i certified nonzero (triangular invertibility).
    """
    algebra = liealg.build_algebra(cartan_type)
    degrees = algebra.degrees
    rank = algebra.rank
    assert len(set(degrees)) == rank, "distinct invariant degrees required"
    points = sorted(
        itertools.product(range(-4, 5), repeat=rank),
        key=lambda p: (max(abs(q) for q in p), p),
    )
    raw_cache = {}

    def raw_at(pt):
        if pt not in raw_cache:
            x = list(algebra.p_minus)
            for j, c in enumerate(pt):
                if c:
                    x = linalg.vec_add(
                        x, linalg.vec_scale(list(algebra.kostant_basis[j]), Fraction(c))
                    )
            raw_cache[pt] = _raw_invariants_scalar(algebra, x)
        return raw_cache[pt]

    tables = []
    for idx, d in enumerate(degrees):
        monos = _weighted_monomials(degrees, d)
        rows, rhs = [], []
        for pt in points:
            row = [
                Fraction(prod(pt[j] ** a[j] for j in range(rank)))
                for a in monos
            ]
            if linalg.rank(rows + [row]) == len(rows) + 1:
                rows.append(row)
                rhs.append(raw_at(pt)[idx])
                if len(rows) == len(monos):
                    break
        assert len(rows) == len(monos), "interpolation grid too small"
        kappas = linalg.solve(rows, rhs)
        assert kappas is not None
        unit = tuple(1 if j == idx else 0 for j in range(rank))
        table = {a: k for a, k in zip(monos, kappas) if k}
        assert table.get(unit), "section coordinate not invertible at this degree"
        tables.append((table, unit))
    return tuple(tables)


def _section_solve(algebra, raws):
    """Triangular inversion: raw invariant values -> section coordinates.

    Works uniformly for rational, cyclotomic, or series values.
    """
    tables = _invariant_tables(algebra.cartan_type)
    coords = []
    for (table, unit), y in zip(tables, raws):
        total = y
        for a, kappa in table.items():
            if a == unit:
                continue
            term = kappa
            for j, e in enumerate(a):
                for _ in range(e):
                    term = term * coords[j]
            total = total - term
        coords.append(total * (Fraction(1) / table[unit]))
    return coords


def invariant_coordinates(algebra, x):
    """Section coordinates of a Lie algebra element."""
    return tuple(_section_solve(algebra, _raw_invariants_scalar(algebra, x)))


def invariant_series(omega: GSeries):
    """Section-coordinate series c_i(A(u)) of a g-valued series."""
    algebra = omega.algebra
    mats = algebra.rep_matrices
    n = len(mats[0])
    ent = [[{} for _ in range(n)] for _ in range(n)]
    for k, vec in omega.terms.items():
        for b, c in enumerate(vec):
            if c:
                mb = mats[b]
                for r in range(n):
                    row = mb[r]
                    for s in range(n):
                        if row[s]:
                            ent[r][s][k] = ent[r][s].get(k, ZERO) + c * row[s]
    mat = [
        [PuiseuxSeries(omega.ramification, ent[r][s], omega.precision) for s in range(n)]
        for r in range(n)
    ]
    chi = linalg.char_poly(mat)
    raws = [chi[n - d] for d in algebra.degrees]
    return _section_solve(algebra, raws)


# ---------------------------------------------------------------------------
# the classical local Hitchin map


@dataclass
class HitchinPoint:
    """Tuple of invariant t-series: component i is the coefficient of
    (dt)^(d_i)."""

    algebra: object
    components: dict  # i (1-based) -> PuiseuxSeries in t (ramification 1)

    def coefficient(self, i, j):
        """Scalar of t^(-j-1) (dt)^(d_i) in component i."""
        return self.components[i].coefficient(-j - 1)

    def __eq__(self, other):
        if not isinstance(other, HitchinPoint):
            return NotImplemented
        return (
            self.algebra.cartan_type == other.algebra.cartan_type
            and self.components == other.components
        )


def local_hitchin(omega: GSeries, form: str = "du/u") -> HitchinPoint:
    """Hitchin invariants of the connection coefficient A.

    form="dt": A(t)dt on the unramified disk; h_i = c_i(A) (dt)^(d_i).
    form="du/u": A(u)du/u with u = t^(1/m); then h_i = c_i(A) (mt)^(-d_i)
    (dt)^(d_i), and the invariant series must only involve powers u^(km)
    (automatic when A respects the torus grading).
    """
    algebra = omega.algebra
    cs = invariant_series(omega)
    comps = {}
    if form == "dt":
        if omega.ramification != 1:
            raise DomainError("dt-form input must be unramified")
        for i, c in enumerate(cs, 1):
            comps[i] = c
    elif form == "du/u":
        m = omega.ramification
        for i, c in enumerate(cs, 1):
            d = algebra.degrees[i - 1]
            if any(k % m for k in c.terms):
                raise DomainError(
                    f"invariant series of degree {d} has exponents not divisible by {m}"
                )
            scale = Fraction(1, m**d)
            terms = {k // m - d: coeff * scale for k, coeff in c.terms.items()}
            if c.precision == INF:
                prec = INF
            else:
                prec = -((-(c.precision - m * d)) // m)
            comps[i] = PuiseuxSeries(1, terms, prec)
    else:
        raise DomainError(f"unknown connection form {form!r}")
    return HitchinPoint(algebra, comps)


def hitchin_of_character(char: "ktype.ToralCharacter") -> HitchinPoint:
    return local_hitchin(ktype.character_series(char))


def hitchin_image_lattice(algebra, N, m) -> dict:
    """Pole bounds of the Hitchin image at slope N/m: component i lies in
    t^(-d_i - floor(d_i N/m)) O (dt)^(d_i)."""
    return {
        i: -d - (d * N) // m for i, d in enumerate(algebra.degrees, 1)
    }


# ---------------------------------------------------------------------------
# image verification


def _poly_linear_coefficient(values):
    """Coefficient of eps^1 of the polynomial with values[k] = p(k)."""
    n = len(values)
    rows = [[Fraction(k) ** e for e in range(n)] for k in range(n)]
    sol = linalg.solve(rows, list(values))
    assert sol is not None
    return sol[1]


def verify_hitchin_image(lattices: "ktype.KTypeLattices", samples=20, seed=0) -> dict:
    """Containment and surjectivity of the Hitchin map on j^{+,⊥}.

    Containment: seeded random elements map into the image lattice.
    Surjectivity: the derivative at the base point Y u^(-N) hits every
    lattice coordinate down to t^(-1) (full Jacobian rank), certifying
    that the polar truncation of the lattice is dominated.
    """
    import random

    datum = lattices.datum
    algebra, m, N = datum.algebra, datum.m, datum.N
    lat = hitchin_image_lattice(algebra, N, m)
    rng = random.Random(seed)
    containment = True
    for _ in range(samples):
        terms = {}
        for k in range(-N, lattices.cap + 1):
            vec = algebra.zero()
            for b in lattices.jplus_perp_piece(k):
                c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                if c:
                    vec = algebra.add(vec, algebra.scale(b, c))
            if not algebra.is_zero_vec(vec):
                terms[k] = vec
        hp = local_hitchin(GSeries(algebra, m, terms))
        for i, s in hp.components.items():
            if s.terms and min(s.terms) < lat[i]:
                containment = False

    # Jacobian of the truncated map at the base point
    omega0 = GSeries(algebra, m, {-N: datum.Y})
    targets = []
    ks = set()
    for i, d in enumerate(algebra.degrees, 1):
        for a in range(lat[i], 0):
            targets.append((i, a))
            # frontier order: the cross term of one z u^k against
            # (d_i - 1) copies of Y u^(-N) lands exactly at t^a
            ks.add(m * (a + d) + (d - 1) * N)
    directions = []
    for k in sorted(ks):
        for z in lattices.jplus_perp_piece(k):
            directions.append((k, z))
    dmax = max(algebra.degrees)
    cols = []
    for k, z in directions:
        evals = []
        for eps in range(dmax + 1):
            pert = omega0.add_term(k, algebra.scale(z, Fraction(eps)))
            evals.append(local_hitchin(pert))
        col = []
        for i, a in targets:
            vals = [hp.components[i].terms.get(a, ZERO) for hp in evals]
            col.append(_poly_linear_coefficient(vals))
        cols.append(col)
    jac = [[cols[c][r] for c in range(len(cols))] for r in range(len(targets))]
    jrank = linalg.rank(jac) if targets else 0
    if jrank != len(targets):
        raise SurjectivityWitnessFailed(
            f"Jacobian rank {jrank} < {len(targets)} lattice coordinates"
        )
    return {
        "lattice": lat,
        "containment": containment,
        "targets": len(targets),
        "jacobian_rank": jrank,
        "surjective": True,
    }


# ---------------------------------------------------------------------------
# fibers: the stabilizer scalars from the torus


def _diagonalize_integer(rows, n):
    """Integer diagonalization M = U A V with unimodular U, V; only V and
    the diagonal are returned (row operations need not be tracked)."""
    M = [list(r) for r in rows] or [[0] * n]
    r = len(M)
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_swap(i, j):
        for row in M:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def col_add(i, j, c):
        for row in M:
            row[i] += c * row[j]
        for row in V:
            row[i] += c * row[j]

    t = 0
    while t < min(r, n):
        pivot = None
        for i in range(t, r):
            for j in range(t, n):
                if M[i][j]:
                    if pivot is None or abs(M[i][j]) < abs(M[pivot[0]][pivot[1]]):
                        pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        M[t], M[i] = M[i], M[t]
        if j != t:
            col_swap(t, j)
        dirty = False
        for i in range(t + 1, r):
            if M[i][t]:
                q = M[i][t] // M[t][t]
                for j in range(n):
                    M[i][j] -= q * M[t][j]
                if M[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if M[t][j]:
                q = M[t][j] // M[t][t]
                col_add(j, t, -q)
                if M[t][j]:
                    dirty = True
        if dirty:
            continue
        t += 1
    diag = [abs(M[i][i]) for i in range(t)]
    return diag, V, t


def torus_stabilizer_scalars(datum: "ktype.ToralDatum"):
    """Scalars by which the torus stabilizer of the line Q·Y acts on the
    graded centralizer pieces.

    Elements s of the standard maximal torus with Ad_s(Y) proportional
    to Y normalize t_Y and act on each one-dimensional graded piece
    t_{Y,r} by a root of unity mu_r; returns the distinct tuples
    {r: mu_r}.  Each graded piece must be at most one-dimensional.
    """
    from .scalars import CycField

    algebra, m = datum.algebra, datum.m
    rank = algebra.rank
    Y = datum.Y
    assert all(not c for c in Y[:rank]), "graded Y has no Cartan component"
    supp = [
        algebra.roots[i - rank].coords for i in range(rank, algebra.dim) if Y[i]
    ]
    rows = [[a[j] - b[j] for j in range(rank)] for a, b in zip(supp, supp[1:])]
    diag, V, t = _diagonalize_integer(rows, rank)
    torsion = [(l, diag[l]) for l in range(t) if diag[l] != 1]
    assert all(sz for _, sz in torsion)

    gens = {}
    roots_used = set(tuple(c) for c in supp)
    for r in range(m):
        tp = datum.t_pieces[r]
        if len(tp) > 1:
            raise RankTooLarge(
                f"graded centralizer piece at residue {r} has dimension {len(tp)}"
            )
        if tp:
            gens[r] = tp[0]
            for i in range(rank, algebra.dim):
                if tp[0][i]:
                    roots_used.add(tuple(algebra.roots[i - rank].coords))
    for l in range(t, rank):
        v = [V[j][l] for j in range(rank)]
        for coords in roots_used:
            assert not sum(c * w for c, w in zip(coords, v)), (
                "continuous stabilizer direction acts nontrivially"
            )

    order = 1
    for _, sz in torsion:
        order = order * sz // gcd(order, sz)
    field = CycField(order)
    results = []
    seen = set()
    for combo in itertools.product(*(range(sz) for _, sz in torsion)):
        e = [0] * rank
        for (l, sz), a in zip(torsion, combo):
            step = order // sz
            for j in range(rank):
                e[j] += step * a * V[j][l]
        values = [field.monomial(e[j] % order) for j in range(rank)]
        theta = liealg.torus_automorphism(algebra, values)
        mat = [list(row) for row in theta]
        mus = {}
        for r, z in gens.items():
            w = linalg.mat_vec(mat, list(z))
            idx = next(i for i, c in enumerate(z) if c)
            lam = w[idx] / z[idx]
            assert not any(w[i] - lam * z[i] for i in range(algebra.dim)), (
                "stabilizer element does not preserve a graded centralizer line"
            )
            mus[r] = lam
        key = tuple(sorted(mus.items()))
        if key not in seen:
            seen.add(key)
            results.append(mus)
    return results


def hitchin_on_bj(char: "ktype.ToralCharacter") -> dict:
    """Hitchin coordinates h_{i,j} of a character over the slots with
    -N <= l_{i,j} <= -1."""
    from . import oper as oper_mod

    datum = char.datum
    hp = hitchin_of_character(char)
    idx = oper_mod.ell_index(datum.algebra, datum.N, datum.m)
    return {
        (i, j): hp.components[i].terms.get(-j - 1, ZERO)
        for (i, j) in sorted(idx.a_tilde)
    }


def fiber_over_phi(char: "ktype.ToralCharacter"):
    """The stabilizer orbit of a character: all characters with the same
    Hitchin image, one per distinct scalar tuple."""
    datum = char.datum
    if not liealg.is_regular_semisimple(datum.algebra, char.leading):
        raise NotRegularLeading("character leading component is not regular semisimple")
    out = []
    seen = set()
    for mus in torus_stabilizer_scalars(datum):
        comps = {}
        for i, vec in char.components.items():
            lam = mus[i % datum.m]
            comps[i] = tuple(lam * c for c in vec)
        key = tuple(sorted((i, tuple(v)) for i, v in comps.items()))
        if key not in seen:
            seen.add(key)
            out.append(ktype.ToralCharacter(datum, comps))
    return out


def fiber_image_check(char: "ktype.ToralCharacter") -> bool:
    """Every member of the stabilizer orbit has the same Hitchin image."""
    base = hitchin_of_character(char)
    return all(hitchin_of_character(c) == base for c in fiber_over_phi(char))


def match_leading_terms(algebra, Y):
    """Transport a regular semisimple class across duality.

    The identification of invariant rings is fixed as the degreewise
    identity in section coordinates; returns the section representative
    on the dual side, certified regular semisimple.
    """
    Y = tuple(Y)
    if not liealg.is_regular_semisimple(algebra, Y):
        raise NotRegularSemisimple("class transport requires a regular semisimple input")
    dual = liealg.dual_algebra(algebra)
    coords = invariant_coordinates(algebra, Y)
    x = list(dual.p_minus)
    for j, c in enumerate(coords):
        if c:
            x = linalg.vec_add(x, linalg.vec_scale(list(dual.kostant_basis[j]), c))
    x = tuple(x)
    assert liealg.is_regular_semisimple(dual, x)
    return x


# ---------------------------------------------------------------------------
# character -> oper (the explicit parameter recipe)


def langlands_parameter(char: "ktype.ToralCharacter"):
    """Minimal oper form on the dual algebra attached to a character.

    The oper coefficients are read off the Hitchin invariants of the
    character: v_{i,j} = h_{i,j} over every slot of the inclusive index
    set at slope N/m.  Returns (oper, canonical form); the polar leading
    class of the reduction matches the leading term of the character
    (equal section coordinates), which is asserted.
    """
    from . import oper as oper_mod

    datum = char.datum
    algebra, m, N = datum.algebra, datum.m, datum.N
    dual = liealg.dual_algebra(algebra)
    assert dual.degrees == algebra.degrees
    hp = hitchin_of_character(char)
    idx = oper_mod.ell_index(dual, N, m)
    lead_slots = idx.a_tilde - idx.a_set
    leading, lower = {}, {}
    for (i, j) in sorted(idx.a_tilde):
        c = hp.components[i].terms.get(-j - 1, ZERO)
        if (i, j) in lead_slots:
            leading[(i, j)] = c
        elif c:
            lower[(i, j)] = c
    oper = oper_mod.minimal_oper_form(dual, N, m, leading, lower)
    cf = oper_mod.oper_to_canonical(oper)
    lead_lhs = invariant_coordinates(dual, cf.leading())
    lead_rhs = invariant_coordinates(dual, match_leading_terms(algebra, char.leading))
    assert all(
        not (a - b) for a, b in zip(lead_lhs, lead_rhs)
    ), "polar leading class does not match the transported character leading term"
    return oper, cf
