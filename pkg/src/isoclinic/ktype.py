"""Toral K-type combinatorics on the automorphic side.

Everything is graded by Theta = Ad of the rho-check torus point at a
primitive m-th root of unity; a regular semisimple Y in the graded piece
g_{-N} splits g = t_Y ⊕ tau into its centralizer torus and the root-space
complement.  The module builds the graded lattices j, j', bj, j^{+,⊥}
(stored as graded basis tables on the u-side) together with the
Lagrangian slice used when N is even, and evaluates the special and
relevance predicates for characters at the Airy depth (1+h)/h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import liealg, linalg
from .errors import DomainError, NonSplitSpectrum, NoRegularElement, WrongDepth
from .linalg import ZERO, ONE
from .scalars import CycField


# ---------------------------------------------------------------------------
# toral datum


@dataclass
class ToralDatum:
    algebra: object
    m: int
    N: int
    Y: tuple
    grading: object
    t_y: tuple  # basis of the centralizer torus of Y
    t_pieces: dict  # residue -> basis list of t_{Y,residue}
    tau_pieces: dict  # residue -> basis list of tau_residue (rational bases)
    orbits: object = None  # lazily built _OrbitBases

    def t_piece(self, i):
        return self.t_pieces.get(i % self.m, [])

    def tau_piece(self, i):
        return self.tau_pieces.get(i % self.m, [])

    def g_piece(self, i):
        return self.grading.piece_basis(i)

    @property
    def nu(self):
        return Fraction(self.N, self.m)


def build_toral_datum(algebra, m, N, Y=None) -> ToralDatum:
    if m not in liealg.regular_elliptic_numbers(algebra):
        raise DomainError(f"m={m} is not regular elliptic for {algebra.cartan_type}")
    from math import gcd

    if gcd(N, m) != 1 or N <= 0:
        raise DomainError(f"(N, m) = ({N}, {m}) must be coprime with N >= 1")
    grading = liealg.grading_by_principal_cocharacter(algebra, m)
    if Y is None:
        Y = liealg.graded_regular_semisimple(algebra, m, N)
    else:
        Y = tuple(Y)
        piece = grading.piece_basis(-N)
        if not linalg.in_span([list(v) for v in piece], list(Y)):
            raise DomainError("Y does not lie in the graded piece g_(-N)")
        if not liealg.is_regular_semisimple(algebra, Y):
            raise NoRegularElement("Y is not regular semisimple")
    t_y = liealg.centralizer(algebra, [Y])
    assert len(t_y) == algebra.rank
    ady = algebra.ad(Y)
    tau = [
        tuple(v)
        for v in linalg.row_space_basis(
            [linalg.mat_vec(ady, list(algebra.basis_element(i))) for i in range(algebra.dim)]
        )
    ]
    t_pieces = {}
    tau_pieces = {}
    n_roots = 2 * algebra.n_pos
    for r in range(m):
        piece = grading.piece_basis(r)
        tp = linalg.intersect_spans([list(v) for v in t_y], [list(v) for v in piece])
        vp = linalg.intersect_spans([list(v) for v in tau], [list(v) for v in piece])
        t_pieces[r] = [tuple(v) for v in tp]
        tau_pieces[r] = [tuple(v) for v in vp]
        # g_i = t_{Y,i} ⊕ tau_i with dim tau_i constant = |Phi|/m
        assert len(t_pieces[r]) + len(tau_pieces[r]) == grading.piece_dim(r)
        assert len(tau_pieces[r]) * m == n_roots
    assert not t_pieces[0], "t_{Y,0} must vanish for a regular elliptic grading"
    return ToralDatum(
        algebra=algebra,
        m=m,
        N=N,
        Y=Y,
        grading=grading,
        t_y=tuple(t_y),
        t_pieces=t_pieces,
        tau_pieces=tau_pieces,
    )


# ---------------------------------------------------------------------------
# Theta-orbit root bases


@dataclass
class _OrbitBases:
    field: object  # CycField(m)
    theta: tuple  # Ad matrix of the grading torus point, over the field
    generators_pos: tuple  # eigenvectors of ad(Y) with positive rational eigenvalue
    generators_neg: tuple
    eigenvalues_pos: tuple
    eigenvalues_neg: tuple

    def orbit_vector(self, gen, i):
        """X_{O,i} = sum_j zeta^(-j i) Theta^j(gen), a Theta-eigenvector in g_i."""
        f = self.field
        m = f.order if f.order > 1 else 1
        mat = [list(r) for r in self.theta]
        acc = [f.from_rational(Fraction(c)) if not hasattr(c, "field") else c for c in gen]
        out = list(acc)
        cur = list(acc)
        for j in range(1, m):
            cur = linalg.mat_vec(mat, cur)
            phase = f.monomial((-j * i) % m)
            out = [a + phase * b for a, b in zip(out, cur)]
        return tuple(out)


def _rational_roots(poly):
    """All rational roots (with multiplicity) of a Fraction polynomial.

    Returns (roots, fully_split).
    """
    p = linalg.poly_trim(list(poly))
    from math import gcd

    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ip = [int(c * den) for c in p]
    roots = []
    while len(ip) > 1:
        while len(ip) > 1 and ip[0] == 0:
            roots.append(Fraction(0))
            ip = ip[1:]
        if len(ip) == 1:
            break
        a0, an = abs(ip[0]), abs(ip[-1])
        found = None
        for q in _divisors(an):
            for pnum in _divisors(a0):
                for r in (Fraction(pnum, q), Fraction(-pnum, q)):
                    if not linalg.poly_eval([Fraction(c) for c in ip], r):
                        found = r
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            return roots, False
        roots.append(found)
        quo, rem = linalg.poly_divmod([Fraction(c) for c in ip], [-found, Fraction(1)])
        assert linalg.poly_trim(rem) == [ZERO]
        den2 = 1
        for c in quo:
            den2 = den2 * c.denominator // gcd(den2, c.denominator)
        ip = [int(c * den2) for c in quo]
    return roots, True


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _nth_root_fraction(x: Fraction, n: int):
    """Exact rational n-th root, or None."""
    if x < 0:
        if n % 2 == 0:
            return None
        r = _nth_root_fraction(-x, n)
        return None if r is None else -r
    num = round(x.numerator ** (1.0 / n)) if x.numerator > 1 else x.numerator
    den = round(x.denominator ** (1.0 / n)) if x.denominator > 1 else x.denominator
    for nn in (num - 1, num, num + 1):
        for dd in (den - 1, den, den + 1):
            if nn >= 0 and dd > 0 and Fraction(nn**n, dd**n) == x:
                return Fraction(nn, dd)
    return None


def orbit_bases(datum: ToralDatum) -> _OrbitBases:
    """Theta-orbit generators: eigenvectors of ad(Y) on tau with rational
    eigenvalues, one per orbit, split by eigenvalue sign.

    Requires m odd (every orbit then has a unique rational member and no
    orbit meets its negative); raises NonSplitSpectrum when the spectrum
    does not decompose rationally.
    """
    if datum.orbits is not None:
        return datum.orbits
    algebra, m, N, Y = datum.algebra, datum.m, datum.N, datum.Y
    if m % 2 == 0:
        raise NonSplitSpectrum("orbit bases require odd m (orbits meet their negatives)")
    tau = []
    for r in range(m):
        tau.extend(datum.tau_pieces[r])
    mat = liealg.ad_restricted(algebra, Y, tau)
    chi = linalg.char_poly(mat)
    # eigenvalues come in full zeta_m-orbits, so chi is a polynomial in x^m
    assert all(not c for k, c in enumerate(chi) if k % m), "spectrum not orbit-graded"
    psi = [chi[k] for k in range(0, len(chi), m)]
    mus, split = _rational_roots(psi)
    if not split or len(mus) * m != len(tau):
        raise NonSplitSpectrum("ad(Y) orbit spectrum does not split rationally")
    lams = []
    for mu in mus:
        lam = _nth_root_fraction(mu, m)
        if lam is None or lam == 0:
            raise NonSplitSpectrum(f"orbit eigenvalue {mu} has no rational {m}-th root")
        lams.append(lam)
    gens_pos, gens_neg, ev_pos, ev_neg = [], [], [], []
    for lam in sorted(set(lams)):
        mult = lams.count(lam)
        shifted = [
            [mat[i][j] - (lam if i == j else 0) for j in range(len(tau))]
            for i in range(len(tau))
        ]
        ker = linalg.nullspace(shifted)
        assert len(ker) == mult
        for cv in ker:
            vec = [ZERO] * algebra.dim
            for c, b in zip(cv, tau):
                if c:
                    vec = linalg.vec_add(vec, linalg.vec_scale(list(b), c))
            if lam > 0:
                gens_pos.append(tuple(vec))
                ev_pos.append(lam)
            else:
                gens_neg.append(tuple(vec))
                ev_neg.append(lam)
    # eigenvalues pair up under alpha -> -alpha, so the split is even
    assert len(gens_pos) == len(gens_neg) == len(tau) // (2 * m)
    field = CycField(m)
    zeta = field.monomial(1 % m)
    theta = liealg.torus_automorphism(algebra, [zeta] * algebra.rank)
    ob = _OrbitBases(
        field=field,
        theta=tuple(tuple(r) for r in theta),
        generators_pos=tuple(gens_pos),
        generators_neg=tuple(gens_neg),
        eigenvalues_pos=tuple(ev_pos),
        eigenvalues_neg=tuple(ev_neg),
    )
    # the orbit vectors must reconstruct every tau_i
    for i in range(m):
        vecs = [
            list(ob.orbit_vector(g, i))
            for g in ob.generators_pos + ob.generators_neg
        ]
        span = linalg.row_space_basis(vecs)
        assert len(span) == len(datum.tau_pieces[i % m])
    datum.orbits = ob
    return ob


# ---------------------------------------------------------------------------
# lattices


@dataclass
class KTypeLattices:
    datum: ToralDatum
    j_pieces: dict  # exponent (1..N) -> basis
    jprime_pieces: dict  # exponent (1..N) -> basis; full g above N
    bj_pieces: dict  # exponent (1..N) -> t_{Y,i} basis
    jplus_perp_pieces: dict  # exponent (-N..cap) -> basis
    jperp_pieces: dict
    lagrangian: tuple = ()  # basis of m ⊆ tau_{N/2} (N even)
    lagrangian_perp: tuple = ()  # m^⊥ ⊆ g_{-N/2}
    cap: int = 0

    def jprime_piece(self, i):
        if i > self.datum.N:
            return self.datum.g_piece(i)
        return self.jprime_pieces.get(i, [])

    def j_piece(self, i):
        if i > self.datum.N:
            return self.datum.g_piece(i)
        return self.j_pieces.get(i, [])

    def jplus_perp_piece(self, i):
        if i > self.cap:
            return self.datum.g_piece(i)
        return self.jplus_perp_pieces.get(i, [])


def _killing_orthogonal(algebra, ambient, constraints):
    """{x in span(ambient) : kappa(x, c) = 0 for all c in constraints}."""
    rows = []
    for c in constraints:
        rows.append([algebra.killing(tuple(b), tuple(c)) for b in ambient])
    if not rows:
        coeffs = [[ONE if i == j else ZERO for i in range(len(ambient))] for j in range(len(ambient))]
    else:
        coeffs = linalg.nullspace(rows, ncols=len(ambient))
    out = []
    for cv in coeffs:
        vec = [ZERO] * algebra.dim
        for c, b in zip(cv, ambient):
            if c:
                vec = linalg.vec_add(vec, linalg.vec_scale(list(b), c))
        out.append(tuple(vec))
    return out


def _lagrangian_of(form, vectors):
    """A Lagrangian of a nondegenerate alternating form, by splitting off
    hyperbolic pairs; `form` is a callable on ambient vectors."""
    if not vectors:
        return []
    assert len(vectors) % 2 == 0
    v = vectors[0]
    w = next(x for x in vectors[1:] if form(v, x))
    c = form(v, w)
    rest = []
    for x in vectors[1:]:
        if x is w:
            continue
        vec = linalg.vec_add(
            list(x),
            linalg.vec_add(
                linalg.vec_scale(list(v), -form(x, w) / c),
                linalg.vec_scale(list(w), form(x, v) / c),
            ),
        )
        rest.append(tuple(vec))
    return [tuple(v)] + _lagrangian_of(form, rest)


def build_lattices(datum: ToralDatum) -> KTypeLattices:
    algebra, m, N = datum.algebra, datum.m, datum.N
    even = N % 2 == 0
    lagr = []
    lagr_perp = []
    if even:
        half = N // 2
        tau_half = datum.tau_piece(half)
        # the symplectic form <Y, [x, y]> is non-degenerate on tau_{N/2}
        symp = [
            [algebra.killing(datum.Y, algebra.bracket(x, y)) for y in tau_half]
            for x in tau_half
        ]
        assert linalg.rank(symp) == len(tau_half)
        # t_{Y,-N} = span(Y) in every supported type (each graded piece of
        # the centralizer torus has dimension <= 1), so isotropy alone
        # forces [m, m] ⊆ tau_N
        assert len(datum.t_piece(-N)) == 1
        assert linalg.in_span([list(v) for v in datum.t_piece(-N)], list(datum.Y))
        lagr = _lagrangian_of(
            lambda x, y: algebra.killing(datum.Y, algebra.bracket(tuple(x), tuple(y))),
            [tuple(x) for x in tau_half],
        )
        assert 2 * len(lagr) == len(tau_half)
        tauN = datum.tau_piece(N)
        for a in range(len(lagr)):
            for b in range(a, len(lagr)):
                br = algebra.bracket(lagr[a], lagr[b])
                assert not algebra.killing(datum.Y, br)
                assert linalg.in_span([list(v) for v in tauN], list(br))
        lagr_perp = _killing_orthogonal(algebra, datum.g_piece(-half), lagr)
        assert len(lagr_perp) == len(datum.g_piece(-half)) - len(lagr)
        # t_{Y,-N/2} ⊆ m^⊥
        for v in datum.t_piece(-half):
            assert linalg.in_span([list(x) for x in lagr_perp], list(v))

    j_pieces = {}
    jprime_pieces = {}
    bj_pieces = {}
    lo = (N + 1) // 2 if not even else N // 2
    for i in range(1, N + 1):
        bj_pieces[i] = list(datum.t_piece(i))
        if not even:
            if i >= lo:
                j_pieces[i] = list(datum.g_piece(i))
                jprime_pieces[i] = list(datum.tau_piece(i))
            else:
                j_pieces[i] = list(datum.t_piece(i))
                jprime_pieces[i] = []
        else:
            if i > lo:
                j_pieces[i] = list(datum.g_piece(i))
                jprime_pieces[i] = list(datum.tau_piece(i))
            elif i == lo:
                j_pieces[i] = list(datum.t_piece(i)) + list(lagr)
                jprime_pieces[i] = list(lagr)
            else:
                j_pieces[i] = list(datum.t_piece(i))
                jprime_pieces[i] = []

    cap = N
    jplus_perp = {}
    jperp = {}
    for i in range(-N, cap + 1):
        if not even:
            if i <= -(N + 1) // 2:
                jplus_perp[i] = list(datum.t_piece(i)) if i >= -N else []
            else:
                jplus_perp[i] = list(datum.g_piece(i))
            if i < -(N - 1) // 2:
                jperp[i] = []
            elif i <= -1:
                jperp[i] = list(datum.tau_piece(i))
            else:
                jperp[i] = list(datum.g_piece(i))
        else:
            half = N // 2
            if i <= -half - 1:
                jplus_perp[i] = list(datum.t_piece(i)) if i >= -N else []
            elif i == -half:
                jplus_perp[i] = list(lagr_perp)
            else:
                jplus_perp[i] = list(datum.g_piece(i))
            if i < -half:
                jperp[i] = []
            elif i == -half:
                jperp[i] = [
                    tuple(v)
                    for v in linalg.intersect_spans(
                        [list(x) for x in datum.tau_piece(-half)],
                        [list(x) for x in lagr_perp],
                    )
                ]
            elif i <= -1:
                jperp[i] = list(datum.tau_piece(i))
            else:
                jperp[i] = list(datum.g_piece(i))

    lat = KTypeLattices(
        datum=datum,
        j_pieces=j_pieces,
        jprime_pieces=jprime_pieces,
        bj_pieces=bj_pieces,
        jplus_perp_pieces=jplus_perp,
        jperp_pieces=jperp,
        lagrangian=tuple(lagr),
        lagrangian_perp=tuple(lagr_perp),
        cap=cap,
    )
    _verify_lattices(lat)
    return lat


def _verify_lattices(lat: KTypeLattices):
    datum = lat.datum
    algebra, N = datum.algebra, datum.N
    # [j, j'] ⊆ j' gradedwise; sums above N land in p(N+1) ⊆ j' automatically
    for a in range(1, N + 1):
        for b in range(1, N + 1 - a):
            target = [list(v) for v in lat.jprime_piece(a + b)]
            for x in lat.j_pieces[a]:
                for y in lat.jprime_pieces[b]:
                    br = algebra.bracket(tuple(x), tuple(y))
                    assert linalg.in_span(target, list(br)), (a, b)
    # bj is abelian
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            for x in lat.bj_pieces[i]:
                for y in lat.bj_pieces[j]:
                    assert algebra.is_zero_vec(algebra.bracket(tuple(x), tuple(y)))
    # residue pairing of j+ = j' against j^{+,⊥} vanishes: only u-degree sum 0
    for a in range(1, N + 1):
        if -a < -N:
            continue
        for x in lat.jprime_pieces[a]:
            for y in lat.jplus_perp_pieces.get(-a, []):
                assert not algebra.killing(tuple(x), tuple(y))
    # perfect pairing bj x bj*: each block t_{Y,i} x t_{Y,-i} is nondegenerate
    for i in range(1, N + 1):
        rows = [
            [algebra.killing(tuple(x), tuple(y)) for y in datum.t_piece(-i)]
            for x in lat.bj_pieces[i]
        ]
        if rows:
            assert len(rows) == len(rows[0])
            assert linalg.det(rows)


# ---------------------------------------------------------------------------
# characters


@dataclass
class ToralCharacter:
    """phi-tilde in bj* ≅ ⊕_{-N<=i<=-1} t_{Y,i} u^i du/u."""

    datum: ToralDatum
    components: dict  # i -> g-vector in t_{Y,i}, for -N <= i <= -1

    def component(self, i):
        return self.components.get(i, self.datum.algebra.zero())

    @property
    def leading(self):
        return self.component(-self.datum.N)


def make_character(datum: ToralDatum, components: dict) -> ToralCharacter:
    algebra, N = datum.algebra, datum.N
    comps = {}
    for i, vec in components.items():
        i = int(i)
        if not -N <= i <= -1:
            raise DomainError(f"character component at u^{i} outside [-N, -1]")
        vec = tuple(vec)
        if algebra.is_zero_vec(vec):
            continue
        if not linalg.in_span([list(v) for v in datum.t_piece(i)], list(vec)):
            raise DomainError(f"component at u^{i} is not in t_(Y,{i})")
        comps[i] = vec
    lead = comps.get(-N)
    if lead is None or not liealg.is_regular_semisimple(algebra, lead):
        raise NoRegularElement("leading component Y_{-N} must be regular semisimple")
    return ToralCharacter(datum, comps)


def character_series(char: ToralCharacter):
    """phi-tilde as a g-valued series coefficient against du/u."""
    from .connection import GSeries

    return GSeries(char.datum.algebra, char.datum.m, dict(char.components))


# ---------------------------------------------------------------------------
# special / relevance at the Airy depth


def _require_airy_depth(char: ToralCharacter):
    algebra = char.datum.algebra
    h = algebra.coxeter_number
    if char.datum.m != h or char.datum.N != h + 1:
        raise WrongDepth(
            f"special/relevance need depth (1+h)/h = {h+1}/{h}, got {char.datum.N}/{char.datum.m}"
        )
    if h % 2 == 1:
        # odd Coxeter number: the zero-window statement covers sl_{2n+1} only
        if not (algebra.cartan_type[0] == "A" and algebra.rank % 2 == 0):
            raise WrongDepth(f"odd Coxeter number unsupported for {algebra.cartan_type}")
    return h


def special_check(char: ToralCharacter) -> bool:
    """Zero components in the window -h <= i <= -(first integer > h/2)."""
    h = _require_airy_depth(char)
    algebra = char.datum.algebra
    lo = h // 2 + 1
    return all(
        algebra.is_zero_vec(char.component(-i)) for i in range(lo, h + 1)
    )


def relevance_check(char: ToralCharacter) -> bool:
    """Residue-pairing test: kappa(Y_{-i}, g(i)) = 0 for every i in
    [first integer > h/2, h-1], with g(i) the Z-graded piece of the
    rho-check grading."""
    h = _require_airy_depth(char)
    algebra = char.datum.algebra
    lo = h // 2 + 1
    for i in range(lo, h):
        y = char.component(-i)
        if algebra.is_zero_vec(y):
            continue
        for b in range(algebra.dim):
            if algebra.weight(b) == i:
                if algebra.killing(y, algebra.basis_element(b)):
                    return False
    return True
