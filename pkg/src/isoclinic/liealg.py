"""Exact structural engine for simple Lie algebras of rank <= 3.

Each supported type (A1, A2, A3, B2, C2, G2) is realized by concrete
matrices — sl(n+1), so5/sp4 in forms with diagonal Cartan, and G2 as the
derivation algebra of split octonions.  A single generic extractor turns
the matrix realization into an abstract algebra: Cartan subalgebra, root
decomposition, a deterministic normalized root-vector basis, frozen
structure constants, Killing form, principal sl2-triple and Kostant basis.

Elements are coordinate tuples in the frozen basis order
[H_1..H_n, E_(positive roots by height then lex), E_(negatives, mirrored)].
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import linalg
from .errors import (
    NonSplitSpectrum,
    NoRegularElement,
    RankTooLarge,
    UnsupportedType,
)
from .linalg import ZERO, ONE

SUPPORTED_TYPES = ("A1", "A2", "A3", "B2", "C2", "G2")


# ---------------------------------------------------------------------------
# matrix realizations


def _zero_mat(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _flatten(mat):
    return [x for row in mat for x in row]


def _comm(a, b):
    return linalg.mat_sub(linalg.mat_mul(a, b), linalg.mat_mul(b, a))


def _sl_basis(n):
    """Full basis of sl(n) as matrices (diagonal Cartan)."""
    mats = []
    for i in range(n - 1):
        m = _zero_mat(n)
        m[i][i] = Fraction(1)
        m[i + 1][i + 1] = Fraction(-1)
        mats.append(m)
    for i in range(n):
        for j in range(n):
            if i != j:
                m = _zero_mat(n)
                m[i][j] = Fraction(1)
                mats.append(m)
    return mats


def _form_algebra_basis(form):
    """Basis of {X : X^T S + S X = 0} for a given bilinear form matrix S.

    (X^T S)_{ab} = sum_k X_{ka} S_{kb}; (S X)_{ab} = sum_k S_{ak} X_{kb}.
    """
    n = len(form)
    rows = []
    for a in range(n):
        for b in range(n):
            row = [Fraction(0)] * (n * n)
            for k in range(n):
                row[k * n + a] += form[k][b]
                row[k * n + b] += form[a][k]
            rows.append(row)
    flats = linalg.nullspace(rows, ncols=n * n)
    return [[list(v[i * n : (i + 1) * n]) for i in range(n)] for v in flats]


def _so5_basis():
    s = _zero_mat(5)
    for i in range(5):
        s[i][4 - i] = Fraction(1)
    return _form_algebra_basis(s)


def _sp4_basis():
    j = _zero_mat(4)
    j[0][3] = Fraction(1)
    j[1][2] = Fraction(1)
    j[2][1] = Fraction(-1)
    j[3][0] = Fraction(-1)
    return _form_algebra_basis(j)


def _octonion_table():
    """Structure constants of split octonions in the Zorn basis.

    Basis order: e1, e2 (diagonal idempotents), v1..v3, w1..w3.
    Returns table[i][j] = product of basis i and basis j as an 8-vector.
    """

    def mul(x, y):
        a1, b1 = x[0], x[1]
        v1, w1 = x[2:5], x[5:8]
        a2, b2 = y[0], y[1]
        v2, w2 = y[2:5], y[5:8]

        def dot(u, v):
            return sum(ui * vi for ui, vi in zip(u, v))

        def cross(u, v):
            return [
                u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0],
            ]

        a = a1 * a2 + dot(v1, w2)
        b = b1 * b2 + dot(w1, v2)
        v = [a1 * v2[i] + b2 * v1[i] - (cross(w1, w2))[i] for i in range(3)]
        w = [a2 * w1[i] + b1 * w2[i] + (cross(v1, v2))[i] for i in range(3)]
        return [a, b] + v + w

    table = []
    for i in range(8):
        x = [Fraction(0)] * 8
        x[i] = Fraction(1)
        row = []
        for j in range(8):
            y = [Fraction(0)] * 8
            y[j] = Fraction(1)
            row.append(mul(x, y))
        table.append(row)
    return table


def _g2_basis():
    """G2 as derivations of split octonions: D(xy) = D(x)y + x D(y)."""
    table = _octonion_table()
    # unknowns: D as an 8x8 matrix, 64 entries; D e_i = sum_k D[k][i] e_k
    rows = []
    for i in range(8):
        for j in range(8):
            prod = table[i][j]  # e_i e_j as vector
            for comp in range(8):
                # component `comp` of D(e_i e_j) - D(e_i)e_j - e_i D(e_j)
                row = [Fraction(0)] * 64
                for k in range(8):
                    row[comp * 8 + k] += prod[k]  # D(e_i e_j)
                for k in range(8):
                    # D(e_i) = sum_k D[k][i] e_k ; (e_k e_j)[comp]
                    row[k * 8 + i] -= table[k][j][comp]
                    row[k * 8 + j] -= table[i][k][comp]
                rows.append(row)
    flats = linalg.nullspace(rows, ncols=64)
    return [[list(v[r * 8 : (r + 1) * 8]) for r in range(8)] for v in flats]


_REALIZATIONS = {
    "A1": lambda: _sl_basis(2),
    "A2": lambda: _sl_basis(3),
    "A3": lambda: _sl_basis(4),
    "B2": _so5_basis,
    "C2": _sp4_basis,
    "G2": _g2_basis,
}

_EXPECTED = {
    # rank, dim, degrees, coxeter
    "A1": (1, 3, (2,), 2),
    "A2": (2, 8, (2, 3), 3),
    "A3": (3, 15, (2, 3, 4), 4),
    "B2": (2, 10, (2, 4), 4),
    "C2": (2, 10, (2, 4), 4),
    "G2": (2, 14, (2, 6), 6),
}


# ---------------------------------------------------------------------------
# abstract algebra container


@dataclass(frozen=True)
class Root:
    coords: tuple  # coordinates in the simple-root basis (integers)
    pairings: tuple  # values on the simple coroots H_1..H_n
    height: int


class SimpleLieAlgebra:
    def __init__(self, cartan_type):
        if cartan_type not in SUPPORTED_TYPES:
            raise UnsupportedType(f"unsupported Cartan type {cartan_type!r}")
        self.cartan_type = cartan_type
        self.rank, self.dim, self.degrees, self.coxeter_number = _EXPECTED[cartan_type]
        self._build()

    # -- element helpers ------------------------------------------------
    def zero(self):
        return tuple([ZERO] * self.dim)

    def basis_element(self, i):
        v = [ZERO] * self.dim
        v[i] = ONE
        return tuple(v)

    def coroot(self, i):
        """H for the i-th simple root (0-based)."""
        return self.basis_element(i)

    def root_vector(self, root_index):
        return self.basis_element(self.rank + root_index)

    def bracket(self, x, y):
        out = [ZERO] * self.dim
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        sc = self.brackets[i][j]
                        c = xi * yj
                        for k, v in sc:
                            out[k] = out[k] + c * v
        return tuple(out)

    def ad(self, x):
        """Matrix of ad(x) acting on coordinate columns."""
        cols = [self.bracket(x, self.basis_element(j)) for j in range(self.dim)]
        return [list(r) for r in zip(*cols)]

    def killing(self, x, y):
        s = ZERO
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        s = s + xi * yj * self.killing_table[i][j]
        return s

    def weight(self, i):
        """rho-check weight of basis vector i (0 on the Cartan)."""
        return 0 if i < self.rank else self.roots[i - self.rank].height

    def scale(self, x, c):
        return tuple(c * v for v in x)

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def is_zero_vec(self, x):
        return linalg.vec_is_zero(list(x))

    def root_value(self, root: Root, cartan_element):
        """beta(x) for x in the Cartan span (coordinates on simple coroots)."""
        s = ZERO
        for j in range(self.rank):
            if cartan_element[j]:
                s = s + cartan_element[j] * root.pairings[j]
        return s

    # -- construction ---------------------------------------------------
    def _build(self):
        mats = _REALIZATIONS[self.cartan_type]()
        assert len(mats) == self.dim
        ambient = len(mats[0])
        flats = [_flatten(m) for m in mats]

        # Cartan = members that are diagonal in the defining realization
        offdiag_rows = []
        for a in range(ambient):
            for b in range(ambient):
                if a != b:
                    offdiag_rows.append([f[a * ambient + b] for f in flats])
        cartan_coords = linalg.nullspace(offdiag_rows, ncols=self.dim)
        assert len(cartan_coords) == self.rank
        cartan_mats = []
        for cc in cartan_coords:
            m = _zero_mat(ambient)
            for c, bm in zip(cc, mats):
                if c:
                    m = linalg.mat_add(m, linalg.mat_scale(bm, c))
            cartan_mats.append(m)

        solver = _SpanSolver(flats)

        def ad_matrix(x_mat):
            cols = [solver.coords(_flatten(_comm(x_mat, bm))) for bm in mats]
            return [list(r) for r in zip(*cols)]

        # generic Cartan element with 1-dimensional root spaces
        h0_mat, eigdata = self._find_regular_cartan(cartan_mats, ad_matrix)

        # eigdata: list of (eigenvalue, coordinate vector); build root vectors
        pos = [(lam, v) for lam, v in eigdata if lam > 0]
        neg_lookup = {lam: v for lam, v in eigdata if lam < 0}

        def to_mat(coords):
            m = _zero_mat(ambient)
            for c, bm in zip(coords, mats):
                if c:
                    m = linalg.mat_add(m, linalg.mat_scale(bm, c))
            return m

        def normalize(coords):
            flat = _flatten(to_mat(coords))
            lead = next(x for x in flat if x)
            return [c / lead for c in coords]

        # root functionals: values on the chosen Cartan basis
        pos_roots = []
        for lam, v in pos:
            vals = []
            vm = to_mat(v)
            for hm in cartan_mats:
                bracket = _comm(hm, vm)
                coords = solver.coords(_flatten(bracket))
                ratio = None
                for a, b in zip(coords, v):
                    if b:
                        ratio = a / b
                        break
                assert ratio is not None
                # confirm eigenvector relation exactly
                assert all(a == ratio * b for a, b in zip(coords, v))
                vals.append(ratio)
            pos_roots.append({"h0": lam, "vals": tuple(vals), "vec": normalize(v)})

        # simple roots: positive roots not sums of two positive roots
        simples = []
        for r in pos_roots:
            decomposable = any(
                tuple(a + b for a, b in zip(r1["vals"], r2["vals"])) == r["vals"]
                for r1 in pos_roots
                for r2 in pos_roots
            )
            if not decomposable:
                simples.append(r)
        assert len(simples) == self.rank
        simples.sort(key=lambda r: r["vals"])

        # coordinates of each positive root in the simple-root basis
        simple_mat = [[s["vals"][a] for s in simples] for a in range(self.rank)]
        for r in pos_roots:
            sol = linalg.solve(simple_mat, list(r["vals"]))
            coords = tuple(int(c) for c in sol)
            assert all(Fraction(c) == s for c, s in zip(coords, sol))
            r["coords"] = coords
        pos_roots.sort(key=lambda r: (sum(r["coords"]), r["coords"]))

        # root vectors: E_beta normalized, F_beta scaled so [E,F] = coroot
        e_mats = [to_mat(r["vec"]) for r in pos_roots]
        f_mats = []
        coroots_of_pos = []
        for r, em in zip(pos_roots, e_mats):
            neg_v = normalize(neg_lookup[-r["h0"]])
            fm = to_mat(neg_v)
            hm = _comm(em, fm)
            # beta(h) where h = [e,f]; evaluate via the Cartan coordinates
            hc = solver.coords(_flatten(hm))
            # express hm in cartan basis
            cb = [[cc[i] for cc in cartan_coords] for i in range(self.dim)]
            hcoords = linalg.solve(cb, list(hc))
            assert hcoords is not None
            beta_h = ZERO
            for c, val in zip(hcoords, r["vals"]):
                beta_h = beta_h + c * val
            assert beta_h != 0
            fm = linalg.mat_scale(fm, Fraction(2) / beta_h)
            f_mats.append(fm)
            coroots_of_pos.append(_comm(em, fm))

        # final basis: simple coroots, then E_beta (pos order), then F_beta
        simple_positions = []
        for s in simples:
            idx = next(
                i for i, r in enumerate(pos_roots) if r["vals"] == s["vals"]
            )
            simple_positions.append(idx)
        final_mats = [coroots_of_pos[i] for i in simple_positions]
        final_mats += e_mats + f_mats

        # pairings of every root on the simple coroots
        simple_coroot_mats = final_mats[: self.rank]
        all_roots = []
        for sign in (1, -1):
            for r, em in zip(pos_roots, e_mats):
                vals = []
                for hm in simple_coroot_mats:
                    # beta(H_i): eigenvalue of ad(H_i) on E_beta
                    br = _comm(hm, em)
                    fe = _flatten(em)
                    fb = _flatten(br)
                    ratio = None
                    for a, b in zip(fb, fe):
                        if b:
                            ratio = a / b
                            break
                    assert all(a == ratio * b for a, b in zip(fb, fe))
                    vals.append(sign * ratio)
                coords = tuple(sign * c for c in r["coords"])
                all_roots.append(
                    Root(coords=coords, pairings=tuple(vals), height=sign * sum(r["coords"]))
                )
        self.roots = all_roots
        self.n_pos = len(pos_roots)

        # frozen structure constants in the final basis
        final_flats = [_flatten(m) for m in final_mats]
        fsolver = _SpanSolver(final_flats)
        brackets = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                c = fsolver.coords(_flatten(_comm(final_mats[i], final_mats[j])))
                row.append(tuple((k, v) for k, v in enumerate(c) if v))
            brackets.append(row)
        self.brackets = brackets
        self.rep_matrices = final_mats
        self.basis_names = (
            [f"H{i+1}" for i in range(self.rank)]
            + [f"E{list(r.coords)}" for r in all_roots[: self.n_pos]]
            + [f"E{list(r.coords)}" for r in all_roots[self.n_pos :]]
        )
        self.root_index = {r.coords: self.rank + k for k, r in enumerate(all_roots)}

        # Killing form from the adjoint action
        ads = [self.ad(self.basis_element(i)) for i in range(self.dim)]
        self.killing_table = [
            [linalg.trace(linalg.mat_mul(ads[i], ads[j])) for j in range(self.dim)]
            for i in range(self.dim)
        ]

        self._build_principal_data()

    def _find_regular_cartan(self, cartan_mats, ad_matrix):
        """A Cartan element whose nonzero ad-eigenspaces are all lines."""
        n_roots = self.dim - self.rank
        for coeffs in _candidate_tuples(self.rank):
            hm = _zero_mat(len(cartan_mats[0]))
            for c, m in zip(coeffs, cartan_mats):
                if c:
                    hm = linalg.mat_add(hm, linalg.mat_scale(m, Fraction(c)))
            diag = [hm[i][i] for i in range(len(hm))]
            candidates = sorted({a - b for a in diag for b in diag})
            admat = ad_matrix(hm)
            eigdata = []
            total = 0
            ok = True
            for lam in candidates:
                shifted = [
                    [admat[i][j] - (lam if i == j else 0) for j in range(self.dim)]
                    for i in range(self.dim)
                ]
                ker = linalg.nullspace(shifted)
                if not ker:
                    continue
                if lam == 0:
                    if len(ker) != self.rank:
                        ok = False
                        break
                else:
                    if len(ker) != 1:
                        ok = False
                        break
                    eigdata.append((lam, ker[0]))
                total += len(ker)
            if ok and total == self.dim and len(eigdata) == n_roots:
                return hm, eigdata
        raise AssertionError("no regular Cartan element found")

    def _build_principal_data(self):
        n = self.rank
        # rho-check: alpha_i(x) = 1 for all simple roots
        simple_roots = [self.roots[self._simple_pos(i)] for i in range(n)]
        mat = [[Fraction(sr.pairings[j]) for j in range(n)] for sr in simple_roots]
        rc = linalg.solve(mat, [ONE] * n)
        rho = [ZERO] * self.dim
        for j in range(n):
            rho[j] = rc[j]
        self.rho_check = tuple(rho)

        # p_{-1} = sum of simple-root F's; p_1 = sum c_i E_i with [p_1,p_{-1}] = 2 rho
        p_minus = [ZERO] * self.dim
        for i in range(n):
            p_minus[self._neg_simple_index(i)] = ONE
        self.p_minus = tuple(p_minus)
        two_rho = self.scale(self.rho_check, Fraction(2))
        c = [Fraction(2) * rc[j] for j in range(n)]
        p_one = [ZERO] * self.dim
        for i in range(n):
            p_one[self._pos_simple_index(i)] = c[i]
        self.p_one = tuple(p_one)
        assert self.bracket(self.p_one, self.p_minus) == two_rho
        self.principal_triple = (self.p_minus, two_rho, self.p_one)

        # Kostant basis: RREF basis of centralizer(p_1), graded by rho-weight
        cent = centralizer(self, [self.p_one])
        by_weight = {}
        for v in cent:
            w = self._homogeneous_weight(v)
            by_weight.setdefault(w, []).append(list(v))
        weights = sorted(by_weight)
        assert weights == [d - 1 for d in self.degrees]
        kb = []
        for w in weights:
            for bv in linalg.row_space_basis(by_weight[w]):
                kb.append(tuple(bv))
        # p_n spans the highest-root space; normalize to the root vector
        theta_idx = self.rank + max(
            range(self.n_pos), key=lambda k: self.roots[k].height
        )
        top = kb[-1]
        assert all(not top[i] or i == theta_idx for i in range(self.dim))
        kb[-1] = self.basis_element(theta_idx)
        self.kostant_basis = kb
        self.highest_root_index = theta_idx

    def _homogeneous_weight(self, v):
        ws = {self.weight(i) for i in range(self.dim) if v[i]}
        assert len(ws) == 1
        return ws.pop()

    def _simple_pos(self, i):
        """Index into self.roots of the i-th simple root."""
        target = tuple(1 if j == i else 0 for j in range(self.rank))
        for k, r in enumerate(self.roots):
            if r.coords == target:
                return k
        raise AssertionError

    def _pos_simple_index(self, i):
        return self.rank + self._simple_pos(i)

    def _neg_simple_index(self, i):
        target = tuple(-1 if j == i else 0 for j in range(self.rank))
        return self.root_index[target]

    def __repr__(self):
        return f"SimpleLieAlgebra({self.cartan_type})"


class _SpanSolver:
    """Fast repeated coordinates-in-span solves against a fixed basis."""

    def __init__(self, flat_basis):
        self.basis = flat_basis
        self.dim = len(flat_basis)
        _, pivots = linalg.rref([list(v) for v in flat_basis])
        # pivots of the row space give independent coordinate positions
        self.positions = pivots
        sub = [[flat_basis[j][p] for j in range(self.dim)] for p in self.positions]
        self.inv = linalg.inverse(sub)
        assert self.inv is not None

    def coords(self, flat_vec):
        rhs = [flat_vec[p] for p in self.positions]
        c = linalg.mat_vec(self.inv, rhs)
        # verify full consistency (the vector must lie in the span)
        for i, target in enumerate(flat_vec):
            s = ZERO
            for j, cj in enumerate(c):
                if cj:
                    s = s + cj * self.basis[j][i]
            assert s == target
        return c


def _candidate_tuples(rank):
    for radius in range(1, 8):
        for tup in itertools.product(range(-radius, radius + 1), repeat=rank):
            if max(abs(t) for t in tup) == radius:
                yield tup


@lru_cache(maxsize=None)
def build_algebra(cartan_type: str) -> SimpleLieAlgebra:
    return SimpleLieAlgebra(cartan_type)


_DUAL = {"A1": "A1", "A2": "A2", "A3": "A3", "B2": "C2", "C2": "B2", "G2": "G2"}


def dual_algebra(algebra: SimpleLieAlgebra) -> SimpleLieAlgebra:
    return build_algebra(_DUAL[algebra.cartan_type])


# ---------------------------------------------------------------------------
# subspace utilities


def centralizer(algebra, elements):
    """Basis of the common centralizer of the given elements in g."""
    if not elements:
        return [algebra.basis_element(i) for i in range(algebra.dim)]
    rows = []
    for x in elements:
        rows.extend(algebra.ad(x))
    basis = linalg.nullspace(rows, ncols=algebra.dim)
    return [tuple(v) for v in linalg.row_space_basis(basis)] if basis else []


def centralizer_in(algebra, elements, subspace):
    """Common centralizer intersected with span(subspace)."""
    if not subspace:
        return []
    rows = []
    for x in elements:
        adx = algebra.ad(x)
        # columns: ad(x) applied to the subspace basis
        cols = [linalg.mat_vec(adx, list(v)) for v in subspace]
        for i in range(algebra.dim):
            rows.append([c[i] for c in cols])
    coeffs = linalg.nullspace(rows, ncols=len(subspace))
    out = []
    for cv in coeffs:
        vec = [ZERO] * algebra.dim
        for c, v in zip(cv, subspace):
            if c:
                vec = linalg.vec_add(vec, linalg.vec_scale(list(v), c))
        out.append(tuple(vec))
    return [tuple(v) for v in linalg.row_space_basis(out)] if out else []


def subalgebra_center(algebra, subspace):
    return centralizer_in(algebra, list(subspace), subspace)


def derived_subalgebra(algebra, subspace):
    vecs = []
    for i, x in enumerate(subspace):
        for y in subspace[i + 1 :]:
            vecs.append(list(algebra.bracket(x, y)))
    return [tuple(v) for v in linalg.row_space_basis(vecs)]


def ad_restricted(algebra, x, subspace):
    """Matrix of ad(x) on span(subspace); requires invariance."""
    cols = []
    for v in subspace:
        img = algebra.bracket(x, v)
        c = linalg.coordinates_in_basis([list(b) for b in subspace], list(img))
        assert c is not None, "subspace not ad(x)-invariant"
        cols.append(c)
    return [list(r) for r in zip(*cols)]


def project_onto(algebra, vec, part_a, part_b):
    """Split vec = a + b along span(part_a) ⊕ span(part_b)."""
    basis = [list(v) for v in part_a] + [list(v) for v in part_b]
    c = linalg.coordinates_in_basis(basis, list(vec))
    assert c is not None, "vector outside the direct sum"
    a = [ZERO] * algebra.dim
    for ci, v in zip(c[: len(part_a)], part_a):
        if ci:
            a = linalg.vec_add(a, linalg.vec_scale(list(v), ci))
    b = linalg.vec_sub(list(vec), a)
    return tuple(a), tuple(b)


# ---------------------------------------------------------------------------
# Jordan decomposition (field-agnostic: no eigenvalue splitting required)


def jordan_decompose(algebra, x):
    """x = s + n with s semisimple, n nilpotent, [s,n] = 0.

    Uses Newton iteration against the squarefree part of the
    characteristic polynomial of ad(x); works over any exact field,
    so NonSplitSpectrum is never raised here.
    """
    if algebra.is_zero_vec(x):
        return algebra.zero(), algebra.zero()
    adx = algebra.ad(x)
    p = linalg.char_poly(adx)
    g = linalg.squarefree_part(p)
    dg = linalg.poly_derivative(g)
    _, u, _ = linalg.poly_xgcd(dg, g)  # u * g' = 1 mod g
    m = [row[:] for row in adx]
    steps = 1
    while (1 << steps) < algebra.dim + 1:
        steps += 1
    for _ in range(steps):
        gm = linalg.poly_eval_matrix(g, m)
        if all(not linalg._nz(v) for row in gm for v in row):
            break
        um = linalg.poly_eval_matrix(u, m)
        m = linalg.mat_sub(m, linalg.mat_mul(gm, um))
    assert all(
        not linalg._nz(v)
        for row in linalg.poly_eval_matrix(g, m)
        for v in row
    )
    # recover s in g from ad(s) = m (centerless: unique solution)
    cols = []
    for j in range(algebra.dim):
        cols.append(algebra.ad(algebra.basis_element(j)))
    rows = []
    rhs = []
    for a in range(algebra.dim):
        for b in range(algebra.dim):
            rows.append([cols[j][a][b] for j in range(algebra.dim)])
            rhs.append(m[a][b])
    sol = linalg.solve(rows, rhs)
    assert sol is not None
    s = tuple(sol)
    n = algebra.sub(x, s)
    assert algebra.is_zero_vec(algebra.bracket(s, n))
    assert is_nilpotent(algebra, n)
    return s, n


def is_nilpotent(algebra, x):
    if algebra.is_zero_vec(x):
        return True
    adx = algebra.ad(x)
    m = [row[:] for row in adx]
    k = 1
    while k < algebra.dim:
        m = linalg.mat_mul(m, m)
        k *= 2
        if all(not linalg._nz(v) for row in m for v in row):
            return True
    return all(not linalg._nz(v) for row in m for v in row)


def is_regular_semisimple(algebra, x):
    s, n = jordan_decompose(algebra, x)
    if not algebra.is_zero_vec(n):
        return False
    return len(centralizer(algebra, [x])) == algebra.rank


# ---------------------------------------------------------------------------
# gradings


@dataclass
class Grading:
    algebra: SimpleLieAlgebra
    modulus: int
    pieces: dict  # residue -> list of basis indices

    def piece_basis(self, i):
        return [self.algebra.basis_element(j) for j in self.pieces.get(i % self.modulus, [])]

    def piece_dim(self, i):
        return len(self.pieces.get(i % self.modulus, []))


def grading_by_principal_cocharacter(algebra, m: int) -> Grading:
    pieces = {}
    for i in range(algebra.dim):
        w = algebra.weight(i) % m
        pieces.setdefault(w, []).append(i)
    return Grading(algebra, m, pieces)


def graded_regular_semisimple(algebra, m, N, rng=None):
    """Deterministic regular semisimple element of the graded piece g_{-N}.

    Searches the piece of rho-weight ≡ -N (mod m); raises NoRegularElement
    if small integer combinations fail.
    """
    grading = grading_by_principal_cocharacter(algebra, m)
    basis = grading.piece_basis(-N % m)
    if not basis:
        raise NoRegularElement(f"empty graded piece for (m={m}, N={N})")
    trial_coeffs = [
        tuple([1] * len(basis)),
    ]
    for radius in (1, 2, 3):
        for tup in itertools.product(range(-radius, radius + 1), repeat=len(basis)):
            if max(abs(t) for t in tup) == radius:
                trial_coeffs.append(tup)
        if len(trial_coeffs) > 5000:
            break
    for tup in trial_coeffs:
        v = [ZERO] * algebra.dim
        for c, b in zip(tup, basis):
            if c:
                v = linalg.vec_add(v, linalg.vec_scale(list(b), Fraction(c)))
        v = tuple(v)
        if not algebra.is_zero_vec(v) and is_regular_semisimple(algebra, v):
            return v
    raise NoRegularElement(f"no regular semisimple element found in g_(-{N}) for m={m}")


# ---------------------------------------------------------------------------
# Weyl group


def weyl_simple_reflections(algebra):
    """Reflection matrices on the Cartan in the simple-coroot coordinates."""
    n = algebra.rank
    simple_roots = [algebra.roots[algebra._simple_pos(i)] for i in range(n)]
    mats = []
    for i, alpha in enumerate(simple_roots):
        m = linalg.mat_identity(n)
        # s_i(H_j) = H_j - alpha_i(H_j) * H_i
        for j in range(n):
            m[i][j] = m[i][j] - Fraction(alpha.pairings[j])
        mats.append(m)
    return mats


@lru_cache(maxsize=None)
def weyl_group(cartan_type: str):
    """All Weyl elements as exact rank x rank matrices (tuples)."""
    algebra = build_algebra(cartan_type)
    if algebra.rank > 3:
        raise RankTooLarge("Weyl enumeration capped at rank 3")
    gens = [tuple(tuple(r) for r in m) for m in weyl_simple_reflections(algebra)]
    seen = {tuple(tuple(r) for r in linalg.mat_identity(algebra.rank))}
    frontier = list(seen)
    while frontier:
        new = []
        for w in frontier:
            for g in gens:
                prod = linalg.mat_mul([list(r) for r in w], [list(r) for r in g])
                t = tuple(tuple(r) for r in prod)
                if t not in seen:
                    seen.add(t)
                    new.append(t)
        frontier = new
    return sorted(seen)


def matrix_order(m):
    n = len(m)
    ident = linalg.mat_identity(n)
    cur = [list(r) for r in m]
    for k in range(1, 100):
        if all(cur[i][j] == ident[i][j] for i in range(n) for j in range(n)):
            return k
        cur = linalg.mat_mul(cur, [list(r) for r in m])
    raise AssertionError("element of unexpected order")


def regular_elliptic_numbers(algebra) -> set:
    """Orders m of Weyl elements that are elliptic with a regular eigenvector."""
    if algebra.rank > 3:
        raise RankTooLarge("brute-force enumeration capped at rank 3")
    from .scalars import CycField

    n = algebra.rank
    result = set()
    root_rows = [[Fraction(p) for p in r.pairings] for r in algebra.roots]
    for w in weyl_group(algebra.cartan_type):
        wm = [list(r) for r in w]
        # elliptic: no nonzero fixed vector
        fixed = linalg.nullspace(
            [[wm[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        )
        if fixed:
            continue
        d = matrix_order(wm)
        if d in result:
            continue
        field = CycField(d)
        for k in range(d):
            z = field.monomial(k)
            shifted = [
                [field.from_rational(wm[i][j]) - (z if i == j else field.zero()) for j in range(n)]
                for i in range(n)
            ]
            eig = linalg.nullspace(shifted)
            if not eig:
                continue
            # a regular eigenvector exists iff no root functional vanishes
            # identically on the eigenspace (finite unions of proper
            # subspaces cannot cover a space over an infinite field)
            regular = True
            for row in root_rows:
                vanishes = True
                for v in eig:
                    s = field.zero()
                    for j in range(n):
                        s = s + row[j] * v[j]
                    if s:
                        vanishes = False
                        break
                if vanishes:
                    regular = False
                    break
            if regular:
                result.add(d)
                break
    return result


# ---------------------------------------------------------------------------
# sl2 completion and exp


def sl2_complete(algebra, subspace, f):
    """Complete a (regular) nilpotent f in span(subspace) to a triple (e, h, f).

    Conventions: [h,e] = 2e, [h,f] = -2f, [e,f] = h.
    """
    sub = [list(v) for v in subspace]
    adf = ad_restricted(algebra, f, subspace)
    k = len(sub)
    # Jacobson-Morozov: h = [f, z] with [h, f] = -2f, i.e. ad(f)^2 z = 2f
    fcoords = linalg.coordinates_in_basis(sub, list(f))
    target = [Fraction(2) * c for c in fcoords]
    z = linalg.solve(linalg.mat_mul(adf, adf), target)
    assert z is not None, "Jacobson-Morozov solve failed"
    zvec = [ZERO] * algebra.dim
    for c, v in zip(z, sub):
        if c:
            zvec = linalg.vec_add(zvec, linalg.vec_scale(v, c))
    h = algebra.bracket(f, tuple(zvec))
    assert algebra.bracket(h, f) == algebra.scale(f, Fraction(-2))
    # e: solve [e,f] = h and [h,e] = 2e within the subspace
    adh = ad_restricted(algebra, h, subspace)
    hcoords = linalg.coordinates_in_basis(sub, list(h))
    rows = []
    rhs = []
    for i in range(k):
        rows.append([-adf[i][j] for j in range(k)])  # [e,f] = -ad(f)e
        rhs.append(hcoords[i])
    for i in range(k):
        rows.append([adh[i][j] - (2 if i == j else 0) for j in range(k)])
        rhs.append(ZERO)
    ec = linalg.solve(rows, rhs)
    assert ec is not None
    e = [ZERO] * algebra.dim
    for c, v in zip(ec, sub):
        if c:
            e = linalg.vec_add(e, linalg.vec_scale(v, c))
    e = tuple(e)
    assert algebra.bracket(e, f) == h
    assert algebra.bracket(h, e) == algebra.scale(e, Fraction(2))
    return e, h, f


def exp_ad(algebra, x):
    """Matrix of Ad(exp x) = exp(ad x) for ad-nilpotent x."""
    from .errors import NotNilpotent

    if not is_nilpotent(algebra, x):
        raise NotNilpotent("exp of a non ad-nilpotent element")
    adx = algebra.ad(x)
    out = linalg.mat_identity(algebra.dim)
    term = linalg.mat_identity(algebra.dim)
    k = 1
    while True:
        term = linalg.mat_mul(adx, term)
        term = linalg.mat_scale(term, Fraction(1, k))
        if all(not linalg._nz(v) for row in term for v in row):
            break
        out = linalg.mat_add(out, term)
        k += 1
    return out


def weyl_reflection_automorphism(algebra, i):
    """Ad of the standard Weyl lift n_i = exp(e_i) exp(-f_i) exp(e_i)."""
    e = algebra.basis_element(algebra._pos_simple_index(i))
    f = algebra.basis_element(algebra._neg_simple_index(i))
    m1 = exp_ad(algebra, e)
    m2 = exp_ad(algebra, algebra.scale(f, Fraction(-1)))
    return linalg.mat_mul(m1, linalg.mat_mul(m2, m1))


def torus_automorphism(algebra, values):
    """Ad of the torus point with alpha_i(s) = values[i] (scalars).

    Acts trivially on the Cartan and by prod values[i]^(c_i) on E_beta
    for beta = sum c_i alpha_i.
    """
    n = algebra.dim
    mat = [[ZERO] * n for _ in range(n)]
    for i in range(algebra.rank):
        mat[i][i] = ONE
    for k, r in enumerate(algebra.roots):
        c = ONE
        for ci, val in zip(r.coords, values):
            if ci:
                c = c * (val ** ci if ci > 0 else (ONE / val) ** (-ci))
        mat[algebra.rank + k][algebra.rank + k] = c
    return mat
