import random
from fractions import Fraction

import pytest

from isoclinic import liealg

ALGEBRAS = ["A1", "A2", "B2", "C2", "G2"]

# dim, degrees, Coxeter number (textbook constants)
STRUCTURE = {
    "A1": (3, (2,), 2),
    "A2": (8, (2, 3), 3),
    "B2": (10, (2, 4), 4),
    "C2": (10, (2, 4), 4),
    "G2": (14, (2, 6), 6),
}

# orders of regular elliptic Weyl elements, computed independently from
# the eigenvalue/fixed-space characterization on the reflection
# representation
REGULAR_ELLIPTIC = {
    "A1": {2},
    "A2": {3},
    "B2": {2, 4},
    "C2": {2, 4},
    "G2": {2, 3, 6},
}

WEYL_ORDER = {"A1": 2, "A2": 6, "B2": 8, "C2": 8, "G2": 12}


@pytest.fixture(scope="module", params=ALGEBRAS)
def algebra(request):
    return liealg.build_algebra(request.param)


def test_structure_constants_table(algebra):
    dim, degrees, h = STRUCTURE[algebra.cartan_type]
    assert algebra.dim == dim
    assert tuple(algebra.degrees) == degrees
    assert algebra.coxeter_number == h
    assert sum(2 * d - 1 for d in algebra.degrees) == dim


def test_regular_elliptic_numbers(algebra):
    assert liealg.regular_elliptic_numbers(algebra) == REGULAR_ELLIPTIC[algebra.cartan_type]


def test_weyl_group_order(algebra):
    assert len(liealg.weyl_group(algebra.cartan_type)) == WEYL_ORDER[algebra.cartan_type]


def test_killing_form_nondegenerate(algebra):
    mat = [
        [algebra.killing(algebra.basis_element(i), algebra.basis_element(j)) for j in range(algebra.dim)]
        for i in range(algebra.dim)
    ]
    from isoclinic import linalg

    assert linalg.rank(mat) == algebra.dim


def test_jacobi_spot_check(algebra):
    rng = random.Random(5)
    for _ in range(10):
        x, y, z = (
            tuple(Fraction(rng.randint(-3, 3)) for _ in range(algebra.dim))
            for _ in range(3)
        )
        lhs = algebra.bracket(x, algebra.bracket(y, z))
        mid = algebra.bracket(y, algebra.bracket(x, z))
        rhs = algebra.bracket(algebra.bracket(x, y), z)
        assert algebra.sub(lhs, algebra.add(rhs, mid)) == algebra.zero()


def test_jordan_decomposition(algebra):
    rng = random.Random(7)
    for _ in range(5):
        x = tuple(Fraction(rng.randint(-2, 2)) for _ in range(algebra.dim))
        s, n = liealg.jordan_decompose(algebra, x)
        assert algebra.add(s, n) == x
        assert algebra.is_zero_vec(algebra.bracket(s, n))
        assert liealg.is_nilpotent(algebra, n)


def test_dual_algebra_pairing():
    assert liealg.dual_algebra(liealg.build_algebra("B2")).cartan_type == "C2"
    assert liealg.dual_algebra(liealg.build_algebra("C2")).cartan_type == "B2"
    for name in ("A1", "A2", "G2"):
        assert liealg.dual_algebra(liealg.build_algebra(name)).cartan_type == name


def test_graded_regular_semisimple(algebra):
    for m in sorted(liealg.regular_elliptic_numbers(algebra)):
        for N in (1, m + 1):
            from math import gcd

            if gcd(N, m) != 1:
                continue
            X = liealg.graded_regular_semisimple(algebra, m, N)
            assert liealg.is_regular_semisimple(algebra, X)
            grading = liealg.grading_by_principal_cocharacter(algebra, m)
            from isoclinic import linalg

            piece = grading.piece_basis(-N)
            assert linalg.in_span([list(v) for v in piece], list(X))


def test_exp_ad_is_bracket_automorphism():
    algebra = liealg.build_algebra("A2")
    rng = random.Random(3)
    # exponentiate a random nilpotent element
    z = algebra.scale(algebra.basis_element(algebra.rank), Fraction(rng.randint(1, 3)))
    g = liealg.exp_ad(algebra, z)
    from isoclinic import linalg

    def act(v):
        return tuple(linalg.mat_vec(g, list(v)))

    for _ in range(5):
        x = tuple(Fraction(rng.randint(-2, 2)) for _ in range(algebra.dim))
        y = tuple(Fraction(rng.randint(-2, 2)) for _ in range(algebra.dim))
        assert act(algebra.bracket(x, y)) == algebra.bracket(act(x), act(y))
        assert algebra.killing(act(x), act(y)) == algebra.killing(x, y)
