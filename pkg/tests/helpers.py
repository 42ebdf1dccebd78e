"""Shared random generators for the test suite (seeded, exact)."""

import random
from fractions import Fraction

from isoclinic import ktype, liealg, oper
from isoclinic.errors import LeadingNotRegularSemisimple, NoRegularElement


def rand_fraction(rng: random.Random, nonzero=False) -> Fraction:
    while True:
        f = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if f or not nonzero:
            return f


def random_oper(algebra, N, m, rng: random.Random, tries=50):
    """Seeded random oper with support in the tilde-A index set and a
    nonzero leading (l = -N) block that is regular semisimple."""
    idx = oper.ell_index(algebra, N, m)
    ell = idx.ell_map()
    for _ in range(tries):
        leading = {ij: rand_fraction(rng) for ij, l in ell.items() if l == -N}
        # at least one nonzero leading coefficient
        if all(not c for c in leading.values()):
            key = sorted(leading)[rng.randrange(len(leading))]
            leading[key] = rand_fraction(rng, nonzero=True)
        lower = {ij: rand_fraction(rng) for ij, l in ell.items() if l > -N}
        try:
            return oper.minimal_oper_form(algebra, N, m, leading, lower)
        except LeadingNotRegularSemisimple:
            continue
    raise AssertionError("could not sample a regular-semisimple leading block")


def random_span_element(algebra, basis, rng: random.Random, nonzero=False):
    while True:
        v = algebra.zero()
        for b in basis:
            v = algebra.add(v, algebra.scale(b, rand_fraction(rng)))
        if not (nonzero and algebra.is_zero_vec(v)):
            return tuple(v)


def random_character(datum, rng: random.Random, force_window_zero=None, tries=50):
    """Seeded random character with regular-semisimple leading component.

    force_window_zero: iterable of exponents i whose component is zeroed.
    """
    algebra, N = datum.algebra, datum.N
    skip = set(force_window_zero or ())
    for _ in range(tries):
        comps = {}
        for i in range(-N, 0):
            if i in skip:
                continue
            basis = datum.t_piece(i)
            if basis:
                comps[i] = random_span_element(algebra, basis, rng)
        lead = datum.t_piece(-N)
        comps[-N] = random_span_element(algebra, lead, rng, nonzero=True)
        try:
            return ktype.make_character(datum, comps)
        except NoRegularElement:
            continue
    raise AssertionError("could not sample a regular-semisimple leading component")
