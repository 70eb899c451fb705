"""F-purity, splitting ideals, splitting prime, compatibility, non-CM ideal."""

import random

import pytest

from lyutab import (Ideal, NotFPureError, PolyRing, fedder_is_fpure,
                    is_compatible, maximal_ideal, ncm_ideal, sdim,
                    splitting_ideal, splitting_prime, stanley_reisner_ideal)
from lyutab.groebner import ideal_member

from conftest import SEED, SR_FIXTURES, random_complex


@pytest.fixture
def R2():
    return PolyRing(2, ["x", "y"])


def test_fedder_examples(R2):
    x, y = R2.gens()
    assert fedder_is_fpure(Ideal(R2, (x * y,)))
    assert not fedder_is_fpure(Ideal(R2, (x * x,)))
    R7 = PolyRing(7, ["x", "y", "z"])
    x7, y7, z7 = R7.gens()
    assert fedder_is_fpure(Ideal(R7, (x7 ** 3 + y7 ** 3 + z7 ** 3,)))
    # the same cubic cone is not F-pure one characteristic down
    R5 = PolyRing(5, ["x", "y", "z"])
    x5, y5, z5 = R5.gens()
    assert not fedder_is_fpure(Ideal(R5, (x5 ** 3 + y5 ** 3 + z5 ** 3,)))
    # the regular ring is F-pure
    assert fedder_is_fpure(Ideal(R2, ()))


def test_fedder_requires_homogeneous_proper(R2):
    x, y = R2.gens()
    with pytest.raises(ValueError):
        fedder_is_fpure(Ideal(R2, (x + R2.one(),)))
    with pytest.raises(ValueError):
        fedder_is_fpure(Ideal(R2, (R2.one(),)))


def test_fedder_generator_invariance(R2):
    rnd = random.Random(SEED)
    x, y = R2.gens()
    base = [x * y, x ** 3]
    I = Ideal(R2, base)
    verdict = fedder_is_fpure(I)
    for _ in range(5):
        # regenerate with degree-matched multipliers to stay homogeneous
        alt = [base[0], base[1] + base[0] * rnd.choice((x, y))]
        J = Ideal(R2, alt)
        assert I.same_ideal(J)
        assert fedder_is_fpure(J) == verdict


def test_squarefree_monomial_ideals_are_fpure():
    rnd = random.Random(SEED)
    for p in (2, 3, 5):
        for _ in range(6):
            delta = random_complex(rnd, vertices=4, facets=3, max_size=3)
            I = stanley_reisner_ideal(delta, p)
            if I.is_zero_ideal():
                continue
            assert fedder_is_fpure(I)


def test_splitting_ideal_examples(R2):
    x, y = R2.gens()
    I = Ideal(R2, (x * y,))
    s1 = splitting_ideal(I, 1)
    assert s1.same_ideal(Ideal(R2, (x, y)))
    # zero ideal: chain of Frobenius powers of m
    s0 = splitting_ideal(Ideal(R2, ()), 2)
    assert sorted(str(g) for g in s0.generators) == ["x^4", "y^4"]
    with pytest.raises(ValueError):
        splitting_ideal(I, 0)


def test_splitting_chain_monotone_and_bounded():
    for name in ("two_disjoint_edges", "hollow_triangle"):
        I = stanley_reisner_ideal(SR_FIXTURES[name], 2)
        m = maximal_ideal(I.ring)
        prev = None
        for e in (1, 2):
            Ie = splitting_ideal(I, e)
            assert Ie.contains_ideal(I)           # I <= I_e
            assert m.contains_ideal(Ie)           # I_e <= m
            if prev is not None:
                assert prev.contains_ideal(Ie)    # descending
            prev = Ie


def test_splitting_prime_examples(R2):
    x, y = R2.gens()
    data = splitting_prime(Ideal(R2, (x * y,)))
    assert data.certified and data.stabilized_at == 1
    assert data.candidate_prime.same_ideal(Ideal(R2, (x, y)))
    assert data.sdim == 0

    # the regular special case
    data0 = splitting_prime(Ideal(R2, ()))
    assert data0.certified and data0.candidate_prime.is_zero_ideal()
    assert data0.sdim == 2

    # two disjoint edges: stabilizes quickly, candidate is compatible
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    d2 = splitting_prime(I, e_max=2)
    assert d2.certified and d2.stabilized_at <= 2
    assert is_compatible(I, d2.candidate_prime).compatible


def test_splitting_prime_requires_fpure(R2):
    x, _ = R2.gens()
    with pytest.raises(NotFPureError):
        splitting_prime(Ideal(R2, (x * x,)))


def test_sdim_examples(R2):
    x, y = R2.gens()
    assert sdim(Ideal(R2, ())).value == 2
    res = sdim(Ideal(R2, (x * y,)))
    assert res.value == 0 and res.certified
    # a strongly F-regular example: a coordinate subspace prime
    R4 = PolyRing(5, ["x1", "x2", "x3", "x4"])
    a, b, _, _ = R4.gens()
    prime = Ideal(R4, (a, b))
    res2 = sdim(prime)
    assert res2.value == 2  # = dim R: the splitting prime is zero
    assert res2.data.candidate_prime.same_ideal(prime)


def test_is_compatible_examples(R2):
    x, y = R2.gens()
    I = Ideal(R2, (x * y,))
    assert is_compatible(I, Ideal(R2, (x,))).compatible
    res = is_compatible(I, Ideal(R2, (x + y,)))
    assert not res.compatible and res.definitive
    assert is_compatible(I, maximal_ideal(R2)).compatible


def test_compatibility_of_splitting_primes_on_fixtures():
    for name, p in (("two_disjoint_edges", 2), ("hollow_triangle", 3),
                    ("three_points", 2)):
        I = stanley_reisner_ideal(SR_FIXTURES[name], p)
        data = splitting_prime(I, e_max=3)
        assert data.certified
        assert is_compatible(I, data.candidate_prime, e_max=3).compatible


def test_associated_prime_compatibility_spot_check():
    # two planes: the monomial associated primes of the Ext modules are the
    # two facet primes and the irrelevant ideal; all must be compatible
    ring = PolyRing(2, ["x1", "x2", "x3", "x4"])
    a, b, c, d = ring.gens()
    I = Ideal(ring, (a * c, a * d, b * c, b * d))
    for prime in (Ideal(ring, (a, b)), Ideal(ring, (c, d)),
                  Ideal(ring, (a, b, c, d))):
        assert is_compatible(I, prime).compatible


def test_ncm_examples():
    R3 = PolyRing(5, ["x", "y", "z"])
    x, y, z = R3.gens()
    cm = ncm_ideal(Ideal(R3, (x, y)), assume_equidimensional=True)
    assert cm.is_unit_ideal()

    ring = PolyRing(2, ["x1", "x2", "x3", "x4"])
    a, b, c, d = ring.gens()
    I = Ideal(ring, (a * c, a * d, b * c, b * d))
    J = ncm_ideal(I, assume_equidimensional=True)
    assert J.same_ideal(maximal_ideal(ring))
    # the non-CM ideal is compatible on F-pure equidimensional input
    assert is_compatible(I, J).compatible


def test_ncm_requires_assertion(R2):
    x, y = R2.gens()
    with pytest.raises(ValueError):
        ncm_ideal(Ideal(R2, (x * y,)))
