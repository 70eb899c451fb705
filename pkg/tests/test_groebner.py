"""Buchberger engine and ideal operations."""

import random

import pytest

from lyutab import (Budget, BudgetExceededError, Ideal, PolyRing, buchberger,
                    frobenius_power, ideal_colon, ideal_intersect,
                    ideal_member, ideal_product, ideal_sum, krull_dimension,
                    normal_form)
from lyutab.groebner import (ideal_colon_elimination,
                             ideal_intersect_elimination, ideal_intersect_many,
                             interreduce)

from conftest import SEED, random_monomial_ideal, random_poly


@pytest.fixture
def R5():
    return PolyRing(5, ["x", "y"])


def gens_str(I):
    return sorted(str(g) for g in I.generators)


def gb_str(I):
    return [str(g) for g in I.groebner_basis().elements]


def test_buchberger_monomial_generators(R5):
    x, y = R5.gens()
    assert set(gb_str(Ideal(R5, (x, y)))) == {"x", "y"}


def test_buchberger_no_surviving_spair(R5):
    x, y = R5.gens()
    assert set(gb_str(Ideal(R5, (x * x, x * y)))) == {"x^2", "x*y"}


def test_buchberger_confluence_and_membership():
    R7 = PolyRing(7, ["x", "y"])
    x, y = R7.gens()
    I = Ideal(R7, (y - x * x, x * y - R7.one()))
    gb = I.groebner_basis()
    gb.verify_confluence()
    assert all(gb.reduces_to_zero(g) for g in I.generators)
    # membership certificates both ways: each basis element is an explicit
    # combination of the generators
    from lyutab.modules import FreeModule, ModuleElement, TaggedSubmodule
    F = FreeModule(R7, 1, (0,))
    tagged = TaggedSubmodule([ModuleElement(F, {0: g}) for g in I.generators], F)
    for h in gb.elements:
        coords = tagged.express(ModuleElement(F, {0: h}))
        assert coords is not None
        rebuilt = R7.zero()
        per = {}
        for (pos, m), c in coords.items():
            per.setdefault(pos, {})[m] = c
        for pos, d in per.items():
            rebuilt = rebuilt + R7.from_dict(d) * I.generators[pos]
        assert rebuilt == h


def test_buchberger_deterministic(R5):
    x, y = R5.gens()
    a = gb_str(Ideal(R5, (x * x + y * y, x * y)))
    b = gb_str(Ideal(R5, (x * x + y * y, x * y)))
    assert a == b


def test_normal_form_examples(R5):
    x, y = R5.gens()
    G = Ideal(R5, (x,)).groebner_basis()
    assert str(normal_form(x * x + y, G)) == "y"
    I = Ideal(R5, (x * x + y, x * y * y))
    gb = I.groebner_basis()
    for g in I.generators:
        assert normal_form(g, gb).is_zero()


def test_normal_form_idempotent(R5):
    rnd = random.Random(SEED)
    I = Ideal(R5, (R5.gens()[0] ** 2, R5.gens()[0] * R5.gens()[1]))
    gb = I.groebner_basis()
    for _ in range(50):
        f = random_poly(R5, rnd, terms=4, maxdeg=4)
        nf = normal_form(f, gb)
        assert normal_form(nf, gb) == nf
        # remainder is fully reduced
        leads = gb.lead_monomials()
        for m, _ in nf.terms:
            assert not any(all(a <= b for a, b in zip(l, m)) for l in leads)


def test_membership_examples(R5):
    x, y = R5.gens()
    assert ideal_member(x * y, Ideal(R5, (x,)))
    R3 = PolyRing(3, ["x", "y"])
    x3, y3 = R3.gens()
    assert not ideal_member(x3 + y3, Ideal(R3, (x3 * x3, y3 * y3)))
    assert ideal_member((x3 + y3) ** 3, Ideal(R3, (x3 ** 3, y3 ** 3)))


def test_colon_examples(R5):
    x, y = R5.gens()
    assert gens_str(ideal_colon(Ideal(R5, (x * x * y,)), Ideal(R5, (y,)))) == ["x^2"]
    assert gens_str(ideal_colon(Ideal(R5, (x * x * y * y,)), Ideal(R5, (x * y,)))) == ["x*y"]
    R2 = PolyRing(2, ["x", "y"])
    x2, y2 = R2.gens()
    assert gens_str(ideal_colon(Ideal(R2, (x2 * x2 + y2 * y2,)),
                                Ideal(R2, (x2 + y2,)))) == ["x + y"]
    with pytest.raises(ValueError):
        ideal_colon(Ideal(R5, (x,)), Ideal(R5, ()))


def test_intersect_examples(R5):
    x, y = R5.gens()
    assert gens_str(ideal_intersect(Ideal(R5, (x,)), Ideal(R5, (y,)))) == ["x*y"]
    I = Ideal(R5, (x, y))
    assert ideal_intersect(I, I).same_ideal(I)
    R4 = PolyRing(5, ["x1", "x2", "x3", "x4"])
    a, b, c, d = R4.gens()
    got = ideal_intersect(Ideal(R4, (a, b)), Ideal(R4, (c, d)))
    assert gens_str(got) == ["x1*x3", "x1*x4", "x2*x3", "x2*x4"]


def test_intersect_many(R5):
    x, y = R5.gens()
    got = ideal_intersect_many([Ideal(R5, (x,)), Ideal(R5, (y,)),
                                Ideal(R5, (x + y,))])
    expect = ideal_intersect(ideal_intersect(Ideal(R5, (x,)), Ideal(R5, (y,))),
                             Ideal(R5, (x + y,)))
    assert got.same_ideal(expect)


def test_syzygy_route_matches_elimination():
    rnd = random.Random(SEED)
    for trial in range(10):
        I = random_monomial_ideal(5, 4, rnd)
        J = random_monomial_ideal(5, 4, rnd)
        assert ideal_intersect(I, J).same_ideal(ideal_intersect_elimination(I, J))
        assert ideal_colon(I, J).same_ideal(ideal_colon_elimination(I, J))


def test_colon_correctness_sampling(R5):
    rnd = random.Random(SEED)
    for _ in range(8):
        I = random_monomial_ideal(5, 2, rnd, gens=2)
        J = random_monomial_ideal(5, 2, rnd, gens=2)
        C = ideal_colon(I, J)
        for f in C.generators:
            for g in J.generators:
                assert ideal_member(f * g, I)


def test_intersect_correctness_sampling(R5):
    rnd = random.Random(SEED)
    for _ in range(8):
        I = random_monomial_ideal(5, 3, rnd, gens=2)
        J = random_monomial_ideal(5, 3, rnd, gens=2)
        M = ideal_intersect(I, J)
        for h in M.generators:
            assert ideal_member(h, I) and ideal_member(h, J)
        for f in I.generators:
            for g in J.generators:
                assert ideal_member(f * g, M)


def test_sum_product_examples(R5):
    x, y = R5.gens()
    assert set(gens_str(ideal_sum(Ideal(R5, (x,)), Ideal(R5, (y,))))) == {"x", "y"}
    assert gens_str(ideal_product(Ideal(R5, (x,)), Ideal(R5, (y,)))) == ["x*y"]
    unit = ideal_sum(Ideal(R5, (x,)), Ideal(R5, (R5.one(),)))
    assert gens_str(unit) == ["1"]


def test_frobenius_power_examples():
    R2 = PolyRing(2, ["x", "y"])
    x, y = R2.gens()
    assert gens_str(frobenius_power(Ideal(R2, (x, y)), 2)) == ["x^4", "y^4"]
    R3 = PolyRing(3, ["x", "y", "z"])
    x3, y3, z3 = R3.gens()
    got = frobenius_power(Ideal(R3, (x3 + y3, z3)), 2)
    assert set(gens_str(got)) == {"x^9 + y^9", "z^9"}
    with pytest.raises(ValueError):
        frobenius_power(Ideal(R2, (x,)), 0)


def test_frobenius_power_generating_set_independence():
    rnd = random.Random(SEED)
    count = 0
    while count < 20:
        p = rnd.choice((2, 3, 5))
        n = rnd.randint(2, 4)
        ring = PolyRing(p, [f"x{i}" for i in range(n)])
        gens = [random_poly(ring, rnd, terms=2, maxdeg=2) for _ in range(2)]
        gens = [g for g in gens if g]
        if not gens:
            continue
        I = Ideal(ring, gens)
        # same ideal, different generators: g1, g1 + g2, ...
        alt = [gens[0]]
        for g in gens[1:]:
            alt.append(g + gens[0])
        J = Ideal(ring, alt)
        assert I.same_ideal(J)
        e = rnd.choice((1, 2))
        assert frobenius_power(I, e).same_ideal(frobenius_power(J, e))
        count += 1


def test_krull_dimension_examples(R5):
    x, y = R5.gens()
    assert krull_dimension(Ideal(R5, (x * y,))) == 1
    R4 = PolyRing(5, ["x1", "x2", "x3", "x4"])
    a, b, c, d = R4.gens()
    I = Ideal(R4, (a * c, a * d, b * c, b * d))
    assert krull_dimension(I) == 2
    assert krull_dimension(Ideal(R5, ())) == 2
    assert krull_dimension(Ideal(R5, (R5.one(),))) == -1


def test_krull_dimension_equals_initial_ideal():
    rnd = random.Random(SEED)
    ring = PolyRing(5, ["x", "y", "z"])
    for _ in range(10):
        gens = [random_poly(ring, rnd, terms=2, maxdeg=3) for _ in range(2)]
        gens = [g for g in gens if g]
        if not gens:
            continue
        I = Ideal(ring, gens)
        gb = I.groebner_basis()
        if any(g.degree() == 0 for g in gb.elements):
            continue
        lt = Ideal(ring, [ring.monomial(g.lead_monomial()) for g in gb.elements])
        assert krull_dimension(I) == krull_dimension(lt)


def test_gb_cached_and_shared(R5):
    x, y = R5.gens()
    I = Ideal(R5, (x * x + y * y, x * y))
    assert I.groebner_basis() is I.groebner_basis()


def test_budget_exceeded():
    ring = PolyRing(7, ["x", "y", "z"])
    x, y, z = ring.gens()
    I = Ideal(ring, (x * x - y * z, y * y - x * z, z * z - x * y))
    with pytest.raises(BudgetExceededError):
        I.groebner_basis(Budget(1))


def test_interreduce_preserves_ideal(R5):
    x, y = R5.gens()
    out = interreduce([x ** 5, x ** 5 + y ** 5], R5)
    J = Ideal(R5, out)
    assert J.same_ideal(Ideal(R5, (x ** 5, y ** 5))), [str(g) for g in out]


def test_zero_and_unit_ideals(R5):
    x, _ = R5.gens()
    zero = Ideal(R5, ())
    assert zero.is_zero_ideal() and zero.is_proper()
    unit = Ideal(R5, (R5.constant(3),))
    assert unit.is_unit_ideal()
    assert gb_str(unit) == ["1"]
    assert not ideal_member(x, zero)
