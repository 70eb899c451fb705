"""Shared corpus and random generators for the test suite."""

from __future__ import annotations

import random

import pytest

from lyutab import (Ideal, PolyRing, SimplicialComplex, stanley_reisner_ideal)

SEED = 20250809


@pytest.fixture
def rng():
    return random.Random(SEED)


def random_monomial(rnd, n, maxdeg=3):
    exps = [0] * n
    for _ in range(rnd.randint(0, maxdeg)):
        exps[rnd.randrange(n)] += 1
    return tuple(exps)


def random_poly(ring, rnd, terms=3, maxdeg=3):
    d = {}
    for _ in range(terms):
        m = random_monomial(rnd, ring.n, maxdeg)
        d[m] = (d.get(m, 0) + rnd.randint(1, ring.p - 1)) % ring.p
    return ring.from_dict({m: c for m, c in d.items() if c})


def random_homogeneous_poly(ring, rnd, degree, terms=3):
    from lyutab.sr_oracle import monomials_of_degree
    monos = list(monomials_of_degree(ring.n, degree))
    d = {}
    for _ in range(terms):
        m = rnd.choice(monos)
        d[m] = (d.get(m, 0) + rnd.randint(1, ring.p - 1)) % ring.p
    out = ring.from_dict({m: c for m, c in d.items() if c})
    return out


def random_monomial_ideal(p, n, rnd, gens=3, maxdeg=3):
    ring = PolyRing(p, [f"x{i}" for i in range(1, n + 1)])
    polys = []
    for _ in range(gens):
        m = random_monomial(rnd, n, maxdeg)
        if any(m):
            polys.append(ring.monomial(m))
    if not polys:
        polys = [ring.variable(0)]
    return Ideal(ring, polys)


def random_complex(rnd, vertices=5, facets=3, max_size=3):
    out = []
    for _ in range(facets):
        size = rnd.randint(1, max_size)
        out.append(rnd.sample(range(1, vertices + 1), min(size, vertices)))
    return SimplicialComplex(vertices, out)


def random_squarefree_ideal(p, n, rnd, facets=3, max_size=3):
    delta = random_complex(rnd, vertices=n, facets=facets, max_size=max_size)
    return stanley_reisner_ideal(delta, p), delta


# The named Stanley-Reisner fixtures used across the checking suites.
SR_FIXTURES = {
    "two_disjoint_edges": SimplicialComplex(4, [[1, 2], [3, 4]]),
    "hollow_triangle": SimplicialComplex(3, [[1, 2], [1, 3], [2, 3]]),
    "hollow_square": SimplicialComplex(4, [[1, 2], [2, 3], [3, 4], [1, 4]]),
    "hollow_tetrahedron": SimplicialComplex(
        4, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]),
    "triangle_plus_edge": SimplicialComplex(
        5, [[1, 2], [1, 3], [2, 3], [4, 5]]),
    "three_points": SimplicialComplex(3, [[1], [2], [3]]),
}

# Fixtures whose projective scheme is Cohen-Macaulay and equidimensional
# (component-wise smooth or nodal Stanley-Reisner curves and surfaces).
CM_PROJECTIVE_FIXTURES = ("two_disjoint_edges", "hollow_triangle",
                          "hollow_square", "hollow_tetrahedron",
                          "triangle_plus_edge")
