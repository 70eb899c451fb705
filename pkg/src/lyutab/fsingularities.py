"""F-purity and Frobenius-splitting diagnostics for homogeneous quotients.

All Hom-level definitions are translated to colon-ideal form through the
trace generator of Hom_S(F^e_* S, S): for homogeneous I inside the
irrelevant maximal ideal m,

* S/I is F-pure  iff  (I^[p] : I) is not contained in m^[p];
* the preimage of the e-th splitting ideal is (m^[q] : (I^[q] : I)) + I
  with q = p^e, because phi(F^e_*(s h)) lies in an ideal a for every s
  exactly when h lies in a^[q];
* an ideal J >= I is compatible at level e  iff  (I^[q] : I) <= (J^[q] : J).

These computations are local definitions evaluated at m; for homogeneous
input they agree with the localization, so the package restricts inputs to
homogeneous ideals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import Budget, NotFPureError
from .fieldpoly import PolyRing
from .groebner import (Ideal, frobenius_power, ideal_colon, ideal_intersect,
                       ideal_sum, krull_dimension)
from .homological import ExtCalculator
from .modules import annihilator


def maximal_ideal(ring: PolyRing) -> Ideal:
    return Ideal(ring, ring.gens())


def _require_homogeneous_proper(I: Ideal) -> None:
    if not I.is_homogeneous():
        raise ValueError("a homogeneous ideal is required")
    if I.generators and I.is_unit_ideal():
        raise ValueError("a proper ideal is required")


def _colon_allowing_zero(A: Ideal, B: Ideal, budget, reduced: bool = True) -> Ideal:
    # (A : 0) = (1) by convention; groebner.ideal_colon rejects zero divisors
    if not B.generators:
        return Ideal(A.ring, (A.ring.one(),))
    return ideal_colon(A, B, budget, reduced=reduced)


def fedder_is_fpure(I: Ideal, budget: Budget | None = None) -> bool:
    """F-purity of S/I at the irrelevant maximal ideal.

    True iff some generator of (I^[p] : I) has a term with every exponent
    below p, i.e. a nonzero normal form against (x_1^p, ..., x_n^p).  The
    zero ideal (a regular ring) is F-pure.
    """
    _require_homogeneous_proper(I)
    if not I.generators:
        return True
    cached = I._cache.get("fpure")
    if cached is not None:
        return cached
    p = I.ring.p

    def escapes(f):
        return any(all(e < p for e in m) for m, _ in f.terms)

    # sufficient certificate first: the product of the (p-1)-st powers of
    # the generators always multiplies I into I^[p], so a term of it with
    # every exponent below p already exhibits a splitting
    product = I.ring.one()
    for g in I.generators:
        product = product * g ** (p - 1)
        if len(product.terms) > 200_000:
            product = None
            break
    if product is not None and escapes(product):
        I._cache["fpure"] = True
        return True
    # full criterion: raw Groebner generators of the colon suffice
    colon = _colon_allowing_zero(frobenius_power(I, 1), I, budget, reduced=False)
    verdict = any(escapes(g) for g in colon.generators)
    I._cache["fpure"] = verdict
    return verdict


def splitting_ideal(I: Ideal, e: int, budget: Budget | None = None) -> Ideal:
    """Preimage in S of the e-th splitting ideal of R = S/I.

    Computed as (m^[q] : (I^[q] : I)) + I with q = p^e.  For the zero
    ideal the colon degenerates to m^[q] itself.
    """
    if e < 1:
        raise ValueError("splitting ideals are indexed by e >= 1")
    _require_homogeneous_proper(I)
    ring = I.ring
    mq = frobenius_power(maximal_ideal(ring), e)
    if not I.generators:
        return mq
    inner = _colon_allowing_zero(frobenius_power(I, e), I, budget)
    outer = ideal_colon(mq, inner, budget)
    return ideal_sum(outer, I)


@dataclass(frozen=True)
class SplittingData:
    """The chain of splitting ideals and its stabilization record.

    `chain` holds the preimages of I_1 >= I_2 >= ...; `stabilized_at` is
    the first index e with I_e = I_{e+1} (None if the chain did not settle
    within e_max, in which case the result is uncertified).  The regular
    case I = 0 is special-cased: its splitting prime is 0 with sdim = n,
    certified, and the chain is left empty.
    """

    chain: tuple
    stabilized_at: int | None
    candidate_prime: Ideal
    sdim: int | None
    e_max: int
    certified: bool

    def __repr__(self):
        state = f"stabilized at e={self.stabilized_at}" if self.certified else "UNCERTIFIED"
        return f"SplittingData(len={len(self.chain)}, {state}, sdim={self.sdim})"


def splitting_prime(I: Ideal, e_max: int = 5,
                    budget: Budget | None = None) -> SplittingData:
    """Candidate splitting prime: the stabilized splitting-ideal chain.

    Requires F-purity (otherwise the chain is not proper and the notion
    carries no content).  Primality of the stabilized candidate is a
    theorem for F-pure quotients and is trusted rather than re-verified:
    primary decomposition is outside this package.
    """
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    if not fedder_is_fpure(I, budget):
        raise NotFPureError(
            "splitting primes are only defined here for F-pure quotients")
    ring = I.ring
    if all(g.degree() == 1 for g in I.groebner_basis(budget).elements):
        # linear defining ideal: the quotient is a polynomial ring, hence
        # strongly F-regular with zero splitting prime; the raw chain
        # never stabilizes in S (its tails are Frobenius powers of the
        # complementary variables), so certify directly
        candidate = Ideal(ring, I.groebner_basis(budget).elements)
        return SplittingData(chain=(), stabilized_at=None,
                             candidate_prime=candidate,
                             sdim=krull_dimension(I, budget),
                             e_max=e_max, certified=True)
    chain: list[Ideal] = []
    stabilized_at = None
    for e in range(1, e_max + 1):
        Ie = splitting_ideal(I, e, budget)
        if chain:
            prev = chain[-1]
            if not prev.contains_ideal(Ie, budget):
                raise AssertionError("splitting-ideal chain is not descending")
        if not Ie.contains_ideal(I, budget):
            raise AssertionError("splitting ideal does not contain I")
        chain.append(Ie)
        if len(chain) >= 2 and chain[-2].same_ideal(chain[-1], budget):
            stabilized_at = e - 1
            break
    candidate = chain[-1]
    certified = stabilized_at is not None
    sd = krull_dimension(candidate, budget)
    return SplittingData(chain=tuple(chain), stabilized_at=stabilized_at,
                         candidate_prime=candidate, sdim=sd,
                         e_max=e_max, certified=certified)


@dataclass(frozen=True)
class SdimResult:
    value: int
    certified: bool
    data: SplittingData


def sdim(I: Ideal, e_max: int = 5, budget: Budget | None = None) -> SdimResult:
    """Splitting dimension: dim of S modulo the stabilized candidate prime."""
    data = splitting_prime(I, e_max, budget)
    return SdimResult(value=data.sdim, certified=data.certified, data=data)


@dataclass(frozen=True)
class CompatibilityResult:
    compatible: bool
    e_checked: int
    definitive: bool

    def __bool__(self):
        return self.compatible


def is_compatible(I: Ideal, J: Ideal, e_max: int = 5,
                  budget: Budget | None = None,
                  require_containment: bool = False) -> CompatibilityResult:
    """Compatibility of the candidate J with the Frobenius trace data of I.

    Tested level by level as (I^[q] : I) <= (J^[q] : J).  A failure at
    some finite level is a definitive negative; success is certified only
    for the levels actually checked, since no stabilization bound is
    available.  When I <= J the verdict is the compatibility of the ideal
    J/I of R = S/I; the containment test itself is performed regardless
    and is enforced only on request, since the criterion is meaningful
    (and the negative answer reliable) without it.
    """
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    if I.ring != J.ring:
        raise ValueError("ideals in different rings")
    if not I.is_homogeneous() or not J.is_homogeneous():
        raise ValueError("homogeneous ideals are required")
    if require_containment and not J.contains_ideal(I, budget):
        raise ValueError("the candidate ideal must contain I")
    for e in range(1, e_max + 1):
        A = _colon_allowing_zero(frobenius_power(I, e), I, budget, reduced=False) \
            if I.generators else Ideal(I.ring, (I.ring.one(),))
        B = _colon_allowing_zero(frobenius_power(J, e), J, budget) \
            if J.generators else Ideal(J.ring, (J.ring.one(),))
        if not B.contains_ideal(A, budget):
            return CompatibilityResult(False, e, True)
    return CompatibilityResult(True, e_max, False)


def ncm_ideal(I: Ideal, assume_equidimensional: bool = False,
              budget: Budget | None = None,
              calculator: ExtCalculator | None = None) -> Ideal:
    """Defining ideal of the non-Cohen-Macaulay locus of S/I.

    The intersection of ann Ext^i_S(S/I, S) over all i different from the
    height of I, skipping vanishing Ext modules.  Only meaningful for
    equidimensional quotients; deciding equidimensionality needs primary
    decomposition, which this package does not do, so the caller must
    assert it explicitly.
    """
    if not assume_equidimensional:
        raise ValueError(
            "equidimensionality must be asserted by the caller "
            "(assume_equidimensional=True); it is not verified here")
    _require_homogeneous_proper(I)
    ring = I.ring
    n = ring.n
    height = n - krull_dimension(I, budget)
    calc = calculator or ExtCalculator(I, budget)
    result: Ideal | None = None
    for i in range(n + 1):
        if i == height:
            continue
        E = calc.inner_ext(n - i)
        if E.is_zero(budget):
            continue
        ann = annihilator(E, budget)
        result = ann if result is None else ideal_intersect(result, ann, budget)
    if result is None:
        return Ideal(ring, (ring.one(),))
    return result
