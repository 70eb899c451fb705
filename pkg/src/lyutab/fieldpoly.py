"""Exact arithmetic in F_p and in the standard graded ring F_p[x_1,...,x_n].

Monomials are exponent tuples of fixed length n.  Polynomials are immutable
sparse term lists kept strictly descending in the ambient monomial order,
with coefficients normalized to [1, p).  All variables have degree one; the
grading is fixed at ring construction.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Sequence

from .errors import ExponentBoundError, ParseError, RingMismatchError

Monomial = tuple  # exponent tuple, length = ring.n

# Frobenius operations accept p^e up to this cap and refuse to build
# exponents beyond MAX_EXPONENT; exceeding either is a hard error rather
# than a silent wraparound.
MAX_FROBENIUS_POWER = 1 << 20
MAX_EXPONENT = 1 << 21

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for every p < 3.3e24."""
    if p < 2:
        return False
    for q in _SMALL_PRIMES:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The prime field F_p for a prime 2 <= p < 2^31."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not (2 <= p < 2**31):
            raise ValueError(f"characteristic must satisfy 2 <= p < 2^31, got {p}")
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p

    def normalize(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inversion of 0 in a prime field")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


# ----------------------------------------------------------------------
# Monomial orders.  key(m) is a tuple that compares the way the order
# does (bigger key = greater monomial); negkey(m) compares the opposite
# way and is what min-heaps store.

def _degrevlex_key(m):
    return (sum(m), tuple(-e for e in reversed(m)))


def _degrevlex_negkey(m):
    return (-sum(m), tuple(reversed(m)))


def _lex_key(m):
    return m


def _lex_negkey(m):
    return tuple(-e for e in m)


def _elim_key(m):
    # Block order eliminating the last variable: compare its exponent
    # first, degrevlex on the remaining block.
    head = m[:-1]
    return (m[-1], sum(head), tuple(-e for e in reversed(head)))


def _elim_negkey(m):
    head = m[:-1]
    return (-m[-1], -sum(head), tuple(reversed(head)))


_ORDERS: dict[str, tuple[Callable, Callable]] = {
    "degrevlex": (_degrevlex_key, _degrevlex_negkey),
    "lex": (_lex_key, _lex_negkey),
    "elim_last": (_elim_key, _elim_negkey),
}



_NAME_RE = re.compile(r"[A-Za-z_@~][A-Za-z_0-9]*")


def monomial_compare(a: Monomial, b: Monomial, order: str = "degrevlex") -> int:
    """Compare two exponent tuples; returns -1 (LT), 0 (EQ) or 1 (GT)."""
    if len(a) != len(b):
        raise ValueError("monomials have different lengths")
    if order not in _ORDERS:
        raise ValueError(f"unknown monomial order {order!r}")
    ka, kb = _ORDERS[order][0](a), _ORDERS[order][0](b)
    return (ka > kb) - (ka < kb)


class PolyRing:
    """S = F_p[x_1,...,x_n] with the standard grading and a fixed order."""

    __slots__ = ("field", "names", "n", "order", "key", "negkey", "_gens")

    def __init__(self, p: int | PrimeField, names: Sequence[str],
                 order: str = "degrevlex"):
        self.field = p if isinstance(p, PrimeField) else PrimeField(p)
        names = tuple(names)
        if not names:
            raise ValueError("a polynomial ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be distinct")
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise ValueError(f"invalid variable name {name!r}")
        if order not in _ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.names = names
        self.n = len(names)
        self.order = order
        self.key, self.negkey = _ORDERS[order]
        self._gens = None

    # -- identity ------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.field == self.field
                and other.names == self.names and other.order == self.order)

    def __hash__(self):
        return hash((self.field.p, self.names, self.order))

    def __repr__(self):
        return f"PolyRing(p={self.field.p}, names={self.names}, order={self.order!r})"

    @property
    def p(self) -> int:
        return self.field.p

    # -- constructors ---------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, (((0,) * self.n, c),))

    def monomial(self, exponents: Sequence[int], coeff: int = 1) -> "Polynomial":
        exps = tuple(int(e) for e in exponents)
        if len(exps) != self.n or any(e < 0 for e in exps):
            raise ValueError("bad exponent vector")
        c = coeff % self.p
        if c == 0:
            return self.zero()
        return Polynomial(self, ((exps, c),))

    def variable(self, i: int) -> "Polynomial":
        exps = [0] * self.n
        exps[i] = 1
        return self.monomial(exps)

    def gens(self) -> tuple["Polynomial", ...]:
        if self._gens is None:
            self._gens = tuple(self.variable(i) for i in range(self.n))
        return self._gens

    def from_dict(self, d: dict) -> "Polynomial":
        """Canonicalize a {monomial: coeff} dict into a Polynomial."""
        p = self.p
        items = [(m, c % p) for m, c in d.items() if c % p]
        items.sort(key=lambda t: self.key(t[0]), reverse=True)
        return Polynomial(self, tuple(items))

    def extended(self, name: str = "@t") -> "PolyRing":
        """Ring with one auxiliary variable appended last, under the block
        order that eliminates it.  Internal use (colon/intersection)."""
        if name in self.names:
            raise ValueError(f"auxiliary name {name!r} collides")
        return PolyRing(self.field, self.names + (name,), order="elim_last")

    def lift(self, f: "Polynomial", target: "PolyRing") -> "Polynomial":
        """Reinterpret f in `target`, which extends self by trailing vars."""
        pad = (0,) * (target.n - self.n)
        return target.from_dict({m + pad: c for m, c in f.terms})

    def project(self, f: "Polynomial", source: "PolyRing") -> "Polynomial":
        """Drop trailing auxiliary variables; their exponents must be 0."""
        out = {}
        for m, c in f.terms:
            head, tail = m[: self.n], m[self.n:]
            if any(tail):
                raise ValueError("auxiliary variable leaked into result")
            out[head] = c
        return self.from_dict(out)

    # -- parsing / printing ---------------------------------------------
    def parse(self, text: str) -> "Polynomial":
        """Parse the documented polynomial grammar.

        Terms joined by + / -, integer coefficients, powers as x^3,
        products by juxtaposition or '*'.  Variable tokens are matched
        greedily against the declared names (longest match wins).
        """
        return _parse_polynomial(self, text)

    def format_monomial(self, m: Monomial) -> str:
        parts = [
            self.names[i] if e == 1 else f"{self.names[i]}^{e}"
            for i, e in enumerate(m) if e
        ]
        return "*".join(parts)


class Polynomial:
    """Immutable sparse polynomial: term list strictly descending."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        d = sum(self.terms[0][0])
        return all(sum(m) == d for m, _ in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    # -- leading data -----------------------------------------------------
    def lead_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    def lead_coeff(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        c = self.terms[0][1]
        if c == 1:
            return self
        inv = self.ring.field.inv(c)
        p = self.ring.p
        return Polynomial(self.ring,
                          tuple((m, c2 * inv % p) for m, c2 in self.terms))

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise RingMismatchError("operands live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        d = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms:
            v = (d.get(m, 0) + c) % p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return self.ring.from_dict(d)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        d = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms:
            v = (d.get(m, 0) - c) % p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return self.ring.from_dict(d)

    def __neg__(self) -> "Polynomial":
        p = self.ring.p
        return Polynomial(self.ring, tuple((m, p - c) for m, c in self.terms))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        p = self.ring.p
        out: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    del out[m]
        return self.ring.from_dict(out)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((m, c1 * c % p) for m, c1 in self.terms))

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    # -- value semantics ---------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Polynomial) and other.ring == self.ring
                and other.terms == self.terms)

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = self.ring.format_monomial(m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self} over F_{self.ring.p}>"


# ----------------------------------------------------------------------
# Spec-level operations.

def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    """Exact add/sub/mul with canonical term order restored."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def frobenius_pow(f: Polynomial, e: int) -> Polynomial:
    """f^(p^e), computed termwise: Frobenius is a ring map over F_p.

    Coefficients are fixed (Fermat), so each term c*x^a maps to c*x^(q*a)
    with q = p^e.  Exponents are bounded by MAX_EXPONENT.
    """
    if e < 1:
        raise ValueError("Frobenius exponent e must be >= 1")
    q = f.ring.p ** e
    if q > MAX_FROBENIUS_POWER:
        raise ExponentBoundError(
            f"p^e = {q} exceeds the supported cap {MAX_FROBENIUS_POWER}")
    terms = []
    for m, c in f.terms:
        scaled = tuple(a * q for a in m)
        if any(a > MAX_EXPONENT for a in scaled):
            raise ExponentBoundError(
                f"an exponent of f^[{q}] exceeds the cap {MAX_EXPONENT}")
        terms.append((scaled, c))
    return f.ring.from_dict(dict(terms))


# ----------------------------------------------------------------------
# Parser.

_TOKEN_INT = re.compile(r"\d+")


def _parse_polynomial(ring: PolyRing, text: str) -> Polynomial:
    names = sorted(ring.names, key=len, reverse=True)
    index = {name: i for i, name in enumerate(ring.names)}
    p = ring.p
    pos = 0
    length = len(text)
    acc: dict = {}

    def skip_ws():
        nonlocal pos
        while pos < length and text[pos] in " \t":
            pos += 1

    def fail(msg):
        raise ParseError(f"{msg} (at offset {pos} in {text!r})")

    skip_ws()
    if pos == length:
        fail("empty polynomial")
    first = True
    while pos < length:
        sign = 1
        skip_ws()
        if pos < length and text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos += 1
        elif not first:
            fail("expected '+' or '-' between terms")
        skip_ws()
        coeff = 1
        exps = [0] * ring.n
        saw_factor = False
        while True:
            skip_ws()
            if pos >= length or text[pos] in "+-":
                break
            if text[pos] == "*":
                if not saw_factor:
                    fail("unexpected '*'")
                pos += 1
                skip_ws()
            m_int = _TOKEN_INT.match(text, pos)
            if m_int:
                coeff = coeff * int(m_int.group()) % p
                pos = m_int.end()
                saw_factor = True
                continue
            for name in names:
                if text.startswith(name, pos):
                    pos += len(name)
                    power = 1
                    if pos < length and text[pos] == "^":
                        pos += 1
                        m2 = _TOKEN_INT.match(text, pos)
                        if not m2:
                            fail("expected integer exponent after '^'")
                        power = int(m2.group())
                        pos = m2.end()
                    exps[index[name]] += power
                    saw_factor = True
                    break
            else:
                fail(f"unknown symbol {text[pos]!r}")
        if not saw_factor:
            fail("empty term")
        mono = tuple(exps)
        c = (acc.get(mono, 0) + sign * coeff) % p
        if c:
            acc[mono] = c
        else:
            acc.pop(mono, None)
        first = False
    return ring.from_dict(acc)
