"""Graded free modules, submodule Groebner bases, syzygies and presentations.

Conventions, fixed once for the whole package:

* `FreeModule(ring, rank, twists)` is the direct sum of S(-a_i) over the
  twist vector (a_1..a_r); generator i is homogeneous of degree a_i, and a
  polynomial entry of degree d in slot i has degree d + a_i.
* Dualizing negates twists: Hom(S(-a), S) = S(a) with generator degree -a.
* The module order is position-over-term: lower slot index wins first,
  the ring's monomial order underneath.  Appending tag slots after the
  original ones therefore yields an order that eliminates the original
  block, which is how syzygies and lifts are computed.

Module terms are `(position, exponent-tuple)` keys in plain dicts; the
Buchberger skeleton mirrors the scalar one in `groebner`, minus the
product criterion (not valid for modules).
"""

from __future__ import annotations

import heapq
import math
from operator import add as _opadd
from typing import Iterable, Sequence

from .errors import Budget, DEFAULT_BUDGET, InternalAssertionError, RingMismatchError
from .fieldpoly import Polynomial, PolyRing
from .groebner import Ideal, _divides, _lcm, _mul_mono, _sub_mono, _support_mask, interreduce


# ----------------------------------------------------------------------
# Public graded types.

class FreeModule:
    """A twisted graded free module over a polynomial ring."""

    __slots__ = ("ring", "rank", "twists")

    def __init__(self, ring: PolyRing, rank: int, twists: Sequence[int] | None = None):
        if rank < 0:
            raise ValueError("rank must be non-negative")
        twists = tuple(twists) if twists is not None else (0,) * rank
        if len(twists) != rank:
            raise ValueError("twist vector length must equal rank")
        self.ring = ring
        self.rank = rank
        self.twists = twists

    def dual(self) -> "FreeModule":
        return FreeModule(self.ring, self.rank, tuple(-a for a in self.twists))

    def zero_element(self) -> "ModuleElement":
        return ModuleElement(self, {})

    def basis_element(self, i: int) -> "ModuleElement":
        return ModuleElement(self, {i: self.ring.one()})

    def graded_dim(self, d: int) -> int:
        """dim_k of the degree-d piece."""
        n = self.ring.n
        return sum(math.comb(d - a + n - 1, n - 1)
                   for a in self.twists if d - a >= 0)

    def __eq__(self, other):
        return (isinstance(other, FreeModule) and other.ring == self.ring
                and other.twists == self.twists)

    def __hash__(self):
        return hash((self.ring, self.twists))

    def __repr__(self):
        return f"FreeModule(rank={self.rank}, twists={self.twists})"


class ModuleElement:
    """An element of a free module, held sparsely by slot."""

    __slots__ = ("module", "_entries")

    def __init__(self, module: FreeModule, entries):
        if isinstance(entries, dict):
            ent = {i: f for i, f in entries.items() if f}
        else:
            entries = tuple(entries)
            if len(entries) != module.rank:
                raise ValueError("entry vector length must equal rank")
            ent = {i: f for i, f in enumerate(entries) if f}
        for i, f in ent.items():
            if not (0 <= i < module.rank):
                raise ValueError("slot index out of range")
            if f.ring != module.ring:
                raise RingMismatchError("entry in a different ring")
        self.module = module
        self._entries = ent

    @property
    def entries(self) -> tuple:
        zero = self.module.ring.zero()
        return tuple(self._entries.get(i, zero) for i in range(self.module.rank))

    def entry(self, i: int) -> Polynomial:
        return self._entries.get(i, self.module.ring.zero())

    def support(self):
        return sorted(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __bool__(self):
        return bool(self._entries)

    def is_homogeneous(self) -> bool:
        degs = set()
        for i, f in self._entries.items():
            if not f.is_homogeneous():
                return False
            degs.add(f.degree() + self.module.twists[i])
        return len(degs) <= 1

    def degree(self) -> int:
        """Degree of a homogeneous element; raises on zero input."""
        if not self._entries:
            raise ValueError("the zero element has no degree")
        i, f = next(iter(self._entries.items()))
        return f.degree() + self.module.twists[i]

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        if other.module != self.module:
            raise RingMismatchError("elements of different modules")
        ent = dict(self._entries)
        for i, f in other._entries.items():
            g = ent.get(i)
            ent[i] = f if g is None else g + f
        return ModuleElement(self.module, ent)

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        if other.module != self.module:
            raise RingMismatchError("elements of different modules")
        ent = dict(self._entries)
        for i, f in other._entries.items():
            g = ent.get(i)
            ent[i] = -f if g is None else g - f
        return ModuleElement(self.module, ent)

    def scaled(self, f: Polynomial) -> "ModuleElement":
        return ModuleElement(self.module, {i: g * f for i, g in self._entries.items()})

    def __eq__(self, other):
        return (isinstance(other, ModuleElement) and other.module == self.module
                and other._entries == self._entries)

    def __hash__(self):
        return hash((self.module, tuple(sorted(self._entries.items(),
                                               key=lambda t: t[0]))))

    def __repr__(self):
        inner = ", ".join(f"e{i}: {f}" for i, f in sorted(self._entries.items()))
        return f"<({inner})>"


class GradedMatrix:
    """A degree-preserving map between twisted free modules.

    Columns are the images of the source generators; column j must be
    homogeneous of degree source.twists[j].
    """

    __slots__ = ("source", "target", "columns")

    def __init__(self, source: FreeModule, target: FreeModule,
                 columns: Sequence[ModuleElement], check: bool = True):
        columns = tuple(columns)
        if len(columns) != source.rank:
            raise ValueError("column count must equal source rank")
        if check:
            for j, col in enumerate(columns):
                if col.module != target:
                    raise RingMismatchError("column outside the target module")
                if not col.is_homogeneous():
                    raise ValueError(f"column {j} is not homogeneous")
                if col and col.degree() != source.twists[j]:
                    raise ValueError(
                        f"column {j} has degree {col.degree()}, "
                        f"expected {source.twists[j]}")
        self.source = source
        self.target = target
        self.columns = columns

    @staticmethod
    def from_columns(target: FreeModule, columns: Sequence[ModuleElement],
                     check: bool = True) -> "GradedMatrix":
        """Build a matrix whose source twists are the column degrees.

        Zero columns are pruned eagerly; they present nothing.
        """
        cols = [c for c in columns if c]
        src = FreeModule(target.ring, len(cols), tuple(c.degree() for c in cols))
        return GradedMatrix(src, target, cols, check=check)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.columns[j].entry(i)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.columns)

    def apply(self, v: ModuleElement) -> ModuleElement:
        """Image of an element of the source."""
        if v.module != self.source:
            raise RingMismatchError("element outside the source module")
        out = self.target.zero_element()
        for j, f in v._entries.items():
            out = out + self.columns[j].scaled(f)
        return out

    def compose(self, other: "GradedMatrix") -> "GradedMatrix":
        """self o other (apply other first)."""
        if other.target != self.source:
            raise RingMismatchError("matrices do not compose")
        cols = [self.apply(c) for c in other.columns]
        return GradedMatrix(other.source, self.target, cols, check=False)

    def dual(self) -> "GradedMatrix":
        """The transposed map between dual modules (twists negated)."""
        src = self.target.dual()
        tgt = self.source.dual()
        cols = []
        for l in range(self.target.rank):
            ent = {}
            for j in range(self.source.rank):
                f = self.columns[j].entry(l)
                if f:
                    ent[j] = f
            cols.append(ModuleElement(tgt, ent))
        return GradedMatrix(src, tgt, cols, check=False)

    def __repr__(self):
        return (f"GradedMatrix({self.source.rank} -> {self.target.rank}, "
                f"twists {self.source.twists} -> {self.target.twists})")


# ----------------------------------------------------------------------
# Internal vector representation: dict[(pos, mono)] = coeff.

def _to_vec(elem: ModuleElement) -> dict:
    v = {}
    for i, f in elem._entries.items():
        for m, c in f.terms:
            v[(i, m)] = c
    return v


def _from_vec(module: FreeModule, v: dict) -> ModuleElement:
    per_slot: dict = {}
    for (i, m), c in v.items():
        per_slot.setdefault(i, {})[m] = c
    ring = module.ring
    return ModuleElement(module, {i: ring.from_dict(d) for i, d in per_slot.items()})


class _WidthOverflow(Exception):
    """Internal: an exponent does not fit the current packed field width."""


class _Packer:
    """Packs exponent tuples into integers for the reduction hot loops.

    E(m) stacks the exponents in w-bit fields (variable i at shift w*i).
    K(m) is a companion integer whose natural order equals the ring's
    monomial order and which is additive under monomial multiplication,
    so term keys update by plain integer addition during reductions.
    The top bit of each field is a guard: divisibility is one masked
    subtraction, and a guard hit after an addition flags overflow (a
    hard error, never silent wraparound).
    """

    __slots__ = ("n", "w", "order", "mask", "guard", "limit", "degshift")

    def __init__(self, n: int, w: int, order: str):
        self.n = n
        self.w = w
        self.order = order
        self.mask = (1 << w) - 1
        guard = 0
        for i in range(n):
            guard |= 1 << (w * i + w - 1)
        self.guard = guard
        self.limit = 1 << (w - 1)
        self.degshift = w * n

    def pack(self, m) -> tuple:
        E = 0
        deg = 0
        w = self.w
        limit = self.limit
        for i, e in enumerate(m):
            if e >= limit:
                raise _WidthOverflow
            E |= e << (w * i)
            deg += e
        return E, self.key(E, deg)

    def key(self, E: int, deg: int) -> int:
        if self.order == "degrevlex":
            return (deg << self.degshift) - E
        w = self.w
        n = self.n
        mask = self.mask
        if self.order == "lex":
            K = 0
            for i in range(n):
                K |= ((E >> (w * i)) & mask) << (w * (n - 1 - i))
            return K
        # elim_last: the last exponent dominates, degrevlex on the head
        last = (E >> (w * (n - 1))) & mask
        headE = E & ((1 << (w * (n - 1))) - 1)
        return ((last << (self.degshift + w))
                + ((deg - last) << (w * (n - 1))) - headE)

    def unpack(self, E: int) -> tuple:
        w = self.w
        mask = self.mask
        return tuple((E >> (w * i)) & mask for i in range(self.n))

    def deg(self, E: int) -> int:
        w = self.w
        mask = self.mask
        return sum((E >> (w * i)) & mask for i in range(self.n))


def _vec_lead_public(v: dict, negkey):
    return min(v, key=lambda t: (t[0], negkey(t[1])))


class _ModReducer:
    __slots__ = ("pos", "leadE", "leadK", "tail", "sugar")

    def __init__(self, pos, leadE, leadK, tail, sugar):
        self.pos = pos
        self.leadE = leadE
        self.leadK = leadK
        self.tail = tail          # [(pos, E, K, coeff)], monic
        self.sugar = sugar


class _ModuleGBState:
    """Incremental module Buchberger with Gebauer-Moeller pruning.

    Works on packed monomials internally; the public interface speaks
    {(position, exponent-tuple): coeff} dicts.  Supports degree-
    synchronized processing (`process_up_to`), which minimal-generator
    extraction relies on: for homogeneous data the pair sugar equals the
    true S-pair degree, so after `process_up_to(d)` the basis decides
    membership correctly for every element of degree <= d.
    """

    def __init__(self, ring: PolyRing, twists: Sequence[int],
                 budget: Budget | None = None, max_exp: int = 0,
                 track_pairs: bool = True):
        self.ring = ring
        self.twists = tuple(twists)
        self.budget = budget or DEFAULT_BUDGET
        self.track_pairs = track_pairs
        w = max(8, int(max_exp).bit_length() + 6)
        self.packer = _Packer(ring.n, w, ring.order)
        self.G: list[_ModReducer] = []
        self.by_pos: dict[int, list[_ModReducer]] = {}
        self.pairs: list = []
        self.pending: set = set()
        self._nf_dirty = False

    # -- width management ------------------------------------------------
    def _ensure_capacity(self, max_exp: int) -> None:
        if max_exp * 2 < self.packer.limit:
            return
        self._rebuild(max(self.packer.w + 4, int(max_exp).bit_length() + 6))

    def _rebuild(self, w: int) -> None:
        old = self.packer
        new = _Packer(old.n, w, old.order)

        def remap(E):
            return new.pack(old.unpack(E))

        for r in self.G:
            r.leadE, r.leadK = remap(r.leadE)
            r.tail = [(tp, *remap(tE), tc) for (tp, tE, _, tc) in r.tail]
        new_pairs = []
        for (sug, _, i, j, LE) in self.pairs:
            LE2, LK2 = remap(LE)
            new_pairs.append((sug, LK2, i, j, LE2))
        heapq.heapify(new_pairs)
        self.pairs = new_pairs
        self.packer = new

    # -- packing ----------------------------------------------------------
    def _pack_public(self, v: dict) -> list:
        """[(pos, E, K, coeff)] for a public vector, widening on demand."""
        max_exp = 0
        for (_, m) in v:
            for e in m:
                if e > max_exp:
                    max_exp = e
        self._ensure_capacity(max_exp)
        pack = self.packer.pack
        return [(pos, *pack(m), c) for (pos, m), c in v.items()]

    def _unpack_items(self, items) -> dict:
        unpack = self.packer.unpack
        return {(pos, unpack(E)): c for (pos, E, c) in items}

    # -- core reduction ----------------------------------------------------
    def _nf(self, work: dict, heap: list) -> list:
        """Full normal form; work is {(pos, E): coeff}, heap entries are
        ((pos, -K), E).  Returns [(pos, E, K, coeff)] of the remainder."""
        if self._nf_dirty:
            # short-tailed reducers first: much less fill-in
            for lst in self.by_pos.values():
                lst.sort(key=lambda r: len(r.tail))
            self._nf_dirty = False
        p = self.ring.p
        guard = self.packer.guard
        by_pos = self.by_pos
        out = []
        heapq.heapify(heap)
        while heap:
            negk, Em = heapq.heappop(heap)
            pos = negk[0]
            t = (pos, Em)
            c = work.pop(t, 0)
            if not c:
                continue
            Km = -negk[1]
            r = None
            cands = by_pos.get(pos)
            if cands:
                Eg = Em | guard
                for cand in cands:
                    if (Eg - cand.leadE) & guard == guard:
                        r = cand
                        break
            if r is None:
                out.append((pos, Em, Km, c))
                continue
            qE = Em - r.leadE
            qK = Km - r.leadK
            for (tp, tE, tK, tc) in r.tail:
                ttE = tE + qE
                if ttE & guard:
                    raise InternalAssertionError("packed exponent overflow")
                tt = (tp, ttE)
                prev = work.get(tt)
                if prev is None:
                    val = -c * tc % p
                    if val:
                        work[tt] = val
                        heapq.heappush(heap, ((tp, -(tK + qK)), ttE))
                else:
                    val = (prev - c * tc) % p
                    if val:
                        work[tt] = val
                    else:
                        del work[tt]
        return out

    def _nf_of_items(self, items) -> list:
        work = {}
        heap = []
        for (pos, E, K, c) in items:
            t = (pos, E)
            prev = work.get(t)
            if prev is None:
                work[t] = c
                heap.append(((pos, -K), E))
            else:
                val = (prev + c) % self.ring.p
                if val:
                    work[t] = val
                else:
                    del work[t]
        return self._nf(work, heap)

    def normal_form(self, v: dict) -> dict:
        """Public-vector normal form against the current basis."""
        if not v:
            return {}
        out = self._nf_of_items(self._pack_public(v))
        return self._unpack_items([(pos, E, c) for (pos, E, _, c) in out])

    # -- basis growth -------------------------------------------------------
    def _prepare(self, items, sugar: int | None) -> _ModReducer:
        lead = min(items, key=lambda t: (t[0], -t[2]))
        pos, leadE, leadK, c = lead
        p = self.ring.p
        if c != 1:
            ci = self.ring.field.inv(c)
            tail = [(tp, tE, tK, tc * ci % p)
                    for (tp, tE, tK, tc) in items if (tp, tE) != (pos, leadE)]
        else:
            tail = [(tp, tE, tK, tc)
                    for (tp, tE, tK, tc) in items if (tp, tE) != (pos, leadE)]
        if sugar is None:
            deg = self.packer.deg
            tw = self.twists
            sugar = max(deg(tE) + tw[tp] for (tp, tE, _, _) in items)
        return _ModReducer(pos, leadE, leadK, tail, sugar)

    def add_element(self, v: dict, sugar: int | None = None) -> None:
        self._add_prepared(self._prepare(self._pack_public(v), sugar))

    def _add_prepared(self, r: _ModReducer) -> None:
        t = len(self.G)
        pos = r.pos
        self._nf_dirty = True
        if self.track_pairs:
            packer = self.packer
            guard = packer.guard
            unpack = packer.unpack
            r_exps = unpack(r.leadE)
            cands: dict = {}
            for i, gi in enumerate(self.G):
                if gi.pos != pos:
                    continue
                LE, LK = packer.pack(tuple(map(max, unpack(gi.leadE), r_exps)))
                cands.setdefault((LK, LE), []).append(i)
            kept: list = []
            for (LK, LE) in sorted(cands):
                LEg = LE | guard
                if any((LEg - L2) & guard == guard and L2 != LE for L2 in kept):
                    continue
                kept.append(LE)
                i = min(cands[(LK, LE)])
                gi = self.G[i]
                # no product criterion for modules
                deg = packer.deg
                dL = deg(LE)
                sug = max(gi.sugar + dL - deg(gi.leadE),
                          r.sugar + dL - deg(r.leadE))
                heapq.heappush(self.pairs, (sug, LK, i, t, LE))
                self.pending.add((i, t))
        self.G.append(r)
        self.by_pos.setdefault(pos, []).append(r)

    def _spoly_items(self, r1: _ModReducer, r2: _ModReducer, LE, LK) -> list:
        p = self.ring.p
        q1E = LE - r1.leadE
        q1K = LK - r1.leadK
        q2E = LE - r2.leadE
        q2K = LK - r2.leadK
        guard = self.packer.guard
        d: dict = {}
        for (tp, tE, tK, tc) in r1.tail:
            E = tE + q1E
            if E & guard:
                raise InternalAssertionError("packed exponent overflow")
            d[(tp, E)] = (tK + q1K, tc)
        for (tp, tE, tK, tc) in r2.tail:
            E = tE + q2E
            if E & guard:
                raise InternalAssertionError("packed exponent overflow")
            t = (tp, E)
            prev = d.get(t)
            if prev is None:
                d[t] = (tK + q2K, -tc % p)
            else:
                val = (prev[1] - tc) % p
                if val:
                    d[t] = (prev[0], val)
                else:
                    del d[t]
        return [(pos, E, K, c) for (pos, E), (K, c) in d.items()]

    def _process_pair(self, sug, i, j, LE, LK) -> None:
        self.pending.discard((i, j))
        Gi = self.G[i]
        Gj = self.G[j]
        pos = Gi.pos
        guard = self.packer.guard
        unpack = self.packer.unpack
        LEg = LE | guard
        L_exps = None
        for k in range(len(self.G)):
            if k == i or k == j:
                continue
            gk = self.G[k]
            if gk.pos != pos or (LEg - gk.leadE) & guard != guard:
                continue
            pik = (i, k) if i < k else (k, i)
            pjk = (j, k) if j < k else (k, j)
            if pik in self.pending or pjk in self.pending:
                continue
            if L_exps is None:
                L_exps = unpack(LE)
                Ei = unpack(Gi.leadE)
                Ej = unpack(Gj.leadE)
            Ek = unpack(gk.leadE)
            if (tuple(map(max, Ei, Ek)) != L_exps
                    and tuple(map(max, Ej, Ek)) != L_exps):
                return
        self.budget.tick()
        h = self._nf_of_items(self._spoly_items(Gi, Gj, LE, LK))
        if h:
            self._add_prepared(self._prepare(h, sug))

    def process_up_to(self, degree: int) -> None:
        while self.pairs and self.pairs[0][0] <= degree:
            sug, LK, i, j, LE = heapq.heappop(self.pairs)
            if (i, j) in self.pending:
                self._process_pair(sug, i, j, LE, LK)

    def process_all(self) -> None:
        while self.pairs:
            sug, LK, i, j, LE = heapq.heappop(self.pairs)
            if (i, j) in self.pending:
                self._process_pair(sug, i, j, LE, LK)

    # -- extraction ----------------------------------------------------------
    def _reducer_items(self, r: _ModReducer) -> list:
        return [(r.pos, r.leadE, r.leadK, 1)] + list(r.tail)

    def basis_public(self) -> list[dict]:
        return [self._unpack_items([(pos, E, c) for (pos, E, _, c)
                                    in self._reducer_items(r)])
                for r in self.G]

    def tag_line_polys(self, tag_pos: int) -> list:
        """Polynomials carried by basis elements led in a pure tag slot."""
        ring = self.ring
        unpack = self.packer.unpack
        out = []
        for r in self.G:
            if r.pos == tag_pos:
                d = {unpack(r.leadE): 1}
                for (tp, tE, _, tc) in r.tail:
                    d[unpack(tE)] = tc
                out.append(ring.from_dict(d))
        return out

    def reduced_basis(self) -> list[dict]:
        """Reduced module GB as public vectors; call after process_all()."""
        guard = self.packer.guard
        # ascending lead within each position so divisor leads come first
        order = sorted(range(len(self.G)),
                       key=lambda idx: (self.G[idx].pos, self.G[idx].leadK))
        kept: list[_ModReducer] = []
        for idx in order:
            r = self.G[idx]
            Eg = r.leadE | guard
            if any(k.pos == r.pos and (Eg - k.leadE) & guard == guard
                   for k in kept):
                continue
            kept.append(r)
        p = self.ring.p
        out = []
        for i, r in enumerate(kept):
            sub_by_pos: dict = {}
            for j, k in enumerate(kept):
                if j != i:
                    sub_by_pos.setdefault(k.pos, []).append(k)
            saved_by_pos, saved_dirty = self.by_pos, self._nf_dirty
            self.by_pos, self._nf_dirty = sub_by_pos, True
            try:
                nf = self._nf_of_items(self._reducer_items(r))
            finally:
                self.by_pos, self._nf_dirty = saved_by_pos, saved_dirty
            lead = min(nf, key=lambda t: (t[0], -t[2]))
            c = lead[3]
            if c != 1:
                ci = self.ring.field.inv(c)
                nf = [(tp, tE, tK, tc * ci % p) for (tp, tE, tK, tc) in nf]
            out.append((lead[0], lead[2],
                        self._unpack_items([(tp, tE, tc)
                                            for (tp, tE, _, tc) in nf])))
        out.sort(key=lambda t: (t[0], t[1]))
        return [v for (_, _, v) in out]


def _max_exp_of_vecs(vecs) -> int:
    m = 0
    for v in vecs:
        for (_, mono) in v:
            for e in mono:
                if e > m:
                    m = e
    return m


def _module_gb(vecs: list[dict], ring: PolyRing, twists,
               budget: Budget | None = None) -> list[dict]:
    state = _ModuleGBState(ring, twists, budget,
                           max_exp=_max_exp_of_vecs(vecs))
    for v in vecs:
        if v:
            state.add_element(dict(v))
    state.process_all()
    return state.reduced_basis()


# ----------------------------------------------------------------------
# Tagged submodules: one computation yields syzygies and lifts.

class TaggedSubmodule:
    """GB of {(g_j, e_j)} inside F + S^k, original block eliminated first.

    Basis elements supported purely on the tag block form a Groebner basis
    of the syzygy module of the g_j; reducing (v, 0) expresses a member v
    as an explicit combination of the g_j.
    """

    def __init__(self, columns: Sequence[ModuleElement], target: FreeModule,
                 budget: Budget | None = None):
        self.target = target
        self.ring = target.ring
        self.k = len(columns)
        self.col_degrees = tuple(c.degree() for c in columns)
        twists = target.twists + self.col_degrees
        vecs = []
        r = target.rank
        one = (0,) * self.ring.n
        for j, col in enumerate(columns):
            if not col:
                raise ValueError("zero column in tagged submodule")
            v = _to_vec(col)
            v[(r + j, one)] = 1
            vecs.append(v)
        self.state = _ModuleGBState(self.ring, twists, budget,
                                    max_exp=_max_exp_of_vecs(vecs))
        for v in vecs:
            self.state.add_element(v)
        self.state.process_all()
        self._reduced = None

    def _reduced_basis(self):
        if self._reduced is None:
            self._reduced = self.state.reduced_basis()
        return self._reduced

    def syzygy_vectors(self) -> list[dict]:
        """Syzygies of the columns, as vectors over slots 0..k-1."""
        r = self.target.rank
        out = []
        for v in self._reduced_basis():
            if all(pos >= r for (pos, _) in v):
                out.append({(pos - r, m): c for (pos, m), c in v.items()})
        return out

    def express(self, elem: ModuleElement):
        """Coefficients u with elem = sum u_j g_j, or None if not a member."""
        r = self.target.rank
        nf = self.state.normal_form(_to_vec(elem))
        if any(pos < r for (pos, _) in nf):
            return None
        p = self.ring.p
        return {(pos - r, m): -c % p for (pos, m), c in nf.items()}


def vector_colon(v: ModuleElement, gens: Sequence[ModuleElement],
                 budget: Budget | None = None) -> list:
    """A Groebner basis of {f in S : f*v in <gens>} for homogeneous v.

    A single-tag elimination: the augmented module span{(v, tau)} +
    span{(g, 0)} is intersected with the tag line, so only one extra slot
    is carried through the reductions.  The tag-line slice of any basis of
    the augmented module is a basis of the colon, so no module-level
    interreduction is spent here; callers canonicalize at the ideal level
    if they need the reduced basis.
    """
    F = v.module
    ring = F.ring
    if not v:
        return [ring.one()]
    r = F.rank
    one = (0,) * ring.n
    w = _to_vec(v)
    w[(r, one)] = 1
    vecs = [w] + [_to_vec(g) for g in gens if g]
    state = _ModuleGBState(ring, F.twists + (v.degree(),), budget,
                           max_exp=_max_exp_of_vecs(vecs))
    for vec in vecs:
        state.add_element(vec)
    state.process_all()
    # elimination order: a tag lead forces a pure tag element
    return state.tag_line_polys(r)


# ----------------------------------------------------------------------
# Spec operations.

def module_buchberger(gens: Sequence[ModuleElement], F: FreeModule,
                      budget: Budget | None = None) -> list[ModuleElement]:
    """Reduced Groebner basis of the submodule of F generated by `gens`."""
    for g in gens:
        if g.module != F:
            raise RingMismatchError("generator outside the ambient free module")
    vecs = [_to_vec(g) for g in gens if g]
    out = _module_gb(vecs, F.ring, F.twists, budget)
    return [_from_vec(F, v) for v in out]


def syzygies(M: GradedMatrix, budget: Budget | None = None) -> GradedMatrix:
    """A graded matrix whose columns generate ker(M)."""
    cols = [c for c in M.columns if c]
    if not cols:
        # the zero map: everything is a syzygy
        return GradedMatrix(M.source, M.source,
                            [M.source.basis_element(i) for i in range(M.source.rank)],
                            check=False)
    tagged = TaggedSubmodule(cols, M.target, budget)
    k = len(cols)
    tag_module = FreeModule(M.target.ring, k, tagged.col_degrees)
    elems = [_from_vec(tag_module, v) for v in tagged.syzygy_vectors()]
    if k != M.source.rank:
        # re-inflate to the full source; dropped zero columns are free syzygies
        keep = [j for j, c in enumerate(M.columns) if c]
        full = []
        for e in elems:
            ent = {keep[i]: f for i, f in e._entries.items()}
            full.append(ModuleElement(M.source, ent))
        for j, c in enumerate(M.columns):
            if not c:
                full.append(M.source.basis_element(j))
        elems = full
    syz = GradedMatrix.from_columns(M.source, elems)
    comp = M.compose(syz)
    if not comp.is_zero():
        raise InternalAssertionError("syzygy columns do not compose to zero")
    return syz


class PresentedModule:
    """A graded module given as the cokernel of a graded matrix.

    Generators sit in the degrees of the target twists; zero modules are
    rank-0 presentations, never absent values.
    """

    __slots__ = ("presentation", "_rel_gb", "_rel_state", "_hilbert", "_resolution")

    def __init__(self, presentation: GradedMatrix):
        self.presentation = presentation
        self._rel_gb = None
        self._rel_state = None
        self._hilbert = None
        self._resolution = None

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(ring: PolyRing) -> "PresentedModule":
        F0 = FreeModule(ring, 0, ())
        return PresentedModule(GradedMatrix(FreeModule(ring, 0, ()), F0, (), check=False))

    @staticmethod
    def free(F: FreeModule) -> "PresentedModule":
        return PresentedModule(GradedMatrix(FreeModule(F.ring, 0, ()), F, (), check=False))

    @staticmethod
    def quotient_by_ideal(I: Ideal) -> "PresentedModule":
        """S/I as a presented module (one generator in degree 0)."""
        F0 = FreeModule(I.ring, 1, (0,))
        cols = [ModuleElement(F0, {0: g}) for g in I.generators]
        return PresentedModule(GradedMatrix.from_columns(F0, cols))

    # -- structure -------------------------------------------------------
    @property
    def ring(self) -> PolyRing:
        return self.presentation.target.ring

    @property
    def ambient(self) -> FreeModule:
        return self.presentation.target

    def generator_degrees(self) -> tuple:
        return self.presentation.target.twists

    def relation_gb(self, budget: Budget | None = None) -> list[dict]:
        if self._rel_gb is None:
            vecs = [_to_vec(c) for c in self.presentation.columns if c]
            self._rel_gb = _module_gb(vecs, self.ring, self.ambient.twists, budget)
            state = _ModuleGBState(self.ring, self.ambient.twists, budget,
                                   max_exp=_max_exp_of_vecs(self._rel_gb),
                                   track_pairs=False)
            for v in self._rel_gb:
                state.add_element(dict(v))
            self._rel_state = state
        return self._rel_gb

    def reduce(self, elem: ModuleElement, budget: Budget | None = None) -> ModuleElement:
        """Normal form of an ambient element modulo the relation module."""
        self.relation_gb(budget)
        return _from_vec(self.ambient, self._rel_state.normal_form(_to_vec(elem)))

    def is_zero(self, budget: Budget | None = None) -> bool:
        if self.ambient.rank == 0:
            return True
        self.relation_gb(budget)
        one = (0,) * self.ring.n
        return all(not self._rel_state.normal_form({(i, one): 1})
                   for i in range(self.ambient.rank))

    # -- graded pieces -----------------------------------------------------
    def _hilbert_data(self, budget: Budget | None = None):
        """Per-slot Hilbert numerators of the lead-term relation module."""
        if self._hilbert is None:
            gb = self.relation_gb(budget)
            negkey = self.ring.negkey
            per_slot: dict[int, list] = {i: [] for i in range(self.ambient.rank)}
            for v in gb:
                pos, m = _vec_lead_public(v, negkey)
                per_slot[pos].append(m)
            self._hilbert = [
                (self.ambient.twists[i], _hilbert_numerator(per_slot[i]))
                for i in range(self.ambient.rank)
            ]
        return self._hilbert

    def graded_piece_dim(self, d: int, budget: Budget | None = None) -> int:
        """dim_k of the degree-d piece of the cokernel.

        Counts standard monomial-slot pairs: ambient monomials of matching
        degree outside the lead-term module of the relations, via exact
        Hilbert-series bookkeeping (no enumeration).
        """
        n = self.ring.n
        return sum(_hilbert_eval(num, n, d - a)
                   for a, num in self._hilbert_data(budget))

    def __repr__(self):
        return (f"PresentedModule(gens in degrees {self.generator_degrees()}, "
                f"{self.presentation.source.rank} relations)")


def subquotient_presentation(K_gens: Sequence[ModuleElement],
                             Im_gens: Sequence[ModuleElement],
                             F: FreeModule,
                             budget: Budget | None = None) -> PresentedModule:
    """Present <K_gens>/<Im_gens> with generators K_gens.

    Relations are the lifts of Im_gens through K_gens plus the syzygies of
    K_gens; containment of the image span in the generator span is checked
    and a violation signals a logic error upstream.
    """
    K = [k for k in K_gens if k]
    if not K:
        for w in Im_gens:
            if w:
                raise InternalAssertionError("image generators outside zero span")
        return PresentedModule.zero(F.ring)
    tagged = TaggedSubmodule(K, F, budget)
    G = FreeModule(F.ring, len(K), tagged.col_degrees)
    rel_vecs = []
    for w in Im_gens:
        if not w:
            continue
        u = tagged.express(w)
        if u is None:
            raise InternalAssertionError(
                "subquotient image is not contained in the generator span")
        if u:
            rel_vecs.append(u)
    rel_vecs.extend(tagged.syzygy_vectors())
    cols = [_from_vec(G, v) for v in rel_vecs]
    return PresentedModule(GradedMatrix.from_columns(G, cols))


def graded_piece_dim(M: PresentedModule, d: int,
                     budget: Budget | None = None) -> int:
    return M.graded_piece_dim(d, budget)


def annihilator(M: PresentedModule, budget: Budget | None = None) -> Ideal:
    """{f in S : f*M = 0}, via colon of the relation image into each slot.

    (relations : e_l) is a vector colon for each generator slot l; the
    annihilator is the intersection over all slots, taken in one pass.
    """
    from .groebner import ideal_intersect_many

    ring = M.ring
    F = M.ambient
    if F.rank == 0:
        return Ideal(ring, (ring.one(),))
    cols = [c for c in M.presentation.columns if c]
    parts = []
    for l in range(F.rank):
        gens = vector_colon(F.basis_element(l), cols, budget)
        part = Ideal(ring, interreduce(gens, ring))
        if part.is_zero_ideal():
            return part
        parts.append(part)
    return ideal_intersect_many(parts, budget)


def minimal_generators(elements: Sequence[ModuleElement], F: FreeModule,
                       budget: Budget | None = None) -> list[ModuleElement]:
    """A minimal generating subset of homogeneous `elements` (graded Nakayama).

    Candidates are processed in ascending degree against a degree-
    synchronized incremental basis of the kept ones, so an element is kept
    exactly when it is not a combination of the ones before it.
    """
    ring = F.ring
    items = []
    for idx, e in enumerate(elements):
        if not e:
            continue
        if not e.is_homogeneous():
            raise ValueError("minimal generators require homogeneous input")
        items.append((e.degree(), idx, e))
    items.sort(key=lambda t: (t[0], t[1]))
    state = _ModuleGBState(ring, F.twists, budget)
    kept = []
    for deg, _, e in items:
        state.process_up_to(deg)
        nf = state.normal_form(_to_vec(e))
        if nf:
            kept.append(e)
            state.add_element(nf)
    return kept


# ----------------------------------------------------------------------
# Hilbert series of monomial quotients (numerator over (1-t)^n).

def _minimalize_monomials(gens: Iterable[tuple]) -> list[tuple]:
    gens = sorted(set(gens), key=sum)
    out: list[tuple] = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def _num_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            v = out.get(k, 0) + va * vb
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def _hilbert_numerator(gens: list[tuple]) -> dict:
    """Numerator of the Hilbert series of S/(gens) over (1-t)^n."""
    gens = _minimalize_monomials(gens)
    if not gens:
        return {0: 1}
    if any(sum(g) == 0 for g in gens):
        return {}
    if len(gens) == 1:
        d = sum(gens[0])
        return {0: 1, d: -1}
    n = len(gens[0])
    counts = [0] * n
    for g in gens:
        for i, e in enumerate(g):
            if e:
                counts[i] += 1
    pivot = max(range(n), key=lambda i: counts[i])
    if counts[pivot] <= 1:
        # pairwise disjoint supports: product formula
        num = {0: 1}
        for g in gens:
            num = _num_mul(num, {0: 1, sum(g): -1})
        return num
    # N(J) = N(J + (x_v)) + t * N(J : x_v)
    plus: list[tuple] = []
    colon: list[tuple] = []
    for g in gens:
        if g[pivot] == 0:
            plus.append(g)
            colon.append(g)
        else:
            colon.append(g[:pivot] + (g[pivot] - 1,) + g[pivot + 1:])
    unit = tuple(1 if i == pivot else 0 for i in range(n))
    plus.append(unit)
    out = dict(_hilbert_numerator(plus))
    for k, v in _hilbert_numerator(colon).items():
        kk = k + 1
        vv = out.get(kk, 0) + v
        if vv:
            out[kk] = vv
        else:
            del out[kk]
    return out


def _hilbert_eval(num: dict, n: int, e: int) -> int:
    if e < 0:
        return 0
    total = 0
    for k, c in num.items():
        if e - k >= 0:
            total += c * math.comb(e - k + n - 1, n - 1)
    return total
