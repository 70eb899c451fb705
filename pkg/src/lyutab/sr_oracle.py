"""Independent verification paths for the homological engine.

Simplicial complexes with reduced cohomology over F_p, Stanley-Reisner and
binomial edge ideal constructions, degree-zero Hochster data, and a strand
recomputation of the outer Ext dimension by explicit mod-p linear algebra.

The strand recomputation shares the inner-Ext resolution with the main
path (building a second resolution engine would be out of proportion);
independence is claimed only for the outer cohomology extraction, which
bypasses subquotient presentations and standard-monomial counting
entirely.  Strand matrices enumerate monomials, so these routines are
meant for the small verification corpus, not the large stretch examples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import Budget
from .fieldpoly import PolyRing
from .groebner import Ideal
from .homological import ExtCalculator, FreeResolution
from .modules import FreeModule, GradedMatrix, PresentedModule


# ----------------------------------------------------------------------
# Combinatorial inputs.

class SimplicialComplex:
    """A simplicial complex on vertices 1..v, given by its facets.

    Facets are normalized to be pairwise non-contained; a vertex absent
    from every facet is simply not part of the complex (its singleton is
    then a minimal non-face).
    """

    __slots__ = ("vertices", "facets")

    def __init__(self, vertices: int, facets: Iterable[Iterable[int]]):
        if vertices < 1:
            raise ValueError("at least one vertex is required")
        fs = []
        for f in facets:
            fset = frozenset(int(v) for v in f)
            if not fset:
                raise ValueError("empty facet")
            if any(v < 1 or v > vertices for v in fset):
                raise ValueError("facet vertex out of range")
            fs.append(fset)
        # keep only inclusion-maximal faces, deduped
        maximal = [f for f in set(fs) if not any(f < g for g in fs)]
        maximal.sort(key=lambda s: (len(s), sorted(s)))
        self.vertices = vertices
        self.facets = tuple(maximal)

    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def is_face(self, subset: frozenset) -> bool:
        return any(subset <= f for f in self.facets)

    def faces_by_dim(self) -> list[list[tuple]]:
        """faces[k] lists the (k-1)-dimensional faces (size-k subsets),
        starting at k=0 with the empty face."""
        seen = set()
        for f in self.facets:
            items = sorted(f)
            for r in range(len(items) + 1):
                for sub in itertools.combinations(items, r):
                    seen.add(sub)
        out: list[list[tuple]] = [[] for _ in range(self.dim() + 2)]
        for face in seen:
            out[len(face)].append(face)
        for lst in out:
            lst.sort()
        return out

    def __repr__(self):
        return f"SimplicialComplex(v={self.vertices}, facets={[sorted(f) for f in self.facets]})"


class Graph:
    """A simple graph on vertices 1..v."""

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices: int, edges: Iterable[Sequence[int]]):
        if vertices < 1:
            raise ValueError("at least one vertex is required")
        es = set()
        for e in edges:
            a, b = int(e[0]), int(e[1])
            if a == b:
                raise ValueError("loops are not allowed")
            if not (1 <= a <= vertices and 1 <= b <= vertices):
                raise ValueError("edge endpoint out of range")
            es.add((min(a, b), max(a, b)))
        self.vertices = vertices
        self.edges = tuple(sorted(es))

    def __repr__(self):
        return f"Graph(v={self.vertices}, edges={list(self.edges)})"


def cycle_graph(v: int) -> Graph:
    return Graph(v, [(i, i % v + 1) for i in range(1, v + 1)])


def complete_bipartite_graph(m: int, n: int) -> Graph:
    return Graph(m + n, [(i, m + j) for i in range(1, m + 1) for j in range(1, n + 1)])


# ----------------------------------------------------------------------
# Ideal constructions.

def stanley_reisner_ideal(delta: SimplicialComplex, p: int) -> Ideal:
    """Squarefree monomial ideal of the minimal non-faces, in F_p[x_1..x_v]."""
    v = delta.vertices
    ring = PolyRing(p, [f"x{i}" for i in range(1, v + 1)])
    nonfaces: list[frozenset] = []
    for size in range(1, v + 1):
        for combo in itertools.combinations(range(1, v + 1), size):
            s = frozenset(combo)
            if delta.is_face(s):
                continue
            if any(nf <= s for nf in nonfaces):
                continue
            nonfaces.append(s)
    gens = []
    for nf in sorted(nonfaces, key=lambda s: (len(s), sorted(s))):
        exps = [1 if i + 1 in nf else 0 for i in range(v)]
        gens.append(ring.monomial(exps))
    return Ideal(ring, gens)


def binomial_edge_ideal(G: Graph, p: int) -> Ideal:
    """The ideal of 2x2 minors x_i y_j - x_j y_i over the edges of G."""
    v = G.vertices
    names = [f"x{i}" for i in range(1, v + 1)] + [f"y{i}" for i in range(1, v + 1)]
    ring = PolyRing(p, names)
    gens = []
    for (i, j) in G.edges:
        xi = ring.variable(i - 1)
        yj = ring.variable(v + j - 1)
        xj = ring.variable(j - 1)
        yi = ring.variable(v + i - 1)
        gens.append(xi * yj - xj * yi)
    return Ideal(ring, gens)


# ----------------------------------------------------------------------
# Reduced simplicial cohomology over F_p.

def modp_rank(rows: list[list[int]], p: int) -> int:
    """Rank of an integer matrix over F_p (Gaussian elimination)."""
    if not rows or not rows[0]:
        return 0
    rows = [[x % p for x in row] for row in rows]
    ncols = len(rows[0])
    rank = 0
    col = 0
    r = 0
    while r < len(rows) and col < ncols:
        piv = None
        for rr in range(r, len(rows)):
            if rows[rr][col]:
                piv = rr
                break
        if piv is None:
            col += 1
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for rr in range(len(rows)):
            if rr != r and rows[rr][col]:
                c = rows[rr][col]
                rows[rr] = [(a - c * b) % p for a, b in zip(rows[rr], rows[r])]
        rank += 1
        r += 1
        col += 1
    return rank


def _coboundary_matrix(faces_k: list[tuple], faces_k1: list[tuple], p: int) -> list[list[int]]:
    """Matrix of delta: C^{k} -> C^{k+1} with the alternating-sign
    incidence convention (rows: (k+1)-faces, columns: k-faces)."""
    index = {f: i for i, f in enumerate(faces_k)}
    rows = []
    for tau in faces_k1:
        row = [0] * len(faces_k)
        for pos in range(len(tau)):
            sigma = tau[:pos] + tau[pos + 1:]
            j = index.get(sigma)
            if j is not None:
                row[j] = (-1) ** pos % p
        rows.append(row)
    return rows


def reduced_cohomology_dims(delta: SimplicialComplex, p: int) -> list[int]:
    """Dims of reduced simplicial cohomology over F_p, degrees -1..dim."""
    faces = delta.faces_by_dim()
    # faces[k] has the (k-1)-faces; cochain degree k-1
    deltas = [_coboundary_matrix(faces[k], faces[k + 1], p)
              for k in range(len(faces) - 1)]
    ranks = [modp_rank(m, p) for m in deltas]
    dims = []
    for k in range(len(faces)):
        out_rank = ranks[k] if k < len(ranks) else 0
        in_rank = ranks[k - 1] if k >= 1 else 0
        dims.append(len(faces[k]) - out_rank - in_rank)
    return dims


def connected_components(delta: SimplicialComplex) -> int:
    """Components of the 1-skeleton, isolated vertices included."""
    parent: dict[int, int] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in delta.facets:
        for v in f:
            parent.setdefault(v, v)
        items = sorted(f)
        for a, b in zip(items, items[1:]):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    return len({find(v) for v in parent})


def hochster_degree_zero(delta: SimplicialComplex, i: int, p: int) -> int:
    """dim of the degree-zero graded piece of the i-th local cohomology of
    the Stanley-Reisner ring: the reduced (i-1)-cohomology of the complex."""
    if i < 0:
        return 0
    dims = reduced_cohomology_dims(delta, p)
    # dims[k] is degree k-1
    idx = i  # degree i-1 sits at position i
    if idx < 0 or idx >= len(dims):
        return 0
    return dims[idx]


# ----------------------------------------------------------------------
# Degree strands of graded maps, and the outer-Ext recomputation.

def monomials_of_degree(n: int, d: int):
    """All exponent tuples of total degree d in n variables."""
    if d < 0:
        return
    if n == 1:
        yield (d,)
        return
    for e in range(d + 1):
        for rest in monomials_of_degree(n - 1, d - e):
            yield (e,) + rest


def strand_basis(F: FreeModule, d: int) -> list[tuple]:
    """Basis of the degree-d piece of F: (slot, monomial) pairs."""
    n = F.ring.n
    out = []
    for slot, a in enumerate(F.twists):
        for m in monomials_of_degree(n, d - a):
            out.append((slot, m))
    return out


def strand_matrix(mat: GradedMatrix, d: int, p: int) -> list[list[int]]:
    """The degree-d strand of a graded map as a dense mod-p matrix.

    Rows index the target strand basis, columns the source strand basis.
    """
    src_basis = strand_basis(mat.source, d)
    tgt_basis = strand_basis(mat.target, d)
    tgt_index = {b: r for r, b in enumerate(tgt_basis)}
    rows = [[0] * len(src_basis) for _ in tgt_basis]
    for c, (slot, m) in enumerate(src_basis):
        col = mat.columns[slot]
        for i, f in col._entries.items():
            for mono, coeff in f.terms:
                key = (i, tuple(a + b for a, b in zip(mono, m)))
                r = tgt_index.get(key)
                if r is None:
                    raise AssertionError("strand image outside the strand basis")
                rows[r][c] = (rows[r][c] + coeff) % p
    return rows


def presentation_strand_dim(M: PresentedModule, d: int) -> int:
    """Graded piece dimension recomputed by dense linear algebra.

    dim (F_0)_d minus the rank of the degree-d strand of the presentation;
    an independent cross-check of the Hilbert-series path.
    """
    p = M.ring.p
    total = len(strand_basis(M.ambient, d))
    mat = M.presentation
    if mat.source.rank == 0 or total == 0:
        return total
    return total - modp_rank(strand_matrix(mat, d, p), p)


def strand_double_ext(I: Ideal, i: int, j: int,
                      calculator: ExtCalculator | None = None,
                      budget: Budget | None = None) -> int:
    """Degree-zero outer-Ext dimension, recomputed on explicit strands.

    Resolves the inner Ext once via the shared calculator, then takes the
    degree-zero strand of the dualized resolution around position n - i
    and computes corank/rank by Gaussian elimination; no module Groebner
    machinery is involved in the extraction.
    """
    calc = calculator or ExtCalculator(I, budget)
    n = I.ring.n
    p = I.ring.p
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError("indices out of range")
    res = calc.inner_resolution(j)
    if res is None:
        return 0
    outer = n - i
    if outer < 0 or outer > res.length:
        return 0
    mid = res.module_at(outer).dual()
    dim_mid = mid.graded_dim(0)
    if outer < res.length:
        out_rank = modp_rank(strand_matrix(res.maps[outer].dual(), 0, p), p)
    else:
        out_rank = 0
    if outer > 0:
        in_rank = modp_rank(strand_matrix(res.maps[outer - 1].dual(), 0, p), p)
    else:
        in_rank = 0
    return dim_mid - out_rank - in_rank
