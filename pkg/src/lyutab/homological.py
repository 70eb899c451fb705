"""Graded free resolutions, minimalization, Ext into S, and double-Ext numbers.

Ext^i(M, S) is presented as ker(d_{i+1}^T)/im(d_i^T) on the dualized
resolution, with the twist-negation convention of `modules`; under that
convention S itself can stand in for the graded canonical module with no
net degree shift, so the degree-zero subscript below is taken literally.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (Budget, BudgetExceededError, DEFAULT_BUDGET,
                     InternalAssertionError)
from .fieldpoly import Polynomial, PolyRing
from .groebner import Ideal, krull_dimension
from .modules import (FreeModule, GradedMatrix, ModuleElement, PresentedModule,
                      minimal_generators, module_buchberger,
                      subquotient_presentation, syzygies)


class FreeResolution:
    """A chain F_0 <- F_1 <- ... <- F_l augmenting a presented module.

    `maps` is [d_1, ..., d_l]; d_i o d_{i+1} = 0 is asserted on
    construction.  A free module has an empty map list.
    """

    __slots__ = ("target", "maps")

    def __init__(self, target: PresentedModule, maps: Sequence[GradedMatrix],
                 check: bool = True):
        maps = list(maps)
        if check:
            for a, b in zip(maps, maps[1:]):
                if b.target != a.source:
                    raise InternalAssertionError("resolution maps do not chain")
                if not a.compose(b).is_zero():
                    raise InternalAssertionError("d_i o d_{i+1} is nonzero")
        self.target = target
        self.maps = maps

    @property
    def ring(self) -> PolyRing:
        return self.target.ring

    @property
    def length(self) -> int:
        return len(self.maps)

    def module_at(self, i: int) -> FreeModule:
        if i == 0:
            return self.maps[0].target if self.maps else self.target.ambient
        return self.maps[i - 1].source

    def betti(self) -> list[int]:
        return [self.module_at(i).rank for i in range(self.length + 1)]

    def graded_betti(self) -> list[tuple]:
        return [self.module_at(i).twists for i in range(self.length + 1)]

    def is_minimal(self) -> bool:
        """No differential carries a degree-zero (unit) entry."""
        for mat in self.maps:
            for j, col in enumerate(mat.columns):
                for i, f in col._entries.items():
                    if mat.source.twists[j] == mat.target.twists[i] and f:
                        return False
        return True

    def verify_exactness(self, budget: Budget | None = None) -> None:
        """Assert ker d_i = im d_{i+1} by containment both ways.

        Composition zero gives im <= ker; the converse reduces fresh
        kernel generators against a basis of the image columns.
        """
        for idx, mat in enumerate(self.maps):
            ker = syzygies(mat, budget)
            if idx + 1 < len(self.maps):
                nxt = self.maps[idx + 1]
                image = PresentedModule(nxt)
            else:
                image = PresentedModule(
                    GradedMatrix(FreeModule(self.ring, 0, ()), mat.source, (),
                                 check=False))
            for col in ker.columns:
                if image.reduce(col, budget):
                    raise InternalAssertionError(
                        f"kernel of d_{idx + 1} is not covered by d_{idx + 2}")

    def __repr__(self):
        return f"FreeResolution(betti={self.betti()})"


# ----------------------------------------------------------------------
# Construction.

def _columns_as_dicts(mat: GradedMatrix):
    cols = [dict(c._entries) for c in mat.columns]
    return cols, list(mat.source.twists), list(mat.target.twists)


def _find_unit(cols, src_twists, tgt_twists):
    for j, col in enumerate(cols):
        for i, f in col.items():
            if src_twists[j] == tgt_twists[i] and f:
                return j, i
    return None


def _cancel_presentation_units(mat: GradedMatrix) -> GradedMatrix:
    """Remove scalar entries from a presentation matrix (cokernel kept)."""
    ring = mat.target.ring
    cols, src, tgt = _columns_as_dicts(mat)
    while True:
        hit = _find_unit(cols, src, tgt)
        if hit is None:
            break
        c, r = hit
        u = cols[c][r]
        uinv = ring.field.inv(u.lead_coeff())
        pivot = cols[c]
        for j, col in enumerate(cols):
            if j == c or r not in col:
                continue
            lam = col[r].scale(uinv)
            for i, f in pivot.items():
                g = col.get(i)
                h = (g - lam * f) if g is not None else -(lam * f)
                if h:
                    col[i] = h
                else:
                    col.pop(i, None)
        # drop column c and row r, shifting higher row indices down
        del cols[c]
        del src[c]
        del tgt[r]
        for col in cols:
            col.pop(r, None)
            for i in sorted(k for k in col if k > r):
                col[i - 1] = col.pop(i)
    target = FreeModule(ring, len(tgt), tuple(tgt))
    elems = [ModuleElement(target, col) for col in cols]
    return GradedMatrix.from_columns(target, [e for e in elems if e])


def minimal_presentation(M: PresentedModule,
                         budget: Budget | None = None) -> PresentedModule:
    """Isomorphic presentation with unit entries cancelled and a minimal
    relation set."""
    mat = GradedMatrix.from_columns(M.presentation.target,
                                    M.presentation.columns, check=False)
    mat = _cancel_presentation_units(mat)
    cols = minimal_generators(list(mat.columns), mat.target, budget)
    return PresentedModule(GradedMatrix.from_columns(mat.target, cols))


def free_resolution(M: PresentedModule, max_len: int | None = None,
                    minimal: bool = True,
                    budget: Budget | None = None) -> FreeResolution:
    """Graded free resolution by iterated syzygies.

    With `minimal=True` (default) the presentation is minimalized first
    and each kernel is replaced by a minimal generating set, which makes
    the whole resolution minimal; its length is then bounded by the
    variable count (Hilbert), and overrunning that bound is a logic
    error.  With `minimal=False` the raw syzygy bases are used, giving a
    valid but generally non-minimal resolution.
    """
    ring = M.ring
    if max_len is None:
        max_len = ring.n
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    if minimal:
        M0 = minimal_presentation(M, budget)
    else:
        M0 = PresentedModule(GradedMatrix.from_columns(
            M.presentation.target, M.presentation.columns, check=False))
    maps: list[GradedMatrix] = []
    if M0.presentation.source.rank:
        maps.append(M0.presentation)
    while maps:
        syzmat = syzygies(maps[-1], budget)
        cols = list(syzmat.columns)
        if minimal and cols:
            cols = minimal_generators(cols, maps[-1].source, budget)
        if not cols:
            break
        if len(maps) >= max_len:
            if minimal:
                raise InternalAssertionError(
                    "minimal resolution exceeded the variable-count bound")
            raise BudgetExceededError(
                f"resolution did not terminate within max_len={max_len}")
        maps.append(GradedMatrix.from_columns(maps[-1].source, cols))
    return FreeResolution(M0, maps)


def minimalize(res: FreeResolution, budget: Budget | None = None) -> FreeResolution:
    """Cancel unit entries across the chain by graded Gaussian elimination.

    Returns a quasi-isomorphic resolution with no degree-zero scalar in
    any differential, so graded Betti numbers are well-defined.
    """
    ring = res.ring
    if not res.maps:
        return res
    mats = []
    for m in res.maps:
        cols, src, tgt = _columns_as_dicts(m)
        mats.append(cols)
    twists = [list(res.module_at(i).twists) for i in range(res.length + 1)]

    def find_unit_anywhere():
        for lvl, cols in enumerate(mats):
            src = twists[lvl + 1]
            tgt = twists[lvl]
            for j, col in enumerate(cols):
                for i, f in col.items():
                    if src[j] == tgt[i] and f:
                        return lvl, j, i
        return None

    while True:
        hit = find_unit_anywhere()
        if hit is None:
            break
        lvl, c, r = hit
        A = mats[lvl]
        uinv = ring.field.inv(A[c][r].lead_coeff())
        pivot = A[c]
        B = mats[lvl + 1] if lvl + 1 < len(mats) else None
        for j, col in enumerate(A):
            if j == c or r not in col:
                continue
            lam = col[r].scale(uinv)
            for i, f in pivot.items():
                g = col.get(i)
                h = (g - lam * f) if g is not None else -(lam * f)
                if h:
                    col[i] = h
                else:
                    col.pop(i, None)
            if B is not None:
                # column op on d_lvl forces the inverse row op on d_{lvl+1}
                for bcol in B:
                    g = bcol.get(j)
                    if g is not None:
                        h = bcol.get(c)
                        hh = (h + lam * g) if h is not None else lam * g
                        if hh:
                            bcol[c] = hh
                        else:
                            bcol.pop(c, None)
        # delete column c of d_lvl and its source slot
        del A[c]
        del twists[lvl + 1][c]
        if B is not None:
            for bcol in B:
                if bcol.pop(c, None) is not None:
                    raise InternalAssertionError(
                        "minimalize: surviving entry in a cancelled row")
                for i in sorted(k for k in bcol if k > c):
                    bcol[i - 1] = bcol.pop(i)
        # delete row r of d_lvl and the slot of F_{lvl}
        del twists[lvl][r]
        for col in A:
            col.pop(r, None)
            for i in sorted(k for k in col if k > r):
                col[i - 1] = col.pop(i)
        if lvl > 0:
            C = mats[lvl - 1]
            del C[r]
        # drop a trailing map that lost all its columns
        while mats and not mats[-1]:
            mats.pop()
            twists.pop()

    modules = [FreeModule(ring, len(t), tuple(t)) for t in twists]
    new_maps = []
    for lvl, cols in enumerate(mats):
        tgt = modules[lvl]
        elems = [ModuleElement(tgt, col) for col in cols]
        new_maps.append(GradedMatrix(modules[lvl + 1], tgt, elems, check=False))
    if new_maps:
        head = PresentedModule(new_maps[0])
    else:
        head = PresentedModule.free(modules[0])
    out = FreeResolution(head, new_maps)
    if not out.is_minimal():
        raise InternalAssertionError("unit entries survived minimalization")
    return out


# ----------------------------------------------------------------------
# Ext modules.

@dataclass(frozen=True)
class ExtModule:
    """Ext^index(M, S) as a presented module, with its dualization record."""

    module: PresentedModule
    index: int
    dual_twists: tuple

    def is_zero(self) -> bool:
        return self.module.is_zero()


def ext_from_resolution(res: FreeResolution, i: int,
                        budget: Budget | None = None) -> PresentedModule:
    """Cohomology of the dualized resolution at position i."""
    L = res.length
    ring = res.ring
    if i < 0 or i > L:
        return PresentedModule.zero(ring)
    Fi_dual = res.module_at(i).dual()
    if i < L:
        K = list(syzygies(res.maps[i].dual(), budget).columns)
    else:
        K = [Fi_dual.basis_element(t) for t in range(Fi_dual.rank)]
    Im = list(res.maps[i - 1].dual().columns) if i > 0 else []
    return subquotient_presentation(K, Im, Fi_dual, budget)


def ext_module(M: PresentedModule, i: int, resolution: FreeResolution | None = None,
               budget: Budget | None = None) -> ExtModule:
    """Ext^i_S(M, S); returns the zero module above the projective dimension."""
    ring = M.ring
    if i < 0 or i > ring.n:
        raise ValueError("Ext index out of range")
    if resolution is None:
        if M._resolution is None:
            M._resolution = free_resolution(M, budget=budget)
        resolution = M._resolution
    mod = ext_from_resolution(resolution, i, budget)
    return ExtModule(mod, i, resolution.module_at(min(i, resolution.length)).twists)


# ----------------------------------------------------------------------
# The degree-zero double-Ext engine.

class ExtCalculator:
    """Shared caches for all (i, j) cells over a fixed homogeneous ideal.

    The resolution of S/I is computed once; each inner Ext and its
    resolution are computed once per column index j and shared across
    rows.  All published values are immutable, so concurrent readers are
    safe; a lock serializes cache fills.
    """

    def __init__(self, I: Ideal, budget: Budget | None = None,
                 minimal: bool = True):
        self.I = I
        self.ring = I.ring
        self.n = I.ring.n
        self.budget = budget or DEFAULT_BUDGET
        self.minimal = minimal
        self._lock = threading.RLock()
        self._res: FreeResolution | None = None
        self._inner: dict[int, PresentedModule] = {}
        self._inner_res: dict[int, FreeResolution | None] = {}
        self._cells: dict[tuple, int] = {}

    def resolution(self) -> FreeResolution:
        with self._lock:
            if self._res is None:
                R = PresentedModule.quotient_by_ideal(self.I)
                max_len = self.n if self.minimal else self.n + 8
                self._res = free_resolution(R, max_len=max_len,
                                            minimal=self.minimal,
                                            budget=self.budget)
            return self._res

    def inner_ext(self, j: int) -> PresentedModule:
        """Ext^{n-j}_S(S/I, S)."""
        with self._lock:
            if j not in self._inner:
                self._inner[j] = ext_from_resolution(
                    self.resolution(), self.n - j, self.budget)
            return self._inner[j]

    def inner_resolution(self, j: int) -> FreeResolution | None:
        with self._lock:
            if j not in self._inner_res:
                E = self.inner_ext(j)
                if E.is_zero(self.budget):
                    self._inner_res[j] = None
                else:
                    max_len = self.n if self.minimal else self.n + 8
                    self._inner_res[j] = free_resolution(
                        E, max_len=max_len, minimal=self.minimal,
                        budget=self.budget)
            return self._inner_res[j]

    def cell(self, i: int, j: int) -> int:
        """dim_k (Ext^{n-i}(Ext^{n-j}(S/I, S), S))_0."""
        key = (i, j)
        with self._lock:
            if key in self._cells:
                return self._cells[key]
        res_E = self.inner_resolution(j)
        if res_E is None:
            value = 0
        else:
            outer = self.n - i
            if outer < 0 or outer > res_E.length:
                value = 0
            else:
                X = ext_from_resolution(res_E, outer, self.budget)
                value = X.graded_piece_dim(0, self.budget)
        with self._lock:
            self._cells[key] = value
        return value


def double_ext_degree_zero(I: Ideal, i: int, j: int,
                           calculator: ExtCalculator | None = None,
                           budget: Budget | None = None) -> int:
    """The degree-zero dimension of the double Ext at (i, j).

    Equals the (i, j) Lyubeznik number only under the F-purity hypothesis,
    which the table layer enforces; this entry point is deliberately
    ungated.
    """
    if not I.is_homogeneous():
        raise ValueError("the ideal must be homogeneous")
    n = I.ring.n
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError("indices out of range")
    calc = calculator or ExtCalculator(I, budget)
    return calc.cell(i, j)
