"""Lyubeznik tables of graded F-pure quotients, with consistency checks.

The table entry at (i, j) is the degree-zero dimension of the double Ext
computed by `homological`; the F-purity gate is mandatory because without
it that dimension can strictly exceed the true invariant.  Checks derived
from the structure theory (vanishing below the splitting dimension,
projective duality, the full sheaf-cohomology profile of F-split
Cohen-Macaulay Stanley-Reisner projective schemes) are run post hoc as
independent evidence, never as computation shortcuts.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .errors import Budget, BudgetExceededError, InternalAssertionError, NotFPureError
from .groebner import Ideal, krull_dimension
from .homological import ExtCalculator
from .fsingularities import SdimResult, fedder_is_fpure
from .sr_oracle import (SimplicialComplex, connected_components,
                        hochster_degree_zero, strand_double_ext)


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    details: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


class CheckReport:
    """An ordered list of deterministic check outcomes."""

    def __init__(self, results: Sequence[CheckResult] = ()):
        self.results = list(results)

    def add(self, result: CheckResult) -> None:
        self.results.append(result)

    def extend(self, results) -> None:
        self.results.extend(results)

    @property
    def all_passed(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    def __iter__(self):
        return iter(self.results)

    def __len__(self):
        return len(self.results)

    def to_list(self) -> list[dict]:
        return [{"name": r.name, "status": r.status, "details": r.details}
                for r in self.results]


@dataclass
class LyubeznikTable:
    """The (d+1) x (d+1) integer table of lambda_{i,j}.

    `entries[i][j]` is None only for budget-exhausted holes of a partial
    result; `provenance` records how each in-range cell was obtained
    (computed, structural-zero, theorem-zero).
    """

    d: int
    entries: list
    characteristic: int
    variables: tuple
    generators: tuple  # canonical generator strings
    fpure_certificate: bool
    mode: str  # "local-cone" | "projective"
    provenance: dict = field(default_factory=dict)
    complete: bool = True

    def entry(self, i: int, j: int) -> int:
        v = self.entries[i][j]
        if v is None:
            raise ValueError(f"cell ({i},{j}) was not computed")
        return v

    def nonzero_cells(self) -> dict:
        out = {}
        for i in range(self.d + 1):
            for j in range(self.d + 1):
                v = self.entries[i][j]
                if v:
                    out[(i, j)] = v
        return out

    def highest(self) -> int:
        return self.entry(self.d, self.d)

    def render_text(self) -> str:
        width = max(3, *(len(str(v)) for row in self.entries for v in row if v is not None))
        lines = [f"Lyubeznik table (mode={self.mode}, p={self.characteristic}, d={self.d})"]
        header = "      " + " ".join(f"j={j}".rjust(width) for j in range(self.d + 1))
        lines.append(header)
        for i in range(self.d + 1):
            cells = []
            for j in range(self.d + 1):
                if j < i:
                    cells.append(" " * width)
                else:
                    v = self.entries[i][j]
                    cells.append(("?" if v is None else str(v)).rjust(width))
            lines.append(f"i={i}".rjust(5) + " " + " ".join(cells))
        return "\n".join(lines)

    def to_document(self, checks: CheckReport | None = None) -> dict:
        entries = []
        for i in range(self.d + 1):
            for j in range(self.d + 1):
                v = self.entries[i][j]
                if v is not None:
                    entries.append([i, j, v])
        doc = {
            "schema": "lyutab.table.v1",
            "char": self.characteristic,
            "vars": list(self.variables),
            "generators": list(self.generators),
            "d": self.d,
            "mode": self.mode,
            "fpure": self.fpure_certificate,
            "complete": self.complete,
            "entries": entries,
            "provenance": [[i, j, tag] for (i, j), tag in
                           sorted(self.provenance.items())],
            "checks": checks.to_list() if checks is not None else [],
        }
        return doc


def ideal_fingerprint(I: Ideal) -> str:
    """Stable content hash of an ideal (characteristic, variables, reduced GB)."""
    gb = I.groebner_basis()
    payload = "|".join([str(I.ring.p), ",".join(I.ring.names),
                        ";".join(str(g) for g in gb.elements)])
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


class CellLedger:
    """Resumable on-disk store of computed cells, keyed (ideal hash, i, j)."""

    def __init__(self, path: str):
        self.path = path
        self._data: dict[str, int] = {}
        self._lock = threading.Lock()
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as fh:
                self._data = json.load(fh)

    def key(self, fingerprint: str, i: int, j: int) -> str:
        return f"{fingerprint}:{i}:{j}"

    def get(self, fingerprint: str, i: int, j: int):
        return self._data.get(self.key(fingerprint, i, j))

    def put(self, fingerprint: str, i: int, j: int, value: int) -> None:
        with self._lock:
            self._data[self.key(fingerprint, i, j)] = value
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(self.path) or ".",
                                       prefix=".ledger-")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self._data, fh, sort_keys=True)
            os.replace(tmp, self.path)


# ----------------------------------------------------------------------
# Table assembly.

NOT_FPURE_MESSAGE = (
    "the quotient is not F-pure (Fedder criterion), so the table is refused: "
    "for non-F-pure rings the degree-zero double-Ext dimension can be "
    "strictly larger than the Lyubeznik number; use the ungated raw-ext "
    "entry point to inspect the raw dimension")


def lyubeznik_table(I: Ideal, *, mode: str = "local-cone", strict: bool = False,
                    fast: bool = False, sdim_result: SdimResult | None = None,
                    budget: Budget | None = None, verify: bool = False,
                    threads: int = 1, ledger: CellLedger | None = None,
                    calculator: ExtCalculator | None = None) -> LyubeznikTable:
    """Assemble the Lyubeznik table of S/I (F-purity enforced).

    `strict` additionally computes every out-of-triangle cell over the
    full [0, n] range and asserts it zero.  `fast` skips cells that the
    certified splitting-dimension vanishing forces to zero, marking them
    `theorem-zero` (requires `sdim_result`, certified).  On budget
    exhaustion the partial table is attached to the raised error.
    """
    if not I.is_homogeneous():
        raise ValueError("a homogeneous ideal is required")
    if I.generators and I.is_unit_ideal():
        raise ValueError("a proper ideal is required")
    if not fedder_is_fpure(I, budget):
        raise NotFPureError(NOT_FPURE_MESSAGE)
    n = I.ring.n
    d = krull_dimension(I, budget)
    calc = calculator or ExtCalculator(I, budget)
    fingerprint = ideal_fingerprint(I) if ledger is not None else ""

    table = [[0] * (d + 1) for _ in range(d + 1)]
    provenance: dict = {}
    cells: list[tuple] = []
    skip_zero: set = set()
    if fast and sdim_result is not None and sdim_result.certified:
        sd = sdim_result.value
        jbound = min(sd + 1, d)  # the column bound caps at d (see check_vanishing)
        for i in range(d + 1):
            for j in range(d + 1):
                if i < sd or j < jbound:
                    skip_zero.add((i, j))
    for i in range(d + 1):
        for j in range(i, d + 1):
            if (i, j) in skip_zero:
                provenance[(i, j)] = "theorem-zero"
            else:
                cells.append((i, j))
    for i in range(d + 1):
        for j in range(0, i):
            provenance[(i, j)] = "structural-zero"

    extra: list[tuple] = []
    if strict:
        for i in range(n + 1):
            for j in range(n + 1):
                if i <= j <= d and i <= d:
                    continue
                extra.append((i, j))

    def compute(cell):
        i, j = cell
        if ledger is not None:
            cached = ledger.get(fingerprint, i, j)
            if cached is not None:
                return cell, cached, "ledger"
        value = calc.cell(i, j)
        if ledger is not None:
            ledger.put(fingerprint, i, j, value)
        return cell, value, "computed"

    def fill(results):
        for (i, j), value, how in results:
            if i <= d and j <= d:
                table[i][j] = value
                provenance[(i, j)] = "computed" if how != "ledger" else "ledger"

    try:
        if threads > 1:
            # the shared caches serialize heavy work; assembly stays
            # deterministic because results are written by cell index
            for j in sorted({j for _, j in cells}):
                calc.inner_resolution(j)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                fill(pool.map(compute, cells))
        else:
            fill(map(compute, cells))
    except BudgetExceededError as exc:
        partial = LyubeznikTable(
            d=d,
            entries=[[table[i][j] if provenance.get((i, j)) else None
                      for j in range(d + 1)] for i in range(d + 1)],
            characteristic=I.ring.p, variables=I.ring.names,
            generators=tuple(str(g) for g in I.generators),
            fpure_certificate=True, mode=mode, provenance=provenance,
            complete=False)
        for i in range(d + 1):
            for j in range(0, i):
                partial.entries[i][j] = 0
        exc.partial_table = partial
        raise

    if strict:
        for (i, j) in extra:
            value = calc.cell(i, j)
            if value != 0:
                raise InternalAssertionError(
                    f"strict mode: cell ({i},{j}) outside the table is {value} != 0")

    result = LyubeznikTable(
        d=d, entries=table, characteristic=I.ring.p, variables=I.ring.names,
        generators=tuple(str(g) for g in I.generators),
        fpure_certificate=True, mode=mode, provenance=provenance)

    if result.entry(d, d) < 1:
        raise InternalAssertionError("highest Lyubeznik number vanished")
    for i in range(d + 1):
        for j in range(0, i):
            if result.entry(i, j) != 0:
                raise InternalAssertionError("table is not upper triangular")

    if verify:
        I.groebner_basis().verify_confluence()
        calc.resolution().verify_exactness(budget)
        for (i, j) in cells:
            oracle = strand_double_ext(I, i, j, calc, budget)
            if oracle != result.entry(i, j):
                raise InternalAssertionError(
                    f"strand oracle disagrees at ({i},{j}): "
                    f"{oracle} != {result.entry(i, j)}")
    return result


def projective_table(I: Ideal, **kwargs) -> LyubeznikTable:
    """Table of Proj(S/I): the local table of the cone, in projective mode.

    With d = dim X the cone has dimension d + 1, so the table has indices
    0..d+1.  (The defining formula is evaluated on the cone; following the
    working form used throughout, the projective table IS the cone table.)
    """
    T = lyubeznik_table(I, mode="projective", **kwargs)
    if T.d < 1:
        raise ValueError("projective mode needs dim X >= 0, i.e. cone dimension >= 1")
    return T


# ----------------------------------------------------------------------
# Checks.

def table_shape_checks(T: LyubeznikTable) -> list[CheckResult]:
    """Upper triangularity and a nonzero highest entry."""
    bad = [(i, j) for i in range(T.d + 1) for j in range(0, i)
           if T.entries[i][j] not in (0, None)]
    tri = CheckResult(
        "upper-triangular",
        "pass" if not bad else "fail",
        "" if not bad else f"nonzero below diagonal at {bad}")
    high = T.entries[T.d][T.d]
    highest = CheckResult(
        "highest-nonzero",
        "pass" if (high is not None and high >= 1) else "fail",
        f"lambda_(d,d) = {high}")
    return [tri, highest]


def check_vanishing(T: LyubeznikTable, sd: SdimResult) -> CheckResult:
    """Entries must vanish for i < sdim or j < min(sdim + 1, d).

    The column bound carries the cap at d that the underlying case
    analysis produces: when the splitting prime is zero (sdim = d, the
    strongly F-regular case) the vanishing column range stops below d,
    leaving the mandatory nonzero corner entry alone.  Skipped unless the
    splitting dimension is certified.
    """
    if not sd.certified:
        return CheckResult("sdim-vanishing", "skipped",
                           "splitting-ideal chain did not stabilize; sdim uncertified")
    jbound = min(sd.value + 1, T.d)
    bad = []
    for i in range(T.d + 1):
        for j in range(T.d + 1):
            if (i < sd.value or j < jbound):
                v = T.entries[i][j]
                if v not in (0, None):
                    bad.append((i, j, v))
    return CheckResult(
        "sdim-vanishing",
        "pass" if not bad else "fail",
        f"sdim = {sd.value}" if not bad else f"sdim = {sd.value}; violations {bad}")


def check_projective_duality(T: LyubeznikTable, assert_cm: bool = False) -> CheckResult:
    """lambda_(d+1,d+1) = lambda_(0,1) + 1 and the mirrored first row,
    for Cohen-Macaulay projective input (caller-asserted)."""
    if T.mode != "projective":
        return CheckResult("projective-duality", "skipped", "not a projective table")
    if not assert_cm:
        return CheckResult("projective-duality", "skipped",
                           "Cohen-Macaulay assertion not provided")
    dX = T.d - 1
    problems = []
    if T.entry(T.d, T.d) != T.entry(0, 1) + 1:
        problems.append(
            f"lambda_({T.d},{T.d}) = {T.entry(T.d, T.d)} != "
            f"lambda_(0,1) + 1 = {T.entry(0, 1) + 1}")
    for j in range(2, dX + 1):
        lhs = T.entry(0, j)
        rhs = T.entry(dX + 2 - j, dX + 1)
        if lhs != rhs:
            problems.append(f"lambda_(0,{j}) = {lhs} != lambda_({dX + 2 - j},{dX + 1}) = {rhs}")
    return CheckResult("projective-duality",
                       "pass" if not problems else "fail",
                       "; ".join(problems))


def check_theorem_d(T: LyubeznikTable, delta: SimplicialComplex, p: int,
                    assert_cm_equidim: bool = False) -> CheckResult:
    """Full predicted profile for F-split CM equidimensional projective
    Stanley-Reisner input: connectedness count in (0,1) and (d+1,d+1),
    sheaf cohomology along the first row and last column, zero elsewhere.

    Sheaf-cohomology dimensions are taken through the degree-zero
    identification with local cohomology of the cone (reduced simplicial
    cohomology one degree down), which is the form the duality checks are
    consistent with.
    """
    if T.mode != "projective":
        return CheckResult("theorem-d-profile", "skipped", "not a projective table")
    if not assert_cm_equidim:
        return CheckResult("theorem-d-profile", "skipped",
                           "CM + equidimensional assertion not provided")
    dX = T.d - 1
    t = connected_components(delta)
    expected = [[0] * (T.d + 1) for _ in range(T.d + 1)]
    expected[0][1] = t - 1
    expected[T.d][T.d] = t
    for j in range(2, dX + 1):
        expected[0][j] = hochster_degree_zero(delta, j, p)
        expected[j][dX + 1] = hochster_degree_zero(delta, dX + 2 - j, p)
    problems = []
    for i in range(T.d + 1):
        for j in range(T.d + 1):
            if T.entries[i][j] != expected[i][j]:
                problems.append(
                    f"({i},{j}): got {T.entries[i][j]}, expected {expected[i][j]}")
    return CheckResult("theorem-d-profile",
                       "pass" if not problems else "fail",
                       f"t = {t}" if not problems else "; ".join(problems))


def standard_checks(T: LyubeznikTable, sd: SdimResult | None = None,
                    delta: SimplicialComplex | None = None,
                    assert_cm: bool = False,
                    assert_equidim: bool = False) -> CheckReport:
    """The default post-hoc report for a computed table."""
    report = CheckReport()
    report.extend(table_shape_checks(T))
    if sd is not None:
        report.add(check_vanishing(T, sd))
    if T.mode == "projective":
        report.add(check_projective_duality(T, assert_cm))
        if delta is not None:
            report.add(check_theorem_d(T, delta, T.characteristic,
                                       assert_cm and assert_equidim))
    return report
