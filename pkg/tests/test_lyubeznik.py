"""Table assembly, gates, checks, ledger, and table invariants."""

import copy
import json
import random

import pytest

from lyutab import (Budget, BudgetExceededError, CellLedger, ExtCalculator,
                    Ideal, NotFPureError, PolyRing, check_projective_duality,
                    check_theorem_d, check_vanishing, lyubeznik_table,
                    projective_table, sdim, standard_checks,
                    stanley_reisner_ideal, strand_double_ext,
                    table_shape_checks)
from lyutab.lyubeznik import ideal_fingerprint

from conftest import SEED, SR_FIXTURES, random_squarefree_ideal


def nz(T):
    return T.nonzero_cells()


def test_trivial_table_hypersurface():
    for p in (2, 3, 5):
        R = PolyRing(p, ["x", "y"])
        x, y = R.gens()
        T = lyubeznik_table(Ideal(R, (x * y,)))
        assert T.d == 1 and nz(T) == {(1, 1): 1}


def test_trivial_table_complete_intersection():
    R = PolyRing(3, ["x1", "x2", "x3", "x4"])
    a, b, c, d = R.gens()
    T = lyubeznik_table(Ideal(R, (a * b, c * d)))
    assert T.d == 2 and nz(T) == {(2, 2): 1}


def test_two_planes_table_and_checks():
    for p in (2, 3, 5):
        I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], p)
        T = lyubeznik_table(I)
        assert nz(T) == {(0, 1): 1, (2, 2): 2}
        report = standard_checks(T, sdim(I))
        assert report.all_passed


def test_table_strict_and_verify():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    T = lyubeznik_table(I, strict=True, verify=True)
    assert nz(T) == {(0, 1): 1, (2, 2): 2}


def test_table_gate_not_fpure():
    R = PolyRing(2, ["x", "y"])
    x, y = R.gens()
    with pytest.raises(NotFPureError) as err:
        lyubeznik_table(Ideal(R, (x * x,)))
    assert "raw" in str(err.value)


def test_table_requires_homogeneous_proper():
    R = PolyRing(2, ["x", "y"])
    x, y = R.gens()
    with pytest.raises(ValueError):
        lyubeznik_table(Ideal(R, (x + R.one(),)))
    with pytest.raises(ValueError):
        lyubeznik_table(Ideal(R, (R.one(),)))


def test_regular_ring_table():
    R = PolyRing(3, ["x", "y", "z"])
    T = lyubeznik_table(Ideal(R, ()))
    assert T.d == 3 and nz(T) == {(3, 3): 1}


def test_characteristic_independence_of_monomial_tables():
    rnd = random.Random(SEED)
    done = 0
    while done < 5:
        I2, delta = random_squarefree_ideal(2, 4, rnd)
        if I2.is_zero_ideal() or I2.is_unit_ideal():
            continue
        tables = []
        for p in (2, 3, 5):
            Ip = stanley_reisner_ideal(delta, p)
            tables.append(lyubeznik_table(Ip).entries)
        assert tables[0] == tables[1] == tables[2]
        done += 1


def test_shape_checks_and_negative_control():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    T = lyubeznik_table(I)
    assert all(r.passed for r in table_shape_checks(T))
    bad = copy.deepcopy(T)
    bad.entries[1][0] = 7  # corrupt below the diagonal
    results = table_shape_checks(bad)
    assert results[0].status == "fail"
    bad2 = copy.deepcopy(T)
    bad2.entries[2][2] = 0  # kill the highest number
    assert table_shape_checks(bad2)[1].status == "fail"


def test_check_vanishing_and_skip():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    T = lyubeznik_table(I)
    sd = sdim(I)
    assert check_vanishing(T, sd).status == "pass"
    bad = copy.deepcopy(T)
    bad.entries[0][0] = 1  # j = 0 < sdim + 1 must vanish
    assert check_vanishing(bad, sd).status == "fail"

    # uncertified sdim skips the check
    from lyutab.fsingularities import SdimResult, SplittingData
    fake = SdimResult(value=0, certified=False,
                      data=SplittingData((), None, I, 0, 1, False))
    assert check_vanishing(T, fake).status == "skipped"


def test_strongly_fregular_table_trivial():
    R = PolyRing(5, ["x1", "x2", "x3", "x4"])
    a, b, _, _ = R.gens()
    I = Ideal(R, (a, b))
    T = lyubeznik_table(I)
    sd = sdim(I)
    assert sd.certified and sd.value == T.d == 2
    assert nz(T) == {(2, 2): 1}
    assert check_vanishing(T, sd).status == "pass"


def test_projective_tables_and_duality():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    T = projective_table(I)
    assert T.mode == "projective"
    # dim X = 1: lambda_{0,1} = t - 1 = 1 and lambda_{2,2} = t = 2
    assert T.entry(0, 1) == 1 and T.entry(2, 2) == 2
    assert check_projective_duality(T, assert_cm=True).status == "pass"
    assert check_projective_duality(T, assert_cm=False).status == "skipped"

    # hyperplane: connected, lambda_{0,1} = 0
    R = PolyRing(2, ["x1", "x2", "x3"])
    a, _, _ = R.gens()
    Th = projective_table(Ideal(R, (a,)))
    assert Th.entry(0, 1) == 0
    assert Th.entry(Th.d, Th.d) == 1
    assert check_projective_duality(Th, assert_cm=True).status == "pass"


def test_check_theorem_d_profiles():
    cases = [
        ("two_disjoint_edges", 2, 2),
        ("hollow_triangle", 3, 1),
        ("hollow_square", 2, 1),
        ("hollow_tetrahedron", 5, 1),
        ("triangle_plus_edge", 2, 2),
    ]
    for name, p, t in cases:
        delta = SR_FIXTURES[name]
        I = stanley_reisner_ideal(delta, p)
        T = projective_table(I)
        res = check_theorem_d(T, delta, p, assert_cm_equidim=True)
        assert res.status == "pass", (name, res.details)
        assert T.entry(0, 1) == t - 1
        assert T.entry(T.d, T.d) == t
        # negative control
        bad = copy.deepcopy(T)
        bad.entries[0][1] += 1
        assert check_theorem_d(bad, delta, p, True).status == "fail"
        # skipped without the assertion
        assert check_theorem_d(T, delta, p, False).status == "skipped"


def test_oracle_agreement_random_squarefree():
    rnd = random.Random(SEED)
    done = 0
    while done < 6:
        p = rnd.choice((2, 3))
        I, _ = random_squarefree_ideal(p, 4, rnd)
        if I.is_zero_ideal() or I.is_unit_ideal():
            continue
        T = lyubeznik_table(I)
        calc = ExtCalculator(I)
        for i in range(T.d + 1):
            for j in range(T.d + 1):
                assert T.entries[i][j] == strand_double_ext(I, i, j, calc)
        done += 1


def test_fast_mode_matches_full():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    sd = sdim(I)
    full = lyubeznik_table(I)
    fast = lyubeznik_table(I, fast=True, sdim_result=sd)
    assert fast.entries == full.entries
    assert any(tag == "theorem-zero" for tag in fast.provenance.values())


def test_threads_deterministic():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 3)
    a = lyubeznik_table(I, threads=1)
    b = lyubeznik_table(I, threads=3)
    assert a.entries == b.entries


def test_budget_exhaustion_attaches_partial():
    I = stanley_reisner_ideal(SR_FIXTURES["hollow_square"], 2)
    # enough budget for the gate and the dimension, not for the cells
    with pytest.raises(BudgetExceededError) as err:
        lyubeznik_table(I, budget=Budget(8))
    partial = getattr(err.value, "partial_table", None)
    assert partial is not None and partial.complete is False
    assert any(v is None for row in partial.entries for v in row)


def test_cell_ledger_roundtrip(tmp_path):
    path = tmp_path / "cells.json"
    ledger = CellLedger(str(path))
    ledger.put("abc", 0, 1, 7)
    again = CellLedger(str(path))
    assert again.get("abc", 0, 1) == 7
    assert again.get("abc", 1, 1) is None


def test_table_uses_ledger(tmp_path):
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    path = tmp_path / "cells.json"
    ledger = CellLedger(str(path))
    T1 = lyubeznik_table(I, ledger=ledger)
    fp = ideal_fingerprint(I)
    assert ledger.get(fp, 2, 2) == 2
    # poison one ledger cell; a rerun must read it back (proving reuse)
    ledger.put(fp, 2, 2, 99)
    T2 = lyubeznik_table(Ideal(I.ring, I.generators),
                         ledger=CellLedger(str(path)))
    assert T2.entry(2, 2) == 99


def test_document_rendering_stable():
    I = stanley_reisner_ideal(SR_FIXTURES["two_disjoint_edges"], 2)
    T = lyubeznik_table(I)
    doc1 = json.dumps(T.to_document(standard_checks(T)))
    doc2 = json.dumps(T.to_document(standard_checks(T)))
    assert doc1 == doc2
    text = T.render_text()
    assert "j=2" in text and text.count("\n") == T.d + 2
