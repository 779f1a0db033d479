from __future__ import annotations

import copy
from fractions import Fraction as F

import pytest

from freespace_lab.certificates import check_row, check_verdict
from freespace_lab.elements import Molecule, all_molecules
from freespace_lab.errors import InvalidPair, TooLarge
from freespace_lab.extremal import (
    Status,
    Verdict,
    classify_all,
    has_property_Z,
    is_denting,
    is_exposed_by_fxy,
    is_extreme,
    is_strongly_exposed,
    oracle_extreme_points,
)
from freespace_lab.gallery import FAMILIES, gallery
from freespace_lab.metric import MetricSpace, segment_is_trivial, snowflake, two_point_space

from conftest import make_spaces

P, R, I = Status.PROVEN, Status.REFUTED, Status.INCONCLUSIVE


def test_square_extreme(square):
    assert is_extreme(square, "0", "a").status is P
    v = is_extreme(square, "0", "b")
    assert v.status is R and v.evidence["items"][0]["witness"] == "a"
    with pytest.raises(InvalidPair):
        is_extreme(square, "0", "0")


def test_square_exposed_by_fxy(square):
    assert is_exposed_by_fxy(square, "0", "a").status is P
    v = is_exposed_by_fxy(square, "0", "b")
    assert v.status is R
    assert ["0", "a"] in v.evidence["maximizers"] and ["a", "b"] in v.evidence["maximizers"]
    assert is_exposed_by_fxy(two_point_space(), "0", "a").status is P


def test_square_oracle(square):
    verts = oracle_extreme_points(square)
    assert len(verts) == 8
    labels = {m.labels(square) for m in verts}
    assert ("0", "b") not in labels and ("a", "c") not in labels
    assert len(oracle_extreme_points(snowflake(square, F(1, 2)))) == 12
    assert oracle_extreme_points(two_point_space()) == [Molecule(0, 1), Molecule(1, 0)]


def test_oracle_cap(square):
    with pytest.raises(TooLarge):
        oracle_extreme_points(square, cap=3)


def test_square_classification(square):
    rows = classify_all(square)
    statuses = [tuple(v.status for v in r.verdicts()) for r in rows]
    assert statuses.count((P, P, P, P)) == 8
    assert statuses.count((R, R, R, R)) == 4


def test_finite_collapse_and_delta_table():
    for sp in make_spaces(41, 25, 3, 7):
        for x, y in sp.pairs():
            trivial = segment_is_trivial(sp, x, y)
            d = is_denting(sp, x, y)
            assert (d.status is P) == trivial
            if trivial:
                assert all(F(r["delta"]) > 0 for r in d.evidence["delta_table"])
                z = has_property_Z(sp, x, y)
                assert z.status is R and is_strongly_exposed(sp, x, y).status is P


def test_delta_table_is_one_minus_ratio(square):
    v = is_denting(square, "0", "a")
    row = next(r for r in v.evidence["delta_table"] if r["eps"] == "1")
    # b and c both have d(0,z)+d(z,a) = 3 and min distance 1
    assert row["min_sum"] == "3" and row["delta"] == "2/3"


def test_ag_pair():
    sp = gallery("ag", 8)
    assert is_extreme(sp, "0", "x1").status is P
    d = is_denting(sp, "0", "x1")
    assert d.status is R and d.evidence["eps"] == "1"
    for it in d.evidence["items"]:
        m = it["t"]
        assert F(it["excess"]) == F(2, m) and F(it["min_dist"]) == 1 + F(1, m)
    z = has_property_Z(sp, "0", "x1")
    assert z.status is P
    assert [it["witness"] for it in z.evidence["schedule_items"][:3]] == ["x2", "x4", "x6"]
    assert is_strongly_exposed(sp, "0", "x1").status is R


def test_tree_pair_denting_but_not_strongly_exposed():
    sp = gallery("tree_omega", 8)
    assert is_extreme(sp, "xinf", "0").status is P
    assert is_denting(sp, "xinf", "0").status is P
    z = has_property_Z(sp, "xinf", "0")
    assert z.status is P
    for it in z.evidence["items"]:
        m = it["t"] if "t" in it else int(it["witness"][1:])
        assert m >= 2 * it["n"] - 1
    assert is_strongly_exposed(sp, "xinf", "0").status is R


def test_exposed_by_fxy_inconclusive_on_gallery():
    assert is_exposed_by_fxy(gallery("ag", 5), "0", "x1").status is I


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_gallery_rows_check_and_chain(name):
    sp = gallery(name, 7)
    for row in classify_all(sp):
        assert row.chain_holds()
        res = check_row(sp, row)
        assert res.ok, res.problems


def test_finite_rows_check():
    for sp in make_spaces(42, 15, 2, 6):
        for row in classify_all(sp):
            assert row.oracle_extreme == row.extreme.proven
            assert check_row(sp, row).ok


def test_threads_give_same_rows(square, monkeypatch):
    serial = [r.to_json() for r in classify_all(square)]
    monkeypatch.setenv("FREESPACE_LAB_THREADS", "4")
    assert [r.to_json() for r in classify_all(square)] == serial


def test_verdict_json_roundtrip(square):
    v = is_denting(square, "0", "b")
    assert Verdict.from_json(v.to_json()) == v


def test_single_point_space_has_no_molecules():
    from freespace_lab.errors import EmptySpace

    with pytest.raises(EmptySpace):
        classify_all(MetricSpace.from_matrix(["0"], [[0]]))
    with pytest.raises(EmptySpace):
        all_molecules(MetricSpace.from_matrix(["0"], [[0]]))


# -- the checker rejects tampered evidence ------------------------------------------

def _tampered(v: Verdict, fn) -> Verdict:
    ev = copy.deepcopy(v.evidence)
    fn(ev)
    return Verdict(v.status, v.claim, v.pair, ev)


def test_checker_rejects_wrong_values(square):
    v = is_extreme(square, "0", "b")
    bad = _tampered(v, lambda ev: ev["items"][0].update(lhs="3"))
    assert not check_verdict(square, bad).ok
    bad = _tampered(v, lambda ev: ev["items"][0].update(witness="b"))
    assert not check_verdict(square, bad).ok


def test_checker_rejects_flipped_status(square):
    v = is_extreme(square, "0", "a")
    assert not check_verdict(square, Verdict(R, v.claim, v.pair, {"items": []})).ok
    z = has_property_Z(square, "0", "b")  # a is on the segment, so (Z) holds
    fake = {"depth": 20, "n_star": 2, "ratio_lower_bound": "1", "items": []}
    assert not check_verdict(square, Verdict(R, z.claim, z.pair, fake)).ok


def test_checker_rejects_bad_delta(square):
    v = is_denting(square, "0", "a")
    bad = _tampered(v, lambda ev: ev["delta_table"][0].update(delta="9/10"))
    assert not check_verdict(square, bad).ok


def test_checker_rejects_short_Z_list():
    sp = gallery("ag", 8)
    v = has_property_Z(sp, "0", "x1")
    bad = _tampered(v, lambda ev: ev["items"].pop())
    assert not check_verdict(sp, bad).ok
    bad = _tampered(v, lambda ev: ev["schedule_items"][4].update(t=3, witness="x3"))
    assert not check_verdict(sp, bad).ok


def test_checker_rejects_denting_refutation_with_close_points():
    sp = gallery("ag", 8)
    v = is_denting(sp, "0", "x1")
    bad = _tampered(v, lambda ev: ev.update(eps="2"))
    assert not check_verdict(sp, bad).ok
