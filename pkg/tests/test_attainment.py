from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from freespace_lab.attainment import random_function, strongly_attains, verify_na_equals_sna
from freespace_lab.elements import LipFunction, all_molecules
from freespace_lab.errors import DegenerateInput
from freespace_lab.lipschitz import build_f_xy, distance_function, lip_norm, pair_molecule
from freespace_lab.metric import segment_is_trivial

from conftest import make_spaces


def test_zero_function_rejected(square):
    with pytest.raises(DegenerateInput):
        strongly_attains(square, LipFunction.zero(square))


def test_f_xy_attains_on_its_pair(square):
    rep = strongly_attains(square, build_f_xy(square, "0", "a"))
    assert (0, 1) in rep.attaining_pairs and rep.lip_norm == 1
    assert rep.trivial_segment_pair is not None


def test_distance_function_attains(square):
    f = distance_function(square, "0")
    rep = strongly_attains(square, f)
    assert lip_norm(f).pair in rep.attaining_pairs or lip_norm(f).pair[::-1] in rep.attaining_pairs


def test_random_functions_attain():
    rng = random.Random(3)
    for sp in make_spaces(51, 30, 6, 6):
        f = random_function(sp, rng)
        rep = strongly_attains(sp, f)
        assert rep.attaining_pairs
        # V is norming: the best molecule pairing is the Lipschitz norm
        assert max(pair_molecule(f, m.x, m.y) for m in all_molecules(sp)) == rep.lip_norm


def test_trivial_segment_pair_really_trivial():
    rng = random.Random(4)
    for sp in make_spaces(52, 20, 3, 6):
        rep = strongly_attains(sp, random_function(sp, rng))
        if rep.trivial_segment_pair is not None:
            assert segment_is_trivial(sp, *rep.trivial_segment_pair)


def test_verify_square_and_seed_reproducible(square):
    a = verify_na_equals_sna(square, 25, seed=11)
    b = verify_na_equals_sna(square, 25, seed=11)
    assert a.passed and a.counterexample is None
    assert a.to_json() == b.to_json()
    assert len(a.samples) == 25


def test_report_json(square):
    rep = strongly_attains(square, LipFunction.from_values(square, [0, F(1), F(2), F(1)]))
    data = rep.to_json()
    assert data["lip_norm"] == "1" and ["a", "0"] in data["attaining_pairs"]
