from __future__ import annotations

from fractions import Fraction as F

import pytest

from freespace_lab.errors import InvalidGallery, InvalidParameter
from freespace_lab.gallery import FAMILIES, Quad, family, gallery, tail_certificate
from freespace_lab.metric import validate


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_valid_and_coherent(name):
    small, big = gallery(name, 6), gallery(name, 7)
    assert validate(big) == []
    assert big.labels[:7] == small.labels
    assert all(big.dist[i][:7] == small.dist[i] for i in range(7))


def test_ag_closed_form():
    sp = gallery("ag", 6)
    d = lambda a, b: sp.dist[sp.index(a)][sp.index(b)]  # noqa: E731
    assert d("0", "x1") == 2
    assert d("0", "x3") == 1 + F(1, 3)
    assert d("x1", "x4") == 1 + F(1, 4)
    assert d("x2", "x5") == 1 + F(1, 2)


def test_tree_closed_form():
    sp = gallery("tree_omega", 6)
    d = lambda a, b: sp.dist[sp.index(a)][sp.index(b)]  # noqa: E731
    assert d("0", "xinf") == 1
    assert d("0", "x3") == F(2, 3) + F(1, 9)
    assert d("xinf", "x4") == F(1, 4) + F(1, 16)
    assert d("x2", "x5") == abs(F(1, 2) - F(1, 5)) + F(1, 4) + F(1, 25)


def test_nondual_closed_form():
    sp = gallery("nondual", 5)
    d = lambda a, b: sp.dist[sp.index(a)][sp.index(b)]  # noqa: E731
    for n in (1, 2, 3):
        for p in ("0", "a", "b"):
            assert d(p, str(n)) == 1 + F(1, n)


def test_errors():
    with pytest.raises(InvalidGallery):
        gallery("nope", 5)
    with pytest.raises(InvalidParameter):
        gallery("ag", 2)


def test_quad_positivity():
    assert Quad(F(0), F(1)).positive_on_open_closed(F(1, 2))
    assert not Quad(F(0), F(-1), F(5)).positive_on_open_closed(F(1, 2))
    assert not Quad(F(0)).positive_on_open_closed(1)
    assert Quad(F(-1), F(1)).negative_below() == 1


def test_tail_certificate_ag():
    sp = gallery("ag", 8)
    cert = tail_certificate(sp, 0, 1)
    (bt,) = cert.branches
    assert bt.excess.coeffs == (0, 2, 0)  # excess 2/m
    assert bt.min_dist.coeffs == (1, 1, 0)  # min distance 1 + 1/m
    assert cert.excess_lower_bound(1) == 0
    assert bt.qualifying_cutoff(1) is None


def test_tail_certificate_tree_finitely_many_qualify():
    sp = gallery("tree_omega", 8)
    x, y = sp.index("xinf"), sp.index("0")
    cert = tail_certificate(sp, x, y)
    (bt,) = cert.branches
    assert bt.qualifying_cutoff(F(1, 4)) is not None
    # beyond the truncation nobody is 1/4 away from xinf, so no bound is needed
    assert cert.excess_lower_bound(F(1, 4)) is None
    # for a small eps the bound is the excess 2/m^2 of the last qualifying x_m
    eps = F(1, 16)
    m = max(t for t in range(bt.t_first, bt.qualifying_cutoff(eps) + 1) if F(1, t) + F(1, t * t) >= eps)
    assert m == 16
    assert cert.excess_lower_bound(eps) == F(2, m * m)


def test_family_labels_unique():
    for name in FAMILIES:
        fam = family(name)
        labels = [fam.label(k) for k in fam.keys(10)]
        assert len(set(labels)) == len(labels)
