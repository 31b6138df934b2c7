"""Interval exchanges, discontinuity orbits and the blow-up construction."""

from fractions import Fraction as F

import pytest

from cantorwalk.giet import (GietError, blow_up, discontinuity_closure,
                             giet_from_branches, one_sided_orbit, rotation)
from cantorwalk.maps import apply, break_pairs, break_points, is_identity

ROT3 = rotation((0, 1), F(1, 3))
SWAP = giet_from_branches((0, 1), [(0, F(1, 2), 1, F(1, 2)),
                                   (F(1, 2), 1, 1, F(-1, 2))])


def test_rotation_branches():
    assert [(b.lo, b.hi, b.slope, b.offset) for b in ROT3.branches] == [
        (F(0), F(2, 3), F(1), F(1, 3)),
        (F(2, 3), F(1), F(1), F(-2, 3))]
    assert ROT3.is_iet
    assert ROT3.apply(0) == F(1, 3)
    assert ROT3.apply(F(2, 3)) == 0


def test_swap_is_valid_iet():
    assert SWAP.is_iet
    assert SWAP.apply(0) == F(1, 2)
    assert is_identity_like(SWAP)


def is_identity_like(g):
    # swap is an involution of [0,1)
    for x in (F(0), F(1, 4), F(1, 2), F(3, 4)):
        if g.apply(g.apply(x)) != x:
            return False
    return True


def test_overlapping_images_rejected():
    with pytest.raises(GietError):
        giet_from_branches((0, 1), [(0, F(1, 2), 1, 0), (F(1, 2), 1, 1, F(-1, 2))])


def test_inverse_and_preimage():
    inv = ROT3.inverse()
    for x in (F(0), F(1, 5), F(2, 3), F(9, 10)):
        assert inv.apply(ROT3.apply(x)) == x
        assert ROT3.preimage(ROT3.apply(x)) == x


def test_discontinuity_closure_oracles():
    D, closed = discontinuity_closure([ROT3], 3)
    assert sorted(D) == [F(0), F(1, 3), F(2, 3)]
    assert closed
    D2, closed2 = discontinuity_closure([SWAP], 2)
    assert sorted(D2) == [F(0), F(1, 2)]
    assert closed2
    rot4 = rotation((0, 1), F(1, 4))
    _, c1 = discontinuity_closure([rot4], 1)
    assert not c1
    D4, c4 = discontinuity_closure([rot4], 4)
    assert c4 and sorted(D4) == [F(0), F(1, 4), F(1, 2), F(3, 4)]


def test_one_sided_orbit_oracles():
    so = one_sided_orbit([ROT3], 0, "right", 5)
    assert sorted(so.points) == [F(0), F(1, 3), F(2, 3)]
    assert so.closed
    so2 = one_sided_orbit([SWAP], F(1, 2), "left", 3)
    assert sorted(so2.points) == [F(1, 2), F(1)]
    assert so2.closed
    so3 = one_sided_orbit([ROT3], F(1, 5), "right", 0)
    assert so3.points == (F(1, 5),) and not so3.closed


def test_blow_up_rotation_third():
    res = blow_up([ROT3], 3, F(1, 4))
    assert res.exact
    assert len(res.blown_points) == 3
    # the blown point at the hull's left edge opens no interior gap, so the
    # compact set carries one bounded gap per blown point strictly inside
    assert len(res.space.bounded_gaps()) == 2
    g = res.induced[0]
    # conjugacy F o rot = induced o F on sampled points
    for i in range(50):
        x = F(i, 50)
        assert apply(g, res.conjugate_point(x)) == \
            res.conjugate_point(ROT3.apply(x))
    # break pairs sit exactly at the gaps blown from genuine jump points
    jumps = ROT3.jump_points()
    expected = set()
    for c, _ in res.blown_points:
        if c in jumps:
            gap = next(gp for gp in res.space.bounded_gaps()
                       if gp[0] < res.conjugate_point(c) <= gp[1])
            expected.update(gap)
    assert set(break_points(g)) == expected


def test_blow_up_swap():
    res = blow_up([SWAP], 2, F(1, 4))
    assert res.exact
    g = res.induced[0]
    assert is_identity(g) is False
    # the induced map swaps the two cells and breaks exactly at the blown
    # {1/2} gap
    gap = res.space.bounded_gaps()[0]
    assert set(break_points(g)) == set(gap)


def test_blow_up_identity_giet():
    ident = giet_from_branches((0, 1), [(0, 1, 1, 0)])
    res = blow_up([ident], 2, F(1, 3), seeds=[F(1, 2)])
    assert res.exact
    assert is_identity(res.induced[0])
    assert break_pairs(res.induced[0]) == []
    assert len(res.space.bounded_gaps()) == 1


def test_blow_up_rejects_bad_weight():
    with pytest.raises(GietError):
        blow_up([ROT3], 2, 1)
    with pytest.raises(GietError):
        blow_up([ROT3], 2, 0)
