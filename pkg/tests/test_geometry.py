import math

import pytest
from hypothesis import given, strategies as st

from bpsloc.geometry import Beacon, Deployment, Domain, Point, Signature, detects, signature_at

inside = st.floats(min_value=0, max_value=100, allow_nan=False)
radius = st.floats(min_value=0, max_value=200, allow_nan=False)


def test_detects_center():
    assert detects(Beacon(Point(0, 0), 5), Point(0, 0)) == 1


def test_detects_boundary_is_excluded():
    assert detects(Beacon(Point(0, 0), 5), Point(3, 4)) == 0


def test_zero_radius_detects_nothing():
    assert detects(Beacon(Point(0, 0), 0), Point(0, 0)) == 0


def test_signature_of_empty_deployment():
    assert signature_at(Deployment(Domain()), Point(12, 34)) == Signature(())


def test_signature_single_and_pair():
    one = Deployment(Domain(), (Beacon(Point(50, 50), 10),))
    assert signature_at(one, Point(50, 50)).bits == (1,)
    two = Deployment(Domain(), (Beacon(Point(0, 0), 5), Beacon(Point(100, 100), 5)))
    assert signature_at(two, Point(1, 1)).bits == (1, 0)


@pytest.mark.parametrize("bad", [-1.0, math.inf, math.nan])
def test_beacon_rejects_bad_radius(bad):
    with pytest.raises(ValueError):
        Beacon(Point(0, 0), bad)


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point(math.nan, 0)


def test_domain_and_deployment_validation():
    with pytest.raises(ValueError):
        Domain(0, 10)
    with pytest.raises(ValueError):
        Deployment(Domain(10, 10), (Beacon(Point(11, 5), 1),))


def test_signature_string_round_trip():
    s = Signature.from_string("0110")
    assert s.bits == (0, 1, 1, 0)
    assert str(s) == "0110"
    with pytest.raises(ValueError):
        Signature.from_string("012")
    with pytest.raises(ValueError):
        Signature((0, 2))


@given(st.sampled_from([(3, 4, 5), (5, 12, 13), (8, 15, 17), (0, 7, 7)]), st.integers(1, 50))
def test_strict_boundary_on_pythagorean_points(triple, k):
    a, b, c = (k * v for v in triple)
    assert detects(Beacon(Point(0, 0), c), Point(a, b)) == 0
    assert detects(Beacon(Point(0, 0), c), Point(0.999 * a, 0.999 * b)) == 1


ints = st.integers(-1000, 1000)


# integer coordinates keep the shifted differences exact
@given(ints, ints, radius, ints, ints, ints, ints)
def test_translation_invariance(bx, by, r, px, py, tx, ty):
    base = detects(Beacon(Point(bx, by), r), Point(px, py))
    moved = detects(Beacon(Point(bx + tx, by + ty), r), Point(px + tx, py + ty))
    assert base == moved


@given(
    st.lists(st.tuples(inside, inside, radius), min_size=1, max_size=8),
    st.tuples(inside, inside),
    st.randoms(use_true_random=False),
)
def test_permuting_beacons_permutes_bits(rows, target, rnd):
    dom = Domain()
    dep = Deployment(dom, tuple(Beacon(Point(x, y), r) for x, y, r in rows))
    order = list(range(len(rows)))
    rnd.shuffle(order)
    p = Point(*target)
    sig = signature_at(dep, p).bits
    assert signature_at(dep.permuted(order), p).bits == tuple(sig[i] for i in order)
