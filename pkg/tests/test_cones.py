from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from symquad.cones import ChamberFan, ConeQ, DivClass, cone_of, gkz_decomposition, primitive
from symquad.errors import ValidationError
from symquad.ledgers import ledger_S


def test_primitive():
    assert primitive([Fraction(1, 2), 1]) == (1, 2)
    assert primitive([-4, 6, 0]) == (-2, 3, 0)
    with pytest.raises(ValidationError):
        primitive([0, 0])


def test_divclass_arithmetic():
    B = ("H", "E1")
    a = DivClass(B, (3, -1), "a")
    b = DivClass(B, (1, 0), "b")
    assert (a - 3 * b).vector() == (0, -1)
    assert (a + a - 2 * a).is_zero()
    u = DivClass(B, (2, None), "u")
    assert not u.known
    with pytest.raises(ValidationError):
        u.vector()


def test_cone_extremal_rays_and_membership():
    C = ConeQ([(1, 0), (0, 1), (1, 1)])
    assert C.rays == [(0, 1), (1, 0)]
    assert C.contains((3, 5)) and C.contains_interior((1, 2))
    assert not C.contains_interior((0, 1))
    assert C.on_boundary_ray((0, 7))
    assert not C.contains((-1, 1))


def test_degenerate_input():
    with pytest.raises(ValidationError):
        ConeQ([(1, 0), (2, 0)])
    with pytest.raises(ValidationError):
        gkz_decomposition([(1, 0, 0, 0), (0, 1, 0, 0)])


def test_two_rays_single_chamber():
    fan = gkz_decomposition([(1, 0), (0, 1)])
    assert len(fan.chambers) == 1


def test_s4_chambers():
    L = ledger_S(2)
    fan = gkz_decomposition([L[n] for n in ("D1", "D2", "E1", "S")])
    assert len(fan.chambers) == 3
    assert fan.chambers[1] == cone_of([L["D1"], L["D2"]]) or cone_of([L["D1"], L["D2"]]) in fan.chambers
    assert all(fan.check().values())


def test_s6_chambers():
    L = ledger_S(3)
    fan = gkz_decomposition([L[n] for n in ("D1", "D2", "D3", "E1", "E2", "S")])
    assert len(fan.chambers) == 9
    assert cone_of([L["D1"], L["D2"], L["D3"]]) in fan.chambers
    mov = cone_of([L["D1"], L["D2"], L["D3"], L["P"]])
    assert fan.is_union_of_chambers(mov)
    assert len(fan.chambers_in(mov)) == 2
    assert all(fan.check().values())


def brute_force_signature(gens, point):
    """Which cones spanned by 2 or 3 generators contain the point in their interior."""
    sig = set()
    for k in (2, 3) if len(gens[0]) == 3 else (2,):
        for sub in combinations(gens, k):
            try:
                C = ConeQ(list(sub))
            except ValidationError:
                continue
            if C.contains_interior(point):
                sig.add(tuple(C.rays))
    return sig


vec3 = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 3))


@given(st.lists(vec3, min_size=3, max_size=6, unique=True))
def test_rank3_fan_is_a_subdivision(gens):
    gens = [g for g in gens if any(g)]
    assume(len(gens) >= 3)
    try:
        support = ConeQ(gens)
    except ValidationError:
        assume(False)
    fan = gkz_decomposition(gens)
    assert all(fan.check().values())
    # chambers are the cells where the family of containing cones is constant
    for ch in fan.chambers:
        p = fan._slice.interior_point(ch)
        q = tuple(sum(x) for x in zip(*[tuple(Fraction(c) for c in r) for r in ch.rays]))
        assert brute_force_signature(gens, p) == brute_force_signature(gens, q)
    sigs = [frozenset(brute_force_signature(gens, fan._slice.interior_point(ch))) for ch in fan.chambers]
    assert len(set(sigs)) == len(sigs)
    assert support == fan.support


vec2 = st.tuples(st.integers(-4, 4), st.integers(0, 4))


@given(st.lists(vec2, min_size=2, max_size=6, unique=True))
def test_rank2_fan_is_a_subdivision(gens):
    gens = [g for g in gens if any(g)]
    try:
        ConeQ(gens)
    except ValidationError:
        assume(False)
    fan = gkz_decomposition(gens)
    assert all(fan.check().values())
    assert len(fan.chambers) == len({primitive(g) for g in gens}) - 1


def test_fan_as_dict_is_plain():
    fan = gkz_decomposition([(1, 0), (1, 1), (0, 1)])
    d = fan.as_dict()
    assert d["support"] == [[0, 1], [1, 0]]
    assert len(d["chambers"]) == 2
    assert isinstance(fan, ChamberFan)
