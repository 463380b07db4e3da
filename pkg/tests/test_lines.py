from symquad.lines import pluecker_relations_g14, ruling_check, verify_x4_pluecker, x4_to_pluecker
from symquad.matrix import same_span
from symquad.poly import MPoly


def test_x4_identification():
    rep = verify_x4_pluecker()
    assert rep["ok"]
    assert rep["orbit_span"] == rep["pluecker_span"] == rep["joint_span"] == 5


def test_identity_substitution_trivial():
    rel = pluecker_relations_g14()
    ident = {v: MPoly.var(v) for f in rel for v in f.variables()}
    assert same_span([f.subs(ident) for f in rel], rel)


def test_substitution_covers_all_coordinates():
    sub = x4_to_pluecker()
    assert len(sub) == 10
    assert len({v for p in sub.values() for v in p.variables()}) == 10


def test_rulings():
    rep = ruling_check()
    for key in ("first_ruling_lagrangian", "first_ruling_in_hyperplane", "second_ruling_off_hyperplane", "mq_antisymplectic"):
        assert rep[key] is True
    assert rep["ok"]
    assert rep["first_ruling_at_0_1"] == ["1", "0", "1", "1", "0", "-1"]
    assert rep["second_ruling_hyperplane_value"] == "-4*s*t"
