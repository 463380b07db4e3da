"""The thirteen acceptance criteria, one test each, each printing a PASS/FAIL line."""

import io
import logging
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from symquad import cli
from symquad.blowup import AmbientData, blowup_power, schubert_restrictions, symplectic_tangency_number, veronese_segre
from symquad.cones import cone_of, gkz_decomposition
from symquad.ledgers import cones_of_models, fano_type, ledger_K, ledger_S
from symquad.lines import ruling_check, verify_x4_pluecker
from symquad.matrix import QMatrix, minors, symmetric_indeterminate_matrix
from symquad.normal_form import normal_form, verify_result
from symquad.schubert import (
    SchubertElt,
    chern_tangent,
    lg_degree,
    moduli_dimension,
    poincare_pairing,
    ring_tables,
    strict_partitions,
)
from symquad.secant import orbit_cone_matches_base, secant_deg, secant_dim, secant_mult, tangent_cone
from symquad.symplectic import (
    is_symplectic,
    orbit_equations,
    orbit_residuals,
    orbit_samples,
    rank_gap_sampling,
    stratum_dimension,
    x_dimension,
)


@pytest.fixture
def report(request):
    """Record a PASS/FAIL line for the criterion named by the test's marker."""
    n = request.node.get_closest_marker("criterion").args[0]
    title = request.node.get_closest_marker("criterion").args[1]
    yield
    failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
    line = f"criterion {n:2d}: {'FAIL' if failed else 'PASS'}  {title}"
    ACCEPTANCE_LINES[n] = line
    print(line)


@pytest.mark.criterion(1, "orbit equation counts and exact vanishing on samples")
def test_criterion_01(report):
    assert [len(orbit_equations(r)) for r in range(1, 5)] == [0, 5, 14, 27]
    for r in range(1, 4):
        for Z in orbit_samples(r, 100, seed=r):
            assert not any(orbit_residuals(r, Z))


@pytest.mark.criterion(2, "rank gap over 500 samples for r = 2, 3")
def test_criterion_02(report):
    for r in (2, 3):
        rep = rank_gap_sampling(r, 500, seed=r)
        assert rep.violations == 0
        assert set(k for k, v in rep.counts.items() if v) <= set(range(1, r + 1)) | {2 * r}
        assert sum(rep.counts.values()) == 500


@pytest.mark.criterion(3, "normal forms with symplectic witnesses, exact or residual <= 1e-9")
def test_criterion_03(report):
    for r in (1, 2, 3):
        for Z in orbit_samples(r, 50, seed=100 + r):
            res = normal_form(r, Z)
            assert verify_result(res, Z) <= 1e-9
            if res.exact:
                assert is_symplectic(res.witness)
                assert res.witness @ res.target_matrix @ res.witness.T == Z * res.scale
            else:
                assert res.residual <= 1e-9


@pytest.mark.criterion(4, "size-4 orbit closure equals G(1,4) by quadric spans")
def test_criterion_04(report):
    rep = verify_x4_pluecker()
    assert rep["ok"] is True
    assert rep["orbit_span"] == rep["pluecker_span"] == rep["joint_span"] == 5


@pytest.mark.criterion(5, "ruling checks including M_Q^t Omega M_Q = -Omega")
def test_criterion_05(report):
    rep = ruling_check()
    for key in ("first_ruling_lagrangian", "first_ruling_in_hyperplane", "second_ruling_off_hyperplane", "mq_antisymplectic"):
        assert rep[key] is True


@pytest.mark.criterion(6, "tangent cone at a rank-1 point for r = 3; minor multiplicity 3")
def test_criterion_06(report):
    facts = orbit_cone_matches_base(3, 1)
    assert facts["spans_equal"] and facts["block_only"] and facts["matches"]
    rep = tangent_cone(minors(symmetric_indeterminate_matrix(3), 4), 2, 1)
    assert rep.multiplicity == secant_mult(3, 3, 1) == 3


@pytest.mark.criterion(7, "secant degree formulas; dimension clause checked on the rank <= r stratum")
def test_criterion_07(report):
    for n in range(1, 9):
        assert secant_deg(n, n) == n + 1
        assert secant_deg(n, 1) == 2**n
    assert secant_deg(3, 2) == 10
    for r in range(1, 7):
        # r(r+1) - 1 is the dimension of sec_r of the Veronese cut with X,
        # i.e. the rank <= r stratum
        assert stratum_dimension(r, r) == r * (r + 1) - 1 == x_dimension(r) - 1
        assert secant_dim(2 * r - 1, r) >= stratum_dimension(r, r)


@pytest.mark.criterion(8, "chamber counts 3, 9 and 3 with the named nef and movable cones")
def test_criterion_08(report):
    L = ledger_S(2)
    fan = gkz_decomposition([L[n] for n in ("D1", "D2", "E1", "S")])
    assert len(fan.chambers) == 3
    assert cone_of([L["D1"], L["D2"]]) in fan.chambers
    L = ledger_S(3)
    fan = gkz_decomposition([L[n] for n in ("D1", "D2", "D3", "E1", "E2", "S")])
    assert len(fan.chambers) == 9
    assert cone_of([L["D1"], L["D2"], L["D3"]]) in fan.chambers
    assert L["P"].vector() == (3, -1, -1)
    mov = cone_of([L["D1"], L["D2"], L["D3"], L["P"]])
    assert fan.is_union_of_chambers(mov)
    assert cones_of_models("S6")["Mov"] == mov
    for r in range(2, 11):
        K = ledger_K(r)
        fan = gkz_decomposition([K[n] for n in ("Delta", "D_unb", "H_sigma2", "T")])
        assert len(fan.chambers) == 3


@pytest.mark.criterion(9, "Fano type by cone membership for r = 2..12")
def test_criterion_09(report):
    got = [fano_type(r) for r in range(2, 13)]
    assert got == ["Fano"] * 5 + ["weak-Fano"] + ["not-ample"] * 5


@pytest.mark.criterion(10, "Schubert ring dimensions, pairing, degrees and Chern classes")
def test_criterion_10(report):
    for r in range(1, 7):
        dims = ring_tables(r).graded_dimensions()
        assert dims == [len(strict_partitions(r, w)) for w in range(len(dims))]
        assert sum(dims) == 2**r
    for r in range(1, 7):
        assert abs(QMatrix(poincare_pairing(r)).det()) == 1
    assert lg_degree(2) == 2 and lg_degree(3) == 16
    for r in range(2, 7):
        d = chern_tangent(r)
        assert d.c1 == (r + 1) * SchubertElt.sigma(r, 1)
        assert d.c2 == (r * r + 2 * r) * SchubertElt.sigma(r, 2)
        assert (d.linear_coeff, d.square_coeff, d.e2_coeff) == (r + 1, Fraction(r * r + r - 2, 2), r + 2)


@pytest.mark.criterion(11, "moduli dimensions and consistency identities")
def test_criterion_11(report):
    assert moduli_dimension(2).value == 6
    for r in range(2, 13):
        assert moduli_dimension(r).consistent


@pytest.mark.criterion(12, "enumerative anchors 92, 3264 and 40")
def test_criterion_12(report, caplog):
    assert blowup_power(2, 1, 9, AmbientData(9), veronese_segre(3)) == 92
    assert blowup_power(6, 2, 5, AmbientData(5), veronese_segre(2)) == 3264
    with caplog.at_level(logging.INFO, logger="symquad.blowup"):
        res = schubert_restrictions()
        assert res.sigma11 == 2 and res.consistent
        assert symplectic_tangency_number() == 40
    messages = [rec.getMessage() for rec in caplog.records]
    first_restriction = next(i for i, m in enumerate(messages) if "Schubert restrictions" in m)
    first_segre = next(i for i, m in enumerate(messages) if "Segre classes" in m)
    assert first_restriction < first_segre


@pytest.mark.criterion(13, "reproduce --all --format json is byte-identical across runs")
def test_criterion_13(report):
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        assert cli.run(["reproduce", "--all", "--format", "json"], stdout=buf, stderr=io.StringIO()) == 0
        outs.append(buf.getvalue().encode())
    assert outs[0] == outs[1]
    assert b'"all_pass": true' in outs[0]
