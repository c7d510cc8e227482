import pytest

from conftest import zoo
from nca.errors import MissingDualityError, UncertifiedError
from nca.grmod import augmentation_ideal, cyclic_module, free_module, simple_module, twist
from nca.regularity import (
    EXACT,
    FAIL,
    INCONCLUSIVE,
    LOWER,
    MINUS_INF,
    PASS,
    DualityDatum,
    cm_regularity_duality,
    ext_into_algebra,
    ext_regularity,
    koszul_check,
    left_right_k,
    verify_inequalities,
    verify_truncation,
)
from nca.resolution import BettiTable, betti, minimal_resolution

DD = DualityDatum(2, 2)


def ereg(M, h=4, D=10):
    return ext_regularity(betti(minimal_resolution(M, h, D)))


def test_ext_regularity_examples(poly2, cusp):
    r = ereg(simple_module(poly2), 3, 6)
    assert (r.kind, r.value) == (EXACT, 0)
    r = ereg(simple_module(cusp), 5, 8)
    assert (r.kind, r.value) == (LOWER, 2)
    r = ereg(twist(free_module(poly2), -3), 3, 8)
    assert (r.kind, r.value) == (EXACT, 3)
    assert ext_regularity(BettiTable({}, (3, 6))).kind == MINUS_INF


def test_top_degree_generator_is_not_exact(poly2):
    # a generator sitting exactly at D might be followed by more above D
    r = ereg(twist(free_module(poly2), -3), 2, 3)
    assert r.kind == LOWER


def test_koszul_examples(poly2, qplane, cusp):
    assert koszul_check(poly2, 5, 8) == (True, None)
    assert koszul_check(qplane, 5, 8) == (True, None)
    assert koszul_check(zoo("JORDAN"), 5, 8) == (True, None)
    assert koszul_check(zoo("DUAL"), 5, 8) == (True, None)
    assert koszul_check(cusp, 5, 8) == (False, (2, 3))


def test_ext_into_algebra_examples(poly2):
    ext = ext_into_algebra(free_module(poly2), 2, 8)
    assert ext.ranges[0][0] == 0 and ext.dims[0, 0] == 1
    assert ext.bottom(0) == 0
    assert ext.ranges[1] is None and ext.ranges[2] is None
    ext = ext_into_algebra(simple_module(poly2), 2, 8)
    assert ext.bottom(0) is None and ext.bottom(1) is None
    assert ext.bottom(2) == -2
    assert [ext.dims[2, e] for e in range(ext.ranges[2][0], ext.ranges[2][1] + 1)] == [1] + [0] * (
        ext.ranges[2][1] - ext.ranges[2][0]
    )
    assert ext_into_algebra(twist(free_module(poly2), -3), 2, 8).bottom(0) == -3


def test_ext_zero_of_free_module_is_hilbert(poly2):
    # Hom(A, A)_e = A_e for e >= 0; certified for e <= D
    ext = ext_into_algebra(free_module(poly2), 1, 6)
    assert [ext.dims[0, e] for e in range(0, 7)] == [1, 2, 3, 4, 5, 6, 7]


def test_ext_into_algebra_needs_room(poly2):
    with pytest.raises(UncertifiedError):
        ext_into_algebra(twist(free_module(poly2), -3), 2, 3)


def test_cmreg_anchors(poly2):
    assert cm_regularity_duality(free_module(poly2), DD, 8).value == 0
    assert cm_regularity_duality(simple_module(poly2), DD, 8).value == 0
    r = cm_regularity_duality(twist(free_module(poly2), -3), DD, 8)
    assert (r.kind, r.value) == (EXACT, 3)


def test_cmreg_needs_duality(poly2):
    with pytest.raises(MissingDualityError):
        cm_regularity_duality(free_module(poly2), None, 8)


def test_cmreg_dual_numbers(dual):
    dd = DualityDatum(0, -1)
    assert cm_regularity_duality(free_module(dual), dd, 8).value == 1
    assert cm_regularity_duality(simple_module(dual), dd, 8).value == 0


@pytest.mark.parametrize("n", [-2, 0, 1, 3])
def test_shift_covariance(qplane, n):
    M = cyclic_module(qplane, ["x^2"])
    base_e, base_c = ereg(M, 3, 10), cm_regularity_duality(M, DD, 10)
    Mn = twist(M, -n)
    assert ereg(Mn, 3, 10 + max(n, 0)).value == base_e.value + n
    assert cm_regularity_duality(Mn, DD, 10 + max(n, 0)).value == base_c.value + n


def test_lower_bounds_grow_with_window(cusp):
    vals = [ereg(simple_module(cusp), h, 12) for h in (2, 3, 4, 5, 6, 7)]
    assert all(v.kind == LOWER for v in vals)
    seq = [v.value for v in vals]
    assert seq == sorted(seq)


def test_regs_coincide(poly2):
    for M in [free_module(poly2), simple_module(poly2), twist(free_module(poly2), -3),
              cyclic_module(poly2, ["x^2"]), augmentation_ideal(poly2, 10)]:
        e, c = ereg(M, 4, 10), cm_regularity_duality(M, DD, 10)
        assert e.exact and c.exact and e.value == c.value


def test_inequalities_polynomial_quotient(poly2):
    rep = verify_inequalities(poly2, cyclic_module(poly2, ["x^2"]), 4, 10, DD)
    assert rep.status == PASS
    checks = rep.details["checks"]
    assert checks["ext_reg <= cm_reg + ext_reg_k"]["left"] == checks["ext_reg <= cm_reg + ext_reg_k"]["right"] == 1
    assert checks["ext_reg == cm_reg"]["status"] == PASS


def test_inequalities_dual_numbers():
    A = zoo("DUAL", assertions=("koszul",))
    dd = DualityDatum(0, -1)
    rep = verify_inequalities(A, simple_module(A), 5, 8, dd)
    assert rep.status == PASS
    assert rep.details["cm_reg_A"].value == 1
    # without the assertion the last column of k's resolution keeps Ext.reg k open
    plain = zoo("DUAL")
    rep = verify_inequalities(plain, simple_module(plain), 5, 8, dd)
    assert rep.status == INCONCLUSIVE
    assert rep.details["checks"]["cm_reg <= ext_reg + cm_reg_A"]["status"] == PASS


def test_false_koszul_assertion_fails():
    A = zoo("CUSP", assertions=("koszul",))
    rep = verify_inequalities(A, free_module(A), 4, 10)
    assert rep.status == FAIL


def test_inequalities_without_duality(poly2):
    rep = verify_inequalities(poly2, simple_module(poly2), 3, 6)
    assert rep.status == INCONCLUSIVE
    assert "notice" in rep.details


def test_truncation_examples(poly2):
    rep = verify_truncation(poly2, cyclic_module(poly2, ["x^2"]), 4, 10, (0, 3), DD)
    lin = {row["s"]: row["linear"] for row in rep.details["truncations"]}
    assert lin == {0: False, 1: True, 2: True, 3: True}
    assert rep.details["s_min"] == 1 and rep.details["ext_reg"].value == 1
    assert rep.status == PASS
    rep = verify_truncation(poly2, simple_module(poly2), 4, 10, (0, 3), DD)
    assert rep.details["s_min"] == 0
    rep = verify_truncation(poly2, twist(free_module(poly2), -1), 4, 10, (0, 3), DD)
    lin = {row["s"]: row["linear"] for row in rep.details["truncations"]}
    assert lin == {0: False, 1: True, 2: True, 3: True}
    assert rep.details["s_min"] == 1


def test_truncation_warns_when_not_koszul(cusp):
    rep = verify_truncation(cusp, free_module(cusp), 3, 8, (0, 2))
    assert rep.details["koszul_in_window"] is False
    assert "warning" in rep.details
    assert rep.status == INCONCLUSIVE


@pytest.mark.parametrize("name", ["POLY2", "QPLANE", "JORDAN"])
def test_left_right_k(name):
    assert left_right_k(zoo(name), 5, 8).status == PASS


def test_report_json_is_stable(poly2):
    a = verify_inequalities(poly2, simple_module(poly2), 3, 8, DD).to_json()
    b = verify_inequalities(poly2, simple_module(poly2), 3, 8, DD).to_json()
    assert a == b


@pytest.mark.parametrize("name", ["POLY2", "QPLANE", "JORDAN", "DUAL", "CUSP"])
def test_exact_values_survive_larger_windows(name):
    A = zoo(name)
    for M in [simple_module(A), free_module(A), cyclic_module(A, ["x^2"])]:
        seen = None
        for h, D in [(2, 6), (3, 8), (4, 10), (5, 12)]:
            r = ereg(M, h, D)
            if seen is not None:
                assert r.exact and r.value == seen
            elif r.exact:
                seen = r.value
    # k is nonzero, so its regularity is never below 0
    assert ereg(simple_module(A), 3, 8).value >= 0
