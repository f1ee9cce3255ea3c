import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import least_squares

from orthowell.kets import (
    DeltaExpr,
    FormalState,
    Label,
    build_doublet,
    completeness_check,
    inner,
    run_checks,
    sign,
    solve_doublet_coefficients,
)

momenta = st.floats(0.05, 50.0)


def ket(sgn, symbol="P", value=1.0, coeff=1.0):
    return FormalState([(coeff, Label(sgn, symbol, value))])


def test_basic_delta_rules():
    assert inner(ket(1), ket(1, "P'")) == DeltaExpr(1, 0)
    assert inner(ket(-1), ket(1, "P'")) == DeltaExpr(0, 1)


def test_same_symbol_drops_sum_delta():
    d = inner(ket(-1), ket(1))
    assert d == DeltaExpr(0, 0)


def test_duplicate_labels_merge():
    s = FormalState([(1, Label(1, "P", 2.0)), (2, Label(1, "P", 2.0))])
    assert len(s.terms) == 1
    assert s.coefficients(2.0)[0] == 3


def test_rejects_bad_labels():
    with pytest.raises(ValueError):
        Label(1, "Q", 1.0)
    with pytest.raises(ValueError):
        Label(1, "P", -1.0)
    with pytest.raises(ValueError):
        FormalState([(1, Label(1, "P", 1.0)), (1, Label(1, "P'", 1.0))])


def test_even_doublet_inner_matches_delta_of_p_squared():
    p = 1.7
    d = inner(build_doublet(p, 1), build_doublet(p, 1, symbol="P'"))
    assert d.equals(DeltaExpr(1 / (2 * p), 1 / (2 * p)), tol=1e-15)


def test_doublet_coefficients():
    np.testing.assert_allclose(build_doublet(1.0, 1).coefficients(1.0), [0.5, 0.5])
    np.testing.assert_allclose(build_doublet(1.0, -1).coefficients(1.0), [-0.5j, 0.5j])
    with pytest.raises(ValueError):
        build_doublet(0.0, 1)


@given(p=momenta, q=momenta)
def test_opposite_parity_doublets_orthogonal(p, q):
    d = inner(build_doublet(p, 1), build_doublet(q, -1, symbol="P'"))
    assert d.is_zero(1e-14)


@given(p=momenta)
def test_self_overlap_on_support(p):
    for parity in (1, -1):
        d = inner(build_doublet(p, parity), build_doublet(p, parity, symbol="P'"))
        assert d.c_minus == pytest.approx(1 / (2 * p), rel=1e-14)
    odd = inner(build_doublet(p, -1), build_doublet(p, -1, symbol="P'"))
    # the sum-delta term has the opposite sign for the odd member; it never fires
    assert odd.c_plus == pytest.approx(-1 / (2 * p), rel=1e-14)
    assert not odd.equals(DeltaExpr(1 / (2 * p), 1 / (2 * p)), "strict", 1e-12)
    assert odd.equals(DeltaExpr(1 / (2 * p), 1 / (2 * p)), "on_support", 1e-12)


@given(p=momenta, theta=st.floats(0, 2 * math.pi))
def test_global_phase_invariance(p, theta):
    s = build_doublet(p, 1)
    t = s.scaled(cmath.exp(1j * theta))
    d0 = inner(s, s.with_symbol("P'"))
    d1 = inner(t, t.with_symbol("P'"))
    assert abs(d1.c_minus) == pytest.approx(abs(d0.c_minus), rel=1e-13)
    assert abs(d1.c_plus) == pytest.approx(abs(d0.c_plus), rel=1e-13)


def test_energy_normalised_doublet():
    p, m = 2.0, 3.0
    s = build_doublet(p, 1, energy_normalized=True, mass=m)
    d = inner(s, s.with_symbol("P'"))
    assert d.c_minus == pytest.approx(m / p)


@pytest.mark.parametrize(
    "A, B, ok",
    [
        (0.5, 0.5, True),
        (1.0, 0.0, False),
        (0.5 * cmath.exp(0.7j), 0.5 * cmath.exp(0.7j), True),
    ],
)
def test_constraint_examples(A, B, ok):
    assert solve_doublet_coefficients(1.0).satisfied(A, B, 1) is ok


def test_constraint_branches_match_doublets():
    for p in (0.5, 1.0, 4.0):
        cons = solve_doublet_coefficients(p)
        assert cons.satisfied(*build_doublet(p, 1).coefficients(p), branch=1)
        assert cons.satisfied(*build_doublet(p, -1).coefficients(p), branch=-1)
        assert not cons.satisfied(*build_doublet(p, -1).coefficients(p), branch=1)


@pytest.mark.parametrize("seed", range(10))
def test_even_solution_unique_up_to_phase(seed):
    # numeric oracle: least squares from random starts lands on rA == rB, equal phases
    p = 1.3
    cons = solve_doublet_coefficients(p)
    rng = np.random.default_rng(seed)

    def resid(v):
        A, B = complex(v[0], v[1]), complex(v[2], v[3])
        return cons.residuals(A, B, 1)

    sol = least_squares(resid, rng.normal(size=4) * 0.5, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    A, B = complex(sol.x[0], sol.x[1]), complex(sol.x[2], sol.x[3])
    assert max(map(abs, cons.residuals(A, B))) < 1e-10
    assert abs(A - B) < 1e-5
    assert abs(A) == pytest.approx(1 / (2 * math.sqrt(p)), rel=1e-5)


def test_solve_returns_doublet_moduli():
    sol = solve_doublet_coefficients(1.0).solve(1)
    assert sol["r_a"] == sol["r_b"] == pytest.approx(0.5)
    assert sol["phase_difference"] == 0.0
    assert solve_doublet_coefficients(1.0).solve(-1)["phase_difference"] == pytest.approx(math.pi)


@pytest.mark.parametrize("p, diag", [(1.0, 0.5), (2.0, 0.25)])
def test_completeness_examples(p, diag):
    np.testing.assert_allclose(completeness_check(p), diag * np.eye(2), atol=1e-16)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 10.0])
def test_completeness_scaled_is_identity(p):
    np.testing.assert_allclose(completeness_check(p) * 2 * p, np.eye(2), atol=1e-15)


def test_sign():
    assert (sign(3.0), sign(0.0), sign(-0.1)) == (1, 0, -1)


def test_run_checks_all_pass():
    rows = run_checks()
    assert rows and all(r["passed"] for r in rows)
