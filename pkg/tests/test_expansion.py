import math

import numpy as np
import pytest

from orthowell.core import Family, Kind, ModeId, WellConfig, eval_mode
from orthowell.expansion import (
    FUNCTIONS,
    boundary_probe,
    expand,
    gibbs_study,
    partial_sum,
    resolve_function,
    rotate_IV_from_III,
)
from orthowell.quadrature import QuadratureConvergenceError, integrate

CFG = WellConfig()


def random_smooth(seed, a=1.0):
    """Low-degree polynomial plus one smooth oscillation, with random coefficients."""
    rng = np.random.default_rng(seed)
    poly = rng.normal(size=5)
    amp, omega, phase = rng.normal(), rng.uniform(0.5, 4.0), rng.uniform(0, 2 * math.pi)

    def f(x):
        x = np.asarray(x, dtype=float) / a
        return np.polyval(poly, x) + amp * np.sin(omega * x + phase)

    return f


def test_quadrature_polynomial_exact():
    assert integrate(lambda x: x**6, -1.0, 1.0, panels=3) == pytest.approx(2 / 7, abs=1e-15)


def test_linear_in_family_I():
    rep = expand(CFG, "I", 40, lambda x: x)
    for n in range(1, 21):
        assert rep.coefficient(ModeId(2 * n, Kind.SIN)) == pytest.approx(2 * (-1) ** (n + 1) / (n * math.pi), abs=1e-10)
    for j in range(1, 40, 2):
        assert abs(rep.coefficient(ModeId(j, Kind.COS))) < 1e-12
    assert rep.norm_sq == pytest.approx(2 / 3, abs=1e-13)
    ratios = [expand(CFG, "I", J, lambda x: x).parseval_ratio for J in (10, 40, 160)]
    assert ratios == sorted(ratios)
    # exact partial Parseval ratio: (4/pi^2) sum_{n<=N} 1/n^2 / (2/3)
    n = np.arange(1, 81)
    assert ratios[-1] == pytest.approx(float(4 / math.pi**2 * np.sum(1.0 / n**2) / (2 / 3)), abs=1e-10)


def test_constant_in_family_III():
    rep = expand(CFG, "III", 10, FUNCTIONS["const1"](CFG))
    assert rep.coefficient(ModeId(0, Kind.CONST)) == pytest.approx(math.sqrt(2), abs=1e-14)
    assert rep.l2_residual < 1e-12
    assert rep.parseval_ratio == pytest.approx(1.0, abs=1e-13)


def test_constant_in_family_I_misses_boundary():
    f = FUNCTIONS["const1"](CFG)
    for J in (3, 8, 31):
        rep = expand(CFG, "I", J, f)
        assert abs(rep.boundary["S(a)"]) < 1e-12 and abs(rep.boundary["S(-a)"]) < 1e-12
        assert rep.boundary["sup_error"] >= 1 - 1e-12


@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("cutoff", [4, 16, 64])
def test_bessel_and_pythagoras(family, cutoff):
    for seed in range(3):
        rep = expand(WellConfig(a=1.6), family, cutoff, random_smooth(seed, 1.6))
        assert rep.parseval_ratio <= 1 + 1e-9
        assert rep.l2_residual**2 + rep.coeff_sq_sum == pytest.approx(rep.norm_sq, abs=1e-8)


@pytest.mark.parametrize("family", list(Family))
def test_residual_nonincreasing(family):
    f = random_smooth(11)
    res = [expand(CFG, family, J, f).l2_residual for J in (2, 4, 8, 16, 32)]
    assert all(b <= a + 1e-12 for a, b in zip(res, res[1:]))


@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("cutoff", [4, 16, 64])
def test_boundary_invariants_random(family, cutoff):
    for seed in range(20):
        probe = boundary_probe(CFG, family, cutoff, random_smooth(seed))
        assert probe["holds"], probe


def test_boundary_examples():
    probe = boundary_probe(CFG, "II", 8, lambda x: x**2)
    assert probe["residuals"]["dS(a)"] <= 1e-10 and probe["residuals"]["dS(-a)"] <= 1e-10
    probe = boundary_probe(CFG, "IV", 8, FUNCTIONS["const1"](CFG))
    assert probe["residuals"]["S(a)+S(-a)"] <= 1e-12


def test_partial_sum_zero_outside():
    rep = expand(CFG, "III", 8, lambda x: np.exp(x))
    assert np.all(partial_sum(CFG, rep.modes, rep.coeffs, np.array([-3.0, -1.01, 1.01, 5.0])) == 0.0)


def test_rotation_examples():
    assert rotate_IV_from_III(CFG, 1, 1, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert rotate_IV_from_III(CFG, 1, 1, 0.3) == pytest.approx(math.cos(0.3 * math.pi / 2), abs=1e-14)
    assert rotate_IV_from_III(CFG, 2, -1, 0.7) == pytest.approx(math.sin(3 * 0.7 * math.pi / 2), abs=1e-14)


@pytest.mark.parametrize("a", [0.4, 1.0, 3.0])
def test_rotation_identity_random(a):
    cfg = WellConfig(a=a)
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 17))
        x = rng.uniform(-a, a)
        for parity, kind in ((1, Kind.COS), (-1, Kind.SIN)):
            lhs = eval_mode(cfg, ModeId(2 * n - 1, kind), x)
            worst = max(worst, abs(lhs - rotate_IV_from_III(cfg, n, parity, x)))
    assert worst <= 1e-12


def test_gibbs_family_IV_constant():
    rows = gibbs_study(CFG, [15, 31, 63, 127], FUNCTIONS["const1"](CFG))
    l2 = [r["l2_residual"] for r in rows]
    assert all(b < a for a, b in zip(l2, l2[1:]))
    assert all(r["sup_error"] >= 0.15 for r in rows)
    j = np.arange(1, 64, 2)
    exact = float(np.sum(16 / (j * math.pi) ** 2) / 2)
    assert rows[2]["parseval_ratio"] == pytest.approx(exact, abs=1e-10)
    assert rows[2]["parseval_ratio"] >= 0.99


def test_gibbs_family_III_constant_exact():
    rows = gibbs_study(CFG, [1, 2, 8], FUNCTIONS["const1"](CFG), family="III")
    assert all(r["l2_residual"] < 1e-12 for r in rows)


def test_function_library():
    cfg = WellConfig(a=2.0)
    x = np.array([-2.0, 0.0, 1.0])
    np.testing.assert_allclose(resolve_function("triangle", cfg)(x), [0.0, 1.0, 0.5])
    np.testing.assert_allclose(resolve_function("square", cfg)(x), x**2)
    np.testing.assert_allclose(resolve_function("gauss(0.5)", cfg)(np.array([0.5])), [math.exp(-0.5)])
    with pytest.raises(ValueError):
        resolve_function("sawtooth", cfg)


def test_quadrature_nonconvergence_reported():
    rough = lambda x: np.sign(np.sin(37.3 * np.asarray(x)))  # noqa: E731
    with pytest.raises(QuadratureConvergenceError):
        expand(CFG, "III", 4, rough, panels=2)
    rep = expand(CFG, "III", 4, rough, panels=2, allow_unconverged=True)
    assert rep.quadrature["converged"] is False
