"""Expansion of functions on the well in one basis family.

Coefficients come from composite Gauss-Legendre quadrature with a single
panel-doubling retry; partial-sum derivatives use analytic mode derivatives.
"""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._validation import max_workers
from .core import Family, Kind, ModeId, WellConfig, enumerate_modes, eval_mode, eval_mode_derivative
from .quadrature import QuadratureConvergenceError, composite_nodes

COEFF_TOL = 1e-10
VALUE_TOL = 1e-12
DERIV_TOL = 1e-10


def design_matrix(cfg: WellConfig, modes, x, derivative: bool = False) -> np.ndarray:
    """Rows are modes, columns are sample points."""
    fn = eval_mode_derivative if derivative else eval_mode
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return np.array([fn(cfg, m, x) for m in modes]).reshape(len(modes), x.size)


def partial_sum(cfg: WellConfig, modes, coeffs, x, derivative: bool = False):
    x = np.asarray(x, dtype=float)
    out = np.asarray(coeffs, dtype=float) @ design_matrix(cfg, modes, x, derivative)
    return out.reshape(x.shape)[()] if x.ndim == 0 else out.reshape(x.shape)


# -- built-in test functions -------------------------------------------------

def _const1(cfg):
    return lambda x: np.ones_like(np.asarray(x, dtype=float))


def _linear(cfg):
    return lambda x: np.asarray(x, dtype=float)


def _square(cfg):
    return lambda x: np.asarray(x, dtype=float) ** 2


def _triangle(cfg):
    return lambda x: 1.0 - np.abs(np.asarray(x, dtype=float)) / cfg.a


def _gauss(cfg, sigma=0.25):
    if not sigma > 0:
        raise ValueError("gauss width must be positive")
    return lambda x: np.exp(-0.5 * (np.asarray(x, dtype=float) / sigma) ** 2)


FUNCTIONS = {
    "const1": _const1,
    "linear": _linear,
    "square": _square,
    "triangle": _triangle,
    "gauss": _gauss,
}

_CALL = re.compile(r"^\s*(\w+)\s*(?:\(\s*([^)]*)\s*\))?\s*$")


def resolve_function(text: str, cfg: WellConfig):
    """Look up a built-in such as ``'const1'`` or ``'gauss(0.3)'``."""
    match = _CALL.match(text)
    if not match or match.group(1) not in FUNCTIONS:
        raise ValueError(f"unknown function {text!r}; choose from {', '.join(FUNCTIONS)}")
    name, arg = match.groups()
    args = [float(v) for v in arg.split(",")] if arg else []
    return FUNCTIONS[name](cfg, *args)


# -- expansion ---------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionReport:
    family: Family
    cutoff: int
    modes: tuple
    coeffs: np.ndarray = field(repr=False)
    l2_residual: float
    norm_sq: float
    parseval_ratio: float
    boundary: dict
    quadrature: dict

    @property
    def coeff_sq_sum(self) -> float:
        return float(np.sum(self.coeffs**2))

    def coefficient(self, mode: ModeId) -> float:
        return float(self.coeffs[self.modes.index(mode)])

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "cutoff": self.cutoff,
            "coeffs": [{"mode": str(m), "value": float(c)} for m, c in zip(self.modes, self.coeffs)],
            "l2_residual": self.l2_residual,
            "norm_sq": self.norm_sq,
            "parseval_ratio": self.parseval_ratio,
            "boundary": self.boundary,
            "quadrature": self.quadrature,
        }


def project(cfg: WellConfig, modes, f, panels: int, order: int = 16, allow_unconverged: bool = False):
    """Quadrature coefficients with one panel-doubling retry.

    Returns ``(coeffs, nodes, weights, info)`` at the refined resolution.
    """
    results = []
    for n in (panels, 2 * panels):
        x, w = composite_nodes(-cfg.a, cfg.a, n, order)
        fx = np.asarray(f(x), dtype=float)
        if fx.shape != x.shape:
            fx = np.broadcast_to(fx, x.shape)
        phi = design_matrix(cfg, modes, x)
        results.append(((phi * w) @ fx, x, w, fx, phi))
    delta = float(np.max(np.abs(results[1][0] - results[0][0]))) if len(modes) else 0.0
    info = {"order": order, "panels": 2 * panels, "max_coeff_change": delta, "converged": delta <= COEFF_TOL}
    if not info["converged"] and not allow_unconverged:
        raise QuadratureConvergenceError(
            f"coefficients moved by {delta:.3e} > {COEFF_TOL:g} after doubling to {2 * panels} panels"
        )
    return results[1], info


def expand(
    cfg: WellConfig,
    family,
    cutoff: int,
    f,
    order: int = 16,
    panels: int | None = None,
    n_samples: int = 4001,
    allow_unconverged: bool = False,
) -> ExpansionReport:
    """Expand ``f`` in the family modes with ``j <= cutoff``."""
    family = Family.parse(family)
    modes = tuple(enumerate_modes(family, cutoff))
    panels = panels or max(32, 4 * cutoff)
    (coeffs, x, w, fx, phi), info = project(cfg, modes, f, panels, order, allow_unconverged)

    norm_sq = float(w @ fx**2)
    resid = fx - coeffs @ phi
    l2_residual = math.sqrt(float(w @ resid**2))
    ratio = float(np.sum(coeffs**2) / norm_sq) if norm_sq > 0 else float("nan")

    xs = np.linspace(-cfg.a, cfg.a, n_samples)
    sup_error = float(np.max(np.abs(np.asarray(f(xs), dtype=float) - partial_sum(cfg, modes, coeffs, xs))))
    ends = np.array([cfg.a, -cfg.a])
    s = partial_sum(cfg, modes, coeffs, ends)
    ds = partial_sum(cfg, modes, coeffs, ends, derivative=True)
    boundary = {
        "S(a)": float(s[0]),
        "S(-a)": float(s[1]),
        "dS(a)": float(ds[0]),
        "dS(-a)": float(ds[1]),
        "sup_error": sup_error,
    }
    return ExpansionReport(family, cutoff, modes, coeffs, l2_residual, norm_sq, ratio, boundary, info)


def boundary_probe(cfg: WellConfig, family, cutoff: int, f, **kwargs) -> dict:
    """Check the boundary behaviour every partial sum of the family inherits from its modes.

    I: S(+-a) = 0.  II: S'(+-a) = 0.  III: S and S' periodic.  IV: S antiperiodic.
    """
    family = Family.parse(family)
    rep = expand(cfg, family, cutoff, f, **kwargs)
    b = rep.boundary
    if family is Family.I:
        residuals = {"S(a)": (abs(b["S(a)"]), VALUE_TOL), "S(-a)": (abs(b["S(-a)"]), VALUE_TOL)}
    elif family is Family.II:
        residuals = {"dS(a)": (abs(b["dS(a)"]), DERIV_TOL), "dS(-a)": (abs(b["dS(-a)"]), DERIV_TOL)}
    elif family is Family.III:
        residuals = {
            "S(a)-S(-a)": (abs(b["S(a)"] - b["S(-a)"]), VALUE_TOL),
            "dS(a)-dS(-a)": (abs(b["dS(a)"] - b["dS(-a)"]), DERIV_TOL),
        }
    else:
        residuals = {"S(a)+S(-a)": (abs(b["S(a)"] + b["S(-a)"]), VALUE_TOL)}
    outside = np.array([-1.5 * cfg.a, -1.0001 * cfg.a, 1.0001 * cfg.a, 2.0 * cfg.a])
    outside_max = float(np.max(np.abs(partial_sum(cfg, rep.modes, rep.coeffs, outside))))
    return {
        "family": family.value,
        "cutoff": cutoff,
        **b,
        "residuals": {k: v for k, (v, _) in residuals.items()},
        "tolerances": {k: t for k, (_, t) in residuals.items()},
        "outside_max": outside_max,
        "holds": all(v <= t for v, t in residuals.values()) and outside_max == 0.0,
    }


def rotate_IV_from_III(cfg: WellConfig, n: int, parity: int, x):
    """Antiperiodic mode ``j = 2n-1`` built from the periodic pair at ``j = 2n``.

    Rotation by the half-step phase ``pi*x/(2a)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    x = np.asarray(x, dtype=float)
    c = np.cos(np.pi * x / (2 * cfg.a))
    s = np.sin(np.pi * x / (2 * cfg.a))
    even = eval_mode(cfg, ModeId(2 * n, Kind.COS), x)
    odd = eval_mode(cfg, ModeId(2 * n, Kind.SIN), x)
    return c * even + s * odd if parity == 1 else c * odd - s * even


def gibbs_study(cfg: WellConfig, cutoffs, f, family="IV", n_samples: int = 20001) -> list[dict]:
    """L2 residual and sup-norm error of the partial sums for each cutoff."""
    def row(cutoff):
        rep = expand(cfg, family, cutoff, f, n_samples=n_samples)
        return {
            "cutoff": cutoff,
            "l2_residual": rep.l2_residual,
            "sup_error": rep.boundary["sup_error"],
            "parseval_ratio": rep.parseval_ratio,
        }

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        return list(pool.map(row, cutoffs))
