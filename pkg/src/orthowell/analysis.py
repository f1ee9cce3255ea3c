"""Mixed boundary-condition determinant scan and the large-well convergence study."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from ._validation import max_workers
from .core import Family, Kind, ModeId, WellConfig, enumerate_modes, eval_free_doublet, eval_mode
from .quadrature import composite_nodes, integrate

ROOT_XTOL = 1e-13
CANDIDATE_TOL = 1e-10


def mixed_bc_matrix(cfg: WellConfig, h: float, swapped: bool = False) -> np.ndarray:
    """Rows impose the two boundary conditions on ``A cos(hx) + B sin(hx)``.

    Default: ``psi(a) = 0`` and ``psi'(-a)/h = 0``.  ``swapped``:
    ``psi(-a) = 0`` and ``psi'(a)/h = 0``.
    """
    c, s = math.cos(h * cfg.a), math.sin(h * cfg.a)
    if swapped:
        return np.array([[c, -s], [-s, c]])
    return np.array([[c, s], [s, c]])


def mixed_bc_det(cfg: WellConfig, h: float, swapped: bool = False) -> float:
    if h < 0:
        raise ValueError("wavenumber must be nonnegative")
    M = mixed_bc_matrix(cfg, h, swapped)
    return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])


@dataclass(frozen=True)
class MixedBcReport:
    h_grid: np.ndarray = field(repr=False)
    det_values: np.ndarray = field(repr=False)
    roots: list
    verdicts: list
    swapped: bool = False

    @property
    def solutions_exist(self) -> bool:
        return any(v["satisfies_conditions"] and v["nontrivial"] for v in self.verdicts)

    def to_dict(self) -> dict:
        return {
            "swapped": self.swapped,
            "roots": self.roots,
            "verdicts": self.verdicts,
            "solutions_exist": self.solutions_exist,
            # the classical argument concludes no such states exist
            "contradicts_no_solution_claim": self.solutions_exist,
            "note": (
                "dividing the two boundary rows gives cos^2(ha) = sin^2(ha), not cos^2 + sin^2 = 0; "
                "nontrivial states with psi(a) = psi'(-a) = 0 exist at h*a = pi/4 + k*pi/2"
                if self.solutions_exist
                else "no nontrivial candidates found in the scanned range"
            ),
        }


def _candidate(cfg: WellConfig, h: float, swapped: bool) -> dict:
    M = mixed_bc_matrix(cfg, h, swapped)
    _, _, vt = np.linalg.svd(M)
    A, B = vt[-1]
    a = cfg.a

    def psi(x):
        return A * np.cos(h * x) + B * np.sin(h * x)

    def dpsi(x):
        return h * (-A * np.sin(h * x) + B * np.cos(h * x))

    zero_at, slope_at = (-a, a) if swapped else (a, -a)
    value_res = abs(float(psi(zero_at)))
    deriv_res = abs(float(dpsi(slope_at)))
    norm = math.sqrt(float(integrate(lambda x: psi(x) ** 2, -a, a, panels=16)))
    return {
        "h": h,
        "A": float(A),
        "B": float(B),
        "value_residual": value_res,
        "derivative_residual": deriv_res,
        "norm": norm,
        "nontrivial": norm > CANDIDATE_TOL,
        "satisfies_conditions": value_res <= CANDIDATE_TOL and deriv_res <= CANDIDATE_TOL,
    }


def mixed_bc_scan(cfg: WellConfig, h_max: float, samples: int = 1000, swapped: bool = False) -> MixedBcReport:
    """Locate sign changes of the boundary determinant on ``[0, h_max]`` and test each root.

    For every root the null vector of the boundary system gives a candidate
    ``psi`` whose boundary values are evaluated directly.
    """
    if not h_max > 0:
        raise ValueError("h_max must be positive")
    if samples < 100:
        raise ValueError("samples must be >= 100")
    grid = np.linspace(0.0, h_max, samples)
    det = np.array([mixed_bc_det(cfg, h, swapped) for h in grid])
    roots = []
    for i in range(samples - 1):
        lo, hi = grid[i], grid[i + 1]
        if det[i] == 0.0:
            roots.append(float(lo))
        elif det[i] * det[i + 1] < 0:
            roots.append(float(bisect(lambda h: mixed_bc_det(cfg, h, swapped), lo, hi, xtol=ROOT_XTOL)))
    if det[-1] == 0.0:
        roots.append(float(grid[-1]))
    verdicts = [_candidate(cfg, h, swapped) for h in roots]
    return MixedBcReport(grid, det, roots, verdicts, swapped)


# -- convergence to free doublets ---------------------------------------------

def _nearest_index(momenta: np.ndarray, target: float) -> int:
    gaps = np.abs(momenta - target)
    # argmin returns the first minimum; momenta ascend, so ties go to the lower one
    return int(np.argmin(gaps))


def doublet_momenta(cfg: WellConfig, family, cutoff: int) -> list[tuple[int, float]]:
    """Grid indices hosting both parities in the family, with their momenta."""
    modes = enumerate_modes(family, cutoff)
    cos_j = {m.j for m in modes if m.kind is Kind.COS}
    sin_j = {m.j for m in modes if m.kind is Kind.SIN}
    return [(j, cfg.momentum(j)) for j in sorted(cos_j & sin_j)]


def convergence_study(
    cfg_base: WellConfig,
    family,
    p_target: float,
    window: float,
    a_list,
    n_samples: int = 4001,
) -> list[dict]:
    """Sup-norm gap between window-normalised confined and free doublet members.

    Only families whose levels are doublets (III and IV) are accepted.
    """
    family = Family.parse(family)
    if not doublet_momenta(cfg_base, family, 4):
        raise ValueError(f"family {family.value} has no equal-energy opposite-parity pairs")
    if not p_target > 0:
        raise ValueError("p_target must be positive")
    a_list = list(a_list)
    if window > min(a_list):
        raise ValueError("window must not exceed the smallest well half-width")

    xs = np.linspace(-window, window, n_samples)
    x_q, w_q = composite_nodes(-window, window, 64, 16)

    def normalized(fn):
        scale = math.sqrt(float(w_q @ fn(x_q) ** 2))
        return fn(xs) / scale

    def row(a):
        cfg = WellConfig(a, cfg_base.hbar, cfg_base.mass)
        cutoff = int(math.ceil(p_target / cfg.momentum_step)) + 2
        pairs = doublet_momenta(cfg, family, cutoff)
        idx = _nearest_index(np.array([p for _, p in pairs]), p_target)
        j, p_sel = pairs[idx]
        out = {"a": a, "j": j, "p_selected": p_sel, "momentum_gap": abs(p_sel - p_target)}
        for parity, kind, name in ((1, Kind.COS, "error_even"), (-1, Kind.SIN, "error_odd")):
            mode = ModeId(j, kind)
            confined = normalized(lambda x: eval_mode(cfg, mode, x))
            free = normalized(lambda x: eval_free_doublet(cfg, p_target, parity, x))
            out[name] = float(np.max(np.abs(confined - free)))
        return out

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        return list(pool.map(row, a_list))
