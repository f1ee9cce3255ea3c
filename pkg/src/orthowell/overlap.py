"""Overlap kernels, Gram matrices and orthogonality sifting."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx
import numpy as np

from .core import (
    Family,
    Kind,
    ModeId,
    WellConfig,
    all_modes,
    enumerate_modes,
    eval_free_doublet,
    eval_mode,
)
from .quadrature import composite_nodes, integrate

__all__ = [
    "GramReport",
    "kernel_free",
    "kernel_diagonal",
    "kernel_quadrature",
    "mode_overlap",
    "overlap_matrix",
    "quadrature_overlap_matrix",
    "gram_family",
    "gram_cross",
    "compatible",
    "sift_families",
]


def _sin_half_pi(m: int) -> int:
    """Exact ``sin(m*pi/2)`` for integer ``m``."""
    return (0, 1, 0, -1)[m % 4]


def kernel_free(cfg: WellConfig, p, p_prime, parity: int = 1):
    """Overlap over ``[-a, a]`` of two delta-normalised free doublet states.

    Removable singularities at ``p = p'`` are handled through the
    unnormalised sinc.  ``parity=-1`` gives the sine-sine overlap, whose sum
    term enters with a minus sign.
    """
    p = np.asarray(p, dtype=float)
    p_prime = np.asarray(p_prime, dtype=float)
    if np.any(p <= 0) or np.any(p_prime <= 0):
        raise ValueError("momenta must be positive")
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    a, hbar, m = cfg.a, cfg.hbar, cfg.mass
    scale = a / (math.pi * hbar)

    # sin(a*eps/hbar) / (pi*eps) == scale * sinc(a*eps/(pi*hbar))
    def incomplete_delta(eps):
        return scale * np.sinc(eps * scale)

    out = m / np.sqrt(p * p_prime) * (
        incomplete_delta(p - p_prime) + parity * incomplete_delta(p + p_prime)
    )
    return out[()] if out.ndim == 0 else out


def kernel_diagonal(cfg: WellConfig, p):
    """Leading diagonal value ``m*a/(pi*hbar*|p|)``, dropping the oscillating sum term."""
    p = np.asarray(p, dtype=float)
    if np.any(p <= 0):
        raise ValueError("momenta must be positive")
    out = cfg.mass * cfg.a / (math.pi * cfg.hbar * np.abs(p))
    return out[()] if out.ndim == 0 else out


def kernel_quadrature(cfg: WellConfig, p, p_prime, parity: int = 1, panels: int = 64, order: int = 16):
    """Brute-force quadrature of the free doublet product over the well."""
    def integrand(x):
        return eval_free_doublet(cfg, p, parity, x) * eval_free_doublet(cfg, p_prime, parity, x)

    return float(integrate(integrand, -cfg.a, cfg.a, panels=panels, order=order))


def mode_overlap(m1: ModeId, m2: ModeId) -> float:
    """Closed-form overlap of two confined modes over ``[-a, a]``.

    Independent of ``a`` because the grid ties wavenumbers to the width.
    """
    if m1.parity != m2.parity:
        return 0.0
    if m1 == m2:
        return 1.0
    if m1.kind is Kind.CONST or m2.kind is Kind.CONST:
        j = m1.j or m2.j
        return 2.0 * math.sqrt(2.0) * _sin_half_pi(j) / (j * math.pi)
    diff, total = m1.j - m2.j, m1.j + m2.j
    sign = 1 if m1.kind is Kind.COS else -1
    return 2.0 / math.pi * (_sin_half_pi(diff) / diff + sign * _sin_half_pi(total) / total)


def overlap_matrix(rows, cols=None) -> np.ndarray:
    cols = rows if cols is None else cols
    return np.array([[mode_overlap(r, c) for c in cols] for r in rows], dtype=float).reshape(
        len(rows), len(cols)
    )


def quadrature_overlap_matrix(cfg: WellConfig, rows, cols=None, order: int = 16, panels: int | None = None):
    """Oracle path: the same overlaps by composite Gauss-Legendre quadrature."""
    cols = rows if cols is None else cols
    jmax = max(m.j for m in list(rows) + list(cols))
    panels = panels or max(32, 4 * jmax)

    def basis(x, modes):
        return np.array([eval_mode(cfg, m, x) for m in modes])

    x, w = composite_nodes(-cfg.a, cfg.a, panels, order)
    R, C = basis(x, rows), basis(x, cols)
    return (R * w) @ C.T


@dataclass(frozen=True)
class GramReport:
    modes: tuple
    matrix: np.ndarray = field(repr=False)
    max_offdiag: float
    is_orthonormal: bool
    tol: float
    col_modes: tuple | None = None
    max_same_kind: float | None = None

    def to_dict(self) -> dict:
        out = {
            "modes": [str(m) for m in self.modes],
            "max_offdiag": self.max_offdiag,
            "is_orthonormal": self.is_orthonormal,
            "tol": self.tol,
        }
        if self.col_modes is not None:
            out["col_modes"] = [str(m) for m in self.col_modes]
            out["max_same_kind"] = self.max_same_kind
        return out


def _orthonormal_verdict(matrix: np.ndarray, tol: float):
    n = matrix.shape[0]
    off = matrix - np.diag(np.diag(matrix))
    max_off = float(np.max(np.abs(off))) if n > 1 else 0.0
    diag_dev = float(np.max(np.abs(np.diag(matrix) - 1.0))) if n else 0.0
    return max_off, bool(max_off <= tol and diag_dev <= tol)


def gram_family(cfg: WellConfig, family, cutoff: int, tol: float = 1e-12, method: str = "closed") -> GramReport:
    """Gram matrix of one family.  ``method='quadrature'`` uses the oracle path."""
    modes = tuple(enumerate_modes(family, cutoff))
    if method == "closed":
        matrix = overlap_matrix(modes)
    elif method == "quadrature":
        matrix = quadrature_overlap_matrix(cfg, modes)
    else:
        raise ValueError(f"unknown method {method!r}")
    max_off, ok = _orthonormal_verdict(matrix, tol)
    return GramReport(modes, matrix, max_off, ok, tol)


def gram_cross(cfg: WellConfig, fam_a, fam_b, cutoff: int, tol: float = 1e-12) -> GramReport:
    """Overlaps between the modes of two different families."""
    fam_a, fam_b = Family.parse(fam_a), Family.parse(fam_b)
    if fam_a is fam_b:
        raise ValueError("gram_cross needs two different families; use gram_family")
    rows = tuple(enumerate_modes(fam_a, cutoff))
    cols = tuple(enumerate_modes(fam_b, cutoff))
    matrix = overlap_matrix(rows, cols)
    same_kind = np.array([[r.parity == c.parity for c in cols] for r in rows], dtype=bool)
    mask = same_kind & np.array([[r != c for c in cols] for r in rows], dtype=bool)
    max_same = float(np.max(np.abs(matrix[mask]))) if mask.any() else 0.0
    max_all = float(np.max(np.abs(matrix[np.array([[r != c for c in cols] for r in rows])])))
    return GramReport(rows, matrix, max_all, False, tol, col_modes=cols, max_same_kind=max_same)


def compatible(m1: ModeId, m2: ModeId) -> bool:
    """Integer form of the orthogonality condition on the momentum grid.

    Opposite parities are always orthogonal; equal parities need both the
    momentum difference and sum to be multiples of ``pi*hbar/a``, i.e. equal
    grid-index parity.  The constant mode behaves as an even cosine.
    """
    if m1.parity != m2.parity:
        return True
    return (m1.j - m2.j) % 2 == 0


def sift_families(cfg: WellConfig, cutoff: int) -> list[frozenset]:
    """Maximal mutually orthogonal sets among all confined modes with ``j <= cutoff``.

    ``cfg`` is accepted for interface symmetry: the result depends only on
    grid indices, so rescaling the well leaves it unchanged.
    """
    if cutoff < 2:
        raise ValueError("sifting needs cutoff >= 2")
    graph = nx.Graph()
    modes = all_modes(cutoff)
    graph.add_nodes_from(modes)
    graph.add_edges_from((u, v) for u, v in combinations(modes, 2) if compatible(u, v))
    cliques = [frozenset(c) for c in nx.find_cliques(graph)]
    return sorted(cliques, key=lambda c: sorted(c))


def identify_family(modes, cutoff: int) -> Family | None:
    """The family whose enumeration up to ``cutoff`` equals ``modes``, if any."""
    modes = frozenset(modes)
    for fam in Family:
        if frozenset(enumerate_modes(fam, cutoff)) == modes:
            return fam
    return None
