"""Truncated matrix representations of the family Hamiltonians and projectors.

Every operator is written in the reference basis of periodic modes
(family III, constant included) with ``j <= ref_cutoff``.  A family operator
with source cutoff ``J`` is ``sum_k w_k v_k v_k^T`` over the family modes,
where ``v_k`` is the reference representation of mode ``k`` and ``w_k`` is
its energy (Hamiltonian) or 1 (projector).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import Family, Kind, ModeId, WellConfig, enumerate_modes, energy_of
from .overlap import gram_family, mode_overlap

HAMILTONIAN = "hamiltonian"
PROJECTOR = "projector"
LINDEP_TOL = 1e-12


@dataclass(frozen=True)
class OperatorMatrix:
    cfg: WellConfig
    family: Family
    kind: str
    source_cutoff: int
    ref_cutoff: int
    include_constant: bool
    ref_modes: tuple = field(repr=False)
    source_modes: tuple = field(repr=False)
    matrix: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def rebuilt(self, ref_cutoff: int) -> "OperatorMatrix":
        """Same operator at another reference cutoff."""
        return build_operator(self.cfg, self.family, self.source_cutoff, ref_cutoff, self.kind, self.include_constant)


def reference_modes(ref_cutoff: int) -> tuple:
    return tuple(enumerate_modes(Family.III, ref_cutoff))


def rep_mode(cfg: WellConfig, mode: ModeId, ref_cutoff: int) -> np.ndarray:
    """Overlaps of ``mode`` with each reference mode."""
    return np.array([mode_overlap(r, mode) for r in reference_modes(ref_cutoff)])


def _source_modes(family: Family, cutoff: int, include_constant: bool) -> list[ModeId]:
    modes = enumerate_modes(family, cutoff)
    if not include_constant:
        modes = [m for m in modes if m.kind is not Kind.CONST]
    return modes


def build_operator(cfg, family, cutoff, ref_cutoff, kind=HAMILTONIAN, include_constant=True) -> OperatorMatrix:
    family = Family.parse(family)
    if kind not in (HAMILTONIAN, PROJECTOR):
        raise ValueError(f"unknown operator kind {kind!r}")
    if cutoff > ref_cutoff:
        warnings.warn(
            f"source cutoff {cutoff} exceeds reference cutoff {ref_cutoff}; representation is truncated",
            stacklevel=3,
        )
    refs = reference_modes(ref_cutoff)
    modes = _source_modes(family, cutoff, include_constant)
    matrix = np.zeros((len(refs), len(refs)))
    # fixed accumulation order keeps the cross-family identities at rounding level
    for mode in modes:
        v = rep_mode(cfg, mode, ref_cutoff)
        weight = energy_of(cfg, mode.j) if kind == HAMILTONIAN else 1.0
        matrix += weight * np.outer(v, v)
    return OperatorMatrix(cfg, family, kind, cutoff, ref_cutoff, include_constant, refs, tuple(modes), matrix)


def build_hamiltonian(cfg, family, cutoff, ref_cutoff, include_constant=True) -> OperatorMatrix:
    return build_operator(cfg, family, cutoff, ref_cutoff, HAMILTONIAN, include_constant)


def build_projector(cfg, family, cutoff, ref_cutoff, include_constant=True) -> OperatorMatrix:
    return build_operator(cfg, family, cutoff, ref_cutoff, PROJECTOR, include_constant)


def linear_dependence_residual(ops: dict) -> float:
    """Max entrywise ``|(O_I + O_II) - (O_III + O_IV)|`` for four matched operators."""
    missing = set(Family) - set(ops)
    if missing:
        raise ValueError(f"missing families: {sorted(f.value for f in missing)}")
    first = ops[Family.I]
    for op in ops.values():
        if (op.source_cutoff, op.ref_cutoff, op.kind, op.include_constant) != (
            first.source_cutoff,
            first.ref_cutoff,
            first.kind,
            first.include_constant,
        ):
            raise ValueError("linear dependence requires matched cutoffs, kinds and constant convention")
    lhs = ops[Family.I].matrix + ops[Family.II].matrix
    rhs = ops[Family.III].matrix + ops[Family.IV].matrix
    return float(np.max(np.abs(lhs - rhs)))


def check_linear_dependence(cfg, cutoff, ref_cutoff, include_constant=True, tol=LINDEP_TOL) -> dict:
    out = {"cutoff": cutoff, "ref_cutoff": ref_cutoff, "include_constant": include_constant, "tol": tol}
    for kind in (HAMILTONIAN, PROJECTOR):
        ops = {f: build_operator(cfg, f, cutoff, ref_cutoff, kind, include_constant) for f in Family}
        out[f"{kind}_residual"] = linear_dependence_residual(ops)
    out["passed"] = out["hamiltonian_residual"] <= tol and out["projector_residual"] <= tol
    return out


def commutator_norm(A: OperatorMatrix, B: OperatorMatrix) -> float:
    """Frobenius norm of ``AB - BA``."""
    if A.matrix.shape != B.matrix.shape or A.ref_cutoff != B.ref_cutoff:
        raise ValueError("operators must share the reference basis")
    if A.cfg != B.cfg:
        raise ValueError("operators must share the well configuration")
    return float(np.linalg.norm(A.matrix @ B.matrix - B.matrix @ A.matrix, "fro"))


def commutator_study(cfg, fam_a, fam_b, cutoff, ref_cutoff, kind=HAMILTONIAN, include_constant=True) -> dict:
    """Commutator norm at ``ref_cutoff`` and at twice that, for stability assessment."""
    A = build_operator(cfg, fam_a, cutoff, ref_cutoff, kind, include_constant)
    B = build_operator(cfg, fam_b, cutoff, ref_cutoff, kind, include_constant)
    value = commutator_norm(A, B)
    doubled = commutator_norm(A.rebuilt(2 * ref_cutoff), B.rebuilt(2 * ref_cutoff))
    return {
        "families": [A.family.value, B.family.value],
        "kind": kind,
        "cutoff": cutoff,
        "ref_cutoff": ref_cutoff,
        "commutator_norm": value,
        "commutator_norm_doubled_ref": doubled,
        "relative_change": abs(doubled - value) / value if value else float("nan"),
        "norm_a": float(np.linalg.norm(A.matrix, "fro")),
        "norm_b": float(np.linalg.norm(B.matrix, "fro")),
    }


def idempotence_defect(P: OperatorMatrix) -> float:
    return float(np.linalg.norm(P.matrix @ P.matrix - P.matrix, "fro"))


def spectral_action_check(cfg, family, cutoff, ref_cutoff, tol=None) -> dict:
    """Apply the family Hamiltonian to each family mode's representation.

    Relative residual ``|H v - E v| / |E v|``; absolute for the zero-energy
    constant mode.  Truncation makes the residual shrink as ``ref_cutoff``
    grows; it is exact for family III.
    """
    family = Family.parse(family)
    gram = gram_family(cfg, family, cutoff)
    if not gram.is_orthonormal:
        raise ValueError(f"family {family.value} Gram matrix is not orthonormal")
    H = build_hamiltonian(cfg, family, cutoff, ref_cutoff)
    rows = []
    for mode in H.source_modes:
        v = rep_mode(cfg, mode, ref_cutoff)
        energy = energy_of(cfg, mode.j)
        resid = float(np.linalg.norm(H.matrix @ v - energy * v))
        scale = float(np.linalg.norm(energy * v))
        rows.append({"mode": str(mode), "energy": energy, "residual": resid / scale if scale else resid})
    worst = max(r["residual"] for r in rows)
    out = {"family": family.value, "cutoff": cutoff, "ref_cutoff": ref_cutoff, "modes": rows, "max_residual": worst}
    if tol is not None:
        out["tol"] = tol
        out["passed"] = worst <= tol
    return out
