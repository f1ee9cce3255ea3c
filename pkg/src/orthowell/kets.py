"""Momentum kets with delta-valued inner products.

States are finite combinations of ``|+P>`` and ``|-P>`` where ``P`` is a
positive momentum carried by a symbol (``"P"`` or ``"P'"``).  Inner products
are returned as the coefficients of ``delta(P - P')`` and ``delta(P + P')``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

SYMBOLS = ("P", "P'")


def sign(p: float) -> int:
    return (p > 0) - (p < 0)


@dataclass(frozen=True)
class Label:
    sign: int
    symbol: str
    value: float

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("label sign must be +1 or -1")
        if self.symbol not in SYMBOLS:
            raise ValueError(f"unknown momentum symbol {self.symbol!r}")
        if not self.value > 0:
            raise ValueError("label values must be strictly positive; the sign lives in the label")

    def __str__(self):
        return f"|{'+' if self.sign > 0 else '-'}{self.symbol}>"


class FormalState:
    """A finite sum ``sum_k c_k |s_k P>`` with duplicate labels merged."""

    def __init__(self, terms=()):
        merged: dict[Label, complex] = {}
        for coeff, label in terms:
            merged[label] = merged.get(label, 0j) + complex(coeff)
        symbols = {label.symbol for label in merged}
        if len(symbols) > 1:
            raise ValueError("a state must use a single momentum symbol")
        self.terms = dict(sorted(merged.items(), key=lambda kv: -kv[0].sign))

    @property
    def symbol(self) -> str | None:
        return next(iter(self.terms)).symbol if self.terms else None

    def coefficients(self, value: float) -> np.ndarray:
        """Coefficients on ``(|+value>, |-value>)``."""
        return np.array(
            [sum(c for lbl, c in self.terms.items() if lbl.value == value and lbl.sign == s) for s in (1, -1)],
            dtype=complex,
        )

    def scaled(self, factor: complex) -> "FormalState":
        return FormalState((factor * c, lbl) for lbl, c in self.terms.items())

    def with_symbol(self, symbol: str) -> "FormalState":
        return FormalState((c, Label(lbl.sign, symbol, lbl.value)) for lbl, c in self.terms.items())

    def __add__(self, other: "FormalState") -> "FormalState":
        return FormalState([(c, l) for l, c in self.terms.items()] + [(c, l) for l, c in other.terms.items()])

    def __repr__(self):
        body = " + ".join(f"({c:.6g}){lbl}" for lbl, c in self.terms.items())
        return f"FormalState({body or '0'})"


@dataclass(frozen=True)
class DeltaExpr:
    """``c_minus * delta(P - P') + c_plus * delta(P + P')``."""

    c_minus: complex = 0j
    c_plus: complex = 0j

    def equals(self, other: "DeltaExpr", mode: str = "strict", tol: float = 1e-14) -> bool:
        """Compare strictly, or only on the support ``P = P'`` (``mode='on_support'``).

        With both momenta positive the ``delta(P + P')`` term never fires,
        so on-support equality ignores ``c_plus``.
        """
        if mode not in ("strict", "on_support"):
            raise ValueError(f"unknown comparison mode {mode!r}")
        ok = abs(self.c_minus - other.c_minus) <= tol
        if mode == "strict":
            ok = ok and abs(self.c_plus - other.c_plus) <= tol
        return ok

    def is_zero(self, tol: float = 1e-14) -> bool:
        return self.equals(DeltaExpr(), "strict", tol)


def inner(bra: FormalState, ket: FormalState) -> DeltaExpr:
    """Bilinear inner product using ``<sP|tP'> = delta(P - P')`` if s == t else ``delta(P + P')``.

    Bra coefficients are conjugated.  When both states carry the same symbol
    the ``delta(P + P')`` terms are dropped.
    """
    for state in (bra, ket):
        if state.symbol is not None and state.symbol not in SYMBOLS:
            raise ValueError(f"unknown momentum symbol {state.symbol!r}")
    same_symbol = bra.symbol == ket.symbol
    c_minus = 0j
    c_plus = 0j
    for lb, cb in bra.terms.items():
        for lk, ck in ket.terms.items():
            w = cb.conjugate() * ck
            if lb.sign == lk.sign:
                c_minus += w
            elif not same_symbol:
                c_plus += w
    return DeltaExpr(c_minus, c_plus)


def build_doublet(p: float, parity: int, symbol: str = "P", energy_normalized: bool = False, mass: float = 1.0) -> FormalState:
    """Even (``parity=+1``) or odd (``-1``) combination of ``|p>`` and ``|-p>``.

    The default normalisation is against ``delta(p**2 - p'**2)``; with
    ``energy_normalized`` the prefactor is ``sqrt(m/(2p))`` (delta in energy).
    """
    if not p > 0:
        raise ValueError(f"doublet momentum must be positive, got {p!r}")
    if parity not in (1, -1):
        raise ValueError("parity must be +1 or -1")
    amp = math.sqrt(mass / (2 * p)) if energy_normalized else 1.0 / (2 * math.sqrt(p))
    plus, minus = Label(1, symbol, p), Label(-1, symbol, p)
    if parity == 1:
        return FormalState([(amp, plus), (amp, minus)])
    odd = -1j * amp
    return FormalState([(odd, plus), (-odd, minus)])


@dataclass(frozen=True)
class DoubletConstraints:
    """Conditions on ``(A, B)`` for ``A|p> + B|-p>`` to be delta(p**2 - p'**2) normalised.

    ``|A|^2 + |B|^2 = 1/(2p)`` fixes the ``delta(p - p')`` coefficient and
    ``conj(A) B + A conj(B) = branch/(2p)`` the ``delta(p + p')`` one.
    """

    p: float
    norm_target: float
    cross_target: float

    def residuals(self, A: complex, B: complex, branch: int = 1) -> tuple[float, float]:
        A, B = complex(A), complex(B)
        norm = abs(A) ** 2 + abs(B) ** 2 - self.norm_target
        cross = (A.conjugate() * B + A * B.conjugate()).real - branch * self.cross_target
        return norm, cross

    def satisfied(self, A: complex, B: complex, branch: int = 1, tol: float = 1e-12) -> bool:
        return all(abs(r) <= tol for r in self.residuals(A, B, branch))

    def solve(self, branch: int = 1) -> dict:
        """Solve in polar form ``A = rA e^{i phiA}``, ``B = rB e^{i phiB}``.

        The two equations read ``rA^2 + rB^2 = 1/(2p)`` and
        ``2 rA rB cos(phiA - phiB) = branch/(2p)``.  Since
        ``2 rA rB <= rA^2 + rB^2`` with equality only at ``rA == rB``, the
        second equation forces ``rA == rB`` and ``cos(phiA - phiB) = branch``;
        only the global phase stays free.
        """
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        r = math.sqrt(self.norm_target / 2)
        phase_difference = 0.0 if branch == 1 else math.pi
        A = complex(r)
        B = r * cmath.exp(-1j * phase_difference)
        return {
            "r_a": r,
            "r_b": r,
            "phase_difference": phase_difference,
            "A": A,
            "B": B,
            "unique_up_to_global_phase": True,
        }


def solve_doublet_coefficients(p: float) -> DoubletConstraints:
    if not p > 0:
        raise ValueError(f"momentum must be positive, got {p!r}")
    return DoubletConstraints(p=p, norm_target=1 / (2 * p), cross_target=1 / (2 * p))


def completeness_check(p: float) -> np.ndarray:
    """Sum of outer products of the two doublet coefficient vectors on ``(|p>, |-p>)``.

    Equals ``identity / (2p)``; the measure ``d(p**2) = 2p dp`` restores the identity.
    """
    total = np.zeros((2, 2), dtype=complex)
    for parity in (1, -1):
        c = build_doublet(p, parity).coefficients(p)
        total += np.outer(c, c.conj())
    return total


def run_checks(momenta=(0.5, 1.0, 2.0, 10.0), tol: float = 1e-14) -> list[dict]:
    """Battery of formal checks on the doublet construction, one row per (check, p)."""
    rows = []

    def record(name, p, value, passed):
        rows.append({"check": name, "p": p, "value": value, "passed": bool(passed)})

    for p in momenta:
        d = inner(FormalState([(1, Label(1, "P", p))]), FormalState([(1, Label(1, "P'", p))]))
        record("momentum_normalization", p, abs(d.c_minus - 1) + abs(d.c_plus), d.equals(DeltaExpr(1, 0), tol=tol))

        even, odd = build_doublet(p, 1), build_doublet(p, -1)
        even_p, odd_p = even.with_symbol("P'"), odd.with_symbol("P'")
        target = DeltaExpr(1 / (2 * p), 1 / (2 * p))
        d = inner(even, even_p)
        record("even_doublet_norm", p, abs(d.c_minus - target.c_minus) + abs(d.c_plus - target.c_plus), d.equals(target, tol=tol))
        d = inner(odd, odd_p)
        record("odd_doublet_norm_on_support", p, abs(d.c_minus - target.c_minus), d.equals(target, "on_support", tol))
        d = inner(even, odd_p)
        record("doublet_orthogonality", p, abs(d.c_minus) + abs(d.c_plus), d.is_zero(tol))

        cons = solve_doublet_coefficients(p)
        A, B = even.coefficients(p)
        record("even_coefficients_unique", p, max(map(abs, cons.residuals(A, B, 1))), cons.satisfied(A, B, 1, tol))
        A, B = odd.coefficients(p)
        record("odd_coefficients", p, max(map(abs, cons.residuals(A, B, -1))), cons.satisfied(A, B, -1, tol))

        dev = float(np.max(np.abs(completeness_check(p) * 2 * p - np.eye(2))))
        record("completeness", p, dev, dev <= tol)

        m = 1.0
        e_even = build_doublet(p, 1, energy_normalized=True, mass=m)
        e_odd = build_doublet(p, -1, energy_normalized=True, mass=m)
        d = inner(e_even, e_even.with_symbol("P'"))
        record("energy_normalization_on_support", p, abs(d.c_minus - m / p), abs(d.c_minus - m / p) <= tol)
        d = inner(e_even, e_odd.with_symbol("P'"))
        record("energy_doublet_orthogonality", p, abs(d.c_minus) + abs(d.c_plus), d.is_zero(tol))
    return rows
