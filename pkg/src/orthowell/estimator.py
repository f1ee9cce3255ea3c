"""scikit-learn compatible wrappers around the family bases.

``ModeBasis`` maps positions to basis-function features, so it composes with
any linear model in a ``Pipeline``.  ``FamilyExpansion`` fits expansion
coefficients either by quadrature projection of a callable or by least
squares on samples, and predicts the partial sum.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_cutoff, check_family, check_positions, check_well
from .core import enumerate_modes
from .expansion import design_matrix, expand, resolve_function


class ModeBasis(TransformerMixin, BaseEstimator):
    """Evaluate the modes of one family at sample positions.

    Parameters
    ----------
    family : {'I', 'II', 'III', 'IV'}
    cutoff : int
        Largest momentum grid index included.
    a, hbar, mass : float
        Well half-width and constants.
    derivative : bool
        Emit analytic x-derivatives instead of values.
    """

    def __init__(self, family="III", cutoff=16, a=1.0, hbar=1.0, mass=1.0, derivative=False):
        self.family = family
        self.cutoff = cutoff
        self.a = a
        self.hbar = hbar
        self.mass = mass
        self.derivative = derivative

    def fit(self, X=None, y=None):
        self.family_ = check_family(self.family)
        self.cfg_ = check_well(self.a, self.hbar, self.mass)
        self.modes_ = tuple(enumerate_modes(self.family_, check_cutoff(self.cutoff)))
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "modes_")
        x = check_positions(X)
        return design_matrix(self.cfg_, self.modes_, x, self.derivative).T

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "modes_")
        return np.array([f"mode_{m.j}_{m.kind.name.lower()}" for m in self.modes_], dtype=object)


class FamilyExpansion(RegressorMixin, BaseEstimator):
    """Truncated eigenfunction expansion in one family.

    ``fit(f)`` with a callable (or a built-in name such as ``'const1'`` or
    ``'gauss(0.3)'``) projects by quadrature and stores the full
    :class:`~orthowell.expansion.ExpansionReport` in ``report_``.
    ``fit(X, y)`` with samples solves the least-squares problem instead.
    """

    def __init__(self, family="III", cutoff=16, a=1.0, hbar=1.0, mass=1.0, order=16, panels=None):
        self.family = family
        self.cutoff = cutoff
        self.a = a
        self.hbar = hbar
        self.mass = mass
        self.order = order
        self.panels = panels

    def fit(self, X, y=None):
        self.family_ = check_family(self.family)
        self.cfg_ = check_well(self.a, self.hbar, self.mass)
        cutoff = check_cutoff(self.cutoff)
        self.modes_ = tuple(enumerate_modes(self.family_, cutoff))
        if isinstance(X, str):
            X = resolve_function(X, self.cfg_)
        if callable(X):
            if y is not None:
                raise ValueError("y must be None when fitting a callable")
            self.report_ = expand(self.cfg_, self.family_, cutoff, X, order=self.order, panels=self.panels)
            self.coef_ = np.asarray(self.report_.coeffs)
        else:
            if y is None:
                raise ValueError("sample fitting needs targets y")
            x = check_positions(X)
            y = np.asarray(y, dtype=float).ravel()
            if y.shape[0] != x.shape[0]:
                raise ValueError(f"X has {x.shape[0]} samples but y has {y.shape[0]}")
            phi = design_matrix(self.cfg_, self.modes_, x).T
            self.coef_, *_ = np.linalg.lstsq(phi, y, rcond=None)
            self.report_ = None
        self.n_features_in_ = 1
        return self

    def _features(self, X, derivative=False):
        check_is_fitted(self, "coef_")
        return design_matrix(self.cfg_, self.modes_, check_positions(X), derivative).T

    def predict(self, X):
        """Partial sum at the given positions (zero outside the well)."""
        return self._features(X) @ self.coef_

    def predict_derivative(self, X):
        return self._features(X, derivative=True) @ self.coef_

    def transform(self, X):
        """Per-mode contributions ``coef_k * mode_k(x)``."""
        return self._features(X) * self.coef_
