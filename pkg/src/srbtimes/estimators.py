"""scikit-learn style wrappers around the time-set and classification layers."""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive_int, check_positive_real, check_points, check_sequences
from .classify import DEFAULT_DELTAS, DEFAULT_MS, classify_points
from .dynsys import make_system
from .timesets import dilate, hyperbolic_times, mildly_hyperbolic_times, weakly_hyperbolic_times

_KINDS = {
    "hyperbolic": lambda a, est: hyperbolic_times(a, est.delta),
    "weak": lambda a, est: weakly_hyperbolic_times(a, est.delta, est.M),
    "mild": lambda a, est: mildly_hyperbolic_times(a, est.delta, est.M, check=False),
}


class HyperbolicTimes(TransformerMixin, BaseEstimator):
    """Map each row of a sequence matrix to the indicator of its time set.

    ``kind`` picks hyperbolic, weakly or mildly hyperbolic times; with
    ``dilation`` set, the indicator is of ``E(dilation)`` instead.
    """

    def __init__(self, delta=0.03, M=100, kind="hyperbolic", dilation=None):
        self.delta = delta
        self.M = M
        self.kind = kind
        self.dilation = dilation

    def fit(self, X, y=None):
        X = check_sequences(X)
        check_positive_real(self.delta, "delta")
        check_positive_int(self.M, "M")
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {sorted(_KINDS)}, got {self.kind!r}")
        if self.dilation is not None:
            check_positive_int(self.dilation, "dilation")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_sequences(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        out = np.zeros(X.shape, dtype=bool)
        for r, row in enumerate(X):
            E = _KINDS[self.kind](row, self)
            if self.dilation is not None:
                E = dilate(E, self.dilation)
            out[r] = E.mask(X.shape[1])
        return out


class SRBClassifier(ClassifierMixin, BaseEstimator):
    """Label torus points by the finite-horizon dichotomy of a built-in system.

    ``fit`` only validates and builds the system, since the rule has no
    trainable state.  ``predict`` returns label strings, ``transform``
    the feature matrix ``[exponents, alpha_hat_1..k, beta_hat_1..k+1]``.
    The records of the last call are kept in ``records_``.
    """

    def __init__(self, system="cat2", params=None, n=100_000, burn_in=1000,
                 deltas=DEFAULT_DELTAS, ms=DEFAULT_MS, tau_hi=0.99, tau_lo=0.01,
                 beta_hi=0.1, batch_size=10, n_jobs=1):
        self.system = system
        self.params = params
        self.n = n
        self.burn_in = burn_in
        self.deltas = deltas
        self.ms = ms
        self.tau_hi = tau_hi
        self.tau_lo = tau_lo
        self.beta_hi = beta_hi
        self.batch_size = batch_size
        self.n_jobs = n_jobs

    def fit(self, X=None, y=None):
        self.system_ = make_system(self.system, self.params or {})
        if X is not None:
            check_points(X, self.system_.dim)
        self.n_features_in_ = self.system_.dim
        return self

    def _run(self, X):
        check_is_fitted(self, "system_")
        X = check_points(X, self.system_.dim)
        self.records_ = classify_points(
            self.system_, X, batch_size=self.batch_size, n_jobs=self.n_jobs,
            deltas=self.deltas, ms=self.ms, n=self.n, burn_in=self.burn_in,
            tau_hi=self.tau_hi, tau_lo=self.tau_lo, beta_hi=self.beta_hi)
        self.labels_ = np.array([str(r.label) for r in self.records_], dtype=object)
        return self.records_

    def predict(self, X):
        self._run(X)
        return self.labels_

    def transform(self, X):
        records = self._run(X)
        k = self.system_.k
        return np.array([list(r.exponents)
                         + [r.alpha_hat[i] for i in range(1, k + 1)]
                         + [r.beta_hat[i] for i in range(1, k + 2)] for r in records])

    def fit_predict(self, X, y=None):
        return self.fit(X).predict(X)
