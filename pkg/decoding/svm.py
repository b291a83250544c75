"""
Linear soft-margin SVM trained by dual coordinate descent, and the
one-vs-rest ensemble used on CSP features.

Samples are rows (n x d). The bias is learned as the last weight of the
augmented sample [x, 1], which removes the equality constraint from the
dual:

    maximize  sum(alpha) - 1/2 |sum_i alpha_i y_i [x_i, 1]|^2
    subject to 0 <= alpha_i <= C
"""
import logging
from dataclasses import dataclass

import numpy as np

from eeg.exceptions import ClassifierError
from monitoring.metrics import PipelineMetrics

logger = logging.getLogger('bts.svm')

STD_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class BinarySvm:
    w: np.ndarray
    b: float
    c: float
    alpha: np.ndarray
    converged: bool
    tol: float
    n_passes: int = 0

    def decision_function(self, x):
        return np.asarray(x) @ self.w + self.b

    def to_dict(self):
        return {
            'w': self.w.tolist(),
            'b': self.b,
            'c': self.c,
            'alpha': self.alpha.tolist(),
            'converged': self.converged,
            'tol': self.tol,
            'n_passes': self.n_passes,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            w=np.array(data['w'], dtype=np.float64),
            b=float(data['b']),
            c=float(data['c']),
            alpha=np.array(data['alpha'], dtype=np.float64),
            converged=bool(data['converged']),
            tol=float(data['tol']),
            n_passes=int(data.get('n_passes', 0)),
        )


def _read_only(array):
    view = array.view()
    view.flags.writeable = False
    return view


def augment(x):
    x = np.asarray(x, dtype=np.float64)
    return np.hstack([x, np.ones((x.shape[0], 1))])


def dual_objective(alpha, x, y):
    v = (np.asarray(alpha) * np.asarray(y)) @ augment(x)
    return float(np.sum(alpha) - 0.5 * v @ v)


def projected_gradient(gradient, alpha, c):
    return np.where(alpha <= 0, np.minimum(gradient, 0), np.where(alpha >= c, np.maximum(gradient, 0), gradient))


def fit_binary(x, y, c=1.0, tol=1e-4, max_iter=100_000, rng_seed=0, on_pass=None):
    """
    Train one machine on rows ``x`` with labels ``y`` in {-1, +1}.

    Each pass visits, in a seeded random order, every coordinate whose
    projected gradient is nonzero. Training stops once the largest
    projected gradient is <= tol, or after ``max_iter`` passes with
    ``converged`` False. ``on_pass(pass_index, alpha, w_aug)`` is called
    before each pass with read-only views.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2 or y.shape != (x.shape[0],):
        raise ClassifierError('expected n x d samples and n labels, got %(x)s and %(y)s', code='bad_shape',
                              params={'x': x.shape, 'y': y.shape})
    if not np.all(np.isfinite(x)):
        raise ClassifierError('training features contain non-finite values', code='non_finite')
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ClassifierError('labels must be -1 or +1', code='bad_labels')
    if x.shape[0] < 2 or np.all(y == y[0]):
        raise ClassifierError('binary training needs both labels present', code='single_class')
    if not c > 0:
        raise ClassifierError('C must be positive, got %(c)s', code='bad_c', params={'c': c})

    xa = augment(x)
    diag = np.einsum('ij,ij->i', xa, xa)
    alpha = np.zeros(x.shape[0])
    w = np.zeros(xa.shape[1])
    rng = np.random.default_rng(rng_seed)

    converged = False
    passes = 0
    while True:
        gradient = y * (xa @ w) - 1.0
        pg = projected_gradient(gradient, alpha, c)
        if on_pass is not None:
            on_pass(passes, _read_only(alpha), _read_only(w))
        if np.max(np.abs(pg)) <= tol:
            converged = True
            break
        if passes >= max_iter:
            break
        for i in rng.permutation(np.flatnonzero(pg)):
            g = y[i] * (xa[i] @ w) - 1.0
            old = alpha[i]
            new = min(max(old - g / diag[i], 0.0), c)
            if new != old:
                alpha[i] = new
                w += (new - old) * y[i] * xa[i]
        passes += 1

    w = (alpha * y) @ xa
    return BinarySvm(w=w[:-1], b=float(w[-1]), c=float(c), alpha=alpha, converged=converged,
                     tol=float(tol), n_passes=passes)


def kkt_violations(machine, x, y):
    """Indices of samples breaking the KKT conditions at the machine's tol"""
    margin = np.asarray(y) * machine.decision_function(x)
    alpha, c, tol = machine.alpha, machine.c, machine.tol
    at_zero = (alpha <= 0) & (margin < 1 - tol)
    free = (alpha > 0) & (alpha < c) & (np.abs(margin - 1) > tol)
    at_c = (alpha >= c) & (margin > 1 + tol)
    return np.flatnonzero(at_zero | free | at_c)


@dataclass(frozen=True, eq=False)
class OvrClassifier:
    """Machine k scores class k against the rest on z-scored features"""

    machines: tuple[BinarySvm, ...]
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'machines', tuple(self.machines))
        object.__setattr__(self, 'weights', np.vstack([m.w for m in self.machines]))
        object.__setattr__(self, 'biases', np.array([m.b for m in self.machines]))

    @property
    def n_classes(self):
        return len(self.machines)

    @property
    def feature_dim(self):
        return self.mean.shape[0]

    @property
    def converged(self):
        return all(m.converged for m in self.machines)

    def standardize(self, features):
        return (features - self.mean) / self.std

    def to_dict(self):
        return {
            'mean': self.mean.tolist(),
            'std': self.std.tolist(),
            'machines': [m.to_dict() for m in self.machines],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            machines=tuple(BinarySvm.from_dict(m) for m in data['machines']),
            mean=np.array(data['mean'], dtype=np.float64),
            std=np.array(data['std'], dtype=np.float64),
        )


def fit_ovr(features, labels, n_classes, c=1.0, tol=1e-4, max_iter=100_000, rng_seed=0, on_pass=None):
    """Standardize on the training set, then one machine per class"""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels)
    if features.ndim != 2 or labels.shape != (features.shape[0],):
        raise ClassifierError('expected n x d features and n labels, got %(x)s and %(y)s', code='bad_shape',
                              params={'x': features.shape, 'y': labels.shape})
    mean = features.mean(axis=0)
    std = np.maximum(features.std(axis=0), STD_FLOOR)
    standardized = (features - mean) / std

    machines = []
    for k in range(n_classes):
        y = np.where(labels == k, 1.0, -1.0)
        machine = fit_binary(standardized, y, c=c, tol=tol, max_iter=max_iter,
                             rng_seed=np.random.SeedSequence([rng_seed, k]), on_pass=on_pass)
        if not machine.converged:
            PipelineMetrics.log_svm_not_converged(k, machine)
        machines.append(machine)
    logger.debug('Fitted %d one-vs-rest machines on %d samples', n_classes, features.shape[0])
    return OvrClassifier(machines=tuple(machines), mean=mean, std=std)


def decision_scores(clf, features):
    """w_k . z + b_k per class on the standardized feature; rows for a batch"""
    features = np.asarray(features, dtype=np.float64)
    if features.shape[-1] != clf.feature_dim:
        raise ClassifierError('feature dimension %(found)d does not match classifier dimension %(expected)d',
                              code='dimension_mismatch',
                              params={'found': features.shape[-1], 'expected': clf.feature_dim})
    return clf.standardize(features) @ clf.weights.T + clf.biases


def predict(clf, features):
    """argmax of the scores; ties go to the lowest class index"""
    return np.argmax(decision_scores(clf, features), axis=-1)
