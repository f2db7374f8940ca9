"""
LMS-type adaptive filters
=========================

Streaming implementations of LMS, sparsity-aware LMS (SA-LMS), the
alternating-optimization SA-ALT-LMS and the genie-aided Oracle-LMS.

Each filter estimates ``d_hat = w^H diag(p) x``. SA-ALT-LMS adapts both
the filter ``w`` and the diagonal gain ``p``; the other filters keep
``p`` fixed (all ones, or the true support for Oracle-LMS).

The state arrays may carry leading batch dimensions, ``w.shape == (..., M)``;
``step`` then advances every member of the batch in one call. This is
how the Monte-Carlo harness runs many independent trials at once.
"""
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgument, NumericFault
from .shrinkage import OpCount, shrinkage_cost, subgradient

LMS_KIND = "lms"
SA_LMS_KIND = "sa-lms"
SA_ALT_LMS_KIND = "sa-alt-lms"
ORACLE_LMS_KIND = "oracle-lms"
ALGORITHMS = (LMS_KIND, SA_LMS_KIND, SA_ALT_LMS_KIND, ORACLE_LMS_KIND)

JACOBI = "jacobi"
GAUSS_SEIDEL = "gauss-seidel"


def _rowsum(v):
    return np.add.reduce(v, axis=-1)


def _col(v):
    # broadcast one value per filter across the taps; a lone filter has a scalar
    return v[..., None] if v.ndim else v


@dataclass
class StepOutput:
    """Estimate, a-priori error and squared error of one time step."""

    d_hat: complex
    error: complex
    squared_error: float


def predict(w, p, x):
    """Filter output ``w^H diag(p) x`` over the last axis."""
    w, p, x = np.asarray(w), np.asarray(p), np.asarray(x)
    if not (w.shape[-1] == p.shape[-1] == x.shape[-1]):
        raise InvalidArgument("w, p and x must have the same length")
    return _rowsum(w.conj() * x * p)


def prediction_forms(w, p, x):
    """
    The four equivalent factorisations of the filter output.

    Returns ``(w^H P x, p^T W* x, x^T P w*, x^T W* p)`` with
    ``P = diag(p)`` and ``W* = diag(w*)``, each evaluated by explicit
    matrix-vector products. Accepts batches of shape ``(..., M)``.
    """
    w, p, x = (np.asarray(v, dtype=complex) for v in (w, p, x))
    if not (w.shape == p.shape == x.shape):
        raise InvalidArgument("w, p and x must have the same shape")
    eye = np.eye(w.shape[-1])
    P = p[..., :, None] * eye
    W_conj = w.conj()[..., :, None] * eye

    def mv(A, v):
        return (A @ v[..., :, None])[..., 0]

    def dot(u, v):
        return (u[..., None, :] @ v[..., :, None])[..., 0, 0]

    return (
        dot(w.conj(), mv(P, x)),
        dot(p, mv(W_conj, x)),
        dot(x, mv(P, w.conj())),
        dot(x, mv(W_conj, p)),
    )


class LMS:
    """
    Complex LMS, ``w <- w + mu e* x`` with ``e = d - w^H x``.

    Parameters
    ----------
    m : int
        Filter length.
    mu : float
        Step size.
    batch_shape : tuple of int, optional
        Leading dimensions for running independent filters together.
    """

    kind = LMS_KIND

    def __init__(self, m, mu, batch_shape=()):
        if m < 1:
            raise InvalidArgument("filter length must be >= 1")
        if mu < 0:
            raise InvalidArgument("mu must be non-negative")
        self.m = m
        self.mu = mu
        self.batch_shape = tuple(batch_shape)
        self.reset()

    def reset(self):
        """Restore ``w = 0``, ``p = 1`` and the iteration counter."""
        shape = self.batch_shape + (self.m,)
        self.n = 0
        self.w = np.zeros(shape, dtype=complex)
        self.p = np.ones(shape, dtype=complex)

    def predict(self, x):
        return predict(self.w, self.p, x)

    def _check(self, x):
        x = np.asarray(x)
        if x.shape[-1] != self.m:
            raise InvalidArgument(f"regressor length {x.shape[-1]} != filter length {self.m}")
        return x

    def _guard(self, x, d, e):
        # a non-finite input always poisons e, so inputs are only inspected then
        sq = e.real ** 2 + e.imag ** 2
        if not math.isfinite(sq.sum() if sq.ndim else sq) and not (
                np.isfinite(x).all() and np.isfinite(d).all()):
            raise NumericFault("non-finite regressor or desired sample", self.n)
        return sq

    def _output(self, d_hat, e, sq):
        self.n += 1
        return StepOutput(d_hat, e, sq)

    def step(self, x, d):
        """
        Filter one regressor and adapt.

        Parameters
        ----------
        x : ndarray of complex, shape (..., M)
        d : complex or ndarray of complex, shape (...)
            Observed (noisy) desired output.

        Returns
        -------
        StepOutput
        """
        x = self._check(x)
        d_hat = _rowsum(self.w.conj() * x)
        e = d - d_hat
        sq = self._guard(x, d, e)
        self.w = self.w + self.mu * _col(e.conj()) * x
        return self._output(d_hat, e, sq)


class SALMS(LMS):
    """
    Sparsity-aware LMS.

    ``w <- w + mu e* x - gamma f'(w)`` with ``gamma = mu * tau``.

    Parameters
    ----------
    m : int
    mu : float
    tau : float
        Regularization weight of the penalty on ``w``.
    spec_w : ShrinkageSpec
    batch_shape : tuple of int, optional
    """

    kind = SA_LMS_KIND

    def __init__(self, m, mu, tau, spec_w, batch_shape=()):
        if tau < 0:
            raise InvalidArgument("tau must be non-negative")
        self.tau = tau
        self.spec_w = spec_w
        super().__init__(m, mu, batch_shape)

    @property
    def gamma(self):
        return self.mu * self.tau

    def step(self, x, d):
        x = self._check(x)
        d_hat = _rowsum(self.w.conj() * x)
        e = d - d_hat
        sq = self._guard(x, d, e)
        w = self.w + self.mu * _col(e.conj()) * x
        if self.gamma:
            w -= self.gamma * subgradient(self.spec_w, self.w)
        self.w = w
        return self._output(d_hat, e, sq)


class SAALTLMS(SALMS):
    """
    Sparsity-aware alternating-optimization LMS.

    One step computes ``e = d - w^H diag(p) x`` and then

    ``p <- p + eta e diag(w) x* - alpha f'(p)``, ``alpha = eta * lam``

    ``w <- w + mu e* diag(p) x - gamma f'(w)``, ``gamma = mu * tau``

    Parameters
    ----------
    m : int
    mu, eta : float
        Step sizes of the ``w`` and ``p`` recursions.
    tau, lam : float
        Regularization weights on ``w`` and ``p``.
    spec_w, spec_p : ShrinkageSpec
        Penalties on ``w`` and ``p``; `spec_p` defaults to `spec_w`.
    ordering : {'jacobi', 'gauss-seidel'}
        ``'jacobi'`` (default) updates both vectors from the same error and
        the pre-update partner. ``'gauss-seidel'`` recomputes the error
        with the new ``p`` before updating ``w``.
    batch_shape : tuple of int, optional

    Notes
    -----
    Filters start from ``p = 1`` and ``w = 0``. With ``eta = lam = 0`` the
    gain stays at one and the recursion is SA-LMS.
    """

    kind = SA_ALT_LMS_KIND

    def __init__(self, m, mu, eta, tau, lam, spec_w, spec_p=None,
                 ordering=JACOBI, batch_shape=()):
        if eta < 0 or lam < 0:
            raise InvalidArgument("eta and lam must be non-negative")
        if ordering not in (JACOBI, GAUSS_SEIDEL):
            raise InvalidArgument(f"unknown ordering {ordering!r}")
        self.eta = eta
        self.lam = lam
        self.spec_p = spec_w if spec_p is None else spec_p
        self.ordering = ordering
        super().__init__(m, mu, tau, spec_w, batch_shape)

    @property
    def alpha(self):
        return self.eta * self.lam

    def step(self, x, d):
        x = self._check(x)
        w, p = self.w, self.p
        wx = w.conj() * x
        d_hat = _rowsum(wx * p)
        e = d - d_hat
        sq = self._guard(x, d, e)
        # zero gains skip the shrinkage term; subtracting 0 * f' would not change a bit
        p_new = p + self.eta * _col(e) * wx.conj()
        if self.alpha:
            p_new -= self.alpha * subgradient(self.spec_p, p)
        self.p = p_new
        if self.ordering == GAUSS_SEIDEL:
            e_w = d - _rowsum(wx * self.p)
            p_w = self.p
        else:
            e_w, p_w = e, p
        w_new = w + self.mu * _col(e_w.conj()) * p_w * x
        if self.gamma:
            w_new -= self.gamma * subgradient(self.spec_w, w)
        self.w = w_new
        return self._output(d_hat, e, sq)


class OracleLMS(LMS):
    """
    LMS restricted to the true support (genie-aided baseline).

    Parameters
    ----------
    m : int
    mu : float
    support : array_like
        Boolean mask of shape ``(..., M)`` or a sequence of tap indices.
    batch_shape : tuple of int, optional
    """

    kind = ORACLE_LMS_KIND

    def __init__(self, m, mu, support, batch_shape=()):
        super().__init__(m, mu, batch_shape)
        self.set_support(support)

    def set_support(self, support):
        """
        Switch to a new support; taps outside it are zeroed.

        `support` is a boolean mask of shape ``(..., M)`` or a sequence of
        tap indices shared by the whole batch.
        """
        support = np.asarray(support)
        shape = self.batch_shape + (self.m,)
        if support.dtype == bool:
            mask = np.broadcast_to(support, shape)
        else:
            idx = support.astype(int).ravel()
            if idx.size and (idx.min() < 0 or idx.max() >= self.m):
                raise InvalidArgument("support index out of range")
            mask = np.zeros(shape, dtype=bool)
            mask[..., idx] = True
        self.p = mask.astype(complex)
        self.w = np.where(mask, self.w, 0j)

    @property
    def support_mask(self):
        return self.p.real > 0

    def step(self, x, d):
        x = self._check(x)
        d_hat = _rowsum(self.w.conj() * x * self.p)
        e = d - d_hat
        sq = self._guard(x, d, e)
        self.w = self.w + self.mu * _col(e.conj()) * (self.p * x)
        return self._output(d_hat, e, sq)


def make_filter(kind, m, mu, eta=0.0, tau=0.0, lam=0.0, spec=None, support=(),
                ordering=JACOBI, batch_shape=()):
    """Construct a filter by algorithm name."""
    if kind == LMS_KIND:
        return LMS(m, mu, batch_shape)
    if kind == SA_LMS_KIND:
        return SALMS(m, mu, tau, spec, batch_shape)
    if kind == SA_ALT_LMS_KIND:
        return SAALTLMS(m, mu, eta, tau, lam, spec, ordering=ordering, batch_shape=batch_shape)
    if kind == ORACLE_LMS_KIND:
        return OracleLMS(m, mu, support, batch_shape)
    raise InvalidArgument(f"unknown algorithm {kind!r}")


_BASE_COST = {
    LMS_KIND: OpCount(2, 2, 0),
    SA_LMS_KIND: OpCount(2, 2, 0),
    SA_ALT_LMS_KIND: OpCount(5, 7, 0),
}


def algorithm_cost(kind, spec, m):
    """
    Arithmetic cost per iteration.

    LMS costs ``2M`` additions and ``2M`` multiplications; SA-LMS adds two
    shrinkage applications and SA-ALT-LMS costs ``5M`` additions and ``7M``
    multiplications plus two shrinkage applications.
    """
    if kind not in _BASE_COST:
        raise InvalidArgument(f"no cost model for {kind!r}")
    if m < 1:
        raise InvalidArgument("m must be >= 1")
    cost = m * _BASE_COST[kind]
    if kind != LMS_KIND:
        if spec is None:
            raise InvalidArgument(f"{kind} needs a penalty to be costed")
        cost = cost + 2 * shrinkage_cost(spec, m)
    return cost
