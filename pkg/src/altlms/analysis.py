"""
Mean-square error analysis of SA-ALT-LMS
========================================

Analytical prediction of the SA-ALT-LMS learning behaviour for white
input (``R_x = sigma_x2 I``). The error-covariance diagonals ``K_w`` and
``K_p`` follow decoupled scalar recursions

    K_w[i+1] = (1 - mu lpx)**2 K_w[i] + mu**2 J_min lpx + gamma**2 L_w
    K_p[i+1] = (1 - eta lwx)**2 K_p[i] + eta**2 J_min lwx + alpha**2 L_p

with ``lpx = sigma_x2 p_o`` and ``lwx = sigma_x2 |w_o|**2`` per tap, and the
MSE is assembled as

    J_min + sigma_x2 sum(K_p K_w) + sigma_x2 sum(p_o |w_o|**2 K_p)
          + sigma_x2 sum(p_o K_w).

Readings used where the model leaves a choice open are listed in
:data:`ANALYSIS_READINGS` and copied into run metadata.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgument, UnstableConfiguration
from .shrinkage import l_matrix

ANALYSIS_READINGS = {
    "mw": "M_w^n := K_w^n (diagonal of K_w)",
    "lambda_px": "lambda_px^n = sigma_x2 * p_o^n",
    "lambda_wx": "lambda_wx^n = sigma_x2 * |w_o^n|^2",
    "j_min": "J(w_o) = J(p_o) = J_min = sigma_n2",
    "degenerate": "taps with zero rate keep their initial K and carry no MSE weight",
    "l_a": "L_w, L_p = diagonals of l_matrix at (w_o, p_o)",
}


@dataclass(frozen=True)
class AnalysisInput:
    """
    Scenario seen by the analysis.

    Attributes
    ----------
    system : SparseSystem
    sigma_x2, sigma_n2 : float
        Input and noise variances.
    mu, eta : float
        Step sizes of the ``w`` and ``p`` recursions.
    gamma, alpha : float
        Shrinkage gains, ``gamma = mu tau`` and ``alpha = eta lam``.
    spec_w, spec_p : ShrinkageSpec
    j_min : float, optional
        Minimum MSE, defaults to `sigma_n2`.
    """

    system: object
    sigma_x2: float
    sigma_n2: float
    mu: float
    eta: float
    gamma: float
    alpha: float
    spec_w: object
    spec_p: object
    j_min: float = None

    def __post_init__(self):
        if self.sigma_x2 <= 0 or self.sigma_n2 <= 0:
            raise InvalidArgument("variances must be positive")
        if self.mu <= 0 or self.eta <= 0:
            raise InvalidArgument("step sizes must be positive")
        if self.gamma < 0 or self.alpha < 0:
            raise InvalidArgument("shrinkage gains must be non-negative")
        if self.j_min is None:
            object.__setattr__(self, "j_min", float(self.sigma_n2))

    @classmethod
    def from_weights(cls, system, sigma_x2, sigma_n2, mu, eta, tau, lam,
                     spec_w, spec_p=None):
        """Build an input from regularization weights instead of gains."""
        return cls(system, sigma_x2, sigma_n2, mu, eta, mu * tau, eta * lam,
                   spec_w, spec_w if spec_p is None else spec_p)

    @property
    def lambda_px(self):
        return self.sigma_x2 * self.system.p_o

    @property
    def lambda_wx(self):
        return self.sigma_x2 * np.abs(self.system.w_o) ** 2

    @property
    def l_w(self):
        return np.real(np.diag(l_matrix(self.spec_w, self.system.w_o)))

    @property
    def l_p(self):
        return np.real(np.diag(l_matrix(self.spec_p, self.system.p_o)))


@dataclass(frozen=True)
class SteadyState:
    k_w: np.ndarray
    k_p: np.ndarray
    lambda_px: np.ndarray
    lambda_wx: np.ndarray
    mse: float

    @property
    def mse_db(self):
        return 10.0 * np.log10(self.mse)


@dataclass(frozen=True)
class Transient:
    """K diagonals and MSE for iterations ``0 .. n``; row ``i`` is iteration ``i``."""

    k_w: np.ndarray
    k_p: np.ndarray
    mse: np.ndarray

    @property
    def mse_db(self):
        return 10.0 * np.log10(self.mse)


def stability_bounds(lambda_px, lambda_wx):
    """
    Largest stable step sizes, ``2 / max(lambda_px)`` and ``2 / max(lambda_wx)``.

    Zero rates belong to taps that do not adapt and do not limit the step
    size; negative rates, or vectors with no positive entry, are rejected.
    """
    bounds = []
    for name, lam in (("lambda_px", lambda_px), ("lambda_wx", lambda_wx)):
        lam = np.asarray(lam, dtype=float)
        if lam.size == 0 or np.any(lam < 0) or not np.any(lam > 0):
            raise InvalidArgument(f"{name} must be non-negative with a positive entry")
        bounds.append(2.0 / lam.max())
    return tuple(bounds)


def lms_stability_bound(sigma_x2, m):
    """Step-size bound ``2 / (M sigma_x2)`` of a full-length LMS filter."""
    if sigma_x2 <= 0 or m < 1:
        raise InvalidArgument("need sigma_x2 > 0 and m >= 1")
    return 2.0 / (m * sigma_x2)


def _fixed_point(step, lam, j_min, gain, L, k0):
    k = np.array(k0, dtype=float)
    active = lam > 0
    la, La = lam[active], L[active]
    denom = 2.0 / step - la
    k[active] = j_min / denom + gain ** 2 * La / (step ** 2 * la * denom)
    if np.any(L[~active] != 0):
        # recursion K <- K + gain**2 L has no fixed point
        raise UnstableConfiguration("shrinkage floor diverges on a non-adapting tap",
                                    int(np.flatnonzero(~active & (L != 0))[0]))
    return k


def _initial_k(inp):
    return np.abs(inp.system.w_o) ** 2, np.abs(1.0 - inp.system.p_o) ** 2


def _mse(inp, k_w, k_p):
    p_o = inp.system.p_o
    w2 = np.abs(inp.system.w_o) ** 2
    s = inp.sigma_x2
    return (inp.j_min + s * np.sum(k_p * k_w, axis=-1)
            + s * np.sum(p_o * w2 * k_p, axis=-1) + s * np.sum(p_o * k_w, axis=-1))


def steady_state(inp):
    """
    Steady-state K diagonals and MSE.

    Parameters
    ----------
    inp : AnalysisInput

    Returns
    -------
    SteadyState

    Raises
    ------
    UnstableConfiguration
        If ``mu`` or ``eta`` is at or above its stability bound.
    """
    lpx, lwx = inp.lambda_px, inp.lambda_wx
    mu_max, eta_max = stability_bounds(lpx, lwx)
    if inp.mu >= mu_max:
        n = int(np.argmax(lpx))
        raise UnstableConfiguration(f"mu={inp.mu:g} >= bound {mu_max:g} set by tap {n}", n)
    if inp.eta >= eta_max:
        n = int(np.argmax(lwx))
        raise UnstableConfiguration(f"eta={inp.eta:g} >= bound {eta_max:g} set by tap {n}", n)
    kw0, kp0 = _initial_k(inp)
    k_w = _fixed_point(inp.mu, lpx, inp.j_min, inp.gamma, inp.l_w, kw0)
    k_p = _fixed_point(inp.eta, lwx, inp.j_min, inp.alpha, inp.l_p, kp0)
    return SteadyState(k_w, k_p, lpx, lwx, float(_mse(inp, k_w, k_p)))


def recursion_step(inp, k_w, k_p):
    """Advance the decoupled K recursions by one iteration."""
    lpx, lwx = inp.lambda_px, inp.lambda_wx
    k_w = (1.0 - inp.mu * lpx) ** 2 * k_w + inp.mu ** 2 * inp.j_min * lpx + inp.gamma ** 2 * inp.l_w
    k_p = (1.0 - inp.eta * lwx) ** 2 * k_p + inp.eta ** 2 * inp.j_min * lwx + inp.alpha ** 2 * inp.l_p
    return k_w, k_p


def transient_k(inp, iterations):
    """
    Iterate the K recursions from ``w[0] = 0``, ``p[0] = 1``.

    Divergent step sizes are not rejected; the affected entries simply grow.

    Returns
    -------
    Transient
        Arrays with ``iterations + 1`` rows.
    """
    if iterations < 1:
        raise InvalidArgument("iterations must be >= 1")
    m = inp.system.m
    k_w = np.empty((iterations + 1, m))
    k_p = np.empty((iterations + 1, m))
    k_w[0], k_p[0] = _initial_k(inp)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(iterations):
            k_w[i + 1], k_p[i + 1] = recursion_step(inp, k_w[i], k_p[i])
        mse = _mse(inp, k_w, k_p)
    return Transient(k_w, k_p, mse)


def trace_mse(r_x, k_w, k_p, w_o, p_o, j_min):
    """
    MSE in trace form,
    ``J_min + tr[R_x (K_w . K_p)] + tr[R_x (R_wo . K_p)] + tr[R_x (R_or . K_w)]``
    with ``R_wo = w_o w_o^H``, ``R_or = p_o p_o^H`` and ``.`` the Hadamard
    product.
    """
    r_x, k_w, k_p = (np.atleast_2d(np.asarray(a)) for a in (r_x, k_w, k_p))
    w_o, p_o = np.asarray(w_o), np.asarray(p_o)
    m = r_x.shape[0]
    if not (r_x.shape == k_w.shape == k_p.shape == (m, m) and w_o.shape == p_o.shape == (m,)):
        raise InvalidArgument("trace_mse needs M x M matrices and length-M vectors")
    r_wo = np.outer(w_o, w_o.conj())
    r_or = np.outer(p_o, p_o.conj())
    total = (np.trace(r_x @ (k_w * k_p)) + np.trace(r_x @ (r_wo * k_p))
             + np.trace(r_x @ (r_or * k_w)))
    return float(j_min + total.real)
