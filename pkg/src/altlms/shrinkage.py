"""
Shrinkage penalties
===================

The three sparsity-promoting penalties used by the SA-LMS and SA-ALT-LMS
recursions: the l1 norm, the log-sum penalty and an exponential
approximation of the l0 norm. For each penalty this module provides the
value, the complex subgradient used in the updates, the steady-state
outer-product approximation ``L_a`` used by the MSE analysis, and the
arithmetic cost of one application.

Every function acts on the last axis, so a batch of vectors with shape
``(..., M)`` is accepted wherever a single vector is.
"""
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgument

L1 = "l1"
LOGSUM = "logsum"
L0 = "l0"
KINDS = (L1, LOGSUM, L0)

_ALIASES = {
    "l1": L1,
    "logsum": LOGSUM,
    "log-sum": LOGSUM,
    "log_sum": LOGSUM,
    "l0": L0,
    "l0approx": L0,
    "l0-approx": L0,
}


@dataclass(frozen=True)
class ShrinkageSpec:
    """
    Penalty choice with its parameters.

    Attributes
    ----------
    kind : {'l1', 'logsum', 'l0'}
    epsilon : float or None
        Log-sum scale, required (and only allowed) for ``'logsum'``.
    beta : float or None
        Exponential rate of the l0 approximation, required (and only
        allowed) for ``'l0'``.
    """

    kind: str
    epsilon: float = None
    beta: float = None

    def __post_init__(self):
        kind = _ALIASES.get(str(self.kind).lower())
        if kind is None:
            raise InvalidArgument(f"unknown penalty kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == LOGSUM:
            if self.epsilon is None or not self.epsilon > 0:
                raise InvalidArgument("log-sum penalty needs epsilon > 0")
        elif self.epsilon is not None:
            raise InvalidArgument(f"epsilon is not a parameter of the {kind} penalty")
        if kind == L0:
            if self.beta is None or not self.beta > 0:
                raise InvalidArgument("l0 penalty needs beta > 0")
        elif self.beta is not None:
            raise InvalidArgument(f"beta is not a parameter of the {kind} penalty")

    @classmethod
    def l1(cls):
        return cls(L1)

    @classmethod
    def logsum(cls, epsilon):
        return cls(LOGSUM, epsilon=float(epsilon))

    @classmethod
    def l0(cls, beta):
        return cls(L0, beta=float(beta))

    @classmethod
    def parse(cls, name, epsilon=10.0, beta=10.0):
        """Build a spec from a penalty name, picking the relevant parameter."""
        kind = _ALIASES.get(str(name).lower())
        if kind is None:
            raise InvalidArgument(f"unknown penalty {name!r}")
        if kind == LOGSUM:
            return cls.logsum(epsilon)
        if kind == L0:
            return cls.l0(beta)
        return cls.l1()

    def __str__(self):
        if self.kind == LOGSUM:
            return f"logsum(epsilon={self.epsilon:g})"
        if self.kind == L0:
            return f"l0(beta={self.beta:g})"
        return "l1"


@dataclass(frozen=True)
class OpCount:
    """Numbers of complex additions, multiplications and divisions."""

    adds: int = 0
    mults: int = 0
    divs: int = 0

    def __post_init__(self):
        if min(self.adds, self.mults, self.divs) < 0:
            raise InvalidArgument("operation counts must be non-negative")

    def __add__(self, other):
        return OpCount(self.adds + other.adds, self.mults + other.mults, self.divs + other.divs)

    def __mul__(self, n):
        return OpCount(n * self.adds, n * self.mults, n * self.divs)

    __rmul__ = __mul__

    def __str__(self):
        return f"adds={self.adds} mults={self.mults} divs={self.divs}"


def csign(z):
    """Component-wise sign, ``sgn(Re z) + j sgn(Im z)`` with ``sgn(0) = 0``."""
    z = np.asarray(z)
    out = np.empty(z.shape, dtype=complex)
    out.real = np.sign(z.real)
    out.imag = np.sign(z.imag)
    return out if out.ndim else out[()]


def penalty_value(spec, a):
    """
    Penalty value ``f(a)``, summed over the last axis.

    Uses the complex modulus ``|a_m|``: ``sum |a_m|`` for l1,
    ``sum log(1 + |a_m|/epsilon)`` for log-sum and
    ``sum (1 - exp(-beta |a_m|))`` for l0.
    """
    mag = np.abs(np.asarray(a))
    if spec.kind == L1:
        return mag.sum(axis=-1)
    if spec.kind == LOGSUM:
        return np.log1p(mag / spec.epsilon).sum(axis=-1)
    return (-np.expm1(-spec.beta * mag)).sum(axis=-1)


def subgradient(spec, a, exact=False):
    """
    Shrinkage direction ``df/da*`` as used in the adaptive updates.

    Parameters
    ----------
    spec : ShrinkageSpec
    a : array_like of complex, shape (..., M)
    exact : bool, optional
        Log-sum only. By default the derivative is
        ``csign(a) / (1 + epsilon * ||a||_1)`` with a single l1-norm
        denominator per vector. With ``exact=True`` the element-wise
        gradient of the log-sum value, ``a / (2 |a| (epsilon + |a|))``,
        is returned instead.

    Returns
    -------
    ndarray of complex, shape (..., M)
        l1: ``csign(a)``. l0: ``beta csign(a) - beta**2 a`` where
        ``|a_m| <= 1/beta`` and 0 elsewhere.
    """
    a = np.asarray(a, dtype=complex)
    if spec.kind == L1:
        return csign(a)
    if spec.kind == LOGSUM:
        mag = np.abs(a)
        if exact:
            with np.errstate(invalid="ignore", divide="ignore"):
                g = a / (2.0 * mag * (spec.epsilon + mag))
            return np.where(mag > 0, g, 0j)
        return csign(a) / (1.0 + spec.epsilon * mag.sum(axis=-1, keepdims=True))
    beta = spec.beta
    active = np.abs(a) <= 1.0 / beta
    return np.where(active, beta * csign(a) - beta ** 2 * a, 0j)


def shrinkage_potential(spec, a):
    """
    Function whose conjugate Wirtinger derivative is :func:`subgradient`.

    The derivatives used in the updates are not the exact gradients of
    :func:`penalty_value`: the l1 sign is taken per real and imaginary
    part, and the l0 derivative is a first-order surrogate. This returns
    the potential they do integrate, ``2 sum(|Re a| + |Im a|)`` for l1 and
    ``2 beta sum(|Re a| + |Im a|) - beta**2 sum |a|**2`` for l0 (valid
    inside ``|a_m| <= 1/beta``), and is what gradient checks compare to.
    The log-sum derivative has no such potential.
    """
    a = np.asarray(a, dtype=complex)
    sep = (np.abs(a.real) + np.abs(a.imag)).sum(axis=-1)
    if spec.kind == L1:
        return 2.0 * sep
    if spec.kind == L0:
        return 2.0 * spec.beta * sep - spec.beta ** 2 * (np.abs(a) ** 2).sum(axis=-1)
    raise InvalidArgument("the log-sum derivative is not the gradient of a potential")


def l_matrix(spec, a_opt):
    """
    Steady-state approximation of ``E[f'(a) f'(a)^H]`` at the optimum.

    Parameters
    ----------
    spec : ShrinkageSpec
    a_opt : array_like of complex, shape (M,)

    Returns
    -------
    ndarray of complex, shape (M, M)
        Hermitian matrix. With ``s = csign(a_opt)``: l1 gives ``s s^H``;
        log-sum gives ``u u^H`` with ``u = s / (1 + epsilon |a_opt|)``;
        l0 gives ``beta**2 s s^H - beta**3 (s a^H + a s^H) + beta**4 a a^H``
        restricted to entries whose indices both satisfy
        ``|a_opt| <= 1/beta``, where the l0 derivative is active.
    """
    a = np.asarray(a_opt, dtype=complex)
    s = csign(a)
    if spec.kind == L1:
        return np.outer(s, s.conj())
    if spec.kind == LOGSUM:
        u = s / (1.0 + spec.epsilon * np.abs(a))
        return np.outer(u, u.conj())
    b = spec.beta
    full = (b ** 2 * np.outer(s, s.conj()) - b ** 3 * np.outer(s, a.conj())
            - b ** 3 * np.outer(a, s.conj()) + b ** 4 * np.outer(a, a.conj()))
    active = np.abs(a) <= 1.0 / b
    return np.where(np.outer(active, active), full, 0j)


def shrinkage_cost(spec, m):
    """Arithmetic cost of one application of the shrinkage to an M-vector."""
    if m < 1:
        raise InvalidArgument("m must be >= 1")
    per_tap = {L1: OpCount(2, 4, 2), LOGSUM: OpCount(4, 7, 3), L0: OpCount(3, 6, 2)}[spec.kind]
    return m * per_tap
