"""
Sparse system identification signal model
=========================================

Sparse FIR systems, complex Gaussian input regressors (white or AR(1)
correlated, fed through a tapped delay line or drawn as i.i.d. vectors),
measurement noise and noisy desired outputs.

All complex Gaussian draws are circularly symmetric: a variance ``var`` is
split evenly between the real and imaginary parts. Samples are drawn as
``(real, imag)`` pairs so that streaming and block generation consume the
random generator identically.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .exceptions import InvalidArgument

UNIT_TAPS = "unit"
GAUSSIAN_TAPS = "gaussian"
COEFF_MODES = (UNIT_TAPS, GAUSSIAN_TAPS)

WHITE = "white"
AR1 = "ar1"
INPUT_MODES = (WHITE, AR1)

TAPPED_DELAY_LINE = "tapped"
IID_VECTOR = "iid"
REGRESSOR_STYLES = (TAPPED_DELAY_LINE, IID_VECTOR)

# taps smaller than this are redrawn in GAUSSIAN_TAPS mode
MIN_GAUSSIAN_TAP = 1e-3


def complex_gaussian(rng, shape=(), var=1.0):
    """Draw circularly-symmetric complex Gaussian samples of variance `var`."""
    shape = (shape,) if np.isscalar(shape) else tuple(shape)
    z = rng.standard_normal(shape + (2,))
    return np.sqrt(var / 2.0) * (z[..., 0] + 1j * z[..., 1])


def noise_variance(sigma_x2, snr_db):
    """Noise variance giving ``SNR = sigma_x2 / sigma_n2`` in dB."""
    return sigma_x2 / 10.0 ** (snr_db / 10.0)


def snr_db(sigma_x2, sigma_n2):
    return 10.0 * np.log10(sigma_x2 / sigma_n2)


@dataclass(frozen=True)
class SparseSystem:
    """
    A sparse FIR system.

    Attributes
    ----------
    w_o : ndarray of complex, shape (M,)
        True taps, non-zero exactly on `support`.
    support : tuple of int
        Sorted positions of the non-zero taps.
    """

    w_o: np.ndarray
    support: tuple

    def __post_init__(self):
        w_o = np.asarray(self.w_o, dtype=complex)
        if w_o.ndim != 1 or w_o.size < 1:
            raise InvalidArgument("w_o must be a non-empty 1-D vector")
        support = tuple(sorted(int(n) for n in self.support))
        mask = np.zeros(w_o.size, dtype=bool)
        mask[list(support)] = True
        if len(set(support)) != len(support) or np.any(w_o[~mask] != 0) or np.any(w_o[mask] == 0):
            raise InvalidArgument("w_o must be non-zero exactly on the support")
        object.__setattr__(self, "w_o", w_o)
        object.__setattr__(self, "support", support)

    @property
    def m(self):
        return self.w_o.size

    @property
    def k(self):
        return len(self.support)

    @property
    def p_o(self):
        """Binary oracle vector, ones on the support."""
        p_o = np.zeros(self.m)
        p_o[list(self.support)] = 1.0
        return p_o

    @classmethod
    def from_taps(cls, w_o):
        w_o = np.asarray(w_o, dtype=complex)
        return cls(w_o, tuple(np.flatnonzero(w_o)))


def generate_sparse_system(m, k, coeff_mode=UNIT_TAPS, rng=None):
    """
    Draw a random K-sparse system of length M.

    Parameters
    ----------
    m : int
        Filter length.
    k : int
        Number of non-zero taps, ``1 <= k <= m``.
    coeff_mode : {'unit', 'gaussian'}
        ``'unit'`` gives unit-magnitude taps with uniform random phase,
        ``'gaussian'`` standard complex Gaussian taps (magnitudes below
        1e-3 are redrawn).
    rng : numpy.random.Generator

    Returns
    -------
    SparseSystem
    """
    if not (isinstance(m, (int, np.integer)) and isinstance(k, (int, np.integer))):
        raise InvalidArgument("m and k must be integers")
    if m < 1 or k < 1 or k > m:
        raise InvalidArgument(f"need 1 <= k <= m, got m={m}, k={k}")
    if coeff_mode not in COEFF_MODES:
        raise InvalidArgument(f"unknown coeff_mode {coeff_mode!r}")
    rng = np.random.default_rng() if rng is None else rng

    support = np.sort(rng.choice(m, size=k, replace=False))
    if coeff_mode == UNIT_TAPS:
        taps = np.exp(2j * np.pi * rng.random(k))
    else:
        taps = complex_gaussian(rng, k)
        small = np.abs(taps) < MIN_GAUSSIAN_TAP
        while np.any(small):
            taps[small] = complex_gaussian(rng, int(small.sum()))
            small = np.abs(taps) < MIN_GAUSSIAN_TAP
    w_o = np.zeros(m, dtype=complex)
    w_o[support] = taps
    return SparseSystem(w_o, tuple(support))


@dataclass
class InputProcess:
    """
    Source of input regressors.

    Parameters
    ----------
    m : int
        Regressor length.
    mode : {'white', 'ar1'}
        White samples, or ``x_c[i] = a x_c[i-1] + v[i]`` scaled by
        ``sqrt(1 - a**2)`` so the stationary variance stays `sigma_x2`.
    regressor_style : {'tapped', 'iid'}
        ``'tapped'`` pushes one scalar per step into a delay line and
        returns the last M samples newest-first. ``'iid'`` returns fresh
        i.i.d. vectors (white mode only).
    sigma_x2 : float
        Input variance.
    ar_coefficient : float
        AR(1) pole, used in ``'ar1'`` mode.

    Notes
    -----
    Call :meth:`reset` with a generator before drawing regressors. In
    tapped mode the delay line is pre-filled with M samples and the AR
    state starts from its stationary distribution, so the first regressor
    is already stationary.
    """

    m: int
    mode: str = WHITE
    regressor_style: str = TAPPED_DELAY_LINE
    sigma_x2: float = 1.0
    ar_coefficient: float = 0.8
    delay_line: np.ndarray = field(default=None, repr=False)
    ar_state: complex = 0j

    def __post_init__(self):
        if self.m < 1:
            raise InvalidArgument("m must be >= 1")
        if self.mode not in INPUT_MODES:
            raise InvalidArgument(f"unknown input mode {self.mode!r}")
        if self.regressor_style not in REGRESSOR_STYLES:
            raise InvalidArgument(f"unknown regressor style {self.regressor_style!r}")
        if self.mode == AR1 and self.regressor_style == IID_VECTOR:
            raise InvalidArgument("AR(1) input requires the tapped delay line")
        if self.sigma_x2 <= 0:
            raise InvalidArgument("sigma_x2 must be positive")
        if self.mode == AR1 and not abs(self.ar_coefficient) < 1:
            raise InvalidArgument("AR(1) coefficient must satisfy |a| < 1")

    @property
    def normalizer(self):
        if self.mode == AR1:
            return np.sqrt(1.0 - self.ar_coefficient ** 2)
        return 1.0

    def reset(self, rng):
        """Initialise the AR state and pre-fill the delay line."""
        self.delay_line = np.zeros(self.m, dtype=complex)
        self.ar_state = 0j
        if self.regressor_style == IID_VECTOR:
            return
        if self.mode == AR1:
            a2 = self.ar_coefficient ** 2
            self.ar_state = complex_gaussian(rng, (), self.sigma_x2 / (1.0 - a2))
        self.delay_line = self._scalars(self.m, rng)[::-1].copy()

    def _scalars(self, n, rng):
        # n consecutive stream samples, oldest first; advances ar_state
        v = complex_gaussian(rng, n, self.sigma_x2)
        if self.mode == WHITE:
            return v
        a = self.ar_coefficient
        xc, zf = lfilter([1.0], [1.0, -a], v, zi=[a * self.ar_state])
        self.ar_state = xc[-1]
        return self.normalizer * xc

    def next_regressor(self, rng):
        """Return the regressor for the next time step, shape (M,)."""
        if self.delay_line is None:
            raise InvalidArgument("InputProcess used before reset()")
        if self.regressor_style == IID_VECTOR:
            return complex_gaussian(rng, self.m, self.sigma_x2)
        self.delay_line[1:] = self.delay_line[:-1]
        self.delay_line[0] = self._scalars(1, rng)[0]
        return self.delay_line.copy()

    def regressors(self, n, rng):
        """
        Draw `n` consecutive regressors at once, shape (n, M).

        Consumes `rng` exactly like `n` calls to :meth:`next_regressor`.
        """
        if self.delay_line is None:
            raise InvalidArgument("InputProcess used before reset()")
        if self.regressor_style == IID_VECTOR:
            return complex_gaussian(rng, (n, self.m), self.sigma_x2)
        new = self._scalars(n, rng)
        stream = np.concatenate([self.delay_line[::-1], new])
        # row i holds stream[i+1 .. i+M] newest-first
        windows = np.lib.stride_tricks.sliding_window_view(stream, self.m)[1:]
        self.delay_line = stream[-self.m:][::-1].copy()
        return windows[:, ::-1].copy()


@dataclass(frozen=True)
class Measurement:
    d_clean: complex
    noise: complex
    d_noisy: complex


def measure(system, x, sigma_n2, rng):
    """
    Pass a regressor through the true system and add measurement noise.

    Returns
    -------
    Measurement
        ``d_clean = w_o^H x``, noise of variance `sigma_n2`, and their sum.
    """
    x = np.asarray(x)
    if x.shape != system.w_o.shape:
        raise InvalidArgument(f"regressor length {x.shape} does not match system length {system.m}")
    d_clean = np.vdot(system.w_o, x)
    noise = complex_gaussian(rng, (), sigma_n2) if sigma_n2 > 0 else 0j
    return Measurement(d_clean, noise, d_clean + noise)
