"""
Monte-Carlo system identification harness
=========================================

Runs seeded, independent trials of a roster of adaptive filters on a
sparse system identification scenario and averages the squared a-priori
error into learning curves.

Within a trial every roster entry sees the same system, input and noise
realization. Trial ``t`` draws everything from a generator seeded with
``SeedSequence([base_seed, t])``, so results do not depend on how trials
are grouped into batches or spread over workers.
"""
import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import signal_model as sm
from .analysis import AnalysisInput, steady_state
from .exceptions import InvalidArgument, UnstableConfiguration
from .filters import (ALGORITHMS, JACOBI, LMS_KIND, ORACLE_LMS_KIND, SA_ALT_LMS_KIND,
                      SA_LMS_KIND, make_filter)
from .shrinkage import ShrinkageSpec

DIVERGENCE_THRESHOLD = 1e12

_DISPLAY = {LMS_KIND: "LMS", SA_LMS_KIND: "SA-LMS", SA_ALT_LMS_KIND: "SA-ALT-LMS",
            ORACLE_LMS_KIND: "Oracle-LMS"}


@dataclass(frozen=True)
class AlgorithmEntry:
    """
    One roster entry: an algorithm with its penalty and step sizes.

    ``tau`` and ``lam`` are regularization weights; the shrinkage gains are
    ``gamma = mu tau`` and ``alpha = eta lam``.
    """

    kind: str
    penalty: ShrinkageSpec = None
    mu: float = 0.01
    eta: float = 0.0
    tau: float = 0.0
    lam: float = 0.0
    label: str = None
    ordering: str = JACOBI

    def __post_init__(self):
        if self.kind not in ALGORITHMS:
            raise InvalidArgument(f"unknown algorithm {self.kind!r}")
        if self.kind in (SA_LMS_KIND, SA_ALT_LMS_KIND) and self.penalty is None:
            raise InvalidArgument(f"{self.kind} needs a penalty")
        if self.mu <= 0:
            raise InvalidArgument("mu must be positive")
        if self.kind == SA_ALT_LMS_KIND and self.eta <= 0:
            raise InvalidArgument("eta must be positive for sa-alt-lms")
        if min(self.eta, self.tau, self.lam) < 0:
            raise InvalidArgument("eta, tau and lam must be non-negative")
        if self.label is None:
            name = _DISPLAY[self.kind]
            if self.penalty is not None and self.kind in (SA_LMS_KIND, SA_ALT_LMS_KIND):
                name += f" ({self.penalty.kind})"
            object.__setattr__(self, "label", name)

    def with_step(self, step, mu_equals_eta=True):
        """Copy with ``mu = step`` (and ``eta = step`` when requested)."""
        if self.kind == SA_ALT_LMS_KIND and mu_equals_eta:
            return replace(self, mu=step, eta=step)
        return replace(self, mu=step)

    def build(self, m, batch_shape=(), support=()):
        return make_filter(self.kind, m, self.mu, eta=self.eta, tau=self.tau, lam=self.lam,
                           spec=self.penalty, support=support, ordering=self.ordering,
                           batch_shape=batch_shape)


@dataclass(frozen=True)
class Scenario:
    """
    Experiment description.

    Attributes
    ----------
    m : int
        Filter and system length.
    k_initial : int
        Number of non-zero taps at the start.
    iterations, trials : int
    snr_db : float
        ``10 log10(sigma_x2 / sigma_n2)``.
    sigma_x2 : float
    input_mode : {'white', 'ar1'}
    ar_coefficient : float
    regressor_style : {'tapped', 'iid'}
    coeff_mode : {'unit', 'gaussian'}
    k_after_switch, switch_iteration : int, optional
        When set, the system is redrawn with ``k_after_switch`` non-zero
        taps at iteration ``switch_iteration``. Filters keep their state.
    roster : tuple of AlgorithmEntry
    base_seed : int
    """

    m: int
    k_initial: int
    iterations: int
    trials: int
    snr_db: float
    sigma_x2: float = 1.0
    input_mode: str = sm.WHITE
    ar_coefficient: float = 0.8
    regressor_style: str = sm.TAPPED_DELAY_LINE
    coeff_mode: str = sm.UNIT_TAPS
    k_after_switch: int = None
    switch_iteration: int = None
    roster: tuple = ()
    base_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "roster", tuple(self.roster))
        self.validate()

    def validate(self):
        if self.m < 1:
            raise InvalidArgument("m must be >= 1")
        if not 1 <= self.k_initial <= self.m:
            raise InvalidArgument(f"k_initial must satisfy 1 <= k <= m (m={self.m})")
        if self.iterations < 1 or self.trials < 1:
            raise InvalidArgument("iterations and trials must be >= 1")
        if self.sigma_x2 <= 0:
            raise InvalidArgument("sigma_x2 must be positive")
        if (self.k_after_switch is None) != (self.switch_iteration is None):
            raise InvalidArgument("k_after_switch and switch_iteration go together")
        if self.switch_iteration is not None:
            if not 1 <= self.k_after_switch <= self.m:
                raise InvalidArgument(f"k_after_switch must satisfy 1 <= k <= m (m={self.m})")
            if not 0 < self.switch_iteration < self.iterations:
                raise InvalidArgument("switch_iteration must lie inside (0, iterations)")
        if self.input_mode not in sm.INPUT_MODES:
            raise InvalidArgument(f"unknown input mode {self.input_mode!r}")
        if self.regressor_style not in sm.REGRESSOR_STYLES:
            raise InvalidArgument(f"unknown regressor style {self.regressor_style!r}")
        if self.input_mode == sm.AR1 and self.regressor_style == sm.IID_VECTOR:
            raise InvalidArgument("AR(1) input requires the tapped delay line")
        if self.coeff_mode not in sm.COEFF_MODES:
            raise InvalidArgument(f"unknown coeff mode {self.coeff_mode!r}")
        if not 0 <= self.base_seed < 2 ** 64:
            raise InvalidArgument("base_seed must be a 64-bit unsigned integer")
        labels = [e.label for e in self.roster]
        if len(set(labels)) != len(labels):
            raise InvalidArgument("roster labels must be unique")

    @property
    def sigma_n2(self):
        return sm.noise_variance(self.sigma_x2, self.snr_db)

    def replace(self, **changes):
        return replace(self, **changes)

    def steady_window(self):
        """Final 10% of the iterations before any system switch."""
        end = self.iterations if self.switch_iteration is None else self.switch_iteration
        return slice(end - max(1, end // 10), end)


@dataclass
class TrialData:
    """One realization: systems (with start iterations), regressors and outputs."""

    systems: list
    x: np.ndarray
    d_clean: np.ndarray
    noise: np.ndarray

    @property
    def d(self):
        return self.d_clean + self.noise

    def system_at(self, i):
        current = self.systems[0][1]
        for start, system in self.systems:
            if i >= start:
                current = system
        return current

    def checksum(self):
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.x).tobytes())
        h.update(np.ascontiguousarray(self.d).tobytes())
        return h.hexdigest()


@dataclass
class TrialResult:
    label: str
    squared_error: np.ndarray
    diverged: bool
    stream_checksum: str


@dataclass
class LearningCurve:
    label: str
    mse: np.ndarray
    diverged_trial_count: int
    trials: int
    traces: np.ndarray = field(default=None, repr=False)

    @property
    def mse_db(self):
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.mse)

    @property
    def all_diverged(self):
        return self.diverged_trial_count == self.trials


def trial_rng(scenario, trial_index):
    return np.random.default_rng(np.random.SeedSequence([scenario.base_seed, trial_index]))


def _draw_systems(scenario, rng):
    systems = [(0, sm.generate_sparse_system(scenario.m, scenario.k_initial,
                                             scenario.coeff_mode, rng))]
    if scenario.switch_iteration is not None:
        systems.append((scenario.switch_iteration,
                        sm.generate_sparse_system(scenario.m, scenario.k_after_switch,
                                                  scenario.coeff_mode, rng)))
    return systems


def trial_systems(scenario, trial_index):
    """The systems of trial `trial_index`, without drawing its signals."""
    return _draw_systems(scenario, trial_rng(scenario, trial_index))


def realize_trial(scenario, trial_index):
    """Draw the system(s), regressors and noise of one trial."""
    rng = trial_rng(scenario, trial_index)
    systems = _draw_systems(scenario, rng)
    proc = sm.InputProcess(scenario.m, scenario.input_mode, scenario.regressor_style,
                           scenario.sigma_x2, scenario.ar_coefficient)
    proc.reset(rng)
    x = proc.regressors(scenario.iterations, rng)
    noise = sm.complex_gaussian(rng, scenario.iterations, scenario.sigma_n2)
    d_clean = np.empty(scenario.iterations, dtype=complex)
    bounds = [start for start, _ in systems[1:]] + [scenario.iterations]
    for (start, system), stop in zip(systems, bounds):
        d_clean[start:stop] = (system.w_o.conj() * x[start:stop]).sum(axis=-1)
    return TrialData(systems, x, d_clean, noise)


def _run_batch(entry, scenario, batch):
    """Run one roster entry over a batch of trials; returns (traces, diverged_at)."""
    n_trials, n_iter, m = len(batch), scenario.iterations, scenario.m
    x = np.stack([t.x for t in batch], axis=1)
    d = np.stack([t.d for t in batch], axis=1)
    masks = [np.stack([t.systems[j][1].p_o > 0 for t in batch])
             for j in range(len(batch[0].systems))]
    switches = {start: j for j, (start, _) in enumerate(batch[0].systems) if start > 0}

    filt = entry.build(m, (n_trials,), support=masks[0])
    traces = np.empty((n_trials, n_iter))
    diverged_at = np.full(n_trials, -1)
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_iter):
            if i in switches and entry.kind == ORACLE_LMS_KIND:
                filt.set_support(masks[switches[i]])
            out = filt.step(x[i], d[i])
            e2 = out.squared_error
            traces[:, i] = e2
            bad = ~(e2 <= DIVERGENCE_THRESHOLD) | ~np.isfinite(filt.w).all(axis=-1)
            fresh = bad & (diverged_at < 0)
            if fresh.any():
                diverged_at[fresh] = i
                # park diverged rows at a finite state
                filt.w[fresh] = 0
                if entry.kind != ORACLE_LMS_KIND:
                    filt.p[fresh] = 1
    for row in np.flatnonzero(diverged_at >= 0):
        traces[row, diverged_at[row] + 1:] = np.nan
    return traces, diverged_at


def run_trial(scenario, entry, trial_index):
    """
    Run one algorithm on one trial.

    Returns
    -------
    TrialResult
        Per-iteration squared error. A diverged trial is flagged and its
        trace stops at the step that diverged.
    """
    data = realize_trial(scenario, trial_index)
    traces, diverged_at = _run_batch(entry, scenario, [data])
    stop = diverged_at[0] + 1 if diverged_at[0] >= 0 else scenario.iterations
    return TrialResult(entry.label, traces[0, :stop], bool(diverged_at[0] >= 0), data.checksum())


def _chunks(n, parts):
    parts = max(1, min(parts, n))
    edges = np.linspace(0, n, parts + 1).astype(int)
    return [range(a, b) for a, b in zip(edges[:-1], edges[1:])]


def _run_chunk(scenario, roster, trial_indices):
    batch = [realize_trial(scenario, t) for t in trial_indices]
    return [_run_batch(entry, scenario, batch) for entry in roster]


def run_traces(scenario, roster=None, workers=1):
    """
    Per-trial squared-error traces for every roster entry.

    Returns
    -------
    list of (traces, diverged_at)
        ``traces`` has shape (trials, iterations), NaN after divergence;
        ``diverged_at`` holds the divergence iteration or -1.
    """
    roster = scenario.roster if roster is None else tuple(roster)
    if not roster:
        raise InvalidArgument("scenario roster is empty")
    chunks = _chunks(scenario.trials, workers)
    if len(chunks) == 1:
        parts = [_run_chunk(scenario, roster, chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = list(pool.map(lambda c: _run_chunk(scenario, roster, c), chunks))
    out = []
    for k in range(len(roster)):
        traces = np.concatenate([p[k][0] for p in parts], axis=0)
        diverged_at = np.concatenate([p[k][1] for p in parts])
        out.append((traces, diverged_at))
    return out


def _average(entry, traces, diverged_at, keep_traces):
    ok = diverged_at < 0
    n_bad = int((~ok).sum())
    if ok.any():
        mse = traces[ok].mean(axis=0)
    else:
        mse = np.full(traces.shape[1], np.inf)
    return LearningCurve(entry.label, mse, n_bad, traces.shape[0],
                         traces if keep_traces else None)


def run_experiment(scenario, workers=1, keep_traces=False):
    """
    Average squared-error traces over trials, one curve per roster entry.

    Diverged trials are left out of the average and counted in
    ``diverged_trial_count``; if every trial diverged the curve is
    ``inf`` throughout.
    """
    results = run_traces(scenario, workers=workers)
    return [_average(entry, traces, div, keep_traces)
            for entry, (traces, div) in zip(scenario.roster, results)]


@dataclass
class SweepPoint:
    step: float
    simulated: dict
    diverged: dict
    analytical: dict
    unstable: dict

    @property
    def stable(self):
        return not any(self.diverged.values()) and not any(self.unstable.values())


def analytical_mse(scenario, entry, trials=None):
    """
    Predicted steady-state MSE of an SA-ALT-LMS entry, averaged over the
    systems drawn for the scenario's trials.
    """
    if entry.kind != SA_ALT_LMS_KIND:
        raise InvalidArgument("the analysis covers sa-alt-lms only")
    trials = scenario.trials if trials is None else trials
    values = []
    for t in range(trials):
        system = trial_systems(scenario, t)[0][1]
        inp = AnalysisInput.from_weights(system, scenario.sigma_x2, scenario.sigma_n2,
                                         entry.mu, entry.eta, entry.tau, entry.lam,
                                         entry.penalty)
        values.append(steady_state(inp).mse)
    return float(np.mean(values))


def sweep_step_size(scenario, grid, mu_equals_eta=True, workers=1):
    """
    Simulated and predicted steady-state MSE over a grid of step sizes.

    For each grid value every roster entry runs with ``mu = step`` (and
    ``eta = step`` for SA-ALT-LMS when `mu_equals_eta`). The simulated
    value is the mean of the learning curve over
    :meth:`Scenario.steady_window`; SA-ALT-LMS entries also get the
    analytical prediction.

    Returns
    -------
    list of SweepPoint
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(grid <= 0):
        raise InvalidArgument("grid must be non-empty with positive steps")
    window = scenario.steady_window()
    points = []
    for step in grid:
        roster = tuple(e.with_step(float(step), mu_equals_eta) for e in scenario.roster)
        stepped = scenario.replace(roster=roster)
        curves = run_experiment(stepped, workers=workers)
        simulated, diverged, analytical, unstable = {}, {}, {}, {}
        for entry, curve in zip(roster, curves):
            diverged[entry.label] = curve.diverged_trial_count > 0
            simulated[entry.label] = (None if curve.all_diverged
                                      else float(curve.mse[window].mean()))
            if entry.kind == SA_ALT_LMS_KIND:
                try:
                    analytical[entry.label] = analytical_mse(stepped, entry)
                    unstable[entry.label] = False
                except UnstableConfiguration:
                    analytical[entry.label] = None
                    unstable[entry.label] = True
        points.append(SweepPoint(float(step), simulated, diverged, analytical, unstable))
    return points


FIG2_MU = 0.015
FIG2_ETA = 0.012
TAU = 0.02
LAM = 0.02
EPSILON = 10.0
BETA = 10.0


def preset_fig2():
    """
    Correlated-input tracking experiment.

    M = 16, two non-zero taps, switching to four at iteration 1000, AR(1)
    input with pole 0.8, SNR 40 dB, 200 trials.
    """
    logsum, l0 = ShrinkageSpec.logsum(EPSILON), ShrinkageSpec.l0(BETA)
    roster = (
        AlgorithmEntry(LMS_KIND, mu=FIG2_MU),
        AlgorithmEntry(SA_LMS_KIND, logsum, mu=FIG2_MU, tau=TAU),
        AlgorithmEntry(SA_LMS_KIND, l0, mu=FIG2_MU, tau=TAU),
        AlgorithmEntry(SA_ALT_LMS_KIND, logsum, mu=FIG2_MU, eta=FIG2_ETA, tau=TAU, lam=LAM),
        AlgorithmEntry(SA_ALT_LMS_KIND, l0, mu=FIG2_MU, eta=FIG2_ETA, tau=TAU, lam=LAM),
        AlgorithmEntry(ORACLE_LMS_KIND, mu=FIG2_MU),
    )
    return Scenario(m=16, k_initial=2, k_after_switch=4, switch_iteration=1000,
                    iterations=2000, trials=200, snr_db=40.0, sigma_x2=1.0,
                    input_mode=sm.AR1, ar_coefficient=0.8,
                    regressor_style=sm.TAPPED_DELAY_LINE, coeff_mode=sm.UNIT_TAPS,
                    roster=roster, base_seed=0)


def preset_fig3(step=0.01):
    """
    Analysis-validation experiment: SA-ALT-LMS with each penalty,
    ``mu = eta = step``, M = 32, four non-zero Gaussian taps, white i.i.d.
    regressors, SNR 30 dB, 200 trials of 1000 iterations.
    """
    roster = tuple(
        AlgorithmEntry(SA_ALT_LMS_KIND, spec, mu=step, eta=step, tau=TAU, lam=LAM)
        for spec in (ShrinkageSpec.l1(), ShrinkageSpec.logsum(EPSILON), ShrinkageSpec.l0(BETA))
    )
    return Scenario(m=32, k_initial=4, iterations=1000, trials=200, snr_db=30.0,
                    sigma_x2=1.0, input_mode=sm.WHITE, regressor_style=sm.IID_VECTOR,
                    coeff_mode=sm.GAUSSIAN_TAPS, roster=roster, base_seed=0)


PRESETS = {"fig2": preset_fig2, "fig3": preset_fig3}
