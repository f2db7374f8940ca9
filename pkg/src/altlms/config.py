"""
Plain-text scenario configuration.

One ``key = value`` pair per line, ``#`` starts a comment. Scenario keys
come first; each ``[algorithm]`` header opens a new roster entry::

    preset = fig2          # optional: start from a preset
    m = 16
    k_initial = 2
    snr_db = 40

    [algorithm]
    kind = sa-alt-lms
    penalty = l0
    beta = 10
    mu = 0.015
    eta = 0.012
    tau = 0.02
    lam = 0.02

Algorithm sections, when present, replace the preset roster.
"""
import re
from dataclasses import fields

from .exceptions import ConfigError, InvalidArgument
from .harness import PRESETS, AlgorithmEntry, Scenario
from .shrinkage import ShrinkageSpec

_SCENARIO_TYPES = {
    "m": int,
    "k_initial": int,
    "k_after_switch": int,
    "switch_iteration": int,
    "iterations": int,
    "trials": int,
    "snr_db": float,
    "sigma_x2": float,
    "input_mode": str,
    "ar_coefficient": float,
    "regressor_style": str,
    "coeff_mode": str,
    "base_seed": int,
}

_ALGORITHM_TYPES = {
    "kind": str,
    "label": str,
    "penalty": str,
    "epsilon": float,
    "beta": float,
    "mu": float,
    "eta": float,
    "tau": float,
    "lam": float,
    "ordering": str,
}

# parameter keys are blamed before the keys that merely name the penalty
_ENTRY_KEY_PRIORITY = ("epsilon", "beta", "mu", "eta", "tau", "lam", "ordering", "label",
                       "penalty", "kind")


def _convert(key, raw, types, lineno):
    try:
        return types[key](raw)
    except ValueError:
        raise ConfigError(f"expected {types[key].__name__}, got {raw!r}", lineno, key) from None


def _build_entry(values, lines, header_line):
    values = dict(values)
    penalty = None
    name = values.pop("penalty", None)
    epsilon = values.pop("epsilon", None)
    beta = values.pop("beta", None)
    try:
        if name is not None:
            penalty = ShrinkageSpec(name, epsilon=epsilon, beta=beta)
        elif epsilon is not None or beta is not None:
            raise InvalidArgument("epsilon/beta given without a penalty")
        if "kind" not in values:
            raise ConfigError("algorithm section needs a 'kind'", header_line, "kind")
        return AlgorithmEntry(penalty=penalty, **values)
    except InvalidArgument as exc:
        mentioned = [k for k in _ENTRY_KEY_PRIORITY if k in lines and re.search(rf"\b{k}\b", str(exc))]
        key = mentioned[0] if mentioned else None
        raise ConfigError(str(exc), lines.get(key, header_line), key) from None


def parse_config(text):
    """
    Parse configuration text into a validated :class:`Scenario`.

    Raises
    ------
    ConfigError
        On a malformed line, an unknown or repeated key, a bad value or a
        violated scenario invariant; the message names the line and key.
    """
    scenario_values, scenario_lines = {}, {}
    sections = []
    preset = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if line.lower() != "[algorithm]":
                raise ConfigError(f"unknown section {line!r}", lineno)
            sections.append(({}, {}, lineno))
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError("empty key or value", lineno, key or None)
        if sections:
            values, lines, _ = sections[-1]
            types = _ALGORITHM_TYPES
        else:
            values, lines = scenario_values, scenario_lines
            types = _SCENARIO_TYPES
            if key == "preset":
                if value not in PRESETS:
                    raise ConfigError(f"unknown preset {value!r}", lineno, key)
                preset = value
                continue
        if key not in types:
            raise ConfigError("unknown key", lineno, key)
        if key in values:
            raise ConfigError("repeated key", lineno, key)
        values[key] = _convert(key, value, types, lineno)
        lines[key] = lineno

    roster = tuple(_build_entry(v, l, h) for v, l, h in sections)
    try:
        if preset is not None:
            base = PRESETS[preset]()
            changes = dict(scenario_values)
            if roster:
                changes["roster"] = roster
            return base.replace(**changes)
        missing = [k for k in ("m", "k_initial", "iterations", "trials", "snr_db")
                   if k not in scenario_values]
        if missing:
            raise ConfigError(f"missing required keys: {', '.join(missing)}")
        return Scenario(roster=roster, **scenario_values)
    except InvalidArgument as exc:
        key = next((k for k in scenario_lines if str(exc).startswith(k)), None)
        raise ConfigError(str(exc), scenario_lines.get(key), key) from None


def format_config(scenario):
    """Render a scenario in the configuration format; inverse of :func:`parse_config`."""
    out = []
    for f in fields(Scenario):
        if f.name == "roster":
            continue
        value = getattr(scenario, f.name)
        if value is not None:
            out.append(f"{f.name} = {value!r}" if isinstance(value, float) else f"{f.name} = {value}")
    for entry in scenario.roster:
        out.append("")
        out.append("[algorithm]")
        out.append(f"kind = {entry.kind}")
        out.append(f"label = {entry.label}")
        if entry.penalty is not None:
            out.append(f"penalty = {entry.penalty.kind}")
            if entry.penalty.epsilon is not None:
                out.append(f"epsilon = {entry.penalty.epsilon!r}")
            if entry.penalty.beta is not None:
                out.append(f"beta = {entry.penalty.beta!r}")
        for name in ("mu", "eta", "tau", "lam"):
            out.append(f"{name} = {float(getattr(entry, name))!r}")
        out.append(f"ordering = {entry.ordering}")
    return "\n".join(out) + "\n"


def load_scenario(source):
    """A scenario from a preset name or a configuration file path."""
    if source in PRESETS:
        return PRESETS[source]()
    with open(source) as fh:
        return parse_config(fh.read())
