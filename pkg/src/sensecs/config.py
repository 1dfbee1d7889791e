"""Experiment configuration: a nested YAML document plus dotted-path overrides.

An empty (or absent) file yields the default desk-scale setup: an 8x8
half-wavelength UPA, 6 scatterers of which 4 carry the channel, T=200
symbols with K=16 pilots, 12-bit RVQ feedback, 15 dB receive SNR. Unknown
keys are hard errors so a config file always captures exactly the knobs the
simulator understands.
"""

import math
from dataclasses import dataclass

import yaml

from .arrays import ArrayConfig
from .evaluation import SWEEP_VARIABLES, TrialConfig
from .recovery import RecoveryParams
from .scene import SceneConfig
from .sensing import AngleGrid


class ConfigError(Exception):
    """Malformed or inconsistent configuration (CLI exit code 1)."""


_ARRAY_KEYS = {"n_v", "n_h", "spacing_v", "spacing_h"}
_SCENE_KEYS = {
    "m_total", "m_comm", "theta_range_deg", "phi_range_deg", "dist_range",
    "rho0_db", "bs_position", "cu_index",
}
_GRID_KEYS = {
    "theta_min_deg", "theta_max_deg", "theta_step_deg",
    "phi_min_deg", "phi_max_deg", "phi_step_deg",
}
_RECOVERY_KEYS = {"epsilon", "step_size", "max_sparsity", "max_iter"}
_SWEEP_KEYS = {"variable", "values", "trials", "out"}
_TOP_SCALAR_KEYS = {
    "block_len", "pilot_len", "feedback_bits", "snr_db", "noise_power",
    "pilot_noise_power", "sensing_sigma2", "echo_snr_db", "sensing_mode", "oracle_sigma_deg",
    "rank_tol", "restrict_to_rank", "upper_bound_includes_overhead",
    "codebook_seed", "seed",
}
_SECTION_KEYS = {"array", "scene", "grid", "recovery", "sweep"}


@dataclass
class SweepSpec:
    """What `sensecs sweep` runs by default; CLI flags override these."""

    variable: str = "snr_db"
    values: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)
    trials: int = 1000
    out: str = "sweep.csv"

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ConfigError(
                f"sweep.variable must be one of {SWEEP_VARIABLES}, got '{self.variable}'"
            )
        if self.trials < 1:
            raise ConfigError("sweep.trials must be >= 1")
        if not self.values:
            raise ConfigError("sweep.values must be nonempty")


def _check_keys(section: str, mapping: dict, allowed: set):
    unknown = set(mapping) - allowed
    if unknown:
        name = sorted(unknown)[0]
        path = f"{section}.{name}" if section else name
        raise ConfigError(f"unknown config key '{path}'")


def _tupleize(value, key, length=None):
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"'{key}' must be a list")
    if length is not None and len(value) != length:
        raise ConfigError(f"'{key}' must have {length} entries")
    try:
        return tuple(float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"'{key}' entries must be numbers") from None


def _build_section(cls, section: str, mapping: dict, allowed: set, tuples=()):
    _check_keys(section, mapping, allowed)
    kwargs = dict(mapping)
    for key, length in tuples:
        if key in kwargs:
            kwargs[key] = _tupleize(kwargs[key], f"{section}.{key}", length)
    try:
        return cls(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid '{section}' section: {exc}") from exc


def parse_yaml_document(text: str) -> dict:
    """Parse YAML to a mapping, reporting the line of any syntax error."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" at line {mark.line + 1}" if mark is not None else ""
        raise ConfigError(f"config parse error{where}: {exc}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")
    return doc


def apply_overrides(doc: dict, overrides) -> dict:
    """Apply `section.key=value` (or `key=value`) strings onto the document."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not of the form key=value")
        path, _, raw = item.partition("=")
        keys = path.strip().split(".")
        if not all(keys):
            raise ConfigError(f"override '{item}' has an empty key path")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            raise ConfigError(f"override '{item}' has an unparsable value") from None
        node = doc
        for key in keys[:-1]:
            node = node.setdefault(key, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override '{item}' descends into a non-section key")
        node[keys[-1]] = value
    return doc


def build_configs(doc: dict):
    """Turn a parsed document into (TrialConfig, SweepSpec), enforcing all invariants."""
    _check_keys("", doc, _SECTION_KEYS | _TOP_SCALAR_KEYS)
    array_doc = {"n_v": 8, "n_h": 8, **(doc.get("array", {}) or {})}
    array = _build_section(ArrayConfig, "array", array_doc, _ARRAY_KEYS)
    scene = _build_section(
        SceneConfig, "scene", doc.get("scene", {}) or {}, _SCENE_KEYS,
        tuples=[("theta_range_deg", 2), ("phi_range_deg", 2), ("dist_range", 2), ("bs_position", 3)],
    )
    grid = _build_section(AngleGrid, "grid", doc.get("grid", {}) or {}, _GRID_KEYS)
    recovery = _build_section(RecoveryParams, "recovery", doc.get("recovery", {}) or {}, _RECOVERY_KEYS)

    scalars = {k: doc[k] for k in _TOP_SCALAR_KEYS if k in doc}
    try:
        trial = TrialConfig(array=array, scene=scene, grid=grid, recovery=recovery, **scalars)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid configuration: {exc}") from exc

    sweep_doc = dict(doc.get("sweep", {}) or {})
    _check_keys("sweep", sweep_doc, _SWEEP_KEYS)
    if "values" in sweep_doc:
        sweep_doc["values"] = _tupleize(sweep_doc["values"], "sweep.values")
    sweep = SweepSpec(**sweep_doc)
    return trial, sweep


def load_config(path=None, overrides=()):
    """Load (TrialConfig, SweepSpec) from a YAML file plus dotted overrides.

    path=None starts from the built-in defaults; overrides still apply.
    """
    if path is None:
        text = ""
    else:
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file '{path}': {exc}") from exc
    doc = parse_yaml_document(text)
    doc = apply_overrides(doc, overrides)
    return build_configs(doc)


def parse_values_spec(spec: str):
    """Sweep-value list from 'start:stop:step' (stop inclusive on the grid) or 'a,b,c'."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range spec '{spec}' must be start:stop:step")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise ConfigError(f"range spec '{spec}' has non-numeric parts") from None
        if step <= 0:
            raise ConfigError("range step must be > 0")
        if stop < start:
            raise ConfigError("range stop must be >= start")
        count = int(math.floor((stop - start) / step + 1e-9))
        return [start + i * step for i in range(count + 1)]
    try:
        return [float(p) for p in spec.split(",") if p.strip() != ""]
    except ValueError:
        raise ConfigError(f"value list '{spec}' has non-numeric entries") from None
