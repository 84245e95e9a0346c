"""Run configuration: a flat YAML mapping with lowercase, hyphenated keys."""

import math
import re
from dataclasses import dataclass

import yaml

from .mollify import MIN_SAMPLES_ACROSS
from .stepper import SolverConfig

SELECTORS = (
    "peakon", "periodic-peakon", "mollified-peakon",
    "gaussian-potentials", "peaked-potentials", "from-file",
)
PEAKON_SELECTORS = ("peakon", "periodic-peakon", "mollified-peakon")


class ConfigError(ValueError):
    pass


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads ``5e-4`` (no decimal point) as a float."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^(?:[-+]?(?:[0-9][0-9_]*)\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                  |[-+]?(?:[0-9][0-9_]*)(?:[eE][-+]?[0-9]+)
                  |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
                  |[-+]?\.(?:inf|Inf|INF)
                  |\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."),
)


def _num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _opt(check):
    return lambda v: v is None or check(v)


def _pos(v):
    return _num(v) and math.isfinite(v) and v > 0


def _nonneg(v):
    return _num(v) and math.isfinite(v) and v >= 0


def _pos_int(v):
    return _is_int(v) and v > 0


def _int_list(v):
    return isinstance(v, list) and all(_pos_int(x) for x in v)


def _float_list(v):
    return isinstance(v, list) and all(_num(x) and math.isfinite(x) for x in v)


# key -> (default, validator, description)
SCHEMA = {
    "initial": ("mollified-peakon", lambda v: v in SELECTORS, "initial-data selector"),
    "c": (1.0, _pos, "peakon speed"),
    "mollifier-n": (32, _pos_int, "mollifier index"),
    "center": (None, _opt(lambda v: _num(v) and math.isfinite(v)), "crest / bump centre (default L/2)"),
    "amplitude": (1.0, _nonneg, "potential amplitude for m (gaussian/peaked data)"),
    "amplitude-v": (None, _opt(_nonneg), "potential amplitude for n (default: amplitude)"),
    "width": (1.0, _pos, "potential width (gaussian/peaked data)"),
    "initial-file": (None, _opt(lambda v: isinstance(v, str)), "snapshot file for from-file"),
    "length": (40.0, _pos, "domain length"),
    "points": (2048, _pos_int, "grid points (power of two >= 16)"),
    "t-final": (5.0, _nonneg, "final time"),
    "dt": (1e-3, _opt(_pos), "fixed time step"),
    "cfl": (None, _opt(lambda v: _num(v) and 0 < v <= 1), "adaptive step safety factor"),
    "dealias": (None, _opt(lambda v: isinstance(v, bool)), "padded products (default: N >= 256)"),
    "record-every": (100, _pos_int, "record stride in steps"),
    "snapshots": (True, lambda v: isinstance(v, bool), "write one snapshot file per record"),
    "seed": (0, lambda v: _is_int(v) and v >= 0, "seed for randomised sweeps"),
    "tolerance": (0.1, _pos, "peakon-validate final sup-error bound"),
    "levels": (1, _pos_int, "dyadic refinement levels"),
    "min-ratio": (1.5, _pos, "required error ratio between refinement levels"),
    "sweep-t-count": (3, _pos_int, "test functions along t"),
    "sweep-x-count": (3, _pos_int, "test functions along x"),
    "sweep-st": (0.25, _pos, "test-function half-width in t"),
    "sweep-sx": (1.0, _pos, "test-function half-width in x"),
    "sweep-x-min": (None, _opt(lambda v: _num(v) and math.isfinite(v)), "left end of x centres"),
    "sweep-x-max": (None, _opt(lambda v: _num(v) and math.isfinite(v)), "right end of x centres"),
    "sweep-jitter": (0.0, _nonneg, "random jitter of x centres, in units of sweep-sx"),
    "interior": (True, lambda v: isinstance(v, bool), "require interior test-function supports"),
    "residual-bound": (1e-3, _pos, "weak-check bound on max |residual|"),
    "ks": ([4, 8, 16, 32], _int_list, "mollifier indices for mollify-study"),
    "deltas": ([1e-2, 5e-3, 2.5e-3], _float_list, "perturbation sizes for depend"),
    "perturbation-width": (1.0, _pos, "width of the gaussian perturbation potential"),
    "perturbation-center": (None, _opt(lambda v: _num(v) and math.isfinite(v)), "its centre"),
    "ratio-min": (1.8, _pos, "depend lower ratio bound"),
    "ratio-max": (2.2, _pos, "depend upper ratio bound"),
    "exponent-spread": (0.2, _pos, "depend allowed relative spread of fitted exponents"),
    "workers": (1, _pos_int, "parallel runs in lab sweeps"),
}

COMMAND_DEFAULTS = {
    "simulate": {},
    "peakon-validate": {"t-final": 1.0, "points": 1024, "mollifier-n": 8,
                        "dt": 2e-3, "record-every": 50, "levels": 3},
    "weak-check": {"initial": "gaussian-potentials", "length": 20.0, "points": 256,
                   "t-final": 1.0, "dt": 1e-2, "record-every": 1, "snapshots": False,
                   "levels": 3},
    "mollify-study": {"initial": "peaked-potentials", "length": 20.0, "points": 2048,
                      "t-final": 1.0, "dt": 2e-3, "record-every": 50, "snapshots": False},
    "depend": {"initial": "gaussian-potentials", "length": 20.0, "points": 256,
               "t-final": 1.0, "dt": 1e-2, "record-every": 10, "snapshots": False},
}


@dataclass
class RunConfig:
    """Fully resolved configuration; ``values`` holds every key."""

    command: str
    values: dict
    explicit: frozenset

    def __getitem__(self, key):
        return self.values[key]

    def solver(self, points=None, dt=None):
        v = self.values
        return SolverConfig(
            T=float(v["t-final"]), L=float(v["length"]),
            N=int(points or v["points"]),
            dt=None if v["dt"] is None or v["cfl"] is not None else float(dt or v["dt"]),
            cfl=v["cfl"], dealias=v["dealias"], record_every=int(v["record-every"]),
        )

    def dump(self):
        return yaml.safe_dump(dict(sorted(self.values.items())), sort_keys=True,
                              default_flow_style=None)


def parse_override(text):
    if "=" not in text:
        raise ConfigError(f"override {text!r} is not KEY=VALUE")
    key, raw = text.split("=", 1)
    try:
        value = yaml.load(raw, Loader=_Loader) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"override {key!r}: cannot parse {raw!r}") from exc
    return key.strip(), value


def load_document(path):
    try:
        with open(path) as fh:
            doc = yaml.load(fh, Loader=_Loader)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config {path}: {exc}".replace("\n", " ")) from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must be a key-value mapping")
    return doc


def resolve(command, doc, overrides=()):
    if command not in COMMAND_DEFAULTS:
        raise ConfigError(f"unknown command {command!r}")
    given = dict(doc)
    for text in overrides:
        k, v = parse_override(text)
        given[k] = v
    for k in given:
        if not isinstance(k, str) or k != k.lower() or "_" in k or " " in k:
            raise ConfigError(f"key {k!r} must be lowercase with hyphens")
        if k not in SCHEMA:
            raise ConfigError(f"unknown key {k!r}")
    values = {k: d for k, (d, _, _) in SCHEMA.items()}
    values.update(COMMAND_DEFAULTS[command])
    values.update(given)
    for k, v in values.items():
        if isinstance(v, float) and v.is_integer() and _is_int(SCHEMA[k][0]):
            v = values[k] = int(v)
        if _is_int(v) and isinstance(SCHEMA[k][0], float):
            v = values[k] = float(v)
        if not SCHEMA[k][1](v):
            raise ConfigError(f"invalid value for {k!r}: {v!r} ({SCHEMA[k][2]})")
    _check_cross(command, values, frozenset(given))
    return RunConfig(command, values, frozenset(given))


def _check_cross(command, v, explicit):
    n = v["points"]
    if n < 16 or n & (n - 1):
        raise ConfigError(f"points must be a power of two >= 16, got {n}")
    if v["initial"] == "periodic-peakon":
        if "length" in explicit and abs(v["length"] - 2 * math.pi) > 1e-12:
            raise ConfigError("periodic-peakon requires length = 2*pi")
        v["length"] = 2 * math.pi
    if v["initial"] == "from-file" and not v["initial-file"]:
        raise ConfigError("from-file needs initial-file")
    if v["dt"] is None and v["cfl"] is None:
        raise ConfigError("set dt or cfl")
    if v["cfl"] is not None:
        if "dt" in explicit and v["dt"] is not None:
            raise ConfigError("set only one of dt and cfl")
        v["dt"] = None
    if v["initial"] == "mollified-peakon":
        dx = v["length"] / n
        if 2.0 / v["mollifier-n"] < MIN_SAMPLES_ACROSS * dx:
            raise ConfigError(f"mollifier-n={v['mollifier-n']} is under-resolved for dx={dx:.4g}")
    if command == "peakon-validate" and v["initial"] not in PEAKON_SELECTORS:
        raise ConfigError("peakon-validate needs a peakon initial-data selector")
    if command == "mollify-study":
        ks = v["ks"]
        if not ks or any(b <= a for a, b in zip(ks, ks[1:])):
            raise ConfigError(f"ks must be a non-empty increasing list, got {ks}")
        dx = v["length"] / n
        if 2.0 / ks[-1] < MIN_SAMPLES_ACROSS * dx:
            raise ConfigError(f"ks[-1]={ks[-1]} is under-resolved for dx={dx:.4g}")
    if command == "depend":
        d = v["deltas"]
        if not d or any(x <= 0 for x in d):
            raise ConfigError(f"deltas must be positive, got {d}")
        if any(b >= a for a, b in zip(d, d[1:])):
            raise ConfigError(f"deltas must be strictly decreasing, got {d}")
    if v["ratio-min"] > v["ratio-max"]:
        raise ConfigError("ratio-min exceeds ratio-max")
