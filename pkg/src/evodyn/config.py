"""Flat ``key = value`` run configuration with presets."""
from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, fields, replace

from .core import NumericControls, PhysicalParams, Scenario
from .specfun import SeriesControls
from .wave import ASYMPTOTIC_CHOICES


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    m: float = 1.0
    delta_q: float = 1.0
    hbar: float = 1.0
    k_b: float = 1.0
    T0: float = 1.0
    Te: float = 50.0
    g0: float = 0.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    t_max: float = 10.0
    output_stride: float = 0.01
    helmholtz_stride: float = 1e-4
    g_min: float | None = None
    g_max: float | None = None
    grid_density: int = 40
    term_tol: float = 1e-17
    max_terms: int = 500
    wave_choice: str = "outgoing"
    c_v: float | None = None
    cond_f: float | None = None
    cond_T: float | None = None
    contract_tol: float = 1e-5
    out: str | None = None
    svg: bool = False

    def __post_init__(self):
        for name in ("m", "delta_q", "hbar", "k_b", "T0", "Te", "t_max", "output_stride",
                     "helmholtz_stride", "contract_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be a positive number, got {v!r}")
        for name in ("c_v", "cond_f", "cond_T"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ConfigError(f"{name} must be positive, got {v!r}")
        if self.wave_choice not in ASYMPTOTIC_CHOICES:
            raise ConfigError(f"wave_choice must be one of {ASYMPTOTIC_CHOICES}")
        if self.grid_density < 8:
            raise ConfigError("grid_density must be >= 8")

    @property
    def params(self) -> PhysicalParams:
        return PhysicalParams(m=self.m, delta_q=self.delta_q, hbar=self.hbar, k_b=self.k_b)

    def numerics(self, stride=None) -> NumericControls:
        return NumericControls(rel_tol=self.rel_tol, abs_tol=self.abs_tol, t_max=self.t_max,
                               output_stride=stride or self.output_stride)

    def scenario(self, stride=None) -> Scenario:
        return Scenario(params=self.params, t0_temp=self.T0, te_temp=self.Te, g0=self.g0,
                        numerics=self.numerics(stride))

    @property
    def series(self) -> SeriesControls:
        return SeriesControls(term_tol=self.term_tol, max_terms=self.max_terms)


PRESETS = {
    "fig2": {"T0": 1.0, "Te": 10.0},
    "fig3-cooling": {"T0": 50.0, "Te": 1.0, "wave_choice": "standing"},
    "fig4-heating": {"T0": 1.0, "Te": 50.0},
}

_FIELDS = {f.name: f for f in fields(RunConfig)}
_INTS = {"grid_density", "max_terms"}
_OPTIONAL = {"g_min", "g_max", "c_v", "cond_f", "cond_T", "out"}


def _convert(key, raw: str):
    raw = raw.strip()
    if key in _OPTIONAL and raw.lower() in ("", "auto", "none"):
        return None
    if key in ("wave_choice", "out"):
        return raw
    if key == "svg":
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"svg: expected a boolean, got {raw!r}")
    try:
        return int(raw) if key in _INTS else float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as a number") from None


def parse_overrides(text: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",),
                                       inline_comment_prefixes=("#",), delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    out = {}
    for key, raw in parser.items("run"):
        if key not in _FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        out[key] = _convert(key, raw)
    return out


def build_config(text: str | None = None, preset: str | None = None, **cli) -> RunConfig:
    """Defaults, then preset, then config file text, then explicit CLI values."""
    values = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        values.update(PRESETS[preset])
    if text:
        values.update(parse_overrides(text))
    values.update({k: v for k, v in cli.items() if v is not None})
    try:
        return replace(RunConfig(), **values)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def dump_config(cfg: RunConfig) -> str:
    lines = ["# evodyn run configuration"]
    for key, value in asdict(cfg).items():
        if value is None:
            text = "auto"
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
