"""Run configuration: defaults, ``key = value`` files and flag overrides."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .ftcode import FIGURE_N

MODELS = ("gate-noise", "resource-only")
MODES = ("independent", "joint", "both")


class ConfigError(ValueError):
    pass


def parse_range(text: str) -> tuple[float, float, float]:
    """``start:stop:step`` (inclusive stop) or a single value."""
    parts = str(text).split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"bad squeezing range {text!r}") from None
    if len(vals) == 1:
        return vals[0], vals[0], 1.0
    if len(vals) != 3:
        raise ConfigError(f"squeezing range must be start:stop:step, got {text!r}")
    start, stop, step = vals
    if not step > 0:
        raise ConfigError("squeezing step must be positive")
    if stop < start:
        raise ConfigError("squeezing range is empty")
    return start, stop, step


def parse_n_list(text: str) -> tuple[int, ...]:
    try:
        ns = tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad repetition list {text!r}") from None
    if not ns or any(n < 1 or n % 2 == 0 for n in ns):
        raise ConfigError("repetition numbers must be odd positive integers")
    return ns


def parse_aspect(text: str) -> float | None:
    if str(text).strip().lower() == "auto":
        return None
    try:
        R = float(text)
    except ValueError:
        raise ConfigError(f"aspect ratio must be a number or 'auto', got {text!r}") from None
    if not R > 0:
        raise ConfigError("aspect ratio must be positive")
    return R


def _positive_int(name):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise ConfigError(f"{name} must be an integer, got {text!r}") from None
        if v < 1:
            raise ConfigError(f"{name} must be at least 1")
        return v

    return parse


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise ConfigError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise ConfigError("seed must fit in 64 bits")
    return v


def _choice(name, options):
    def parse(text):
        if text not in options:
            raise ConfigError(f"{name} must be one of {', '.join(options)}; got {text!r}")
        return text

    return parse


PARSERS = {
    "squeezing_db": parse_range,
    "model": _choice("model", MODELS),
    "n": parse_n_list,
    "aspect_ratio": parse_aspect,
    "trials": _positive_int("trials"),
    "seed": _seed,
    "mode": _choice("mode", MODES),
    "output": str,
    "lattice_n": _positive_int("lattice_n"),
    "lattice_k": _positive_int("lattice_k"),
}

DEFAULTS = {
    "squeezing_db": "2:20:0.1",
    "model": "gate-noise",
    "n": ",".join(str(n) for n in FIGURE_N),
    "aspect_ratio": "auto",
    "trials": "100000",
    "seed": "0",
    "mode": "independent",
    "output": "-",
    "lattice_n": "10",
    "lattice_k": "24",
}


@dataclass
class RunConfig:
    subcommand: str
    raw: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)

    def __getattr__(self, key):
        raw = self.__dict__.get("raw", {})
        if key in PARSERS:
            return PARSERS[key](raw[key])
        raise AttributeError(key)

    def provenance(self) -> str:
        return " ".join(f"{k}={self.raw[k]}[{self.sources[k]}]" for k in sorted(self.raw))


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{lineno}: empty value for {key!r}")
        try:
            PARSERS[key](value)
        except ConfigError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
        out[key] = value
    return out


def load_config(path: str | Path | None, flags: dict | None = None, subcommand: str = "") -> RunConfig:
    """Merge defaults, then the file, then command-line flags (flags win)."""
    raw = dict(DEFAULTS)
    sources = {k: "default" for k in raw}
    if path is not None:
        for k, v in read_config_file(path).items():
            raw[k], sources[k] = v, "config"
    for k, v in (flags or {}).items():
        if v is None:
            continue
        if k not in PARSERS:
            raise ConfigError(f"unknown option {k!r}")
        PARSERS[k](str(v))
        raw[k], sources[k] = str(v), "flag"
    return RunConfig(subcommand, raw, sources)
