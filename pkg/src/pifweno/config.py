"""Flat key = value run configuration files (UTF-8, '#' comments).

Recognized keys:

    problem         benchmark name from the problem registry (required)
    mesh            cells, e.g. "400" or "80x80" (default: problem's)
    cfl             CFL number in (0, 0.5] (default: problem's)
    limiter         on | off (default on)
    gamma           ratio of specific heats (default 1.4)
    weno_power      smoothness-weight power (default 2)
    weno_eps        smoothness regularization (default 1e-6)
    t_final         final time override
    snapshot_times  comma list of times to snapshot (final time always kept)
    output_dir      artifact directory (default "out")
    meshes          convergence study mesh list, e.g. "80x80,160x160,320x320"
"""

from __future__ import annotations

from dataclasses import dataclass


class ConfigError(ValueError):
    """Bad configuration file or overrides."""


_KNOWN_KEYS = {
    "problem",
    "mesh",
    "cfl",
    "limiter",
    "gamma",
    "weno_power",
    "weno_eps",
    "t_final",
    "snapshot_times",
    "output_dir",
    "meshes",
}


@dataclass
class RunConfig:
    problem: str
    mesh: tuple | None = None
    cfl: float | None = None
    limiter: bool = True
    gamma: float = 1.4
    weno_power: float = 2.0
    weno_eps: float = 1e-6
    t_final: float | None = None
    snapshot_times: tuple = ()
    output_dir: str = "out"
    meshes: tuple = ()


def parse_mesh(text):
    try:
        parts = tuple(int(tok) for tok in text.lower().split("x"))
    except ValueError:
        raise ConfigError(f"bad mesh spec {text!r}") from None
    if not parts or any(p <= 0 for p in parts) or len(parts) > 2:
        raise ConfigError(f"bad mesh spec {text!r}")
    return parts


def load_config(path):
    raw = {}
    try:
        lines = open(path, encoding="utf-8").read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = body.partition("=")
        key = key.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        raw[key] = value.strip()
    if "problem" not in raw:
        raise ConfigError(f"{path}: missing required key 'problem'")

    cfg = RunConfig(problem=raw["problem"])
    if "mesh" in raw:
        cfg.mesh = parse_mesh(raw["mesh"])
    if "cfl" in raw:
        cfg.cfl = _positive_float(raw["cfl"], "cfl")
        if cfg.cfl > 0.5:
            raise ConfigError("cfl must be <= 0.5 (low-order positivity bound)")
    if "limiter" in raw:
        val = raw["limiter"].lower()
        if val not in ("on", "off"):
            raise ConfigError("limiter must be 'on' or 'off'")
        cfg.limiter = val == "on"
    if "gamma" in raw:
        cfg.gamma = _positive_float(raw["gamma"], "gamma")
        if cfg.gamma <= 1.0:
            raise ConfigError("gamma must exceed 1")
    if "weno_power" in raw:
        cfg.weno_power = _positive_float(raw["weno_power"], "weno_power")
    if "weno_eps" in raw:
        cfg.weno_eps = _positive_float(raw["weno_eps"], "weno_eps")
    if "t_final" in raw:
        cfg.t_final = _nonnegative_float(raw["t_final"], "t_final")
    if "snapshot_times" in raw and raw["snapshot_times"]:
        try:
            cfg.snapshot_times = tuple(
                float(tok) for tok in raw["snapshot_times"].split(",") if tok.strip()
            )
        except ValueError:
            raise ConfigError("bad snapshot_times list") from None
    if "output_dir" in raw:
        cfg.output_dir = raw["output_dir"]
    if "meshes" in raw and raw["meshes"]:
        cfg.meshes = tuple(parse_mesh(tok) for tok in raw["meshes"].split(",") if tok.strip())
    return cfg


def _positive_float(text, name):
    try:
        val = float(text)
    except ValueError:
        raise ConfigError(f"bad {name} value {text!r}") from None
    if val <= 0.0:
        raise ConfigError(f"{name} must be positive")
    return val


def _nonnegative_float(text, name):
    try:
        val = float(text)
    except ValueError:
        raise ConfigError(f"bad {name} value {text!r}") from None
    if val < 0.0:
        raise ConfigError(f"{name} must be nonnegative")
    return val
