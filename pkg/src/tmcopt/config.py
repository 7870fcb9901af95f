"""Key-value configuration files for the two scenarios.

Format: one ``key = value`` pair per line, ``#`` starts a comment.
Unknown keys are rejected (with the line number); omitted keys fall back
to the benchmark defaults listed below.
"""

from dataclasses import dataclass, field

from .errors import ConfigError

__all__ = ["RunConfig", "parse_config", "CSHAPE_DEFAULTS", "TOP_DEFAULTS"]

CSHAPE_DEFAULTS = {
    "Lx": 100.0,  # solid extent (mm); the mesh adds thk/2 of void at the right
    "Ly": 50.0,
    "thk": 10.0,
    "E0": 100.0,
    "nu": 0.3,
    "kv": 1e-6,
    "alpha": 1e-6,
    "nelx": 62,
    "nely": 30,
    "lambdaMax": 3.0,  # end load (N per unit thickness) over the loaded strip
    "nIncr": 200,
    "tolRelRes": 1e-6,
    "maxIter": 50,
}

TOP_DEFAULTS = {
    "Lx": 100.0,
    "Ly": 100.0,
    "thk": 10.0,
    "E0": 100.0,
    "nu": 0.3,
    "kv": 1e-6,
    "alpha": 1e-6,
    "nelx": 160,
    "nely": 160,
    # end load (N per unit out-of-plane thickness), applied downward; the
    # published 40 N figure assumes a 10 mm thickness, and only the
    # per-unit-thickness value is kinematically consistent with the
    # benchmark's reported compliances (closing the 10 mm support gap
    # forces ~10 mm of load-point travel)
    "load": 4.0,
    "volfrac": 0.25,
    "rmin": 100.0 / 24.0,
    "etaB": 0.5,
    "etaD": 0.45,
    "beta": 15.0,  # projection sharpness cap of the continuation
    "qRAMP": 4.0,
    "nIncr": 20,
    "tolRelRes": 1e-6,
    "maxIter": 50,
    "outerIters": 300,
    "move": 0.2,
    "betaIt0": 60,
    "betaEvery": 30,
    "changeTol": 1e-3,
}

_INT_KEYS = {"nelx", "nely", "nIncr", "maxIter", "outerIters", "betaIt0", "betaEvery"}


def _validate(params, scenario):
    def need(cond, msg):
        if not cond:
            raise ConfigError(msg)

    p = params
    need(p["Lx"] > 0 and p["Ly"] > 0, "domain extents must be positive")
    need(p["thk"] > 0, "thk must be positive")
    need(p["E0"] > 0, "E0 must be positive")
    if p["nu"] >= 0.5:
        raise ConfigError(f"nu = {p['nu']} is incompressible (or beyond); need nu < 0.5")
    need(p["nu"] > -1.0, "nu must exceed -1")
    need(0.0 < p["kv"] < 1.0, "kv must be in (0, 1)")
    need(p["alpha"] > 0, "alpha must be positive")
    need(p["nelx"] >= 1 and p["nely"] >= 1, "element counts must be >= 1")
    need(p["nIncr"] >= 1, "nIncr must be >= 1")
    need(p["tolRelRes"] > 0, "tolRelRes must be positive")
    need(p["maxIter"] >= 1, "maxIter must be >= 1")
    if scenario == "cshape":
        need(p["lambdaMax"] > 0, "lambdaMax must be positive")
        need(p["thk"] < min(p["Lx"], p["Ly"]) / 2,
             "thk too large for a C-shaped cavity")
    else:
        need(p["load"] > 0, "load must be positive")
        need(0.0 < p["volfrac"] < 1.0, "volfrac must be in (0, 1)")
        need(p["rmin"] > 0, "rmin must be positive")
        need(0.0 < p["etaD"] <= p["etaB"] < 1.0,
             "need 0 < etaD <= etaB < 1 (dilated threshold below blueprint)")
        need(p["beta"] >= 1.0, "beta cap must be >= 1")
        need(p["qRAMP"] >= 0.0, "qRAMP must be >= 0")
        need(p["outerIters"] >= 1, "outerIters must be >= 1")
        need(0.0 < p["move"] <= 1.0, "move must be in (0, 1]")
        need(p["betaIt0"] >= 1 and p["betaEvery"] >= 1,
             "beta schedule counters must be >= 1")
        need(p["changeTol"] > 0, "changeTol must be positive")
    return params


def parse_config(path, scenario):
    """Read a config file; returns the full parameter dict with defaults.

    ``path`` may be None (all defaults).  ``scenario`` is "cshape" or
    "top" and selects the key schema.
    """
    if scenario not in ("cshape", "top"):
        raise ConfigError(f"unknown scenario {scenario!r}")
    defaults = CSHAPE_DEFAULTS if scenario == "cshape" else TOP_DEFAULTS
    params = dict(defaults)
    if path is None:
        return _validate(params, scenario)

    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in defaults:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r} for {scenario}")
        if key in seen:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        try:
            params[key] = int(value) if key in _INT_KEYS else float(value)
        except ValueError as exc:
            raise ConfigError(
                f"{path}:{lineno}: cannot parse value {value!r} for {key!r}"
            ) from exc
    try:
        return _validate(params, scenario)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass
class RunConfig:
    """CLI-level run description."""

    scenario: str
    params: dict
    out_dir: str
    snapshots: list = field(default_factory=list)
    variant: str = None
    workers: int = 1
