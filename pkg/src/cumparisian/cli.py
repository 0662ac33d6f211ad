"""Command-line front end: probability tables, simulations and validation suites.

Examples
--------
    cumparisian compute --model cl --c 2 --lambda 1 --alpha 1 --x 1 --t 1 \\
        --ruin cumulative --sweep r:0.1:1.0:10
    cumparisian simulate --model bm --x 0.5 --t 1 --ruin cumulative --r 0.1 --paths 100000
    cumparisian validate --suite identities

Options can also come from a ``key=value`` file passed with ``--config``;
command-line flags take precedence. Exit codes: 0 ok, 1 validation failure,
2 bad configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from . import mc_engine
from .brownian_ruin import cum_parisian_prob_bm, occ_distribution_bm, ruin_prob_bm
from .cl_ruin import classical_ruin_prob_cl, cum_parisian_prob_cl, exp_parisian_prob_cl
from .levy_models import BrownianParams, CramerLundbergParams
from .occupation import NormalizationError
from .special_fn import QuadratureError
from .validation import DEFAULT_SEED, run_suite

SCHEMA_VERSION = "1"
CSV_COLUMNS = ("sweep_var", "value", "probability", "std_error", "method", "seed")
EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3

RUIN_KINDS = ("classical", "cumulative", "exponential", "parisian")
SWEEP_VARS = ("t", "r", "x", "q", "c", "lambda", "alpha", "sigma")
# config-file / flag name -> RunConfig field
_ALIASES = {"lambda": "lam", "paths": "n_paths", "format": "fmt"}


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration (exit code 2)."""


@dataclass(frozen=True)
class Sweep:
    var: str
    start: float
    stop: float
    steps: int

    @classmethod
    def parse(cls, text: str) -> "Sweep":
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"sweep must look like var:start:stop:steps, got {text!r}")
        var = parts[0]
        if var not in SWEEP_VARS:
            raise ConfigError(f"cannot sweep {var!r}; choose from {', '.join(SWEEP_VARS)}")
        try:
            start, stop, steps = float(parts[1]), float(parts[2]), int(parts[3])
        except ValueError as exc:
            raise ConfigError(f"bad sweep bounds in {text!r}") from exc
        if steps < 1:
            raise ConfigError("sweep needs at least one step")
        return cls(var, start, stop, steps)

    def values(self) -> list:
        # trim linspace round-off so sweep values print cleanly
        return [float(f"{v:.12g}") for v in np.linspace(self.start, self.stop, self.steps)]


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one table or simulation."""

    model: str = "cl"
    c: float = 2.0
    lam: float = 1.0
    alpha: float = 1.0
    sigma: float = 1.0
    x: float = 0.0
    t: float = 1.0
    ruin: str = "classical"
    r: float | None = None
    q: float | None = None
    method: str = "formula"
    n_paths: int = 100_000
    seed: int = DEFAULT_SEED
    dt: float = 1e-3
    sweep: str | None = None
    fmt: str = "csv"
    out: str | None = None

    def validate(self) -> "RunConfig":
        if self.model not in ("cl", "bm"):
            raise ConfigError(f"unknown model {self.model!r}")
        if self.ruin not in RUIN_KINDS:
            raise ConfigError(f"unknown ruin kind {self.ruin!r}")
        if self.method not in ("formula", "simulate", "both"):
            raise ConfigError(f"unknown method {self.method!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.method in ("formula", "both") and self.ruin == "parisian":
            raise ConfigError("deterministic Parisian ruin has no closed form; use --method simulate")
        if self.n_paths < 1:
            raise ConfigError("--paths must be at least 1")
        sweep = Sweep.parse(self.sweep) if self.sweep else None
        points = [self] if sweep is None else [self.at(sweep.var, v) for v in sweep.values()]
        for cfg in points:
            cfg._check_point()
        return self

    def _check_point(self) -> None:
        for name in ("c", "lam", "alpha", "sigma", "t", "dt"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value!r}")
        if not (math.isfinite(self.x) and self.x >= 0):
            raise ConfigError(f"x must be nonnegative, got {self.x!r}")
        if self.ruin in ("cumulative", "parisian") and not (self.r is not None and self.r > 0):
            raise ConfigError(f"--r > 0 is required for {self.ruin} ruin")
        if self.ruin == "exponential" and not (self.q is not None and self.q > 0):
            raise ConfigError("--q > 0 is required for exponential Parisian ruin")
        if (self.model == "bm" and self.ruin == "exponential" and self.x > 0
                and self.method != "simulate"):
            raise ConfigError("Brownian exponential Parisian formula is only available from x = 0")

    def at(self, var: str, value: float) -> "RunConfig":
        return replace(self, **{_ALIASES.get(var, var): value})

    def params(self):
        if self.model == "cl":
            return CramerLundbergParams(c=self.c, lam=self.lam, alpha=self.alpha)
        return BrownianParams(c=self.c, sigma=self.sigma)


# ------------------------------------------------------------------ config plumbing

def read_config_file(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            out[_ALIASES.get(key, key)] = value
    return out


_CASTS = {f.name: f.type for f in fields(RunConfig)}


def _cast(name: str, value):
    if value is None:
        return None
    kind = _CASTS[name]
    try:
        if "int" in kind:
            return int(float(value))
        if "float" in kind:
            return float(value)
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {value!r}") from exc
    return str(value)


def build_config(args: argparse.Namespace, **overrides) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        try:
            values.update(read_config_file(args.config))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    values.update(overrides)
    unknown = set(values) - set(_CASTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return RunConfig(**{k: _cast(k, v) for k, v in values.items()}).validate()


# ------------------------------------------------------------------ commands

def formula_probability(cfg: RunConfig) -> float:
    """Closed-form / quadrature probability for one configuration point."""
    m, x, t = cfg.params(), cfg.x, cfg.t
    if cfg.model == "cl":
        if cfg.ruin == "classical":
            return classical_ruin_prob_cl(m, x, t)
        if cfg.ruin == "cumulative":
            return cum_parisian_prob_cl(m, x, cfg.r, t)
        return exp_parisian_prob_cl(m, x, cfg.q, t)
    if cfg.ruin == "classical":
        return ruin_prob_bm(m, x, t)
    if cfg.ruin == "cumulative":
        return cum_parisian_prob_bm(m, x, cfg.r, t)
    q = cfg.q
    return occ_distribution_bm(m, t).expect(lambda s: -np.expm1(-q * s))


def _estimate(res: mc_engine.SimulationResult, cfg: RunConfig) -> mc_engine.Estimate:
    if cfg.ruin == "classical":
        return res.tau0()
    if cfg.ruin == "cumulative":
        if cfg.r >= cfg.t:
            return mc_engine.Estimate(0.0, 0.0, res.n_paths, res.seed, "sigma_r")
        return res.sigma_r(cfg.r)
    if cfg.ruin == "parisian":
        return res.tau_r(cfg.r)
    return res.kappa_q()


def _points(cfg: RunConfig):
    if not cfg.sweep:
        return "", [("", cfg)]
    sweep = Sweep.parse(cfg.sweep)
    return sweep.var, [(v, cfg.at(sweep.var, v)) for v in sweep.values()]


def _row(var, value, probability, std_error, method, seed, n_paths=None) -> dict:
    row = {"sweep_var": var, "value": value, "probability": probability,
           "std_error": std_error, "method": method, "seed": seed}
    if n_paths is not None:
        row["n_paths"] = n_paths
    return row


def cmd_compute(cfg: RunConfig) -> list:
    """Formula rows along the sweep (or a single row)."""
    var, pts = _points(cfg)
    return [_row(var, v, float(formula_probability(p)), None, "formula", None) for v, p in pts]


def cmd_simulate(cfg: RunConfig) -> list:
    """Monte Carlo rows; every sweep point reuses the same seed (common random numbers)."""
    var, pts = _points(cfg)
    rows = []
    cache = {}
    for v, p in pts:
        # sweeping r reuses one batch of paths
        key = (p.model, p.c, p.lam, p.alpha, p.sigma, p.x, p.t, p.q, p.dt)
        if key not in cache:
            cache = {key: mc_engine.simulate(p.params(), p.x, p.t, p.n_paths, p.seed,
                                             q=p.q or 0.0, dt=p.dt)}
        est = _estimate(cache[key], p)
        rows.append(_row(var, v, est.estimate, est.std_error, "simulate", est.seed, est.n_paths))
    return rows


def render(rows: list, cfg: RunConfig, command: str) -> str:
    if cfg.fmt == "json":
        # the output path is left out so the bytes depend only on the run itself
        config = {k: v for k, v in asdict(cfg).items() if k != "out"}
        doc = {"schema_version": SCHEMA_VERSION, "command": command,
               "config": config, "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(["" if row[k] is None else (repr(row[k]) if isinstance(row[k], float) else row[k])
                         for k in CSV_COLUMNS])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(suite: str, n_paths: int, seed: int = DEFAULT_SEED):
    return run_suite(suite, n_paths=n_paths, seed=seed)


# ------------------------------------------------------------------ argument parsing

def _run_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so that config-file values survive unless a flag is given
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--model", choices=("cl", "bm"))
    p.add_argument("--c", type=float, help="premium rate / drift")
    p.add_argument("--lambda", dest="lam", type=float, help="claim intensity (cl)")
    p.add_argument("--alpha", type=float, help="exponential claim rate (cl)")
    p.add_argument("--sigma", type=float, help="volatility (bm)")
    p.add_argument("--x", type=float, help="initial capital")
    p.add_argument("--t", type=float, help="horizon")
    p.add_argument("--ruin", choices=RUIN_KINDS)
    p.add_argument("--r", type=float, help="allowance / delay for cumulative or Parisian ruin")
    p.add_argument("--q", type=float, help="rate of the exponential Parisian clocks")
    p.add_argument("--method", choices=("formula", "simulate", "both"))
    p.add_argument("--paths", dest="n_paths", type=int, help="Monte Carlo path count")
    p.add_argument("--seed", type=int)
    p.add_argument("--dt", type=float, help="Euler step for Brownian simulation")
    p.add_argument("--sweep", help="var:start:stop:steps")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cumparisian", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command")
    _run_flags(sub.add_parser("compute", help="probability table from the formulas"))
    _run_flags(sub.add_parser("simulate", help="Monte Carlo estimates with standard errors"))
    v = sub.add_parser("validate", help="run validation suites")
    v.add_argument("--suite", choices=("identities", "transform", "oracle", "all"), default="all")
    v.add_argument("--paths", dest="n_paths", type=int, default=10**6,
                   help="path budget for the Monte Carlo oracles")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
    v.add_argument("--out", help="also write the JSON report here")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # bare flags default to the compute command, which honours --method
    if not argv or argv[0].startswith("-") and argv[0] not in ("-h", "--help"):
        argv = ["compute"] + argv
    args = parser.parse_args(argv)
    try:
        if args.command == "validate":
            if args.n_paths < 1:
                raise ConfigError("--paths must be at least 1")
            report = cmd_validate(args.suite, args.n_paths, args.seed)
            doc = {"schema_version": SCHEMA_VERSION, **report.to_dict()}
            if args.fmt == "json":
                sys.stdout.write(json.dumps(doc, indent=2) + "\n")
            else:
                print(report.text())
            if args.out:
                _emit(json.dumps(doc, indent=2) + "\n", args.out)
            return EXIT_OK if report.passed else EXIT_VALIDATION
        forced = {"method": "simulate"} if args.command == "simulate" else {}
        cfg = build_config(args, **forced)
        rows = []
        if cfg.method in ("formula", "both"):
            rows += cmd_compute(cfg)
        if cfg.method in ("simulate", "both"):
            rows += cmd_simulate(cfg)
        _emit(render(rows, cfg, args.command), cfg.out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, NormalizationError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
