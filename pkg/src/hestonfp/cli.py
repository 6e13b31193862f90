"""Command-line front end.

Subcommands
-----------
exact           survival by exact inversion over a (z, v, tau) grid
averaged        stationary-averaged survival over a (z, tau) grid
approx          one closed-form approximation over a grid
simulate        Monte Carlo survival curve (optionally stationary starts)
crossing-level  root of the Gaussian-vs-heavy-tail hitting balance
ratio           risk ratio against the constant-volatility baseline
sweep           side-by-side comparison table of all survival routes
figure          canned datasets behind the standard plots (fig1..fig10)

Parameters come either as physical rates (--alpha --m2 --k, units 1/day) or
directly as dimensionless (--theta --beta) -- never both.  Grid-valued flags
accept a scalar or ``start:stop:count`` (log-spaced).  Output is CSV (17
significant digits, LF line endings) or JSON; exit codes: 0 ok, 2 parameter
or usage error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass
from itertools import product

import numpy as np

from . import __version__
from .core import Dimensionless, ModelParams, State, variance_scale
from .errors import (ConfigError, DivisionDomain, HestonFPError, NoRoot,
                     NonConvergence, ParameterError)
from .quadrature import QuadConfig, survival_averaged, survival_exact, survival_wiener
from . import asymptotics as asy
from .montecarlo import McConfig, estimate_survival, estimate_survival_averaged

__all__ = ["RunSpec", "load_config", "run", "main"]

DEFAULT_PARAMS = ModelParams(alpha=0.045, m_sq=8.62e-5, k=0.0045)

_COMMANDS = ("exact", "averaged", "approx", "simulate", "crossing-level",
             "ratio", "sweep", "figure")

_METHOD_ALIASES = {
    "erf": "erf_joint",
    "erf_joint": "erf_joint",
    "arctan": "arctan_joint",
    "arctan_joint": "arctan_joint",
    "pheno": "pheno",
    "pheno_beta": "pheno_beta",
    "erf_avg": "erf_averaged",
    "erf_averaged": "erf_averaged",
    "arctan_avg": "arctan_averaged",
    "arctan_averaged": "arctan_averaged",
    "tail_gaussian": "tail_gaussian",
    "tail_powerlaw": "tail_powerlaw",
    "wiener": "wiener",
}

_CONFIG_KEYS = ("alpha", "m2", "k", "theta", "beta", "z", "v", "tau",
                "method", "paths", "dt", "seed", "output", "format",
                "theta_tau", "stationary")


@dataclass(frozen=True)
class RunSpec:
    """Fully resolved description of one CLI run."""

    command: str
    params: ModelParams | Dimensionless
    z: tuple[float, ...] = ()
    v: tuple[float, ...] = ()
    tau: tuple[float, ...] = ()
    method: str | None = None
    output_format: str = "csv"
    output_path: str | None = None
    seed: int = 0
    paths: int = 10**6
    dt: float = 1e-3
    abs_tol: float = 1e-9
    rel_tol: float = 1e-7
    theta_tau: tuple[float, ...] = ()
    beta_grid: tuple[float, ...] = ()
    stationary: bool = False
    figure: str | None = None

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"--format: must be csv or json, got {self.output_format!r}")
        for name, grid in (("--z", self.z), ("--v", self.v), ("--tau", self.tau)):
            for value in grid:
                if not math.isfinite(value):
                    raise ParameterError(f"{name}: grid values must be finite")

    @property
    def dimensionless(self) -> Dimensionless:
        if isinstance(self.params, Dimensionless):
            return self.params
        return self.params.dimensionless()

    def quad_config(self) -> QuadConfig:
        return QuadConfig(abs_tol=self.abs_tol, rel_tol=self.rel_tol)


def _parse_grid(flag: str, text: str, allow_nonpositive: bool = False) -> tuple[float, ...]:
    """A scalar, or ``start:stop:count`` expanded log-spaced."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ParameterError(f"{flag}: expected start:stop:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ParameterError(f"{flag}: {exc}") from None
        if count < 1:
            raise ParameterError(f"{flag}: count must be >= 1")
        if start <= 0.0 or stop <= 0.0:
            raise ParameterError(f"{flag}: log grid endpoints must be > 0")
        return tuple(np.logspace(math.log10(start), math.log10(stop), count))
    try:
        value = float(text)
    except ValueError:
        raise ParameterError(f"{flag}: not a number or grid: {text!r}") from None
    if not allow_nonpositive and value < 0.0:
        raise ParameterError(f"{flag}: must be >= 0, got {value!r}")
    return (value,)


def _parse_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path!r}: {exc}") from None
    out: dict[str, str] = {}
    for i, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"--config {path}:{i}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"--config {path}:{i}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"--config {path}:{i}: duplicate key {key!r}")
        out[key] = value
    return out


def _resolve_params(get) -> ModelParams | Dimensionless:
    """Apply the exactly-one-group rule for parameter intake.

    ``get(name)`` returns the merged flag/config value (string or float) or
    None.  Missing members of the chosen group fall back to the standard
    defaults; supplying members of both groups is rejected.
    """
    physical = {n: get(n) for n in ("alpha", "m2", "k")}
    direct = {n: get(n) for n in ("theta", "beta")}
    have_physical = any(v is not None for v in physical.values())
    have_direct = any(v is not None for v in direct.values())
    if have_physical and have_direct:
        both = [n for n, v in {**physical, **direct}.items() if v is not None]
        raise ParameterError(
            "supply either --alpha/--m2/--k or --theta/--beta, not both "
            f"(got {', '.join('--' + b for b in both)})")
    if have_direct:
        default_d = DEFAULT_PARAMS.dimensionless()
        return Dimensionless(
            theta=float(direct["theta"]) if direct["theta"] is not None else default_d.theta,
            beta=float(direct["beta"]) if direct["beta"] is not None else default_d.beta)
    return ModelParams(
        alpha=float(physical["alpha"]) if physical["alpha"] is not None else DEFAULT_PARAMS.alpha,
        m_sq=float(physical["m2"]) if physical["m2"] is not None else DEFAULT_PARAMS.m_sq,
        k=float(physical["k"]) if physical["k"] is not None else DEFAULT_PARAMS.k)


def load_config(path: str, command: str = "exact") -> RunSpec:
    """Build a RunSpec for ``command`` from a flat key=value file.

    The same keys the flags accept; an empty file yields pure defaults.
    Flag merging (flags win) happens in :func:`main`, which passes flag
    values as overrides through the shared resolution path.
    """
    return _build_spec(command, _parse_config_file(path), {})


def _build_spec(command: str, config: dict[str, str], flags: dict) -> RunSpec:
    def get(name):
        value = flags.get(name)
        if value is not None:
            return value
        return config.get(name)

    params = _resolve_params(get)

    def grid(name, flag, default=()):
        raw = get(name)
        if raw is None:
            return tuple(default)
        if isinstance(raw, tuple):
            return raw
        return _parse_grid(flag, str(raw))

    spec = RunSpec(
        command=command,
        params=params,
        z=grid("z", "--z"),
        v=grid("v", "--v"),
        tau=grid("tau", "--tau"),
        method=_resolve_method(get("method")),
        output_format=str(get("format") or "csv"),
        output_path=get("output"),
        seed=int(get("seed") or 0),
        paths=int(get("paths") or 10**6),
        dt=float(get("dt") or 1e-3),
        theta_tau=grid("theta_tau", "--theta-tau"),
        beta_grid=grid("beta_scan", "--beta"),
        stationary=_as_bool(get("stationary")),
        figure=get("figure"),
    )
    return spec


def _as_bool(value) -> bool:
    if value is None:
        return False
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise ConfigError(f"stationary: expected a boolean, got {value!r}")


def _resolve_method(raw) -> str | None:
    if raw is None:
        return None
    name = str(raw).strip().lower().replace("-", "_")
    if name not in _METHOD_ALIASES:
        raise ParameterError(
            f"--method: unknown method {raw!r} (choose from "
            f"{', '.join(sorted(set(_METHOD_ALIASES)))})")
    return _METHOD_ALIASES[name]


# ---------------------------------------------------------------------------
# output formatting


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def emit_csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def _meta(spec: RunSpec) -> dict:
    meta = asdict(spec)
    if isinstance(spec.params, ModelParams):
        d = spec.params.dimensionless()
        meta["params"] = {"alpha": spec.params.alpha, "m2": spec.params.m_sq,
                          "k": spec.params.k}
    else:
        d = spec.params
        meta["params"] = {"theta": spec.params.theta, "beta": spec.params.beta}
    meta["theta"] = d.theta
    meta["beta"] = d.beta
    meta["version"] = __version__
    return meta


def emit_json(spec: RunSpec, columns, rows) -> str:
    payload = {
        "meta": _meta(spec),
        "rows": [dict(zip(columns, [x if isinstance(x, (int, str)) else float(x) for x in row]))
                 for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# command implementations (each returns columns, rows)


def _default(grid: tuple[float, ...], fallback: tuple[float, ...]) -> tuple[float, ...]:
    return grid if grid else fallback


def _cmd_exact(spec: RunSpec):
    d = spec.dimensionless
    cfg = spec.quad_config()
    zs = _default(spec.z, (0.01,))
    vs = _default(spec.v, (d.theta,))
    taus = _default(spec.tau, (0.5,))
    rows = []
    for z, v, tau in product(zs, vs, taus):
        r = survival_exact(State(z=z, v=v, tau=tau), d, cfg)
        rows.append((z, v, tau, r.value, r.err_estimate, r.panels_used))
    return ["z", "v", "tau", "S", "err_estimate", "panels"], rows


def _cmd_averaged(spec: RunSpec):
    d = spec.dimensionless
    cfg = spec.quad_config()
    zs = _default(spec.z, (0.01,))
    taus = _default(spec.tau, (0.5,))
    rows = []
    for z, tau in product(zs, taus):
        r = survival_averaged(z, tau, d, cfg)
        rows.append((z, tau, r.value, r.err_estimate, r.panels_used))
    return ["z", "tau", "S", "err_estimate", "panels"], rows


def _approx_value(method: str, z: float, v: float, tau: float,
                  d: Dimensionless) -> float:
    theta, beta = d.theta, d.beta
    if method == "erf_joint":
        return float(asy.survival_erf(z, v, tau, theta))
    if method == "arctan_joint":
        return float(asy.survival_arctan(z, v, tau, theta, beta))
    if method == "pheno":
        return float(asy.survival_pheno(z, v, tau, theta, beta))
    if method == "pheno_beta":
        return float(asy.survival_pheno(z, v, tau, theta, beta, use_beta_factor=True))
    if method == "erf_averaged":
        return float(asy.survival_avg_erf(z, tau, theta))
    if method == "arctan_averaged":
        return float(asy.survival_avg_arctan(z, tau, theta, beta))
    if method == "wiener":
        return survival_wiener(z, theta, tau)
    if method == "tail_gaussian":
        return 1.0 - float(asy.tail_gaussian_hitting(z, variance_scale(tau, v, theta)))
    if method == "tail_powerlaw":
        return 1.0 - float(asy.tail_powerlaw_hitting(z, tau, theta, beta))
    raise ParameterError(f"--method: unknown method {method!r}")


def _cmd_approx(spec: RunSpec):
    if spec.method is None:
        raise ParameterError("--method is required for the approx command")
    d = spec.dimensionless
    zs = _default(spec.z, (0.01,))
    vs = _default(spec.v, (d.theta,))
    taus = _default(spec.tau, (0.5,))
    rows = [(z, v, tau, _approx_value(spec.method, z, v, tau, d))
            for z, v, tau in product(zs, vs, taus)]
    return ["z", "v", "tau", "S"], rows


def _cmd_simulate(spec: RunSpec):
    d = spec.dimensionless
    taus = _default(spec.tau, (0.5,))
    zs = _default(spec.z, (0.01,))
    if len(zs) != 1:
        raise ParameterError("--z: simulate needs exactly one starting distance")
    z0 = zs[0]
    cfg = McConfig(dt=spec.dt, n_paths=spec.paths, seed=spec.seed,
                   record_grid=tuple(sorted(taus)))
    if spec.stationary:
        est = estimate_survival_averaged(d, z0, cfg)
    else:
        v0 = spec.v[0] if spec.v else d.theta
        est = estimate_survival(d, z0, v0, cfg)
    rows = [(t, s, c) for t, s, c in zip(est.grid, est.survival, est.ci_halfwidth)]
    return ["tau", "S", "ci"], rows


def _cmd_crossing_level(spec: RunSpec):
    d = spec.dimensionless
    betas = _default(spec.beta_grid, (d.beta,))
    tts = spec.theta_tau
    if not tts:
        raise ParameterError("--theta-tau is required for crossing-level")
    rows = []
    for beta, tt in product(betas, tts):
        res = asy.crossing_level(beta, tt)
        rows.append((beta, tt, res.l_c, res.residual))
    return ["beta", "theta_tau", "l_c", "residual"], rows


def _cmd_ratio(spec: RunSpec):
    d = spec.dimensionless
    cfg = spec.quad_config()
    zs = _default(spec.z, tuple(np.logspace(-3, math.log10(0.6), 48)))
    taus = _default(spec.tau, (3.0,))
    rows = []
    for tau in taus:
        for z in zs:
            rows.append((z, tau, asy.risk_ratio(z, tau, d, cfg)))
    return ["z", "tau", "ratio"], rows


def _cmd_sweep(spec: RunSpec):
    d = spec.dimensionless
    cfg = spec.quad_config()
    zs = _default(spec.z, tuple(np.logspace(-3, -1, 64)))
    vs = _default(spec.v, (d.theta,))
    taus = _default(spec.tau, (0.5,))
    rows = []
    for z, v, tau in product(zs, vs, taus):
        ex = survival_exact(State(z=z, v=v, tau=tau), d, cfg)
        av = survival_averaged(z, tau, d, cfg)
        rows.append((
            z, v, tau, ex.value, av.value,
            _approx_value("erf_joint", z, v, tau, d),
            _approx_value("arctan_joint", z, v, tau, d),
            _approx_value("pheno", z, v, tau, d),
            _approx_value("erf_averaged", z, v, tau, d),
            _approx_value("arctan_averaged", z, v, tau, d),
        ))
    return ["z", "v", "tau", "exact", "averaged", "erf_joint", "arctan_joint",
            "pheno", "erf_averaged", "arctan_averaged"], rows


def _figure_fig1(spec: RunSpec):
    d = spec.dimensionless
    cfg = spec.quad_config()
    zs = tuple(np.logspace(math.log10(2e-3), math.log10(2e-1), 16))
    mc_cfg = McConfig(dt=spec.dt, n_paths=spec.paths, seed=spec.seed, horizon=0.5)
    from .montecarlo import survival_profile
    prof = survival_profile(d, zs, mc_cfg, v0=d.theta)
    rows = []
    for z, s_mc, ci in zip(prof.z_grid, prof.survival, prof.ci_halfwidth):
        ex = survival_exact(State(z=z, v=d.theta, tau=0.5), d, cfg)
        rows.append((z, ex.value, ex.err_estimate, s_mc, ci))
    return ["z", "S_exact", "err_estimate", "S_mc", "ci"], rows


def _figure_fig2(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=1.0)
    cfg = spec.quad_config()
    taus = np.logspace(math.log10(0.1), 2, 64)
    z, v = 0.01, 1000.0 * d.theta
    rows = [(t, survival_exact(State(z=z, v=v, tau=t), d, cfg).value,
             float(asy.survival_erf(z, v, t, d.theta))) for t in taus]
    return ["tau", "exact", "erf"], rows


def _figure_fig3(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=1.0)
    cfg = spec.quad_config()
    vs = np.logspace(math.log10(1e3 * d.theta), math.log10(1e5 * d.theta), 64)
    z, tau = 0.01, 0.1
    rows = [(v, survival_exact(State(z=z, v=v, tau=tau), d, cfg).value,
             float(asy.survival_erf(z, v, tau, d.theta))) for v in vs]
    return ["v", "exact", "erf"], rows


def _figure_fig4(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=10.0)
    cfg = spec.quad_config()
    zs = np.logspace(-3, -1, 64)
    v, tau = d.theta, 0.5
    rows = [(z, survival_exact(State(z=z, v=v, tau=tau), d, cfg).value,
             float(asy.survival_arctan(z, v, tau, d.theta, d.beta)),
             float(asy.survival_erf(z, v, tau, d.theta))) for z in zs]
    return ["z", "exact", "arctan", "erf"], rows


def _figure_fig5(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=10.0)
    cfg = spec.quad_config()
    zs = np.logspace(-3, -1, 64)
    v, tau = d.theta, 0.5
    rows = [(z, survival_exact(State(z=z, v=v, tau=tau), d, cfg).value,
             float(asy.survival_pheno(z, v, tau, d.theta, d.beta)),
             float(asy.survival_pheno(z, v, tau, d.theta, d.beta, use_beta_factor=True)))
            for z in zs]
    return ["z", "exact", "pheno", "pheno_beta"], rows


def _figure_fig6(spec: RunSpec):
    theta = spec.dimensionless.theta
    cfg = spec.quad_config()
    betas = np.logspace(-2, 2, 64)
    z, tau = 0.01, 1.0
    rows = []
    for beta in betas:
        r = survival_averaged(z, tau, Dimensionless(theta=theta, beta=beta), cfg)
        rows.append((beta, 1.0 - r.value))
    return ["beta", "W_averaged"], rows


def _figure_fig7(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=10.0)
    cfg = spec.quad_config()
    zs = np.logspace(-3, -1, 64)
    tau = 0.5
    rows = [(z, survival_averaged(z, tau, d, cfg).value,
             float(asy.survival_avg_arctan(z, tau, d.theta, d.beta))) for z in zs]
    return ["z", "averaged", "arctan_averaged"], rows


def _figure_fig8(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=10.0)
    cfg = spec.quad_config()
    tau = 3.0
    zs = np.logspace(-3, 0, 64)
    rows = []
    for z in zs:
        w_avg = 1.0 - survival_averaged(z, tau, d, cfg).value
        w_wiener = 1.0 - survival_wiener(z, d.theta, tau)
        rows.append((z, w_avg, w_wiener))
    return ["z", "W_averaged", "W_wiener"], rows


def _figure_fig9(spec: RunSpec):
    theta_tau = 3.0 * spec.dimensionless.theta
    betas = np.logspace(0, 2, 32)
    rows = []
    for beta in betas:
        res = asy.crossing_level(beta, theta_tau)
        rows.append((beta, res.l_c))
    return ["beta", "l_c"], rows


def _figure_fig10(spec: RunSpec):
    d = Dimensionless(theta=spec.dimensionless.theta, beta=10.0)
    cfg = spec.quad_config()
    tau = 3.0
    theta_tau = d.theta * tau
    zs = np.logspace(-3, math.log10(0.6), 48)
    rows = [(z, asy.risk_ratio(z, tau, d, cfg),
             asy.ratio_asymptote(z, theta_tau, beta=d.beta)) for z in zs]
    return ["z", "ratio", "asymptote"], rows


_FIGURES = {
    "fig1": _figure_fig1, "fig2": _figure_fig2, "fig3": _figure_fig3,
    "fig4": _figure_fig4, "fig5": _figure_fig5, "fig6": _figure_fig6,
    "fig7": _figure_fig7, "fig8": _figure_fig8, "fig9": _figure_fig9,
    "fig10": _figure_fig10,
}


def _cmd_figure(spec: RunSpec):
    if spec.figure not in _FIGURES:
        raise ParameterError(
            f"figure: unknown figure {spec.figure!r} (fig1..fig10)")
    return _FIGURES[spec.figure](spec)


_RUNNERS = {
    "exact": _cmd_exact,
    "averaged": _cmd_averaged,
    "approx": _cmd_approx,
    "simulate": _cmd_simulate,
    "crossing-level": _cmd_crossing_level,
    "ratio": _cmd_ratio,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
}


def run(spec: RunSpec) -> str:
    """Execute a RunSpec and return the rendered table (also written to
    ``spec.output_path`` when one is set)."""
    columns, rows = _RUNNERS[spec.command](spec)
    if spec.output_format == "json":
        text = emit_json(spec, columns, rows)
    else:
        text = emit_csv(columns, rows)
    if spec.output_path:
        with open(spec.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--m2", type=float, default=None)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--beta", default=None,
                   help="dimensionless vol-of-vol; accepts start:stop:count for scans")
    p.add_argument("--z", default=None, help="scalar or start:stop:count (log)")
    p.add_argument("--v", default=None, help="scalar or start:stop:count (log)")
    p.add_argument("--tau", default=None, help="scalar or start:stop:count (log)")
    p.add_argument("--method", default=None)
    p.add_argument("--paths", type=int, default=None)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--format", default=None, choices=("csv", "json"))
    p.add_argument("--config", default=None)
    p.add_argument("--theta-tau", dest="theta_tau", default=None,
                   help="scalar or start:stop:count (log)")
    p.add_argument("--stationary", action="store_true", default=None)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hestonfp", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        if name == "figure":
            p.add_argument("figure", choices=sorted(_FIGURES, key=lambda s: int(s[3:])))
        _add_common(p)
    return parser


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _parse_config_file(args.config) if args.config else {}
        flags = {
            "alpha": args.alpha, "m2": args.m2, "k": args.k,
            "theta": args.theta, "z": args.z, "v": args.v, "tau": args.tau,
            "method": args.method, "paths": args.paths, "dt": args.dt,
            "seed": args.seed, "output": args.output, "format": args.format,
            "theta_tau": args.theta_tau, "stationary": args.stationary,
        }
        beta_raw = args.beta if args.beta is not None else config.get("beta")
        if beta_raw is not None and ":" in str(beta_raw):
            flags["beta_scan"] = _parse_grid("--beta", str(beta_raw))
            flags["beta"] = None
            config.pop("beta", None)
        else:
            flags["beta"] = beta_raw
        spec = _build_spec(args.command, config, flags)
        if args.command == "figure":
            spec = RunSpec(**{**asdict_shallow(spec), "figure": args.figure})
        text = run(spec)
        if not spec.output_path:
            sys.stdout.write(text)
        return 0
    except (ParameterError, ConfigError) as exc:
        print(f"hestonfp: error: {exc}", file=sys.stderr)
        return 2
    except (NonConvergence, NoRoot, DivisionDomain) as exc:
        print(f"hestonfp: numerical failure: {exc}", file=sys.stderr)
        return 3
    except HestonFPError as exc:
        print(f"hestonfp: error: {exc}", file=sys.stderr)
        return 2


def asdict_shallow(spec: RunSpec) -> dict:
    return {f: getattr(spec, f) for f in spec.__dataclass_fields__}


if __name__ == "__main__":
    sys.exit(main())
