"""Command-line front end: figure data, thermal tables, gauge checks, self-verification.

Every subcommand writes a table (CSV with a header line, or JSON records).
Settings come from defaults, then an optional ``--config`` file of
``key=value`` lines (keys are the long flag names), then explicit flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from . import gauge, phasespace, states, thermal
from .geometry import ComplexInterval, zeta
from .massshell import build_grid, ray_filter
from .verification import VerifyConfig, run_verification

SUBCOMMANDS = ("fig-zeta", "fig-filter", "fig-kernel", "thermal-table", "potentials",
               "gauge-check", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    dim: int = 1
    mass: float = 1.0
    hbar: float = 1.0
    lam: float = 1.0
    smax: float = 8.0
    nodes: int = 512
    x_extent: float = 20.0
    x_step: float = 0.1
    out: str | None = None
    format: str = "csv"
    betas: str = "0.5,1,2,4"
    symbol: str = "E"
    metric: str = "abelian-quadratic"
    seed: int = 0


# flag name -> (RunConfig field, type)
_OPTIONS = {
    "dim": ("dim", int), "mass": ("mass", float), "hbar": ("hbar", float),
    "lambda": ("lam", float), "smax": ("smax", float), "nodes": ("nodes", int),
    "x-extent": ("x_extent", float), "x-step": ("x_step", float), "out": ("out", str),
    "format": ("format", str), "betas": ("betas", str), "symbol": ("symbol", str),
    "metric": ("metric", str), "seed": ("seed", int),
}


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="file of key=value lines using the long flag names")
    for flag, (_, typ) in _OPTIONS.items():
        kw = {"choices": ("csv", "json")} if flag == "format" else {}
        p.add_argument(f"--{flag}", type=typ, default=None, **kw)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="futuretube", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    helps = {
        "fig-zeta": "complex length zeta(t, r) for y = (1, 0)",
        "fig-filter": "ray filter S_lam(q) = exp(-lam sqrt(1 + q^2)) for lam in {1, 4}",
        "fig-kernel": "(Re K)^2 and |K|^2 over (t, x1) in d = 3 for lam m in {0.1, 20}",
        "thermal-table": "phase-space vs canonical thermal averages with potentials",
        "potentials": "U, S, F, Phi per unit volume on a beta grid",
        "gauge-check": "Wirtinger, field and integrability checks for a test metric",
        "verify": "run the self-check suite; exit 1 if any check fails",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{n}: expected key=value")
                k, v = (s.strip() for s in line.split("=", 1))
                k = k.lstrip("-")
                if k not in _OPTIONS:
                    raise UsageError(f"{path}:{n}: unknown key '{k}'")
                out[k] = v
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    return out


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if ns.config:
        for k, v in _read_config(ns.config).items():
            name, typ = _OPTIONS[k]
            try:
                values[name] = typ(v)
            except ValueError as exc:
                raise UsageError(f"bad value for {k}: {v!r}") from exc
    for flag, (name, _) in _OPTIONS.items():
        v = getattr(ns, flag.replace("-", "_"))
        if v is not None:
            values[name] = v
    cfg = RunConfig(command=ns.command, **values)
    if cfg.dim not in (1, 3):
        raise UsageError("--dim must be 1 or 3")
    for f in ("mass", "hbar", "lam", "smax", "x_extent", "x_step"):
        if not getattr(cfg, f) > 0:
            raise UsageError(f"--{f.replace('_', '-')} must be positive")
    if cfg.nodes < 16:
        raise UsageError("--nodes must be at least 16")
    if cfg.format not in ("csv", "json"):
        raise UsageError("--format must be csv or json")
    return cfg


# -- table output ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(columns: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "json":
        recs = [{c: (v.item() if isinstance(v, np.generic) else v) for c, v in zip(columns, r)}
                for r in rows]
        return json.dumps(recs, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


# -- subcommands ----------------------------------------------------------------

def fig_zeta(cfg: RunConfig):
    ts = np.round(np.linspace(-3, 3, 61), 12)
    rs = np.round(np.linspace(0, 3, 31), 12)
    rows = []
    for t in ts:
        for r in rs:
            zt = complex(zeta([t, r], [cfg.lam, 0.0]))
            rows.append((t, r, zt.real, zt.imag, abs(zt)))
    return ("t", "r", "sigma", "tau", "abs_zeta"), rows


def fig_filter(cfg: RunConfig):
    qs = np.round(np.linspace(-5, 5, 201), 12)
    rows = []
    for lam in (1.0, 4.0):
        p = np.column_stack([np.sqrt(cfg.mass**2 + qs**2), qs])
        S = ray_filter([lam, 0.0], p, cfg.hbar)
        rows.extend((lam, q, s) for q, s in zip(qs, S))
    return ("lambda", "q", "S"), rows


def fig_kernel(cfg: RunConfig):
    ts = np.round(np.linspace(-3, 3, 61), 12)
    xs = np.round(np.linspace(-3, 3, 61), 12)
    T, X = np.meshgrid(ts, xs, indexing="ij")
    wx = np.stack([T, X, np.zeros_like(T), np.zeros_like(T)], axis=-1)
    wy = np.broadcast_to(np.array([cfg.lam, 0.0, 0.0, 0.0]), wx.shape)
    rows = []
    for lam_m in (0.1, 20.0):
        m = lam_m / cfg.lam
        K = states.kernel(wx, wy, m, 3, cfg.hbar)
        K0 = states.kernel(np.zeros(4), np.array([cfg.lam, 0, 0, 0]), m, 3, cfg.hbar)
        Kn = K / K0
        for i in range(len(ts)):
            for j in range(len(xs)):
                rows.append((lam_m, ts[i], xs[j], Kn[i, j].real ** 2, abs(Kn[i, j]) ** 2))
    return ("lambda_m", "t", "x1", "re_K_sq", "abs_K_sq"), rows


def _betas(cfg: RunConfig) -> list[float]:
    try:
        b = [float(s) for s in cfg.betas.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --betas: {cfg.betas!r}") from exc
    if not b or any(x <= 0 for x in b):
        raise UsageError("--betas must be positive numbers")
    return b


def thermal_table(cfg: RunConfig):
    if cfg.dim != 1:
        raise UsageError("thermal-table supports --dim 1 only")
    if cfg.symbol not in thermal.SYMBOLS:
        raise UsageError(f"--symbol must be one of {sorted(thermal.SYMBOLS)}")
    A = thermal.SYMBOLS[cfg.symbol]
    grid = build_grid(1, cfg.mass, cfg.smax, cfg.nodes, cfg.hbar)
    gamma = phasespace.calibrate(
        phasespace.PhaseSpaceSlice(lam=cfg.lam, m=cfg.mass, hbar=cfg.hbar,
                                   x_extent=cfg.x_extent, x_step=cfg.x_step), grid).slice
    betas = _betas(cfg)
    rows = []
    for b, pot in zip(betas, thermal.potentials(betas, grid)):
        vt = thermal.ThermalVector.rest(b, 1, cfg.hbar)
        a = thermal.thermal_average(A, vt, gamma, grid)
        o = thermal.canonical_oracle(A, b, vt.u, grid)
        rel = abs(a - o) / abs(o) if o != 0 else abs(a - o)
        rows.append((b, a, o, rel, pot.U, pot.S, pot.F, pot.Phi))
    return ("beta", "A_phase", "A_oracle", "rel_diff", "U", "S", "F", "Phi"), rows


def potentials_cmd(cfg: RunConfig):
    grid = build_grid(cfg.dim, cfg.mass, cfg.smax, cfg.nodes if cfg.dim == 1 else min(cfg.nodes, 256),
                      cfg.hbar)
    u = np.eye(cfg.dim + 1)[0]
    rows = []
    betas = _betas(cfg)
    for b, pot in zip(betas, thermal.potentials(betas, grid)):
        e = thermal.canonical_oracle(thermal.energy, b, u, grid)
        rows.append((b, pot.U, pot.S, pot.F, pot.Phi, e, abs(pot.U - e) / e))
    return ("beta", "U", "S", "F", "Phi", "E_oracle", "rel_diff"), rows


def gauge_check(cfg: RunConfig):
    if cfg.metric not in gauge.METRICS:
        raise UsageError(f"--metric must be one of {sorted(gauge.METRICS)}")
    g = gauge.METRICS[cfg.metric]()
    rng = np.random.default_rng(cfg.seed)
    grid = build_grid(1, cfg.mass, cfg.smax, cfg.nodes, cfg.hbar)
    pts = states.random_tube_points(rng, 5, 1, lam_range=(0.5 * cfg.lam, 2 * cfg.lam))
    psi = states.WaveFunction.from_states(grid, [1.0, 0.4j],
                                          [ComplexInterval([0, 0.3], [cfg.lam, 0.1]),
                                           ComplexInterval([0.2, -0.5], [1.5 * cfg.lam, -0.3])])
    psi_g = psi
    if g.rank > 1:
        # one synthesized component per fiber direction
        parts = [psi] + [states.WaveFunction.fundamental(
            grid, ComplexInterval([0.1 * k, 0.2 * k], [(1 + 0.3 * k) * cfg.lam, 0.0]))
            for k in range(1, g.rank)]
        fns = [gauge.psi_function(q) for q in parts]
        psi_g = lambda zz: np.array([f(zz) for f in fns])  # noqa: E731
    rows = []
    for i, z in enumerate(pts):
        g.check_positive(z)
        rows.append((i, "cauchy_riemann", gauge.cauchy_riemann_residual(psi, z), 1e-8))
        chi = gauge.plane_gauge(rng.normal(size=2) * 0.3)
        F0 = gauge.field(g, z).components
        F1 = gauge.field(gauge.gauge_transform(g, chi), z).components
        rows.append((i, "field_gauge_invariance", float(np.max(np.abs(F1 - F0))), 1e-6))
        r0 = gauge.covariant_density(psi_g, g, z)
        r1 = gauge.covariant_density(gauge.transform_wavefunction(psi_g, chi),
                                     gauge.gauge_transform(g, chi), z)
        rows.append((i, "density_gauge_invariance", abs(r1 - r0) / abs(r0), 1e-12))
        rows.append((i, "integrability", gauge.integrability_residual(g, z),
                     1e-10 if g.rank == 1 else 1e-5))
    rows = [r + (r[2] <= r[3],) for r in rows]
    return ("point", "check", "value", "tolerance", "passed"), rows


def verify(cfg: RunConfig):
    rep = run_verification(VerifyConfig(cfg.mass, cfg.lam, cfg.hbar, cfg.smax, cfg.nodes,
                                        cfg.x_extent, cfg.x_step))
    cols = [f.name for f in fields(rep.records[0])] if rep.records else ["name"]
    rows = [tuple(getattr(r, c) for c in cols) for r in rep.records]
    return tuple(cols), rows


_DISPATCH = {
    "fig-zeta": fig_zeta, "fig-filter": fig_filter, "fig-kernel": fig_kernel,
    "thermal-table": thermal_table, "potentials": potentials_cmd,
    "gauge-check": gauge_check, "verify": verify,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(ns)
        cols, rows = _DISPATCH[cfg.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"futuretube: error: {exc}", file=sys.stderr)
        return 2
    text = render(cols, rows, cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if cfg.command in ("verify", "gauge-check"):
        ok = all(r[cols.index("passed")] for r in rows)
        return 0 if ok else 1
    return 0


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``); not an error
        import os
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
