"""Fast self-check suite run by ``futuretube verify``.

Each check compares a computed number with an independent reference
(closed form, quadrature or algebraic identity) at a fixed tolerance.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import gauge, geometry, phasespace, states, thermal
from .geometry import ComplexInterval
from .massshell import build_grid
from .specfun import kv


@dataclass
class CheckRecord:
    name: str
    computed: float
    expected: float
    tolerance: float
    passed: bool
    runtime: float


@dataclass
class VerificationReport:
    records: list[CheckRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def to_json(self) -> str:
        return json.dumps({"passed": self.passed, "records": [asdict(r) for r in self.records]},
                          indent=2)


def _rel(a, b) -> float:
    return float(abs(a - b) / abs(b))


@dataclass(frozen=True)
class VerifyConfig:
    m: float = 1.0
    lam: float = 1.0
    hbar: float = 1.0
    s_max: float = 8.0
    nodes: int = 512
    x_extent: float = 20.0
    x_step: float = 0.1


def _checks(cfg: VerifyConfig) -> list[tuple[str, Callable[[], tuple[float, float]], float, str]]:
    """``(name, fn, tol, mode)``; ``fn`` returns ``(computed, expected)``.

    ``mode`` is ``"rel"`` (relative difference), ``"le"``
    (``|computed - expected| <= tol``) or ``"ge"`` (``computed >= tol``).
    """
    m, lam, hbar = cfg.m, cfg.lam, cfg.hbar
    g1 = build_grid(1, m, cfg.s_max, cfg.nodes, hbar)
    cache: dict = {}

    def slice_(t0=0.0, l=lam):
        key = (t0, l)
        if key not in cache:
            s = phasespace.PhaseSpaceSlice(t0=t0, lam=l, m=m, hbar=hbar,
                                           x_extent=cfg.x_extent, x_step=cfg.x_step)
            cache[key] = phasespace.calibrate(s, g1)
        return cache[key]

    rng = np.random.default_rng(20240611)
    pts = states.random_tube_points(rng, 12, 1, lam_range=(0.5 * lam, 2 * lam))
    w0 = ComplexInterval([0.0, 0.0], [lam, 0.0])
    psi0 = states.WaveFunction.fundamental(g1, w0)
    psi2 = states.WaveFunction.from_states(
        g1, [1.0, 0.5j], [ComplexInterval([0.0, 0.5], [lam, 0.2 * lam]),
                          ComplexInterval([0.1, -0.8], [1.4 * lam, -0.4 * lam])])

    def kernel_d1():
        worst = 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            c = states.overlap_closed(a, b, m, 1, hbar).value
            q = states.overlap_quadrature(a, b, g1)
            worst = max(worst, _rel(q, c))
        return worst, 0.0

    def kernel_d3():
        g3 = build_grid(3, m, 8.0, 256, hbar, n_cos=48)
        a = ComplexInterval([0.0, 0.3, 0, 0], [lam, 0.2 * lam, 0, 0])
        b = ComplexInterval([0.5, -0.2, 0, 0], [1.3 * lam, -0.1 * lam, 0, 0])
        return abs(states.overlap_quadrature(a, b, g3)), abs(states.overlap_closed(a, b, m, 3, hbar).value)

    def norm_formula():
        return psi0.norm_squared(), states.norm_squared_closed(lam, m, 1, hbar)

    def effective_mass():
        st = states.FundamentalState(w0, m, hbar)
        p = states.momentum_expectation_quadrature(st, g1)
        return float(p[0]) / m, states.effective_mass(lam, m, 1, hbar) / m

    def calib():
        c = slice_()
        return c.N, phasespace.analytic_N(lam, m, hbar)

    def flatness():
        return slice_().flatness, 0.0

    def plancherel():
        return phasespace.slice_norm(psi2, slice_().slice), psi2.norm_squared_closed()

    def slice_independence():
        a = phasespace.slice_norm(psi2, slice_(0.0, lam).slice)
        b = phasespace.slice_norm(psi2, slice_(0.7, 2 * lam).slice)
        return a, b

    def reproducing():
        zp = ComplexInterval([0.5, 0.3], [1.1 * lam, 0.2 * lam])
        return abs(phasespace.reproduce(psi2, slice_().slice, zp) - states.synthesize(psi2, zp)), 0.0

    def conservation():
        return max(phasespace.conservation_residual(psi2, z) for z in pts), 0.0

    def thermal_energy():
        vt = thermal.ThermalVector.rest(2.0 / m, 1, hbar)
        return thermal.thermal_average(thermal.energy, vt, slice_().slice, g1), \
            thermal.canonical_oracle(thermal.energy, 2.0 / m, vt.u, g1)

    def thermal_reference():
        vt = thermal.ThermalVector.rest(2.0 / m, 1, hbar)
        ref = m * (kv(0, 2.0).real + kv(2, 2.0).real) / (2 * kv(1, 2.0).real)
        return thermal.thermal_average(thermal.energy, vt, slice_().slice, g1), ref

    def potentials_U():
        pot = thermal.potentials([2.0 / m], g1)[0]
        return pot.U, thermal.canonical_oracle(thermal.energy, 2.0 / m, [1.0, 0.0], g1)

    def trace():
        return thermal.trace_rank_one(w0, slice_().slice), states.norm_squared_closed(lam, m, 1, hbar)

    def nr_fidelity():
        gg = build_grid(1, m, 4.0, 4001, hbar)
        L = 50 * hbar / m
        z = ComplexInterval([0.0, 0.3], [L * np.sqrt(1 + 0.05**2), L * 0.05])
        a = states.WaveFunction.fundamental(gg, z)
        return states.fidelity(a, states.nonrel_oracle(z, gg)), 0.99

    def uncertainty():
        dx, dp = states.gaussian_uncertainty(ComplexInterval([0.0, 1.0], [2.0, 0.1]), m, hbar)
        return dx * dp, hbar / 2

    def zeta_boost():
        L = geometry.boost(0.7, [1.0])
        worst = 0.0
        for z in pts:
            a = geometry.zeta(z.x, z.y)
            b = geometry.zeta(geometry.apply(z.x, L), geometry.apply(z.y, L))
            worst = max(worst, float(abs(a - b) / abs(a)))
        return worst, 0.0

    def cauchy_riemann():
        return max(gauge.cauchy_riemann_residual(psi2, z) for z in pts[:6]), 0.0

    def gauge_invariance():
        Q = gauge.QuadraticMetric()
        g = Q.metric()
        z = pts[0]
        chi = gauge.plane_gauge([0.3, -0.2])
        F0 = gauge.field(g, z).components
        F1 = gauge.field(gauge.gauge_transform(g, chi), z).components
        return float(np.max(np.abs(F1 - F0))), 0.0

    def field_exact():
        Q = gauge.QuadraticMetric()
        return float(np.max(np.abs(gauge.field(Q.metric(), pts[1]).components - Q.field_exact(2)))), 0.0

    def integrability():
        g = gauge.nonabelian_metric()
        return max(gauge.integrability_residual(g, z) for z in pts[:4]), 0.0

    return [
        ("kernel_quadrature_d1", kernel_d1, 1e-8, "le"),
        ("kernel_quadrature_d3", kernel_d3, 1e-8, "rel"),
        ("norm_formula_d1", norm_formula, 1e-8, "rel"),
        ("effective_mass_ratio", effective_mass, 1e-6, "rel"),
        ("calibrated_N", calib, 1e-6, "rel"),
        ("W_over_E_flatness", flatness, 1e-8, "le"),
        ("plancherel_slice_norm", plancherel, 1e-4, "rel"),
        ("slice_independence", slice_independence, 2e-4, "rel"),
        ("reproducing_kernel", reproducing, 1e-3, "le"),
        ("conservation_residual", conservation, 1e-10, "le"),
        ("thermal_vs_oracle", thermal_energy, 1e-3, "rel"),
        ("thermal_energy_bessel", thermal_reference, 1e-5, "rel"),
        ("internal_energy_fd", potentials_U, 1e-5, "rel"),
        ("rank_one_trace", trace, 1e-3, "rel"),
        ("nonrelativistic_fidelity", nr_fidelity, 0.99, "ge"),
        ("gaussian_uncertainty", uncertainty, 1e-6, "rel"),
        ("zeta_boost_invariance", zeta_boost, 1e-12, "le"),
        ("cauchy_riemann", cauchy_riemann, 1e-8, "le"),
        ("abelian_field_exact", field_exact, 1e-6, "le"),
        ("abelian_gauge_invariance", gauge_invariance, 1e-6, "le"),
        ("nonabelian_integrability", integrability, 1e-5, "le"),
    ]


def run_verification(cfg: VerifyConfig | None = None, only: list[str] | None = None) -> VerificationReport:
    cfg = cfg or VerifyConfig()
    report = VerificationReport()
    for name, fn, tol, mode in _checks(cfg):
        if only and name not in only:
            continue
        t = time.perf_counter()
        try:
            computed, expected = fn()
            if mode == "rel":
                ok = _rel(computed, expected) <= tol
            elif mode == "ge":
                ok = computed >= tol
            else:
                ok = abs(computed - expected) <= tol
        except Exception:  # a crashing check is a failed check
            computed, expected, ok = float("nan"), float("nan"), False
        report.records.append(CheckRecord(name, float(computed), float(expected), tol, bool(ok),
                                          round(time.perf_counter() - t, 3)))
    return report


__all__ = ["CheckRecord", "VerificationReport", "VerifyConfig", "run_verification"]
