"""Ground-truth checks on solution branches.

``ode_residual`` evaluates the two moving-frame equations directly through
the elliptic kernel (closed-form cn-power derivatives, never numerical
differentiation and never the symbolic engine), so a bug in the family
formulas or the solver cannot cancel against a bug in the algebra.
Residuals are reported relative to the largest individual term magnitude:
coefficient sizes vary over orders of magnitude between parameter sets.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .elliptic import _cn_power_derivative_at, complete_k, jacobi_eval
from .errors import DomainError, UsageError
from .families import (
    ParameterSet,
    SolutionParams,
    build_s412,
    build_s422,
    build_s43,
    build_family,
    m1_limit,
)


@dataclass(frozen=True)
class ResidualReport:
    max_abs_eq1: float
    max_abs_eq2: float
    scale: float
    relative: float
    n_samples: int
    period: Optional[float]

    def to_dict(self):
        return {
            "max_abs_eq1": self.max_abs_eq1,
            "max_abs_eq2": self.max_abs_eq2,
            "scale": self.scale,
            "relative": self.relative,
            "n_samples": self.n_samples,
            "period": self.period,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _sample_points(s: SolutionParams, n_samples: int) -> tuple[list[float], Optional[float]]:
    """One full period for m < 1 plus its quarter points; a wide window at m = 1."""
    if s.m < 1.0:
        quarter = complete_k(s.m) / s.lam
        period = 4.0 * quarter
        xs = [period * i / n_samples for i in range(n_samples)]
        xs.extend(quarter * i for i in range(4))
        return xs, period
    half_width = 12.0 / s.lam
    xs = [-half_width + 2.0 * half_width * i / (n_samples - 1) for i in range(n_samples)]
    xs.append(0.0)
    return xs, None


def _profile_terms(s: SolutionParams, xi: float):
    """eta, w and their first/third xi-derivatives at one point."""
    pt = jacobi_eval(s.lam * xi, s.m)
    eta = w = d1_eta = d1_w = d3_eta = d3_w = 0.0
    for r, jr in enumerate(s.j):
        if jr:
            eta += jr * pt.cn ** r
            if r >= 1:
                d1_eta += jr * _cn_power_derivative_at(pt, r, 1, s.lam)
                d3_eta += jr * _cn_power_derivative_at(pt, r, 3, s.lam)
    for r, kr in enumerate(s.k):
        if kr:
            w += kr * pt.cn ** r
            if r >= 1:
                d1_w += kr * _cn_power_derivative_at(pt, r, 1, s.lam)
                d3_w += kr * _cn_power_derivative_at(pt, r, 3, s.lam)
    return eta, w, d1_eta, d1_w, d3_eta, d3_w


def ode_residual(s: SolutionParams, p: ParameterSet, n_samples: int = 1024) -> ResidualReport:
    """Residual of both traveling-wave equations over one period.

    Samples n_samples (>= 64) points plus the four quarter-period points;
    ``relative`` is max residual over the largest individual term seen.
    A constant pair gives residual exactly zero.
    """
    if n_samples < 64:
        raise UsageError(f"n_samples must be >= 64, got {n_samples}")
    a, b, c, d = (float(p.a), float(p.b), float(p.c), float(p.d))
    sig = s.sigma
    xs, period = _sample_points(s, n_samples)

    max1 = max2 = scale = 0.0
    for xi in xs:
        eta, w, d1_eta, d1_w, d3_eta, d3_w = _profile_terms(s, xi)
        terms1 = (
            -sig * d1_eta,
            d1_w,
            d1_eta * w + eta * d1_w,
            a * d3_w,
            b * sig * d3_eta,
        )
        terms2 = (
            -sig * d1_w,
            d1_eta,
            w * d1_w,
            c * d3_eta,
            d * sig * d3_w,
        )
        max1 = max(max1, abs(sum(terms1)))
        max2 = max(max2, abs(sum(terms2)))
        scale = max(scale, *(abs(t) for t in terms1), *(abs(t) for t in terms2))

    relative = max(max1, max2) / scale if scale > 0.0 else 0.0
    return ResidualReport(max1, max2, scale, relative, len(xs), period)


@dataclass(frozen=True)
class PeriodicityReport:
    defect: float
    period: float
    half_period: bool
    half_defect: float

    def to_dict(self):
        return {
            "defect": self.defect,
            "period": self.period,
            "half_period": self.half_period,
            "half_defect": self.half_defect,
        }


def periodicity_check(s: SolutionParams, n_points: int = 128) -> PeriodicityReport:
    """Shift defect over one full period T = 4K(m)/lam, and whether T/2
    is also a period (true when only even cn powers are present)."""
    if s.m >= 1.0:
        raise DomainError("no finite period at m = 1")
    period = 4.0 * complete_k(s.m) / s.lam
    defect = half_defect = amplitude = 0.0
    for i in range(n_points):
        xi = period * i / n_points
        eta0, w0 = s.eval_eta(xi), s.eval_w(xi)
        eta1, w1 = s.eval_eta(xi + period), s.eval_w(xi + period)
        eta_h, w_h = s.eval_eta(xi + 0.5 * period), s.eval_w(xi + 0.5 * period)
        defect = max(defect, abs(eta1 - eta0) + abs(w1 - w0))
        half_defect = max(half_defect, abs(eta_h - eta0) + abs(w_h - w0))
        amplitude = max(amplitude, abs(eta0), abs(w0))
    half_period = half_defect <= 1e-9 * max(1.0, amplitude)
    return PeriodicityReport(defect, period, half_period, half_defect)


def bbm_reduction_check(s: SolutionParams, d, *, c_probe=Fraction(7, 10),
                        n_samples: int = 1024) -> ResidualReport:
    """Residual check for the single-equation reduction at eta = -1, a = b = 0.

    With eta constant the first equation collapses to w' - w' = 0 and the
    second to -sigma w' + w w' + d sigma w''' = 0 (the eta''' term is inert,
    so ``c_probe`` is arbitrary).  UsageError for non-semi-trivial input.
    """
    flat_eta = s.j[0] == -1.0 and all(v == 0.0 for v in s.j[1:])
    if not (flat_eta and s.k[1] == 0.0):
        raise UsageError("expected a semi-trivial solution with eta = -1 and k1 = 0")
    p_eff = ParameterSet.make(0, 0, c_probe, d)
    return ode_residual(s, p_eff, n_samples)


@dataclass(frozen=True)
class ConvergenceTable:
    kind: str
    parameter: str
    values: tuple[float, ...]
    diffs: tuple[float, ...]
    orders: tuple[float, ...]
    monotone: bool
    target: dict

    def to_dict(self):
        return {
            "kind": self.kind,
            "parameter": self.parameter,
            "values": list(self.values),
            "diffs": list(self.diffs),
            "orders": list(self.orders),
            "monotone": self.monotone,
            "target": self.target,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _coef_diff(s1: SolutionParams, s2: SolutionParams) -> float:
    diffs = [abs(x - y) for x, y in zip(s1.j, s2.j)]
    diffs += [abs(x - y) for x, y in zip(s1.k, s2.k)]
    return max(diffs)


def _empirical_orders(values: Sequence[float], diffs: Sequence[float]) -> tuple[float, ...]:
    orders = []
    for i in range(len(values) - 1):
        if diffs[i] > 0 and diffs[i + 1] > 0 and values[i] != values[i + 1]:
            orders.append(
                math.log(diffs[i + 1] / diffs[i]) / math.log(values[i + 1] / values[i])
            )
        else:
            orders.append(float("nan"))
    return tuple(orders)


def limit_consistency(kind: str, **inputs) -> ConvergenceTable:
    """Coefficient collapse between families along a limiting parameter.

    kind = "c_to_zero": bottom-branch S412 -> S422 as c -> 0; requires the
        side condition sigma*(b-2d) > 0.  Inputs: a, b, d, lam, sigma, m
        and optionally c_values (default geometric 1e-3 .. 1e-8).
    kind = "a_to_zero": S422 at a = 0 against S43 (single row; exact).
        Inputs: b, d, lam, sigma, m.
    kind = "m_to_one": family coefficients along m -> 1 against the m = 1
        evaluation.  Inputs: family plus that family's arguments and
        optionally m_values.
    """
    kind = kind.replace("-", "_")
    if kind == "c_to_zero":
        a, b, d = inputs["a"], inputs["b"], inputs["d"]
        lam, sigma, m = inputs["lam"], inputs["sigma"], inputs["m"]
        side = float(Fraction(sigma) * (Fraction(b) - 2 * Fraction(d)))
        if not side > 0:
            raise DomainError(
                f"side condition sigma*(b-2d) > 0 fails (value {side})")
        c_values = tuple(inputs.get("c_values") or (10.0 ** -k for k in range(3, 9)))
        target = build_s422(ParameterSet.make(a, b, 0, d), lam, sigma, m)
        diffs = []
        for c in c_values:
            sol = build_s412(ParameterSet.make(a, b, Fraction(c), d), lam, sigma, m,
                             sign="bottom")
            diffs.append(_coef_diff(sol, target))
        diffs = tuple(diffs)
        monotone = all(diffs[i + 1] <= diffs[i] for i in range(len(diffs) - 1))
        return ConvergenceTable(kind, "c", tuple(float(c) for c in c_values),
                                diffs, _empirical_orders(c_values, diffs),
                                monotone, target.to_dict())

    if kind == "a_to_zero":
        b, d = inputs["b"], inputs["d"]
        lam, sigma, m = inputs["lam"], inputs["sigma"], inputs["m"]
        sol = build_s422(ParameterSet.make(0, b, 0, d), lam, sigma, m)
        target = build_s43(d, lam, sigma, m)
        diff = _coef_diff(sol, target)
        return ConvergenceTable(kind, "a", (0.0,), (diff,), (), True,
                                target.to_dict())

    if kind == "m_to_one":
        family = inputs.pop("family")
        m_values = tuple(inputs.pop("m_values", ())) or tuple(
            1.0 - 10.0 ** -k for k in range(1, 9))
        args = inputs.pop("args", ())
        inputs.pop("m", None)
        target = m1_limit(family, *args, **inputs)
        diffs = []
        for m in m_values:
            sol = build_family(family, *args, m=m, **inputs)
            diffs.append(_coef_diff(sol, target))
        diffs = tuple(diffs)
        gaps = tuple(1.0 - m for m in m_values)
        monotone = all(diffs[i + 1] <= diffs[i] for i in range(len(diffs) - 1))
        return ConvergenceTable(kind, "1-m", gaps, diffs,
                                _empirical_orders(gaps, diffs), monotone,
                                target.to_dict())

    raise UsageError(f"unknown limit kind {kind!r}")
