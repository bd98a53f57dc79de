"""Jacobi elliptic functions and the complete elliptic integral K.

Everything here uses the *modulus* convention: the parameter ``m`` is the
elliptic modulus itself, so it enters every identity squared, e.g.

    dn^2(v, m) = 1 - m^2 + m^2 cn^2(v, m).

Libraries that take the *parameter* (the square of the modulus) need the
conversion ``parameter = m**2`` exactly once at the boundary.

Evaluation is by the arithmetic-geometric mean (AGM) with the descending
amplitude recursion (DLMF 22.20(ii)); the degenerate ends use the closed
forms cn(v, 0) = cos v and cn(v, 1) = sech v.  All functions are pure and
safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, UsageError

_AGM_TOL = 1e-15
_AGM_MAX_ITER = 64


@dataclass(frozen=True)
class JacobiPoint:
    """Values of (sn, cn, dn) at elliptic argument ``v`` and modulus ``m``.

    Satisfies sn^2 + cn^2 = 1 and dn^2 = 1 - m^2 + m^2 cn^2 to rounding.
    """

    v: float
    m: float
    sn: float
    cn: float
    dn: float


def _check_modulus(m: float, *, allow_one: bool) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0:
        raise DomainError(f"modulus m={m!r} outside [0, 1]")
    if m == 1.0 and not allow_one:
        raise DomainError("K(m) diverges logarithmically as m -> 1")
    return m


@lru_cache(maxsize=512)
def _agm_tables(m: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Descending AGM scale (a_n, c_n) for modulus m in (0, 1)."""
    a_seq = [1.0]
    c_seq = [m]
    b = math.sqrt((1.0 - m) * (1.0 + m))
    while abs(c_seq[-1]) > _AGM_TOL and len(a_seq) < _AGM_MAX_ITER:
        a_prev = a_seq[-1]
        a_seq.append(0.5 * (a_prev + b))
        c_seq.append(0.5 * (a_prev - b))
        b = math.sqrt(a_prev * b)
    return tuple(a_seq), tuple(c_seq)


def complete_k(m: float) -> float:
    """Complete elliptic integral K(m) = int_0^{pi/2} dt / sqrt(1 - m^2 sin^2 t).

    Computed by the AGM iteration, K = pi / (2 agm(1, sqrt(1-m^2))), to
    relative accuracy ~1e-15.  Requires 0 <= m < 1; m = 1 raises
    DomainError because the integral diverges.
    """
    m = _check_modulus(m, allow_one=False)
    if m == 0.0:
        return math.pi / 2.0
    a_seq, _ = _agm_tables(m)
    return math.pi / (2.0 * a_seq[-1])


def jacobi_eval(v: float, m: float) -> JacobiPoint:
    """Evaluate (sn, cn, dn) at (v, m) with the modulus convention.

    The argument is first reduced modulo the period 4K(m) (for 0 < m < 1),
    then the descending AGM amplitude recursion is applied.  m = 0 and
    m = 1 use the trigonometric / hyperbolic closed forms.
    """
    v = float(v)
    if not math.isfinite(v):
        raise DomainError(f"elliptic argument v={v!r} must be finite")
    m = _check_modulus(m, allow_one=True)

    if m == 0.0:
        return JacobiPoint(v, m, math.sin(v), math.cos(v), 1.0)
    if m == 1.0:
        sech = 1.0 / math.cosh(v)
        return JacobiPoint(v, m, math.tanh(v), sech, sech)

    # Reduce into [-2K, 2K]; cn/sn/dn are 4K-periodic so this is exact up
    # to rounding of the reduction itself.
    period = 4.0 * complete_k(m)
    v_red = v - period * round(v / period)

    a_seq, c_seq = _agm_tables(m)
    n = len(a_seq) - 1
    phi = (2.0 ** n) * a_seq[n] * v_red
    for i in range(n, 0, -1):
        s = c_seq[i] / a_seq[i] * math.sin(phi)
        s = max(-1.0, min(1.0, s))
        phi = 0.5 * (phi + math.asin(s))

    sn = math.sin(phi)
    cn = math.cos(phi)
    dn = math.sqrt(max(1.0 - (m * sn) ** 2, 0.0))
    return JacobiPoint(v, m, sn, cn, dn)


def _cn_power_derivative_at(pt: JacobiPoint, r: int, order: int, lam: float) -> float:
    """Derivative of cn^r(lam*xi, m) given the Jacobi point at v = lam*xi.

    Uses the closed-form reduction of d^k/dxi^k cn^r to cn powers with an
    sn*dn prefactor for odd k.  Coefficients that vanish are skipped so no
    negative cn power is ever formed.
    """
    cn, sn, dn, m = pt.cn, pt.sn, pt.dn, pt.m
    msq = m * m
    if order == 1:
        return -r * lam * cn ** (r - 1) * sn * dn
    if order == 2:
        total = (r + 1) * msq * cn ** (r + 2) + r * (1.0 - 2.0 * msq) * cn ** r
        if r >= 2:
            total += (r - 1) * (msq - 1.0) * cn ** (r - 2)
        return -r * lam * lam * total
    if order == 3:
        total = (r + 1) * (r + 2) * msq * cn ** (r + 1)
        total += r * r * (1.0 - 2.0 * msq) * cn ** (r - 1)
        if r >= 3:
            total += (r - 1) * (r - 2) * (msq - 1.0) * cn ** (r - 3)
        return r * lam ** 3 * sn * dn * total
    raise UsageError(f"derivative order must be 1, 2 or 3, got {order!r}")


def cn_power_derivative(r: int, order: int, lam: float, m: float, xi: float) -> float:
    """d^order/dxi^order of cn^r(lam*xi, m), by closed formula.

    ``order`` must be 1, 2 or 3 (UsageError otherwise); ``r`` must be a
    positive integer.  Orders 1 and 3 carry the sn*dn prefactor; order 2
    is a pure cn polynomial.
    """
    r = int(r)
    if r < 1:
        raise UsageError(f"cn power r must be >= 1, got {r!r}")
    if order not in (1, 2, 3):
        raise UsageError(f"derivative order must be 1, 2 or 3, got {order!r}")
    pt = jacobi_eval(lam * xi, m)
    return _cn_power_derivative_at(pt, r, order, float(lam))
