"""Closed-form cnoidal solution families and their validity predicates.

Each constructor evaluates one explicit solution set of the coupled
traveling-wave equations

    -sigma eta' + w' + (eta w)' + a w''' + b sigma eta''' = 0
    -sigma w'  + eta' + w w'    + c eta''' + d sigma w''' = 0

with profiles eta = sum_r j_r cn^r(lam*xi, m), w = sum_r k_r cn^r.  The
family labels:

    S411  quadratic, mixed odd/even cn terms; c != 0; sigma is an output
    S412  quadratic, even terms only (j1 = k1 = 0); c != 0; free lam/sigma/m
    S421  quartic eta, quadratic w; c = 0, 4b != d
    S422  quadratic even; c = 0, b != 2d
    S43   semi-trivial eta = -1; a = b = 0

Rational sub-expressions are computed exactly (``fractions.Fraction``), so
sign tests and degeneracy tests are exact for rational inputs; square
roots move to float at the end.  Constructors do not enforce the
theta-parameterization constraint on (a, b, c, d) -- run
``check_physical_constraint`` separately when that matters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .elliptic import jacobi_eval
from .errors import ConstraintError, DomainError, UsageError

Rational = Union[int, float, Fraction]

# denominators smaller than this (relative to the numerator scale) are
# treated as vanished: silent catastrophic cancellation otherwise
_DENOM_RTOL = 1e-12


def _frac(x: Rational, name: str) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{name} must be a rational or float, got {x!r}") from exc


@dataclass(frozen=True)
class ParameterSet:
    """The dispersion constants (a, b, c, d), exact rationals.

    ``theta`` is optional metadata; when present the three constraint
    relations tie it to a+b and c+d (see check_physical_constraint).
    """

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    theta: Optional[float] = None

    @staticmethod
    def make(a: Rational, b: Rational, c: Rational, d: Rational,
             theta: Optional[float] = None) -> "ParameterSet":
        return ParameterSet(
            _frac(a, "a"), _frac(b, "b"), _frac(c, "c"), _frac(d, "d"), theta
        )

    def as_floats(self) -> dict[str, float]:
        return {"a": float(self.a), "b": float(self.b),
                "c": float(self.c), "d": float(self.d)}


def check_physical_constraint(p: ParameterSet) -> float:
    """Solve the theta-parameterization for theta, or raise ConstraintError.

    The relations are a + b = (theta^2 - 1/3)/2, c + d = (1 - theta^2)/2 >= 0
    and a + b + c + d = 1/3 with theta in [0, 1].  Returns theta.
    """
    violations = []
    total = p.a + p.b + p.c + p.d
    if total != Fraction(1, 3):
        violations.append(f"a+b+c+d = {total} != 1/3")
    theta_sq = 1 - 2 * (p.c + p.d)
    if theta_sq < 0:
        violations.append(f"c+d = {p.c + p.d} > 1/2 forces theta^2 = {theta_sq} < 0")
    if theta_sq > 1:
        violations.append(f"c+d = {p.c + p.d} < 0 violates c+d >= 0")
    if violations:
        raise ConstraintError(violations)
    return math.sqrt(float(theta_sq))


@dataclass(frozen=True)
class Branch:
    """Sign selectors: tau1/tau2 for S411, pm in {top, bottom} for S412."""

    tau1: int = 1
    tau2: int = 1
    pm: Optional[str] = None

    def to_dict(self):
        return {"tau1": self.tau1, "tau2": self.tau2, "pm": self.pm}


@dataclass(frozen=True)
class SolutionParams:
    """One solution branch: cn-series coefficients plus (lam, m, sigma)."""

    j: tuple[float, float, float, float, float]
    k: tuple[float, float, float]
    lam: float
    m: float
    sigma: float
    family_tag: str
    branch: Branch = field(default_factory=Branch)
    origin: Optional[str] = None

    def eval_eta(self, xi: float) -> float:
        pt = jacobi_eval(self.lam * xi, self.m)
        return sum(jr * pt.cn ** r for r, jr in enumerate(self.j) if jr)

    def eval_w(self, xi: float) -> float:
        pt = jacobi_eval(self.lam * xi, self.m)
        return sum(kr * pt.cn ** r for r, kr in enumerate(self.k) if kr)

    def coefficient_map(self) -> dict[str, float]:
        out = {f"j{r}": v for r, v in enumerate(self.j)}
        out.update({f"k{r}": v for r, v in enumerate(self.k)})
        out.update({"lam": self.lam, "m": self.m, "sigma": self.sigma})
        return out

    def to_dict(self) -> dict:
        return {
            "family_tag": self.family_tag,
            "branch": self.branch.to_dict(),
            "j": list(self.j),
            "k": list(self.k),
            "lambda": self.lam,
            "m": self.m,
            "sigma": self.sigma,
            "origin": self.origin,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @staticmethod
    def from_dict(data: dict) -> "SolutionParams":
        branch = Branch(**(data.get("branch") or {}))
        j = list(data["j"]) + [0.0] * (5 - len(data["j"]))
        k = list(data["k"]) + [0.0] * (3 - len(data["k"]))
        return SolutionParams(
            tuple(j[:5]), tuple(k[:3]),
            float(data["lambda"]), float(data["m"]), float(data["sigma"]),
            data["family_tag"], branch, data.get("origin"),
        )


def _require_m(m: Rational) -> Fraction:
    mf = _frac(m, "m")
    if mf <= 0:
        raise DomainError("m = 0 is excluded (the cn series degenerates to "
                          "a cosine series); need m in (0, 1]")
    if mf > 1:
        raise DomainError(f"m = {float(mf)} outside (0, 1]")
    return mf


def _require_lam_sigma(lam: Rational, sigma: Rational) -> tuple[Fraction, Fraction]:
    lamf = _frac(lam, "lam")
    sigf = _frac(sigma, "sigma")
    if lamf <= 0:
        raise DomainError(f"lam must be > 0, got {float(lamf)}")
    if sigf == 0:
        raise DomainError("sigma must be nonzero")
    return lamf, sigf


def _checked_div(num: float, den: float, what: str) -> float:
    if abs(den) <= _DENOM_RTOL * max(1.0, abs(num)):
        raise DomainError(f"denominator {what} vanishes (value {den!r})")
    return num / den


def _sqrt_checked(x: float, what: str) -> float:
    if x < 0:
        raise DomainError(f"negative radicand in {what} (value {x!r})")
    return math.sqrt(x)


def build_s411(p: ParameterSet, m: Rational, tau1: int = 1, tau2: int = 1) -> SolutionParams:
    """Mixed-term quadratic family; sigma and lam are outputs.

    Validity: a*c*(b-6d)*(3b-2d) < 0, c*(2m^2-1)*(b+2d)*(3b+2d) < 0 and
    (2m^2-1)*(3b+2d)*(b-d) >= 0 with equality only when b = d.
    """
    if tau1 not in (1, -1) or tau2 not in (1, -1):
        raise UsageError("tau1 and tau2 must be +1 or -1")
    mf = _require_m(m)
    a, b, c, d = p.a, p.b, p.c, p.d
    if c == 0:
        raise DomainError("family S411 requires c != 0")

    d1 = b - 6 * d
    d2 = 3 * b - 2 * d
    s1 = 3 * b + 2 * d
    s2 = b + 2 * d
    ecc = 2 * mf * mf - 1
    for val, what in ((d1, "b-6d"), (d2, "3b-2d"), (s2, "b+2d")):
        if val == 0:
            raise DomainError(f"denominator factor {what} vanishes")
    if abs(float(ecc)) < 1e-12:
        raise DomainError("2m^2-1 vanishes (m = 1/sqrt(2) is excluded here)")

    cond1 = a * c * d1 * d2
    if not cond1 < 0:
        raise DomainError(f"validity a*c*(b-6d)*(3b-2d) < 0 fails: {float(cond1)}")
    cond2 = c * ecc * s2 * s1
    if not cond2 < 0:
        raise DomainError(
            f"validity c*(2m^2-1)*(b+2d)*(3b+2d) < 0 fails: {float(cond2)}")
    cond3 = ecc * s1 * (b - d)
    if cond3 < 0 or (cond3 == 0 and b != d):
        raise DomainError(
            f"validity (2m^2-1)*(3b+2d)*(b-d) >= 0 (equality only at b=d) "
            f"fails: {float(cond3)}")

    root_r = _sqrt_checked(float(-2 * a * c * d1 * d2), "sqrt(-2ac(b-6d)(3b-2d))")
    root_g = _sqrt_checked(float(cond3), "sqrt((2m^2-1)(3b+2d)(b-d))")
    mfl = float(mf)

    j0 = -_checked_div(float(a * s1 * (21 * b - 46 * d) + 2 * c * d2 * d1),
                       float(2 * c * d2 * d1), "2c(3b-2d)(b-6d)")
    j1 = -tau1 * tau2 * _checked_div(12 * float(a) * mfl * float(s1) * root_g,
                                     float(c * d1 * d2 * ecc),
                                     "c(b-6d)(3b-2d)(2m^2-1)")
    j2 = _checked_div(9 * float(a) * mfl ** 2 * float(s1),
                      float(c * d2 * ecc), "c(3b-2d)(2m^2-1)")
    k0 = tau1 * _checked_div(float(21 * b + 8 * c + 14 * d) * root_r,
                             float(2 * c * d1 * d2), "2c(b-6d)(3b-2d)")
    k1 = tau2 * _checked_div(6 * mfl * root_r * root_g,
                             float(c * ecc * d1 * d2),
                             "c(2m^2-1)(b-6d)(3b-2d)")
    k2 = -tau1 * _checked_div(9 * mfl ** 2 * float(s1) * root_r,
                              float(c * ecc * d1 * d2),
                              "c(2m^2-1)(b-6d)(3b-2d)")
    lam_sq = _checked_div(float(-6 * s1), float(c * ecc * s2), "c(2m^2-1)(b+2d)")
    lam = 0.5 * _sqrt_checked(lam_sq, "lam^2")
    if lam <= 0:
        raise DomainError("computed lam is not positive")
    sigma = tau1 * _checked_div(4 * root_r, float(d1 * d2), "(b-6d)(3b-2d)")

    return SolutionParams(
        (j0, j1, j2, 0.0, 0.0), (k0, k1, k2), lam, mfl, sigma,
        "S411", Branch(tau1=tau1, tau2=tau2),
    )


def _sqrt_fraction(x: Fraction, guard_bits: int = 192) -> Fraction:
    """sqrt of a nonnegative rational to ~guard_bits bits, as a Fraction.

    Needed because the field coordinates P, Q of a value P + Q sqrt(x) can
    be individually huge while the value is O(1); summing in floats would
    cancel catastrophically, so the root itself must carry spare precision.
    """
    if x < 0:
        raise ValueError("negative radicand")
    n, d = x.numerator, x.denominator
    return Fraction(math.isqrt((n * d) << (2 * guard_bits)), d << guard_bits)


def _quad_ratio(num_p: Fraction, num_q: Fraction, den_p: Fraction,
                den_q: Fraction, rad: Fraction, what: str) -> tuple[Fraction, Fraction]:
    """Exact (num_p + num_q sqrt(rad)) / (den_p + den_q sqrt(rad)).

    Returns the field coordinates (P, Q) with value = P + Q sqrt(rad).
    Working in Q(sqrt(rad)) avoids the catastrophic cancellation a float
    evaluation suffers near degenerate parameters (small c, a = 0, ...).
    """
    norm = den_p * den_p - den_q * den_q * rad
    if norm == 0:
        raise DomainError(f"denominator {what} vanishes")
    p = (num_p * den_p - num_q * den_q * rad) / norm
    q = (num_q * den_p - num_p * den_q) / norm
    return p, q


def _s412_coefficients(p: ParameterSet, lam: Fraction, sigma: Fraction,
                       m: Fraction, s_pm: int, s_mp: int):
    """Raw S412 coefficient evaluation with independent sign slots.

    ``s_pm`` drives every +- occurrence and ``s_mp`` every -+ occurrence;
    the public constructor ties s_mp = -s_pm (coherent signs).  Exposed
    separately so the incoherent combinations can be shown to fail.

    All four coefficients are exact elements P + Q sqrt(disc) of the
    quadratic extension by the validity radicand; the square root is the
    only floating-point step.
    """
    a, b, c, d = p.a, p.b, p.c, p.d
    lam2 = lam * lam
    m2 = m * m
    sig2 = sigma * sigma
    disc = 8 * a * c + sig2 * (b - 2 * d) ** 2
    if not disc > 0:
        raise DomainError(
            f"validity 8ac + sigma^2 (b-2d)^2 > 0 fails: {float(disc)}")
    root = _sqrt_fraction(disc)

    def value(pq: tuple[Fraction, Fraction]) -> float:
        return float(pq[0] + pq[1] * root)

    k2 = value((3 * lam2 * m2 * sigma * (b + 2 * d), s_pm * 3 * lam2 * m2))

    two_c = 2 * c
    j2 = value((
        3 * lam2 * m2 * (4 * a * c + b * sig2 * (b - 2 * d)) / two_c,
        s_pm * 3 * lam2 * m2 * b * sigma / two_c,
    ))

    a_k = (
        -8 * b**2 * c * lam2 * m2 * sig2 - 32 * c * d**2 * lam2 * m2 * sig2
        - 32 * a * c**2 * lam2 * m2 + 4 * b**2 * c * lam2 * sig2
        + 16 * c * d**2 * lam2 * sig2 + 16 * a * c**2 * lam2
        - b**2 * sig2 + 2 * b * c * sig2 + 2 * b * d * sig2
        + 4 * c * d * sig2 - 4 * a * c
    )
    b_k = (
        8 * b * c * lam2 * m2 + 16 * c * d * lam2 * m2
        - 4 * b * c * lam2 - 8 * c * d * lam2 + b - 2 * c
    )
    k0 = value(_quad_ratio(
        a_k, s_mp * sigma * b_k,
        2 * c * sigma * (b + 2 * d), Fraction(s_pm * 2) * c,
        disc, "2c(sigma(b+2d) +- sqrt(...))",
    ))

    a_j = (
        -8 * b**4 * c * lam2 * m2 * sig2**2 + 16 * b**3 * c * d * lam2 * m2 * sig2**2
        - 64 * a * b**2 * c**2 * lam2 * m2 * sig2
        - 32 * a * b * c**2 * d * lam2 * m2 * sig2
        - 64 * a * c**2 * d**2 * lam2 * m2 * sig2
        + 4 * b**4 * c * lam2 * sig2**2 - 8 * b**3 * c * d * lam2 * sig2**2
        - 64 * a**2 * c**3 * lam2 * m2 + 32 * a * b**2 * c**2 * lam2 * sig2
        + 16 * a * b * c**2 * d * lam2 * sig2 + 32 * a * c**2 * d**2 * lam2 * sig2
        + b**4 * sig2**2 - 4 * b**3 * d * sig2**2 + 4 * b**2 * d**2 * sig2**2
        + 32 * a**2 * c**3 * lam2 + 8 * a * b**2 * c * sig2
        - 8 * a * b * c * d * sig2 - 4 * b**2 * c**2 * sig2
        - 16 * c**2 * d**2 * sig2 + 8 * a**2 * c**2 - 16 * a * c**3
    )
    b_j = (
        8 * b**3 * c * lam2 * m2 * sig2 + 32 * a * b * c**2 * lam2 * m2
        + 32 * a * c**2 * d * lam2 * m2 - 4 * b**3 * c * lam2 * sig2
        - 16 * a * b * c**2 * lam2 - 16 * a * c**2 * d * lam2
        - b**3 * sig2 + 2 * b**2 * d * sig2 - 4 * a * b * c
        + 4 * b * c**2 + 8 * c**2 * d
    )
    j0 = value(_quad_ratio(
        a_j, s_mp * sigma * b_j,
        4 * c * c * (4 * a * c + sig2 * (b * b + 4 * d * d)),
        s_pm * 4 * c * c * sigma * (b + 2 * d),
        disc, "4c^2(4ac + sigma^2(b^2+4d^2) +- ...)",
    ))
    return j0, j2, k0, k2


def build_s412(p: ParameterSet, lam: Rational, sigma: Rational, m: Rational,
               sign: str = "top") -> SolutionParams:
    """Even quadratic family (j1 = k1 = 0) with free lam, sigma, m.

    ``sign`` chooses the coherent top or bottom branch of the +-/-+ pairs.
    Validity: c != 0 and 8ac + sigma^2 (b-2d)^2 > 0.
    """
    if sign not in ("top", "bottom"):
        raise UsageError(f"sign must be 'top' or 'bottom', got {sign!r}")
    if p.c == 0:
        raise DomainError("family S412 requires c != 0")
    mf = _require_m(m)
    lamf, sigf = _require_lam_sigma(lam, sigma)
    s_pm = 1 if sign == "top" else -1
    j0, j2, k0, k2 = _s412_coefficients(p, lamf, sigf, mf, s_pm, -s_pm)
    return SolutionParams(
        (j0, 0.0, j2, 0.0, 0.0), (k0, 0.0, k2),
        float(lamf), float(mf), float(sigf),
        "S412", Branch(pm=sign),
    )


def build_s421(p: ParameterSet, lam: Rational, sigma: Rational, m: Rational) -> SolutionParams:
    """Quartic-eta family for the c = 0 case; requires 4b != d."""
    if p.c != 0:
        raise DomainError("family S421 requires c = 0")
    a, b, d = p.a, p.b, p.d
    q = 4 * b - d
    if q == 0:
        raise DomainError("family S421 requires 4b - d != 0")
    mf = _require_m(m)
    lamf, sigf = _require_lam_sigma(lam, sigma)
    lam2 = lamf * lamf
    m2 = mf * mf
    sig2 = sigf * sigf
    pfac = 5 * b - 3 * d
    ecc = 2 * m2 - 1

    # leading coefficient -8: solving the reduced coefficient system pins it
    # (a -32 here fails the residual check by O(1))
    j0 = float(
        (-8 * b * lam2**2 * sig2**2 * q**2 * pfac * (11 * m2**2 - 11 * m2 - 4)
         + 3 * sig2 * q * (3 * d - 4 * b * (3 + 5 * a * lam2 * ecc))
         + 9 * a * a)
        / (9 * sig2 * q * q)
    )
    j2 = float(20 * b * lam2 * m2 * (3 * a + 4 * lam2 * sig2 * q * pfac * ecc)
               / (3 * q))
    j4 = float(-40 * b * lam2**2 * m2**2 * sig2 * pfac)
    k0 = float((-3 * a + sig2 * q * (3 - 20 * b * lam2 * ecc)) / (3 * sigf * q))
    k2 = float(20 * b * lam2 * m2 * sigf)
    return SolutionParams(
        (j0, 0.0, j2, 0.0, j4), (k0, 0.0, k2),
        float(lamf), float(mf), float(sigf), "S421",
    )


def build_s422(p: ParameterSet, lam: Rational, sigma: Rational, m: Rational) -> SolutionParams:
    """Even quadratic family for the c = 0 case; requires b != 2d."""
    if p.c != 0:
        raise DomainError("family S422 requires c = 0")
    a, b, d = p.a, p.b, p.d
    b2 = b - 2 * d
    if b2 == 0:
        raise DomainError("family S422 requires b - 2d != 0")
    mf = _require_m(m)
    lamf, sigf = _require_lam_sigma(lam, sigma)
    lam2 = lamf * lamf
    m2 = mf * mf
    sig2 = sigf * sigf
    ecc = 2 * m2 - 1

    j0 = float((a * a - sig2 * b2 * (b - 2 * d * (1 + 2 * a * lam2 * ecc)))
               / (sig2 * b2 * b2))
    j2 = float(-12 * a * d * lam2 * m2 / b2)
    k0 = float((a + sig2 * b2 * (1 - 4 * d * lam2 * ecc)) / (sigf * b2))
    k2 = float(12 * d * lam2 * m2 * sigf)
    return SolutionParams(
        (j0, 0.0, j2, 0.0, 0.0), (k0, 0.0, k2),
        float(lamf), float(mf), float(sigf), "S422",
    )


def build_s43(d: Rational, lam: Rational, sigma: Rational, m: Rational) -> SolutionParams:
    """Semi-trivial family eta = -1 for a = b = 0 (any c != 0 background)."""
    df = _frac(d, "d")
    mf = _require_m(m)
    lamf, sigf = _require_lam_sigma(lam, sigma)
    lam2 = lamf * lamf
    m2 = mf * mf
    k0 = float(-8 * df * lam2 * m2 * sigf + 4 * df * lam2 * sigf + sigf)
    k2 = float(12 * df * lam2 * m2 * sigf)
    return SolutionParams(
        (-1.0, 0.0, 0.0, 0.0, 0.0), (k0, 0.0, k2),
        float(lamf), float(mf), float(sigf), "S43",
    )


_FAMILY_BUILDERS = {
    "S411": build_s411,
    "S412": build_s412,
    "S421": build_s421,
    "S422": build_s422,
    "S43": build_s43,
}

FAMILY_SET_LABELS = {
    "4.1.1": "S411",
    "4.1.2": "S412",
    "4.2.1": "S421",
    "4.2.2": "S422",
    "4.3": "S43",
}


def build_family(tag: str, *args, **kwargs) -> SolutionParams:
    """Dispatch on a family tag ("S412") or set label ("4.1.2")."""
    tag = FAMILY_SET_LABELS.get(tag, tag)
    try:
        builder = _FAMILY_BUILDERS[tag]
    except KeyError:
        raise UsageError(f"unknown family {tag!r}") from None
    return builder(*args, **kwargs)


def m1_limit(tag: str, *args, **kwargs) -> SolutionParams:
    """Evaluate a family at m = 1: cn degenerates to sech.

    The returned coefficients describe the solitary profile
    eta = j0 + j1 sech + j2 sech^2 (+ j4 sech^4), w analogous; evaluation
    goes through the same cn machinery since cn(., 1) = sech.  The family
    validity predicate is checked at m = 1 and DomainError propagates.
    """
    kwargs = dict(kwargs)
    kwargs["m"] = 1
    sol = build_family(tag, *args, **kwargs)
    return SolutionParams(
        sol.j, sol.k, sol.lam, 1.0, sol.sigma,
        "SolitaryLimit", sol.branch, origin=sol.family_tag,
    )
