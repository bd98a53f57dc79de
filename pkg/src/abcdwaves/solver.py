"""Numerical rediscovery of solution branches.

A symbolic coefficient system is pinned (exact substitution of chosen
values), compiled to vectorized evaluators with the exact polynomial
Jacobian, and solved by damped Newton with a backtracking line search on
||h||^2.  Overdetermined systems (more equations than unknowns, which is
the normal situation here since the pinned systems carry structural
redundancy) take Gauss-Newton steps through the pseudoinverse and a root
is accepted only at ||h||_inf <= tol, so consistency of the redundant
equations is verified rather than assumed.

Multistart sampling is log-uniform in magnitude with random sign,
deterministic for a fixed seed; roots are sorted before deduplication so
the returned BranchSet is reproducible bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .cnexpr import CoefficientSystem, build_coefficient_system
from .errors import DomainError, UnderdeterminedError, UsageError
from .families import Branch, SolutionParams
from .ratpoly import RationalPoly, var_sort_key

Number = Union[int, float, Fraction]

_ZERO_TOL = 1e-8          # zero-pattern threshold for root classification
_DEDUP_REL = 1e-6
_DEDUP_ABS = 1e-9
_SIGMA_TOL = 1e-10


def _compile(polys: Sequence[RationalPoly], unknowns: Sequence[str]):
    """Stack all monomials of all polynomials into flat arrays.

    Returns (coeffs, expts, offsets) so that for a batch X of shape (B, n),
    np.add.reduceat(coeffs * prod(X**expts), offsets, axis=1) evaluates
    every polynomial at once.
    """
    index = {name: i for i, name in enumerate(unknowns)}
    coeffs: list[float] = []
    expts: list[list[int]] = []
    offsets: list[int] = []
    for poly in polys:
        offsets.append(len(coeffs))
        if poly.is_zero():
            coeffs.append(0.0)
            expts.append([0] * len(unknowns))
            continue
        for mono, coef in sorted(poly.terms.items()):
            row = [0] * len(unknowns)
            for name, exp in mono:
                row[index[name]] = exp
            coeffs.append(float(coef))
            expts.append(row)
    expts_arr = np.asarray(expts, dtype=np.int64)
    return (np.asarray(coeffs), expts_arr, np.asarray(offsets, dtype=np.intp),
            int(expts_arr.max(initial=0)))


def _eval_compiled(compiled, X):
    coeffs, expts, offsets, e_max = compiled
    # power table + gather: integer powers via repeated multiplication beat
    # float pow by an order of magnitude on these small exponents
    B, n = X.shape
    powers = np.ones((B, n, e_max + 1))
    for e in range(1, e_max + 1):
        powers[:, :, e] = powers[:, :, e - 1] * X
    factors = powers[:, np.arange(n), expts]
    terms = coeffs * np.prod(factors, axis=2)
    return np.add.reduceat(terms, offsets, axis=1)


@dataclass
class HSystemNumeric:
    """A pinned polynomial system ready for Newton iteration."""

    unknowns: list[str]
    polys: list[RationalPoly]
    keys: list[tuple[int, int]]
    pinned: dict[str, Fraction]

    def __post_init__(self):
        self._f = _compile(self.polys, self.unknowns)
        jac_polys = [p.derivative(u) for p in self.polys for u in self.unknowns]
        self._j = _compile(jac_polys, self.unknowns)

    @property
    def n_equations(self) -> int:
        return len(self.polys)

    @property
    def n_unknowns(self) -> int:
        return len(self.unknowns)

    def residual(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return _eval_compiled(self._f, X)

    def jacobian(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        flat = _eval_compiled(self._j, X)
        return flat.reshape(X.shape[0], self.n_equations, self.n_unknowns)

    def vector_from_map(self, values: Mapping[str, Number]) -> np.ndarray:
        return np.array([float(values[u]) for u in self.unknowns])


def pin_and_square(system: CoefficientSystem, pins: Mapping[str, Number]) -> HSystemNumeric:
    """Substitute pinned values exactly and drop identically-zero equations.

    Raises UnderdeterminedError when fewer equations than unknowns remain
    (the caller must pin enough variables), and rejects pins violating
    lam > 0, m in (0, 1], sigma != 0.
    """
    exact = {name: Fraction(v) for name, v in pins.items()}
    if "lam" in exact and exact["lam"] <= 0:
        raise DomainError("pinned lam must be > 0")
    if "m" in exact and not 0 < exact["m"] <= 1:
        raise DomainError("pinned m must lie in (0, 1]")
    if "sigma" in exact and exact["sigma"] == 0:
        raise DomainError("pinned sigma must be nonzero")

    polys, keys = [], []
    for key in sorted(system.equations, key=lambda k: (k[0], -k[1])):
        poly = system.equations[key].substitute(exact)
        if not poly.is_zero():
            polys.append(poly)
            keys.append(key)
    unknowns: set[str] = set()
    for poly in polys:
        unknowns |= poly.variables()
    ordered = sorted(unknowns, key=var_sort_key)
    if len(polys) < len(ordered):
        raise UnderdeterminedError(len(polys), len(ordered))
    return HSystemNumeric(ordered, polys, keys, exact)


@dataclass(frozen=True)
class NewtonOptions:
    max_iter: int = 200
    tol: float = 1e-12
    cond_max: float = 1e14
    armijo: float = 1e-4
    min_step: float = 1e-14


@dataclass
class NewtonResult:
    status: str                      # converged | diverged | singular
    x: np.ndarray
    iterations: int
    hinf: float
    history: list[float]
    trajectory: list[np.ndarray]
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def solve_newton(sysn: HSystemNumeric, seed: Sequence[float],
                 opts: NewtonOptions = NewtonOptions()) -> NewtonResult:
    """Damped Newton from one seed; see the module docstring for the rules."""
    x = np.asarray(seed, dtype=float).copy()
    if x.shape != (sysn.n_unknowns,):
        raise UsageError(
            f"seed has shape {x.shape}, expected ({sysn.n_unknowns},)")
    history: list[float] = []
    trajectory = [x.copy()]
    for it in range(opts.max_iter):
        h = sysn.residual(x[None, :])[0]
        hinf = float(np.max(np.abs(h))) if h.size else 0.0
        history.append(hinf)
        if not np.isfinite(hinf):
            return NewtonResult("diverged", x, it, hinf, history, trajectory,
                                "residual overflow")
        if hinf <= opts.tol:
            return NewtonResult("converged", x, it, hinf, history, trajectory)
        J = sysn.jacobian(x[None, :])[0]
        svals = np.linalg.svd(J, compute_uv=False)
        if svals[-1] == 0.0 or svals[0] / svals[-1] > opts.cond_max:
            return NewtonResult("singular", x, it, hinf, history, trajectory,
                                f"condition estimate {svals[0] / max(svals[-1], 1e-300):.3e}")
        dx = -np.linalg.pinv(J, rcond=1e-14) @ h
        base = float(h @ h)
        alpha = 1.0
        while alpha >= opts.min_step:
            hc = sysn.residual((x + alpha * dx)[None, :])[0]
            if np.all(np.isfinite(hc)) and float(hc @ hc) <= (1 - opts.armijo * alpha) * base:
                break
            alpha *= 0.5
        else:
            return NewtonResult("diverged", x, it, hinf, history, trajectory,
                                "line search step collapse")
        x = x + alpha * dx
        trajectory.append(x.copy())
    h = sysn.residual(x[None, :])[0]
    hinf = float(np.max(np.abs(h)))
    history.append(hinf)
    if hinf <= opts.tol:
        return NewtonResult("converged", x, opts.max_iter, hinf, history, trajectory)
    return NewtonResult("diverged", x, opts.max_iter, hinf, history, trajectory,
                        "iteration budget exhausted")


def _newton_batch(sysn: HSystemNumeric, X0: np.ndarray,
                  opts: NewtonOptions) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized damped Newton over all rows of X0.

    Returns (X, converged_mask, iterations).  Rows stop moving once they
    converge, overflow, or their line search collapses.
    """
    X = X0.astype(float).copy()
    B = X.shape[0]
    active = np.ones(B, dtype=bool)
    converged = np.zeros(B, dtype=bool)
    iters = np.zeros(B, dtype=np.int64)
    escape = 1e7      # iterates this large never return to figure-scale roots
    for _ in range(opts.max_iter):
        if not active.any():
            break
        Xa = X[active]
        with np.errstate(all="ignore"):
            H = _eval_compiled(sysn._f, Xa)
        finite = (np.isfinite(H).all(axis=1) & np.isfinite(Xa).all(axis=1)
                  & (np.abs(Xa).max(axis=1) < escape))
        hinf = np.where(finite, np.max(np.abs(np.where(np.isfinite(H), H, np.inf)),
                                       axis=1), np.inf)
        just_conv = finite & (hinf <= opts.tol)
        idx_active = np.flatnonzero(active)
        converged[idx_active[just_conv]] = True
        active[idx_active[just_conv]] = False
        active[idx_active[~finite]] = False
        keep = finite & ~just_conv
        if not keep.any():
            continue
        idx = idx_active[keep]
        Xa, H = Xa[keep], H[keep]
        J = _eval_compiled(sysn._j, Xa).reshape(Xa.shape[0], sysn.n_equations,
                                                sysn.n_unknowns)
        with np.errstate(all="ignore"):
            dx = -np.einsum("bij,bj->bi", np.linalg.pinv(J, rcond=1e-14), H)
        base = np.einsum("bi,bi->b", H, H)
        alpha = np.ones(Xa.shape[0])
        settled = np.zeros(Xa.shape[0], dtype=bool)
        pending = np.arange(Xa.shape[0])
        for _ls in range(50):
            Xc = Xa[pending] + alpha[pending, None] * dx[pending]
            with np.errstate(all="ignore"):
                Hc = _eval_compiled(sysn._f, Xc)
            good = np.isfinite(Hc).all(axis=1)
            dec = np.zeros_like(good)
            dec[good] = np.einsum("bi,bi->b", Hc[good], Hc[good]) <= \
                (1 - opts.armijo * alpha[pending][good]) * base[pending][good]
            settled[pending[dec]] = True
            pending = pending[~dec]
            if pending.size == 0:
                break
            alpha[pending] *= 0.5
            if alpha[pending].max(initial=0.0) < opts.min_step:
                break
        X[idx[settled]] = (Xa + alpha[:, None] * dx)[settled]
        iters[idx[settled]] += 1
        active[idx[~settled]] = False   # line search collapse: drop the row
    # final convergence sweep (a row may land exactly on a root on its
    # last accepted step)
    with np.errstate(all="ignore"):
        H = _eval_compiled(sysn._f, X)
        hinf = np.max(np.abs(H), axis=1)
    converged |= np.isfinite(np.asarray(hinf)) & (hinf <= opts.tol) & \
        np.isfinite(X).all(axis=1)
    return X, converged, iters


@dataclass
class RootRecord:
    values: dict[str, float]
    classification: str
    hinf: float
    hits: int
    first_seed_index: int

    def to_dict(self):
        return {
            "values": self.values,
            "classification": self.classification,
            "hinf": self.hinf,
            "hits": self.hits,
            "first_seed_index": self.first_seed_index,
        }


@dataclass
class BranchSet:
    roots: list[RootRecord]
    pinned: dict[str, float]
    n_starts: int
    n_converged: int
    seed: int

    def nontrivial(self) -> list[RootRecord]:
        return [r for r in self.roots if r.classification == "non-trivial"]

    def to_dict(self):
        return {
            "roots": [r.to_dict() for r in self.roots],
            "pinned": self.pinned,
            "n_starts": self.n_starts,
            "n_converged": self.n_converged,
            "seed": self.seed,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _classify_pattern(values: Mapping[str, float]) -> str:
    eta_live = any(abs(values.get(f"j{r}", 0.0)) > _ZERO_TOL for r in range(1, 9))
    w_live = any(abs(values.get(f"k{r}", 0.0)) > _ZERO_TOL for r in range(1, 9))
    if eta_live and w_live:
        return "non-trivial"
    if eta_live or w_live:
        return "semi-trivial"
    return "trivial"


def _dedup(roots: list[tuple[np.ndarray, float, int]]):
    roots = sorted(roots, key=lambda t: tuple(np.round(t[0], 12)))
    kept: list[list] = []
    for x, hinf, seed_idx in roots:
        merged = False
        for entry in kept:
            y = entry[0]
            tol = np.maximum(_DEDUP_ABS, _DEDUP_REL * np.maximum(np.abs(x), np.abs(y)))
            if np.all(np.abs(x - y) <= tol):
                entry[2] += 1
                if hinf < entry[1]:
                    entry[0], entry[1] = x, hinf
                merged = True
                break
        if not merged:
            kept.append([x, hinf, 1, seed_idx])
    return kept


def multistart(sysn: HSystemNumeric, n_starts: int,
               sampler_ranges: Optional[tuple[float, float]] = None,
               seed_rng: int = 0,
               opts: NewtonOptions = NewtonOptions()) -> BranchSet:
    """Run damped Newton from n_starts sampled seeds and collect the roots.

    Seeds are log-uniform in magnitude over sampler_ranges (default
    (1e-3, 10), i.e. within [-10, 10]) with random sign.  Roots are
    deduplicated at relative l_inf distance 1e-6 (absolute floor 1e-9)
    and classified trivial / semi-trivial / non-trivial from the
    zero-pattern of the j_r, k_r with r >= 1 (pinned values included).
    Deterministic for fixed seed_rng; an empty BranchSet is a valid result.
    """
    if n_starts < 1:
        raise UsageError("n_starts must be >= 1")
    lo, hi = sampler_ranges or (1e-3, 10.0)
    rng = np.random.default_rng(seed_rng)
    mags = 10.0 ** rng.uniform(np.log10(lo), np.log10(hi),
                               size=(n_starts, sysn.n_unknowns))
    signs = rng.choice([-1.0, 1.0], size=(n_starts, sysn.n_unknowns))
    X0 = mags * signs

    X, conv, _ = _newton_batch(sysn, X0, opts)
    found = []
    conv_idx = np.flatnonzero(conv)
    if conv_idx.size:
        hinf_all = np.max(np.abs(sysn.residual(X[conv_idx])), axis=1)
        found = [(X[i], float(h), int(i)) for i, h in zip(conv_idx, hinf_all)]

    records = []
    pinned_f = {k: float(v) for k, v in sysn.pinned.items()}
    for x, hinf, hits, seed_idx in _dedup(found):
        values = {u: float(v) for u, v in zip(sysn.unknowns, x)}
        pattern_ctx = {**pinned_f, **values}
        records.append(RootRecord(values, _classify_pattern(pattern_ctx),
                                  hinf, hits, seed_idx))
    return BranchSet(records, pinned_f, n_starts, len(found), seed_rng)


def promote_root(record: RootRecord, pinned: Mapping[str, float]) -> SolutionParams:
    """Lift a solver root to SolutionParams for the residual verifier.

    The family tag is inferred from the zero pattern (branch selectors are
    not recoverable from a bare root).
    """
    ctx = {**{k: float(v) for k, v in pinned.items()}, **record.values}
    j = tuple(ctx.get(f"j{r}", 0.0) for r in range(5))
    k = tuple(ctx.get(f"k{r}", 0.0) for r in range(3))
    lam, m, sigma = ctx.get("lam"), ctx.get("m"), ctx.get("sigma")
    if lam is None or m is None or sigma is None:
        raise UsageError("root does not determine lam, m and sigma")
    if abs(j[4]) > _ZERO_TOL or abs(j[3]) > _ZERO_TOL:
        tag = "S421"
    elif abs(j[1]) > _ZERO_TOL or abs(k[1]) > _ZERO_TOL:
        tag = "S411"
    elif any(abs(v) > _ZERO_TOL for v in j[1:]):
        tag = "S412"
    elif any(abs(v) > _ZERO_TOL for v in k[1:]):
        tag = "S43"
    else:
        tag = "S412"
    return SolutionParams(j, k, float(lam), float(m), float(sigma), tag, Branch())


@dataclass
class NonexistencePoint:
    pins: dict[str, float]
    n_converged_roots: int
    roots: list[dict]

    def to_dict(self):
        return {"pins": self.pins, "n_converged_roots": self.n_converged_roots,
                "roots": self.roots}


@dataclass
class NonexistenceReport:
    constrained: str
    value: float
    delta: float
    sigma_free: bool
    n_starts: int
    seed: int
    points: list[NonexistencePoint] = field(default_factory=list)
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def total_roots(self) -> int:
        return sum(pt.n_converged_roots for pt in self.points)

    @property
    def upheld(self) -> bool:
        return not self.counterexamples

    def to_dict(self):
        return {
            "constrained": self.constrained,
            "value": self.value,
            "delta": self.delta,
            "sigma_free": self.sigma_free,
            "n_starts": self.n_starts,
            "seed": self.seed,
            "total_roots": self.total_roots,
            "upheld": self.upheld,
            "counterexamples": self.counterexamples,
            "points": [pt.to_dict() for pt in self.points],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def reproduce_nonexistence(constrained: str, grid: Sequence[Mapping[str, Number]],
                           *, value: float = 0.1, delta: float = 1e-3,
                           n_starts: int = 500, seed: int = 0,
                           opts: NewtonOptions = NewtonOptions(max_iter=80)) -> NonexistenceReport:
    """Multistart sweeps of the full quartic-case system with one series
    coefficient pinned away from zero.

    ``constrained`` is one of "j1", "j3", "k1"; it is pinned to ``value``
    with |value| >= delta (the exclusion band is reported so the scope of
    the claim is explicit).  Grid points supply (a, b, d, lam, m, sigma).
    For the j1/j3 sweeps sigma stays pinned (nonzero); for the k1 sweep
    sigma is left free so that sigma ~ 0 roots can surface.  Every
    converged root is reported; a root contradicting the expectation
    (any root for j1/j3; a |sigma| > 1e-10 root for k1) is recorded as a
    counterexample, never suppressed.
    """
    if constrained not in ("j1", "j3", "k1"):
        raise UsageError("constrained must be one of 'j1', 'j3', 'k1'")
    if abs(value) < delta:
        raise UsageError(f"|value| = {abs(value)} must be >= delta = {delta}")
    sigma_free = constrained == "k1"
    system = build_coefficient_system(4, 2, params={"c": 0})
    report = NonexistenceReport(constrained, float(value), float(delta),
                                sigma_free, n_starts, seed)
    for i, point in enumerate(grid):
        pins = {"a": point["a"], "b": point["b"], "d": point["d"],
                "lam": point["lam"], "m": point["m"], constrained: value}
        if not sigma_free:
            pins["sigma"] = point["sigma"]
        sysn = pin_and_square(system, pins)
        branch_set = multistart(sysn, n_starts, seed_rng=seed + i, opts=opts)
        roots = []
        for rec in branch_set.roots:
            entry = {"values": rec.values, "hinf": rec.hinf,
                     "sigma": rec.values.get("sigma", float(Fraction(pins.get("sigma", 0))))}
            roots.append(entry)
            bad = (abs(entry["sigma"]) > _SIGMA_TOL) if sigma_free else True
            if bad:
                report.counterexamples.append(
                    {"pins": {k: float(Fraction(v)) for k, v in pins.items()},
                     **entry})
        report.points.append(NonexistencePoint(
            {k: float(Fraction(v)) for k, v in pins.items()},
            len(branch_set.roots), roots))
    return report
