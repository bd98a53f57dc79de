"""Ansatz-shape classification and machine-checked series termination.

``classify_ansatz`` is the four-way case table on exact rational
(a, b, c, d):

    c != 0, a^2+b^2 != 0  ->  quadratic/quadratic      (2, 2)
    c != 0, a = b = 0     ->  constant eta, quadratic w (0, 2)
    c = 0,  b^2+d^2 != 0  ->  quartic eta, quadratic w  (4, 2)
    c = 0,  b = d = 0     ->  trivial only              (0, 0)

``verify_termination`` rebuilds the symbolic coefficient system at series
degree n and replays the forced-vanishing argument: a leading equation
that factors as (nonzero monomial) * u^e forces u = 0; one that factors
as (monomial) * u * v splits into two branches, both of which are
explored; an equation linear in some u with constant coefficient may be
used to eliminate u; a cofactor that is a sum of same-sign even-power
terms with a lam/m-only term is sign-definite and cannot vanish.  The
chain must drive every coefficient above the classified shape degrees to
zero, in every branch, or ChainBrokenError is raised.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cnexpr import build_coefficient_system
from .errors import ChainBrokenError, UsageError
from .families import ParameterSet
from .ratpoly import Monomial, RationalPoly

# lam > 0 and m > 0 always; c joins when the c != 0 case is in force
_POSITIVE_VARS = frozenset({"lam", "m"})


class AnsatzShape(enum.Enum):
    GENERIC_QUADRATIC = "GenericQuadratic"
    SEMI_TRIVIAL_ETA_CONSTANT = "SemiTrivialEtaConstant"
    QUARTIC_ETA_QUADRATIC_W = "QuarticEtaQuadraticW"
    TRIVIAL_ONLY = "TrivialOnly"

    @property
    def max_eta_degree(self) -> int:
        return _SHAPE_DEGREES[self][0]

    @property
    def max_w_degree(self) -> int:
        return _SHAPE_DEGREES[self][1]

    @property
    def degrees(self) -> tuple[int, int]:
        return _SHAPE_DEGREES[self]


_SHAPE_DEGREES = {
    AnsatzShape.GENERIC_QUADRATIC: (2, 2),
    AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT: (0, 2),
    AnsatzShape.QUARTIC_ETA_QUADRATIC_W: (4, 2),
    AnsatzShape.TRIVIAL_ONLY: (0, 0),
}


def classify_ansatz(p: ParameterSet) -> AnsatzShape:
    """Exact zero tests on rational (a, b, c, d); discontinuous by design."""
    if p.c != 0:
        if p.a == 0 and p.b == 0:
            return AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT
        return AnsatzShape.GENERIC_QUADRATIC
    if p.b == 0 and p.d == 0:
        return AnsatzShape.TRIVIAL_ONLY
    return AnsatzShape.QUARTIC_ETA_QUADRATIC_W


def _is_forceable(name: str) -> bool:
    return name[0] in "jk" and name[1:].isdigit() and int(name[1:]) >= 1


def _is_sign_definite(poly: RationalPoly, allowed: frozenset[str]) -> bool:
    """True when the polynomial cannot vanish for real variable values with
    lam, m > 0 and the ``allowed`` symbols nonzero."""
    if poly.is_zero():
        return False
    signs = {coef > 0 for coef in poly.terms.values()}
    if len(signs) != 1:
        return False
    anchored = False
    for mono in poly.terms:
        names = set()
        for name, exp in mono:
            names.add(name)
            if name not in _POSITIVE_VARS and exp % 2:
                return False
        if names <= _POSITIVE_VARS | allowed:
            anchored = True
    if not poly.terms.get((), None) is None:
        anchored = True
    return anchored


@dataclass
class ChainEvent:
    var: str
    eq: Optional[tuple[int, int]]
    move: str
    detail: str

    def to_dict(self):
        return {"var": self.var, "eq": list(self.eq) if self.eq else None,
                "move": self.move, "detail": self.detail}


@dataclass
class ChainBranch:
    events: list[ChainEvent]
    eta_degree: int
    w_degree: int

    def to_dict(self):
        return {
            "events": [e.to_dict() for e in self.events],
            "eta_degree": self.eta_degree,
            "w_degree": self.w_degree,
        }


@dataclass
class DegreeResult:
    n: int
    branches: list[ChainBranch]
    realized_degrees: tuple[int, int]
    ok: bool

    def to_dict(self):
        return {
            "n": self.n,
            "branches": [b.to_dict() for b in self.branches],
            "realized_degrees": list(self.realized_degrees),
            "ok": self.ok,
        }


@dataclass
class TerminationReport:
    case: str
    shape: AnsatzShape
    results: list[DegreeResult] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self):
        return {
            "case": self.case,
            "shape": self.shape.value,
            "shape_degrees": list(self.shape.degrees),
            "passed": self.passed,
            "results": [r.to_dict() for r in self.results],
            "notes": self.notes,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


class _Chain:
    """One exploration state: live equations plus the zero/elimination log."""

    def __init__(self, eqs, allowed, events, eliminated):
        self.eqs: dict[tuple[int, int], RationalPoly] = eqs
        self.allowed = allowed
        self.events: list[ChainEvent] = events
        self.eliminated: dict[str, RationalPoly] = eliminated

    def clone(self):
        return _Chain(dict(self.eqs), self.allowed, list(self.events),
                      dict(self.eliminated))

    def substitute_zero(self, names: list[str]):
        subs = {n: Fraction(0) for n in names}
        self.eqs = {k: p.substitute(subs) for k, p in self.eqs.items()}

    def forced_vars(self) -> set[str]:
        return {e.var for e in self.events if e.move != "eliminate"}

    # -- move scans -----------------------------------------------------
    def _factor(self, poly: RationalPoly):
        """Split into (unknowns of the content monomial, cofactor, ok)."""
        gcd: Monomial = poly.monomial_gcd()
        unknowns = [n for n, _ in gcd if _is_forceable(n)]
        outside = [n for n, _ in gcd
                   if not _is_forceable(n)
                   and n not in self.allowed and n not in _POSITIVE_VARS]
        if outside or not unknowns:
            return None
        cofactor = poly.divide_by_monomial(gcd)
        if cofactor.is_constant() or _is_sign_definite(cofactor, self.allowed):
            return unknowns, cofactor
        return None

    def scan(self):
        forced: list[tuple[tuple[int, int], str, RationalPoly]] = []
        branches = []
        for key in sorted(self.eqs, key=lambda k: (-k[1], k[0])):
            poly = self.eqs[key]
            if poly.is_zero():
                continue
            got = self._factor(poly)
            if got is None:
                continue
            unknowns, _ = got
            if len(unknowns) == 1:
                forced.append((key, unknowns[0], poly))
            else:
                branches.append((key, unknowns, poly))
        return forced, branches

    def elimination_candidates(self):
        """Equations linear in some j/k unknown with a constant coefficient."""
        out = []
        for key, poly in self.eqs.items():
            if poly.is_zero():
                continue
            for name in sorted(poly.variables(), key=lambda n: n):
                if not _is_forceable(name):
                    continue
                if poly.degree_in(name) != 1:
                    continue
                coef_terms = {m: c for m, c in poly.terms.items()
                              if any(n == name for n, _ in m)}
                if len(coef_terms) != 1:
                    continue
                (mono, coef), = coef_terms.items()
                if any(n != name for n, _ in mono):
                    continue
                rest = RationalPoly({m: c for m, c in poly.terms.items()
                                     if m != mono})
                out.append((len(poly.terms), key[1], key[0], name, key,
                            rest * (Fraction(-1) / coef)))
        out.sort(key=lambda t: (t[0], t[1], t[2], t[3]))
        return out


def _resolve_eliminated(chain: _Chain) -> dict[str, bool]:
    """Which eliminated variables end up identically zero."""
    zeros = {v: Fraction(0) for v in chain.forced_vars()}
    status = {}
    defs = dict(chain.eliminated)
    for _ in range(len(defs) + 1):
        progressed = False
        for name, poly in list(defs.items()):
            resolved = poly.substitute(zeros)
            others = {v for v in resolved.variables() if v in defs and v != name}
            if not others:
                status[name] = resolved.is_zero()
                if resolved.is_zero():
                    zeros[name] = Fraction(0)
                defs.pop(name)
                progressed = True
        if not progressed:
            break
    for name in defs:
        status[name] = False
    return status


def _live_degrees(chain: _Chain, n: int) -> tuple[int, int]:
    zero_vars = chain.forced_vars()
    elim_status = _resolve_eliminated(chain)
    eta_deg = w_deg = 0
    for r in range(1, n + 1):
        for prefix in ("j", "k"):
            name = f"{prefix}{r}"
            if name in zero_vars or elim_status.get(name, False):
                continue
            if prefix == "j":
                eta_deg = max(eta_deg, r)
            else:
                w_deg = max(w_deg, r)
    return eta_deg, w_deg


def _run_chain(chain: _Chain, n: int, shape: AnsatzShape,
               depth: int = 0) -> list[ChainBranch]:
    if depth > 64:
        raise ChainBrokenError("branch recursion exceeded its bound")
    while True:
        forced, branch_eqs = chain.scan()
        if forced:
            newly = []
            for key, var, poly in forced:
                if var in newly:
                    continue
                newly.append(var)
                chain.events.append(
                    ChainEvent(var, key, "forced", poly.to_text()))
            chain.substitute_zero(newly)
            continue
        if branch_eqs:
            key, unknowns, poly = branch_eqs[0]
            out = []
            for var in unknowns:
                sub = chain.clone()
                sub.events.append(
                    ChainEvent(var, key, "branch", poly.to_text()))
                sub.substitute_zero([var])
                out.extend(_run_chain(sub, n, shape, depth + 1))
            return out
        # Elimination is the endgame move for chains that must close all
        # the way down (the trivial shape); while the live degrees already
        # sit at the target the chain is done.
        eta_deg, w_deg = _live_degrees(chain, n)
        if eta_deg <= shape.max_eta_degree and w_deg <= shape.max_w_degree:
            break
        elim = chain.elimination_candidates()
        if elim:
            _, _, _, name, key, definition = elim[0]
            chain.eliminated[name] = definition
            chain.events.append(
                ChainEvent(name, key, "eliminate",
                           f"{name} := {definition.to_text()}"))
            chain.eqs = {k: p.substitute({name: definition})
                         for k, p in chain.eqs.items()}
            continue
        break

    eta_deg, w_deg = _live_degrees(chain, n)
    if eta_deg > shape.max_eta_degree or w_deg > shape.max_w_degree:
        raise ChainBrokenError(
            f"chain stalled at degrees ({eta_deg}, {w_deg}) above the "
            f"classified shape {shape.degrees} for n={n}; "
            f"last events: {[e.to_dict() for e in chain.events[-3:]]}"
        )
    return [ChainBranch(chain.events, eta_deg, w_deg)]


_SYMBOLIC_CASES = {
    "c_nonzero": (AnsatzShape.GENERIC_QUADRATIC, frozenset({"c"}), None),
    "c_zero": (AnsatzShape.QUARTIC_ETA_QUADRATIC_W, frozenset(), {"c": 0}),
}


def verify_termination(p: Optional[ParameterSet] = None, n_max: int = 5, *,
                       case: Optional[str] = None,
                       n_min: int = 3) -> TerminationReport:
    """Replay the forced-vanishing chains for degrees n_min..n_max.

    Either pass ``p`` (exact rationals; the shape is classified and the
    numeric values are substituted) or ``case`` in {"c_nonzero", "c_zero"}
    for the fully symbolic runs with generic coefficients.
    """
    if not 3 <= n_min <= n_max <= 8:
        raise UsageError("termination degrees must satisfy 3 <= n_min <= n_max <= 8")
    if (p is None) == (case is None):
        raise UsageError("pass exactly one of p or case")

    if case is not None:
        if case not in _SYMBOLIC_CASES:
            raise UsageError(f"case must be 'c_nonzero' or 'c_zero', got {case!r}")
        shape, extra_allowed, params = _SYMBOLIC_CASES[case]
        label = f"{case} (symbolic)"
    else:
        shape = classify_ansatz(p)
        extra_allowed = frozenset()
        params = {"a": p.a, "b": p.b, "c": p.c, "d": p.d}
        label = f"a={p.a}, b={p.b}, c={p.c}, d={p.d}"

    report = TerminationReport(case=label, shape=shape)
    if shape in (AnsatzShape.QUARTIC_ETA_QUADRATIC_W, AnsatzShape.TRIVIAL_ONLY):
        report.notes.append(
            "governing split: c = 0 (with b = d = 0 reducing further to the "
            "trivial shape); any labeling of that subcase under c != 0 is a "
            "mislabel -- the c = 0 reading is used here")

    for n in range(n_min, n_max + 1):
        system = build_coefficient_system(n, n, params=params)
        chain = _Chain(dict(system.nonzero()), extra_allowed, [], {})
        branches = _run_chain(chain, n, shape)
        realized = (max(b.eta_degree for b in branches),
                    max(b.w_degree for b in branches))
        # every branch must close down to the shape bound; equality with
        # the bound is additionally demanded in the symbolic runs, where
        # the coefficients are generic (special rational points may close
        # further, e.g. a = b = d = 0 kills the w series too)
        ok = all(b.eta_degree <= shape.max_eta_degree
                 and b.w_degree <= shape.max_w_degree
                 for b in branches)
        if case is not None:
            expected = (min(shape.max_eta_degree, n), min(shape.max_w_degree, n))
            ok = ok and realized == expected
        report.results.append(DegreeResult(n, branches, realized, ok))
    return report
