from fractions import Fraction as F

import pytest

from abcdwaves.cnexpr import cn_series
from abcdwaves.errors import UsageError
from abcdwaves.families import ParameterSet
from abcdwaves.reduction import (AnsatzShape, classify_ansatz,
                                 verify_termination)

P = ParameterSet.make


# one classification sample per call; five points per region
CLASSIFICATION_GRID = [
    (P(F(-5, 6), 1, F(-5, 6), 1), AnsatzShape.GENERIC_QUADRATIC),
    (P(1, F(-8, 3), 1, 1), AnsatzShape.GENERIC_QUADRATIC),
    (P(0, 1, F(1, 7), 0), AnsatzShape.GENERIC_QUADRATIC),
    (P(F(2, 3), 0, -2, F(1, 5)), AnsatzShape.GENERIC_QUADRATIC),
    (P(-7, 2, F(4, 3), 4), AnsatzShape.GENERIC_QUADRATIC),
    (P(0, 0, F(1, 2), F(-1, 6)), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(0, 0, -1, 0), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(0, 0, F(1, 3), F(1, 3)), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(0, 0, F(-2, 3), 2), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(0, 0, 5, 5), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(1, -1, 0, F(1, 3)), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(0, F(1, 6), 0, F(1, 6)), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(F(-11, 3), 2, 0, 2), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(3, 0, 0, F(1, 3)), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(0, F(-5, 3), 0, 2), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(F(1, 3), 0, 0, 0), AnsatzShape.TRIVIAL_ONLY),
    (P(2, 0, 0, 0), AnsatzShape.TRIVIAL_ONLY),
    (P(0, 0, 0, 0), AnsatzShape.TRIVIAL_ONLY),
    (P(F(7, 2), 0, 0, 0), AnsatzShape.TRIVIAL_ONLY),
    (P(F(1, 100), 0, 0, 0), AnsatzShape.TRIVIAL_ONLY),
]


@pytest.mark.parametrize("p,shape", CLASSIFICATION_GRID)
def test_classification_grid(p, shape):
    got = classify_ansatz(p)
    assert got is shape
    assert got.degrees == shape.degrees


def test_shape_degree_table():
    assert AnsatzShape.GENERIC_QUADRATIC.degrees == (2, 2)
    assert AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT.degrees == (0, 2)
    assert AnsatzShape.QUARTIC_ETA_QUADRATIC_W.degrees == (4, 2)
    assert AnsatzShape.TRIVIAL_ONLY.degrees == (0, 0)


def test_symbolic_c_nonzero_first_forced_zero_at_n4():
    report = verify_termination(case="c_nonzero", n_min=4, n_max=4)
    assert report.passed
    events = report.results[0].branches[0].events
    assert events[0].var == "k4"
    assert events[0].eq == (2, 7)
    assert events[0].detail == "4*k4^2"


def test_symbolic_c_zero_n5_forces_k5_then_j5():
    report = verify_termination(case="c_zero", n_min=5, n_max=5)
    assert report.passed
    order = [e.var for e in report.results[0].branches[0].events]
    assert order.index("k5") < order.index("j5")
    assert {"k5", "k4", "k3", "j5"} <= set(order)


def test_symbolic_chains_pass_n3_to_n5():
    for case in ("c_nonzero", "c_zero"):
        report = verify_termination(case=case, n_max=5)
        assert report.passed, report.to_json()


def test_semi_trivial_chain_forces_all_eta_coefficients():
    report = verify_termination(P(0, 0, F(1, 2), F(1, 3)), 3)
    assert report.passed
    assert report.shape is AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT
    for result in report.results:
        for branch in result.branches:
            assert branch.eta_degree == 0


def test_trivial_only_chain_closes_completely():
    report = verify_termination(P(F(1, 3), 0, 0, 0), 4)
    assert report.passed
    for result in report.results:
        assert result.realized_degrees == (0, 0)


GENERIC_GRID_POINTS = [
    # representatives with no extra degeneracy (each region's families
    # stay at full degree here)
    (P(F(-5, 6), 1, F(-5, 6), 1), AnsatzShape.GENERIC_QUADRATIC),
    (P(-7, 2, F(4, 3), 4), AnsatzShape.GENERIC_QUADRATIC),
    (P(0, 0, F(1, 2), F(-1, 6)), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(0, 0, F(-2, 3), 2), AnsatzShape.SEMI_TRIVIAL_ETA_CONSTANT),
    (P(1, -1, 0, F(1, 3)), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(F(-11, 3), 2, 0, 2), AnsatzShape.QUARTIC_ETA_QUADRATIC_W),
    (P(F(1, 3), 0, 0, 0), AnsatzShape.TRIVIAL_ONLY),
]


def test_chain_agrees_with_classification_on_grid():
    # at generic points the chain stabilizes exactly at the classified
    # degrees; every grid point must stay within them
    for p, shape in CLASSIFICATION_GRID:
        report = verify_termination(p, 3)
        assert report.passed, (p, shape)
        eta_d, w_d = report.results[0].realized_degrees
        assert eta_d <= shape.max_eta_degree and w_d <= shape.max_w_degree
    for p, shape in GENERIC_GRID_POINTS:
        report = verify_termination(p, 3)
        realized = report.results[0].realized_degrees
        assert realized == (min(shape.max_eta_degree, 3),
                            min(shape.max_w_degree, 3)), (p, shape)


def test_trivial_region_needs_positive_a():
    # with b = c = d = 0 the closure argument rests on a sum of squares
    # that is only sign-definite for a >= 0; the parameterization
    # constraint pins a = 1/3 there, but an unphysical a < 0 admits real
    # nonzero k1 (k1^2 = -4 a lam^2 m^2) and the chain honestly stalls
    from abcdwaves.errors import ChainBrokenError
    with pytest.raises(ChainBrokenError):
        verify_termination(P(-2, 0, 0, 0), 3)


def test_argument_validation():
    with pytest.raises(UsageError):
        verify_termination(case="c_nonzero", n_max=9)
    with pytest.raises(UsageError):
        verify_termination()
    with pytest.raises(UsageError):
        verify_termination(P(1, 1, 1, 1), 4, case="c_nonzero")
    with pytest.raises(UsageError):
        verify_termination(case="sideways")


def test_c_zero_report_notes_governing_condition():
    report = verify_termination(case="c_zero", n_max=3)
    assert any("c = 0" in note for note in report.notes)


def test_report_serializes():
    report = verify_termination(case="c_nonzero", n_max=3)
    data = report.to_dict()
    assert data["passed"] is True
    assert data["shape"] == "GenericQuadratic"
    assert data["results"][0]["n"] == 3


# -- degree bookkeeping against the iteration tables -------------------------

def _build_state(n, w_top):
    """eta at full degree n, w truncated at w_top, plus derived expressions."""
    eta = cn_series(n, "eta")
    w_full = cn_series(n, "w")
    zeros = {f"k{r}": 0 for r in range(w_top + 1, n + 1)}
    w = w_full.substitute(zeros)
    d_eta, d_w = eta.differentiate(), w.differentiate()
    d3_eta = d_eta.differentiate().differentiate()
    d3_w = d_w.differentiate().differentiate()
    return {
        "eta'": d_eta, "w'": d_w, "eta'''": d3_eta, "w'''": d3_w,
        "(eta w)'": (eta * w).differentiate(), "w w'": w * d_w,
    }


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_rho_iteration_tables(n):
    # after i top-coefficient kills of w the cn orders must follow
    # eta': n-1   w': n-2-i   eta''': n+1   w''': n-i
    # (eta w)': 2n-2-i        w w': 2n-3-2i
    i = 0
    while 2 * n - 3 - 2 * i > n + 1:
        exprs = _build_state(n, n - 1 - i)
        assert exprs["eta'"].rho() == n - 1
        assert exprs["w'"].rho() == n - 2 - i
        assert exprs["eta'''"].rho() == n + 1
        assert exprs["w'''"].rho() == n - i
        assert exprs["(eta w)'"].rho() == 2 * n - 2 - i
        assert exprs["w w'"].rho() == 2 * n - 3 - 2 * i
        i += 1


def test_rho_initial_table():
    for n in (3, 4, 5, 6):
        eta = cn_series(n, "eta")
        w = cn_series(n, "w")
        assert eta.differentiate().rho() == n - 1
        assert w.differentiate().rho() == n - 1
        d3 = eta.differentiate().differentiate().differentiate()
        assert d3.rho() == n + 1
        assert (eta * w).differentiate().rho() == 2 * n - 1
        assert (w * w.differentiate()).rho() == 2 * n - 1
