import math
import random
from fractions import Fraction as F

import pytest

from abcdwaves.errors import ConstraintError, DomainError, UsageError
from abcdwaves.families import (Branch, ParameterSet, SolutionParams,
                                _s412_coefficients, build_family, build_s43,
                                build_s411, build_s412, build_s421, build_s422,
                                check_physical_constraint, m1_limit)
from abcdwaves.verifier import ode_residual


def residual_of(case, builder):
    kwargs = dict(case)
    p = kwargs.pop("p", None)
    if p is None:
        sol = builder(**kwargs)
        p = ParameterSet.make(0, 0, F(1, 2), kwargs["d"])
    else:
        sol = builder(p, **kwargs)
    return sol, ode_residual(sol, p, 256).relative


# -- physical constraint ---------------------------------------------------

def test_constraint_reference_point():
    theta = check_physical_constraint(ParameterSet.make(F(-5, 6), 1, F(-5, 6), 1))
    assert theta == pytest.approx(math.sqrt(2 / 3), abs=1e-15)


def test_constraint_second_point():
    theta = check_physical_constraint(ParameterSet.make(0, F(1, 6), 0, F(1, 6)))
    assert theta == pytest.approx(math.sqrt(2 / 3), abs=1e-15)


def test_constraint_violation():
    with pytest.raises(ConstraintError) as err:
        check_physical_constraint(ParameterSet.make(1, 1, 1, 1))
    assert any("1/3" in v for v in err.value.violations)


# -- reference parameter sets ----------------------------------------------

@pytest.mark.parametrize("key,builder", [
    ("s411_a", build_s411), ("s411_b", build_s411),
    ("s412_a", build_s412), ("s412_b", build_s412),
    ("s421_a", build_s421), ("s421_b", build_s421),
    ("s422_a", build_s422), ("s422_b", build_s422),
    ("s43", build_s43),
])
def test_reference_cases_satisfy_ode(reference_cases, key, builder):
    _, rel = residual_of(reference_cases[key], builder)
    assert rel <= 1e-9


def test_s411_lambda_sigma_are_outputs(reference_cases):
    case = reference_cases["s411_a"]
    sol = build_s411(case["p"], case["m"], case["tau1"], case["tau2"])
    assert sol.lam == pytest.approx(2 * math.sqrt(6), rel=1e-14)
    assert sol.sigma == pytest.approx(-2 * math.sqrt(10) / 3, rel=1e-14)
    # b = d makes the odd terms vanish exactly
    assert sol.j[1] == 0.0 and sol.k[1] == 0.0


def test_s411_rejects_half_sqrt2_modulus(reference_cases):
    with pytest.raises(DomainError, match="2m\\^2-1"):
        build_s411(reference_cases["s411_a"]["p"], math.sqrt(0.5))


def test_s411_rejects_violated_sign_condition():
    # a*c*(b-6d)*(3b-2d) > 0 here
    with pytest.raises(DomainError, match="validity"):
        build_s411(ParameterSet.make(F(5, 6), 1, F(-5, 6), 1), F(3, 4))


def test_m_zero_excluded_everywhere(reference_cases):
    with pytest.raises(DomainError, match="m = 0"):
        build_s411(reference_cases["s411_a"]["p"], 0)
    with pytest.raises(DomainError, match="m = 0"):
        build_s43(2, 1, 1, 0)


def test_s412_negative_radicand():
    p = ParameterSet.make(-10, 2, 10, 1)   # 8ac < 0, b = 2d
    with pytest.raises(DomainError, match="8ac"):
        build_s412(p, 1, F(1, 10), F(1, 2), "top")


def test_s412_bottom_branch_is_semi_trivial_at_a0(reference_cases):
    case = reference_cases["s412_b"]
    sol = build_s412(case["p"], case["lam"], case["sigma"], case["m"], "bottom")
    assert sol.j[0] == pytest.approx(-1.0, abs=1e-14)
    assert sol.j[2] == pytest.approx(0.0, abs=1e-14)
    ref = build_s43(case["p"].d, case["lam"], case["sigma"], case["m"])
    for x, y in zip(sol.j + sol.k, ref.j + ref.k):
        assert x == pytest.approx(y, abs=1e-14)


def test_s412_sign_validation(reference_cases):
    case = reference_cases["s412_a"]
    with pytest.raises(UsageError):
        build_s412(case["p"], 1, 1, 0.5, "middle")


def test_branch_coherence_negative(reference_cases):
    # mixing the +- and -+ sign slots must break the solution badly
    case = reference_cases["s412_a"]
    j0, j2, k0, k2 = _s412_coefficients(
        case["p"], F(1), F(1), F(case["m"]), 1, 1)
    mixed = SolutionParams((j0, 0.0, j2, 0.0, 0.0), (k0, 0.0, k2),
                           1.0, case["m"], 1.0, "S412", Branch(pm="top"))
    rel = ode_residual(mixed, case["p"], 256).relative
    assert rel > 1e-6


def test_s421_quartic_coefficient(reference_cases):
    case = reference_cases["s421_a"]
    sol = build_s421(case["p"], case["lam"], case["sigma"], case["m"])
    expected_j4 = float(-40 * (-1) * F(1, 2) ** 4 * F(1, 2) ** 4 * 4
                        * (5 * (-1) - 3 * F(1, 3)))
    assert sol.j[4] == pytest.approx(expected_j4, rel=1e-15)
    assert sol.j[1] == sol.j[3] == sol.k[1] == 0.0


def test_s421_degenerate_denominator():
    with pytest.raises(DomainError, match="4b - d"):
        build_s421(ParameterSet.make(1, F(1, 4), 0, 1), 1, 1, F(1, 2))


def test_s421_requires_c_zero():
    with pytest.raises(DomainError, match="c = 0"):
        build_s421(ParameterSet.make(1, -1, 1, F(1, 3)), 1, 1, F(1, 2))


def test_s422_degenerate_denominator():
    with pytest.raises(DomainError, match="b - 2d"):
        build_s422(ParameterSet.make(1, 2, 0, 1), 1, 1, F(1, 2))


def test_s422_at_a0_equals_s43(reference_cases):
    case = reference_cases["s422_b"]
    sol = build_s422(case["p"], case["lam"], case["sigma"], case["m"])
    assert sol.j[2] == 0.0
    ref = build_s43(2, case["lam"], case["sigma"], case["m"])
    for x, y in zip(sol.j + sol.k, ref.j + ref.k):
        assert x == pytest.approx(y, abs=1e-12)


def test_s43_reference_values():
    sol = build_s43(2, 2, F(1, 8), F(3, 4))
    assert sol.j[0] == -1.0
    assert sol.k[0] == pytest.approx(-0.375, abs=1e-15)
    assert sol.k[2] == pytest.approx(6.75, abs=1e-15)


def test_s43_constant_w_at_d0():
    sol = build_s43(0, 1.3, F(2, 3), F(1, 2))
    assert sol.k[2] == 0.0
    assert sol.k[0] == pytest.approx(2 / 3, rel=1e-15)


def test_sigma_zero_rejected():
    with pytest.raises(DomainError, match="sigma"):
        build_s43(1, 1, 0, F(1, 2))


def test_family_dispatch_labels(reference_cases):
    case = reference_cases["s412_a"]
    by_label = build_family("4.1.2", case["p"], 1, 1, case["m"], "top")
    by_tag = build_family("S412", case["p"], 1, 1, case["m"], "top")
    assert by_label.to_dict() == by_tag.to_dict()
    with pytest.raises(UsageError):
        build_family("4.9", case["p"], 1, 1, case["m"])


def test_json_round_trip(reference_cases):
    case = reference_cases["s411_b"]
    sol = build_s411(case["p"], case["m"], case["tau1"], case["tau2"])
    back = SolutionParams.from_dict(sol.to_dict())
    assert back == sol


@pytest.mark.parametrize("tau1", [1, -1])
@pytest.mark.parametrize("tau2", [1, -1])
def test_s411_all_four_sign_branches_are_solutions(reference_cases, tau1, tau2):
    # sigma carries tau1 only, so the four (tau1, tau2) combinations come
    # in direction-flipped pairs; all four satisfy the equations
    for key in ("s411_a", "s411_b"):
        case = reference_cases[key]
        sol = build_s411(case["p"], case["m"], tau1, tau2)
        assert ode_residual(sol, case["p"], 256).relative <= 1e-9
        assert sol.sigma * tau1 * build_s411(case["p"], case["m"], 1, 1).sigma > 0


# -- m -> 1 solitary limits --------------------------------------------------

def test_m1_limit_s412(reference_cases):
    case = reference_cases["s412_a"]
    sol = m1_limit("4.1.2", case["p"], 1, 1, sign="top")
    assert sol.m == 1.0 and sol.family_tag == "SolitaryLimit"
    assert sol.origin == "S412"
    assert ode_residual(sol, case["p"], 256).relative <= 1e-9


def test_m1_limit_s421_has_quartic_term(reference_cases):
    case = reference_cases["s421_b"]
    sol = m1_limit("4.2.1", case["p"], 1, 1)
    assert sol.j[4] != 0.0
    assert ode_residual(sol, case["p"], 256).relative <= 1e-9


def test_m1_limit_s411_mixed_terms():
    p = ParameterSet.make(F(-5, 6), 1, F(-1, 6), F(1, 3))
    sol = m1_limit("4.1.1", p, tau1=1, tau2=-1)
    assert sol.j[1] != 0.0 and sol.k[1] != 0.0
    assert ode_residual(sol, p, 256).relative <= 1e-9


def test_m1_limit_propagates_domain_error():
    # at m = 1 the sign condition c(2m^2-1)(b+2d)(3b+2d) < 0 fails here
    p = ParameterSet.make(F(-5, 6), 1, F(5, 6), 1)
    with pytest.raises(DomainError):
        m1_limit("4.1.1", p, tau1=1, tau2=1)


# -- randomized property checks ----------------------------------------------

def random_family_inputs(rng, family):
    """Rejection-sample inputs until the family's validity predicate holds."""
    for _ in range(400):
        a = F(rng.randint(-12, 12), rng.randint(1, 4))
        b = F(rng.randint(-12, 12), rng.randint(1, 4))
        c = F(rng.randint(-12, 12), rng.randint(1, 4))
        d = F(rng.randint(-12, 12), rng.randint(1, 4))
        lam = F(rng.randint(1, 12), rng.randint(1, 6))
        sigma = F(rng.randint(-12, 12), rng.randint(1, 6))
        m = F(rng.randint(5, 99), 100)
        try:
            if family == "S411":
                p = ParameterSet.make(a, b, c, d)
                tau1, tau2 = rng.choice([1, -1]), rng.choice([1, -1])
                sol = build_s411(p, m, tau1, tau2)
            elif family == "S412":
                p = ParameterSet.make(a, b, c, d)
                sol = build_s412(p, lam, sigma, m, rng.choice(["top", "bottom"]))
            elif family == "S421":
                p = ParameterSet.make(a, b, 0, d)
                sol = build_s421(p, lam, sigma, m)
            elif family == "S422":
                p = ParameterSet.make(a, b, 0, d)
                sol = build_s422(p, lam, sigma, m)
            else:
                p = ParameterSet.make(0, 0, c, d)
                sol = build_s43(d, lam, sigma, m)
            return p, sol
        except DomainError:
            continue
    raise AssertionError(f"could not sample valid inputs for {family}")


@pytest.mark.parametrize("family", ["S411", "S412", "S421", "S422", "S43"])
def test_randomized_inputs_pass_residual(family):
    rng = random.Random(hash(family) % 100000)
    for _ in range(25):
        p, sol = random_family_inputs(rng, family)
        rel = ode_residual(sol, p, 256).relative
        assert rel <= 1e-9, f"{family}: residual {rel} at {p}, {sol.to_dict()}"


def test_perturbed_coefficient_detected(reference_cases):
    case = reference_cases["s412_a"]
    sol = build_s412(case["p"], case["lam"], case["sigma"], case["m"], "top")
    j = list(sol.j)
    j[2] *= 1 + 1e-3
    bad = SolutionParams(tuple(j), sol.k, sol.lam, sol.m, sol.sigma,
                         sol.family_tag, sol.branch)
    assert ode_residual(bad, case["p"], 256).relative >= 1e-5
