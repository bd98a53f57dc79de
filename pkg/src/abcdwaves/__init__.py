"""Exact cnoidal traveling-wave solutions of the abcd-Boussinesq system.

Subpackages by role:

- ``elliptic``:  Jacobi sn/cn/dn and K(m) from scratch (AGM), modulus
  convention (m enters identities as m^2)
- ``ratpoly`` / ``cnexpr``:  exact rational polynomial engine and the
  cn-expression algebra that expands the traveling-wave residual into
  coefficient systems
- ``reduction``:  ansatz-shape classification and machine-checked series
  termination chains
- ``families``:  the five closed-form solution families, validity
  predicates, and the m -> 1 solitary limits
- ``solver``:  pinned numeric systems, damped Newton, multistart branch
  rediscovery, non-existence sweeps
- ``verifier``:  ODE residual, periodicity, BBM reduction, limit tables
- ``cli``:  abcdwaves command-line tool
"""

__version__ = "0.1.0"

from .elliptic import JacobiPoint, complete_k, cn_power_derivative, jacobi_eval
from .errors import (AbcdWavesError, ChainBrokenError, ConstraintError,
                     DomainError, FactorizationError, UnderdeterminedError,
                     UsageError)
from .families import (Branch, ParameterSet, SolutionParams, build_family,
                       build_s43, build_s411, build_s412, build_s421,
                       build_s422, check_physical_constraint, m1_limit)
from .cnexpr import (CnExpression, CoefficientSystem, build_coefficient_system,
                     cn_series, differentiate, multiply)
from .ratpoly import RationalPoly
from .reduction import AnsatzShape, classify_ansatz, verify_termination
from .solver import (BranchSet, HSystemNumeric, NewtonOptions, NewtonResult,
                     multistart, pin_and_square, promote_root,
                     reproduce_nonexistence, solve_newton)
from .verifier import (ConvergenceTable, ResidualReport, bbm_reduction_check,
                       limit_consistency, ode_residual, periodicity_check)

__all__ = [name for name in dir() if not name.startswith("_")]
