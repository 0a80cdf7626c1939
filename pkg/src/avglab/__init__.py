"""First-order averaging for a piecewise cubic perturbation of x' = -y(x^2+1), y' = x(x^2+1).

Exact coefficient algebra, the averaged function and its zeros, rigorous
Chebyshev-system certificates, zero realization and direct simulation.
"""
from .averaged import RadialFunction, direct_average, eval_basis, eval_dF, eval_f, eval_F
from .auxiliary import eval_aux
from .certify import SignCertificate, certify_sign, ect_report, replay
from .coefficients import (NuVector, PerturbationCoefficients, ab_from_nu, jacobian_determinant,
                           mu_from_omega, nu_from_ab, nu_from_mu, omega_from_ab, smooth_restriction)
from .integrals import MonomialIntegralId, eval_I, eval_J, quadrature_oracle
from .realization import RealizationRequest, place_zeros, sharpness_suite
from .simulator import SystemInstance, find_limit_cycles, half_trajectory, normalize_scale, return_map
from .wronskian import wronskian_closed, wronskian_numeric
from .zeros import isolate_zeros

__version__ = "0.1.0"

__all__ = [
    "RadialFunction", "direct_average", "eval_basis", "eval_dF", "eval_f", "eval_F", "eval_aux",
    "SignCertificate", "certify_sign", "ect_report", "replay", "NuVector",
    "PerturbationCoefficients", "ab_from_nu", "jacobian_determinant", "mu_from_omega",
    "nu_from_ab", "nu_from_mu", "omega_from_ab", "smooth_restriction", "MonomialIntegralId",
    "eval_I", "eval_J", "quadrature_oracle", "RealizationRequest", "place_zeros",
    "sharpness_suite", "SystemInstance", "find_limit_cycles", "half_trajectory",
    "normalize_scale", "return_map", "wronskian_closed", "wronskian_numeric", "isolate_zeros",
]
