"""Coherent states of the Jacobi group on C x D1.

Group law and holomorphic action, reproducing kernel and Kähler geometry,
a first-order differential realization of the algebra, truncated Fock
matrices as an independent oracle, Riccati and geodesic dynamics, and the
Cayley bridge to the upper-half-plane picture.
"""
from .algebra import (
    IDENTITY,
    JacobiCSPoint,
    JacobiElement,
    SU11Matrix,
    Weight,
    cocycle,
    cocycle_alt,
    compose,
    inverse,
    jacobi_act,
    mobius_act,
    multiplier,
    su11_exp,
)
from .config import RunConfig, Tolerances
from .errors import (
    BranchCutWarning,
    BudgetWarning,
    ConvergenceWarning,
    CutoffError,
    DomainError,
    JacobiError,
    WeightError,
)
from .kernel import (
    MetricComponents,
    basis_function,
    inner_product_quadrature,
    kahler_potential_and_metric,
    kernel_closed,
    kernel_truncated,
)

__version__ = "0.1.0"

__all__ = [
    "IDENTITY", "JacobiCSPoint", "JacobiElement", "SU11Matrix", "Weight",
    "cocycle", "cocycle_alt", "compose", "inverse", "jacobi_act", "mobius_act",
    "multiplier", "su11_exp", "RunConfig", "Tolerances", "BranchCutWarning",
    "BudgetWarning", "ConvergenceWarning", "CutoffError", "DomainError",
    "JacobiError", "WeightError", "MetricComponents", "basis_function",
    "inner_product_quadrature", "kahler_potential_and_metric", "kernel_closed",
    "kernel_truncated",
]
