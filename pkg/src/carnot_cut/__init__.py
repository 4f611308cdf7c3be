"""Exact subRiemannian geometry of the free step-two Carnot group with three generators.

Points are ``(x, t)`` with ``x`` in R^3 and ``t`` a bivector, stored either
in the wedge model ``(t12, t13, t23)`` or in the cross model where ``t`` is
an ordinary vector.  The package gives closed-form extremals, the cut locus
of the origin with its cut times and distances, a Hamiltonian exponential
map, and a shooting solver for distances off the cut locus.
"""

__version__ = "0.1.0"

from .algebra import CrossPoint, GroupPoint, from_cross, group_mul, to_cross, wedge
from .cutlocus import CutPoint, CutTime, cut_distance, cut_point, is_cut, t_cut
from .geodesics import AdmissibleTriple, ExtremalParams, endpoint_F, endpoint_G, extremal_point
from .hamiltonian import Covector, T_cut, exp_map, exp_map_ode
from .kernels import BACKEND
from .scalars import P, P_inv, Q, Q_inv, R, S, U, V, W, phi_k
from .solver import ShootingFailure, ShootingResult, SolverConfig, distance

__all__ = [
    "AdmissibleTriple", "BACKEND", "Covector", "CrossPoint", "CutPoint", "CutTime", "ExtremalParams",
    "GroupPoint", "P", "P_inv", "Q", "Q_inv", "R", "S", "ShootingFailure", "ShootingResult",
    "SolverConfig", "T_cut", "U", "V", "W", "cut_distance", "cut_point", "distance", "endpoint_F",
    "endpoint_G", "exp_map", "exp_map_ode", "extremal_point", "from_cross", "group_mul", "is_cut",
    "phi_k", "t_cut", "to_cross", "wedge",
]
