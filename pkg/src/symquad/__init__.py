"""Exact computations for symplectic quadrics: orbit equations, normal forms,
chamber fans, Schubert calculus on LG(r, 2r) and blow-up intersection numbers."""

from .blowup import AmbientData, SegreData, blowup_power, segre_from_chern, symplectic_tangency_number
from .cones import ChamberFan, ConeQ, DivClass, gkz_decomposition
from .errors import InvariantViolation, SymquadError, ValidationError
from .ledgers import cones_of_models, fano_type, ledger_K, ledger_S
from .lines import ruling_check, verify_x4_pluecker
from .matrix import ProjSymPoint, QMatrix
from .normal_form import NormalFormResult, normal_form
from .poly import MPoly, parse_poly
from .schubert import (
    SchubertElt,
    StrictPartition,
    chern_tangent,
    integrate,
    lg_degree,
    moduli_dimension,
    multiply,
)
from .secant import secant_deg, secant_dim, secant_mult, tangent_cone
from .symplectic import (
    StratumLabel,
    SymplecticMat,
    classify_point,
    orbit_equations,
    random_symplectic,
    rank_gap_sampling,
    stratum_dimension,
    x_dimension,
)

__version__ = "0.1.0"
