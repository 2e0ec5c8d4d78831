"""Exact computations with measuring coalgebras, comodules, connections and cocycles."""

__version__ = "0.1.0"

from .exact import FreeVector, LinMap, Span, kernel, rank
from .verdict import Verdict
from .band import BandOperator, DivergentTrace, Poly, tau_trace
from .coalgebra import (Coalgebra, Comodule, check_coalgebra_axioms, check_comodule_axioms,
                        dual_action, fd_closure, restrict_comodule)
from .measuring import (Algebra, MeasuringCoalgebra, MeasuringComodule, build_inner_comodule,
                        build_standard_coalgebra, check_measures_coalgebra, check_measures_comodule)
from .connections import (KoszulData, MultiPoly, check_loose_connection, check_module_map, curvature,
                          make_koszul_connection)
from .central_extensions import cocycle, killing_form, sl2
from .dual_comodules import (FiniteGroup, double_coset_common_transversal, fd_delta, fd_evaluate,
                             fd_from_recurrence, locally_finite_closure, quasi_normal_witness,
                             symmetric_group)
from .positive_energy import FockModule, check_level, restriction_energy_check, straighten_word

__all__ = [
    "__version__",
    "FreeVector",
    "LinMap",
    "Span",
    "kernel",
    "rank",
    "Verdict",
    "BandOperator",
    "DivergentTrace",
    "Poly",
    "tau_trace",
    "Coalgebra",
    "Comodule",
    "check_coalgebra_axioms",
    "check_comodule_axioms",
    "dual_action",
    "fd_closure",
    "restrict_comodule",
    "Algebra",
    "MeasuringCoalgebra",
    "MeasuringComodule",
    "build_inner_comodule",
    "build_standard_coalgebra",
    "check_measures_coalgebra",
    "check_measures_comodule",
    "KoszulData",
    "MultiPoly",
    "check_loose_connection",
    "check_module_map",
    "curvature",
    "make_koszul_connection",
    "cocycle",
    "killing_form",
    "sl2",
    "FiniteGroup",
    "double_coset_common_transversal",
    "fd_delta",
    "fd_evaluate",
    "fd_from_recurrence",
    "locally_finite_closure",
    "quasi_normal_witness",
    "symmetric_group",
    "FockModule",
    "check_level",
    "restriction_energy_check",
    "straighten_word",
]
