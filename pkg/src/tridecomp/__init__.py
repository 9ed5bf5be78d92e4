"""Irredundant triangular decomposition of algebraic sets over Q."""
from .chains import RegularChainRecord, TriangularSet, make_chain, prem_chain, validate_chain
from .decompose import (
    DecompositionResult,
    EquidimPart,
    Overrides,
    RandomConfig,
    SystemInput,
    main_decompose,
    success_probability_report,
)
from .lifting import rational_reconstruction, triangular_zero_dim
from .poly import MultiPoly, VarOrder, gcd, normalize, parse_poly, prem, pseudo_divide
from .resultants import canny_pres, macaulay_resultant, sylvester_resultant
from .sysfile import dump_result, load_result, parse_system_file, print_system_file, result_from_json
from .verify import VerificationReport, verify_cover, verify_degrees, verify_irredundant, verify_result
from .zerodim import EquiprojComponent, FiberSystem, equiprojectable_decomposition, numeric_fiber_oracle, regularize

__version__ = "0.1.0"
