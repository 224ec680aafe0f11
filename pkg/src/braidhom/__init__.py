"""Exact homology of closed singular braids and composition products.

Closed (singular) braid diagrams, HOMFLY-PT polynomials of their classical
closures, Koszul and matrix-factorization complexes over Q[U_1..U_k] with
exact bigraded homology, and verification of the composition-product and
isomorphism identities relating them.
"""

from .diagram import (SingularBraidDiagram, parse_diagram, seifert_data,
                      enumerate_multicycles, enumerate_labelings,
                      subdiagram, strand_rotation)
from .homalg import (DimTable, GradedComplex, KoszulComplex, MFTensor,
                     TwoDifferentialComplex, koszul, tensor,
                     euler_characteristic, equal_up_to_shift)
from .krhfk import (build_CH, build_Cn, build_CF_graded, build_CFn_graded,
                    vertex_algebra, hh_table, hpm_table)
from .multipoly import MultiLaurent, QQ, parse_poly
from .skein import HomflyResult, LaurentFraction, homfly, homfly_prime, \
    sl_n_specialize

__all__ = [
    "SingularBraidDiagram", "parse_diagram", "seifert_data",
    "enumerate_multicycles", "enumerate_labelings", "subdiagram",
    "strand_rotation", "DimTable", "GradedComplex", "KoszulComplex",
    "MFTensor", "TwoDifferentialComplex", "koszul", "tensor",
    "euler_characteristic", "equal_up_to_shift", "build_CH", "build_Cn",
    "build_CF_graded", "build_CFn_graded", "vertex_algebra", "hh_table",
    "hpm_table", "MultiLaurent", "QQ", "parse_poly", "HomflyResult",
    "LaurentFraction", "homfly", "homfly_prime", "sl_n_specialize",
]

__version__ = "0.1.0"
