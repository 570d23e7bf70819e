"""Exact cyclic A-infinity algebras over a truncated Novikov ring, the m^+
functional on Hochschild and cyclic chains, the Clifford torus model in CP^2,
and the three-point disc census on the torus."""

from .algebra_core import (ChainElement, FieldValue, GradedBasis, GradedElement, NovikovScalar,
                           SQRT2, TensorWord)
from .ainfty import AInfinityStructure, ClassIndex, FiltrationMonoid, verify_ainfty, verify_gapped, verify_unit
from .pairing import CyclicPairing, m_plus, m_plus_chain
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "AInfinityStructure", "ChainElement", "ClassIndex", "CyclicPairing", "FieldValue",
    "FiltrationMonoid", "GradedBasis", "GradedElement", "NovikovScalar", "Report", "SQRT2",
    "TensorWord", "m_plus", "m_plus_chain", "verify_ainfty", "verify_gapped", "verify_unit",
]
