"""Exact computations for lattice Heisenberg vertex algebras.

Truncated Laurent series over nilpotent extensions of Q, the Contou-Carrere
symbol, lattices with sign cocycles, Fock spaces and vertex operators,
irreducible modules, and spectral supports of twisted modules.
"""

__version__ = "0.1.0"

from .ccsymbol import cc_symbol, commutator_pairing, decompose_unit, tame_symbol
from .errors import (
    CocycleMismatch,
    ConfigError,
    DegenerateLatticeError,
    DomainError,
    LatvaError,
    NotEigenvectorError,
    NotInvertibleError,
    RingMismatchError,
    TruncationError,
)
from .fock import FockSpace, FockVector, apply_h, apply_shift, sugawara_L
from .laurent import (
    EXACT,
    QQ,
    ScalarRing,
    TruncatedLaurentSeries,
    dlog,
    exp0,
    log1,
    parse_series,
    residue,
    residue_pairing,
    series_inv,
)
from .lattice import (
    LatticeLevel,
    SignCocycle,
    baer_sum,
    build_cocycle,
    dual_quotient,
    smith_normal_form,
)
from .repmod import build_module, h0_spectrum, module_classes, nilpotency_certificate
from .spectral import (
    ConnectionJet,
    SpectralPoint,
    apply_gauge,
    jet_class,
    support_of_module,
    twist_action,
)
from .vertexop import (
    VertexExpansion,
    cocycle_roundtrip,
    locality_residual,
    modified_vertex_apply,
    ode_residual,
    ope_leading,
    vertex_apply,
)

__all__ = [name for name in dir() if not name.startswith("_")]
