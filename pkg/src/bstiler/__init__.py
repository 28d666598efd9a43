"""Substitution tilings of the discrete hyperbolic plane, lifted to
subshifts of finite type on the groups BS(1,n).

The package splits into an exact-arithmetic group layer (:mod:`.dyadic`,
:mod:`.group`), a substitution layer (:mod:`.substitution`), the tiling
geometry (:mod:`.tiling`), the cell alphabet and its local rules
(:mod:`.letters`, :mod:`.localrules`), the tiling/configuration codec
(:mod:`.codec`), dynamical probes (:mod:`.analysis`), the hierarchical
A..E layer (:mod:`.robinson`) and SVG/CSV output (:mod:`.render`,
:mod:`.cli`).
"""

from .dyadic import Dyadic
from .group import (
    GroupElement,
    PhiBox,
    box_of,
    cone,
    folner_ratio,
    normalize,
    phi,
    phi_inverse,
    rectangle,
    sheet_mates,
    sheets_of,
)
from .substitution import (
    EigenData,
    Substitution,
    expanding_eigen,
    incidence_matrix,
    is_primitive,
    language,
    desubstitute,
    normalize_unique_size,
)

__all__ = [
    "Dyadic",
    "GroupElement",
    "PhiBox",
    "box_of",
    "cone",
    "folner_ratio",
    "normalize",
    "phi",
    "phi_inverse",
    "rectangle",
    "sheet_mates",
    "sheets_of",
    "Substitution",
    "EigenData",
    "incidence_matrix",
    "is_primitive",
    "expanding_eigen",
    "normalize_unique_size",
    "language",
    "desubstitute",
]
