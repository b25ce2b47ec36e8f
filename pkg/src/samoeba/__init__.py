"""Matrix amoebas for regular functions on GL_n(C).

Exact spherical Newton polytopes, numerical amoeba membership over
U(n) x U(n), Haar-averaged Ronkin functions, Puiseux-matrix valuations via
Smith normal form, and the closed-form tropical limit of a hypersurface.
"""

from .convex import (
    Cone,
    LatticePolytope,
    diag_extremes,
    dominates,
    majorization_contains,
    weight_polytope,
)
from .glpoly import LaurentPoly, ParseError, RegularFunction, parse
from .numerics import (
    MembershipOptions,
    MembershipVerdict,
    RonkinEstimate,
    SLogPoint,
    amoeba_grid,
    haar_unitary,
    membership,
    order_of_component,
    ronkin_mc,
    slog,
)
from .puiseux import (
    PuiseuxMatrix,
    PuiseuxSeries,
    SvalResult,
    parse_series,
    parse_series_matrix,
    slog_limit_report,
    smith_sval,
    trop_hypersurface_member,
    trop_poly,
)
from .scalar import Scalar
from .support import SupportSet, minor_det, qm, snewt, support, trailing_minor, v_lambda
from .tropical import (
    TropicalDescription,
    limit_experiment,
    strop_hypersurface,
    strop_member,
)

__version__ = "0.1.0"

__all__ = [
    "Scalar",
    "RegularFunction",
    "LaurentPoly",
    "parse",
    "ParseError",
    "SupportSet",
    "support",
    "qm",
    "snewt",
    "minor_det",
    "trailing_minor",
    "v_lambda",
    "LatticePolytope",
    "Cone",
    "diag_extremes",
    "dominates",
    "majorization_contains",
    "weight_polytope",
    "SLogPoint",
    "slog",
    "haar_unitary",
    "membership",
    "MembershipOptions",
    "MembershipVerdict",
    "amoeba_grid",
    "ronkin_mc",
    "RonkinEstimate",
    "order_of_component",
    "PuiseuxSeries",
    "PuiseuxMatrix",
    "SvalResult",
    "smith_sval",
    "parse_series",
    "parse_series_matrix",
    "trop_poly",
    "trop_hypersurface_member",
    "slog_limit_report",
    "TropicalDescription",
    "strop_hypersurface",
    "strop_member",
    "limit_experiment",
    "__version__",
]
