"""Generalized Nambu mechanics on charts and on S^3 = SU(2)."""
from .exterior import (
    ChartMap,
    FormField,
    KForm,
    ScalarField,
    VectorField,
    exterior_derivative,
    interior,
    lie_bracket,
    lie_derivative_form,
    pullback,
    wedge,
)
from .lie_su2 import Spinor, Versor
from .nambu_core import (
    HamiltonianPair,
    NambuChart,
    bracket_2forms,
    bracket_closed_shortcut,
    flat,
    nambu_vector_field,
    sharp,
)

__version__ = "0.1.0"
