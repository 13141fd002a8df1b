"""Exact calculus of tangent-bundle valued differential forms on coordinate charts.

Scalar and vector-valued forms carry polynomial or Fourier coefficients with
exact rational (Gaussian rational on the torus) arithmetic.  On top of them
sit the Froelicher-Nijenhuis and Nijenhuis-Richardson brackets, the trace
maps, the differential ``delta``, the traceless bracket and the resulting
cohomology decomposition.
"""

from .calculus import (
    c_bracket,
    delta,
    embed_j,
    fn_bracket,
    fn_bracket_decomposable,
    induced_fn_omega,
    induced_nr_omega,
    is_traceless,
    nr_bracket,
    project_P,
    s_concomitant,
    trace_c,
    trace_cbar,
    traceless_part,
)
from .coeffs import ChartKind, ChartSpec, CoeffFn, GaussianRational
from .cohomology import (
    DeltaClass,
    class_bracket,
    delta_class,
    derham_class,
    extension_bracket,
    is_closed,
    is_exact,
    primitive,
    sigma,
)
from .dsl import dumps, loads, parse_coeff, parse_diffeo, parse_form, print_form
from .errors import FormError, FormSyntaxError, InvariantBreach
from .forms import Diffeo, ScalarForm, VectorForm, ext_d, identity_vform, lie_theta, wedge

__all__ = [
    "ChartKind", "ChartSpec", "CoeffFn", "GaussianRational",
    "ScalarForm", "VectorForm", "Diffeo", "wedge", "ext_d", "lie_theta", "identity_vform",
    "trace_c", "trace_cbar", "embed_j", "project_P", "traceless_part", "is_traceless", "delta",
    "s_concomitant", "fn_bracket", "fn_bracket_decomposable", "nr_bracket", "c_bracket",
    "induced_fn_omega", "induced_nr_omega",
    "is_closed", "is_exact", "primitive", "derham_class", "DeltaClass", "delta_class",
    "class_bracket", "sigma", "extension_bracket",
    "parse_form", "parse_coeff", "parse_diffeo", "print_form", "dumps", "loads",
    "FormError", "FormSyntaxError", "InvariantBreach",
]
