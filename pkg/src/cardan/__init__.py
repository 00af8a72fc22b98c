"""Area and perimeter laws of the random ellipses of the elliptic (Cardan) motion."""
from .area import (
    AreaLaw,
    Regime,
    area_cdf,
    area_expectation_minimum,
    area_moment,
    area_moment_via_density,
    area_moment_via_radial_quadrature,
    area_pdf,
    area_variance,
    area_variance_extrema,
)
from .elliptic import (
    Antiderivative,
    DivergenceError,
    EllipticDomainError,
    antiderivative,
    complete_E,
    complete_EK,
    complete_K,
    deriv_E,
    deriv_K,
    integral_K_over_v4,
    landen_E,
    landen_K,
)
from .geometry import (
    EllipseGeometry,
    MotionConfig,
    MovingPoint,
    TracePoint,
    area_of_point,
    centrodes,
    ellipse_of_point,
    h,
    h_prime,
    perimeter_of_point,
    trace,
)
from .montecarlo import Quantity, SampleBatch, empirical_cdf, empirical_moment, sample
from .perimeter import (
    PerimeterLaw,
    invert_h,
    load_reference_table,
    perimeter_cdf,
    perimeter_expectation,
    perimeter_expectation_unified,
    perimeter_moment_quadrature,
    perimeter_moment_via_cdf,
    perimeter_pdf,
    perimeter_pdf_left_limit,
    perimeter_pdf_right_limit,
    perimeter_series_approx,
)
from .quadrature import QuadratureError, QuadratureSpec, integrate

__version__ = "0.1.0"
