"""Orthogonal rational functions on the unit circle with poles on both sides of it."""

from .errors import NumericalError, OrfqError, SpecError
from .extc import INF, GammaSequence
from .measure import Measure, discrete, lebesgue, poisson, random_discrete
from .orf import OrfSystem, build_system
from .porf import Quadrature, quadrature
from .ratfun import RationalFunction

__all__ = [
    "INF", "GammaSequence", "Measure", "discrete", "lebesgue", "poisson", "random_discrete",
    "OrfSystem", "build_system", "Quadrature", "quadrature", "RationalFunction",
    "OrfqError", "SpecError", "NumericalError",
]
__version__ = "0.1.0"
