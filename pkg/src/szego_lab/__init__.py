"""Numerical laboratory for Szego kernels, Szego metrics and their geodesics.

Modules
-------
domains      unit ball, annulus and Fefferman-type model domains
kernels      Szego kernels (ball closed form, annulus Laurent series, models)
weierstrass  Weierstrass elliptic function for the annulus closed form
metric       metric tensors, Levi-matrix quantities, Caratheodory comparison
geodesics    geodesic flow and the second derivative of rho along geodesics
experiments  closed geodesics, boundary repulsion, rate fits, classification
cli          command-line front end
"""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .domains import Annulus, Ball, FeffermanModel, ball_model, load_domain, synthetic_model
from .errors import ModelValidityError, NumericalError, PreconditionError

__all__ = ["Annulus", "Ball", "FeffermanModel", "ball_model", "load_domain", "synthetic_model",
           "ModelValidityError", "NumericalError", "PreconditionError", "__version__"]
