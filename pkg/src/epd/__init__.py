"""Solutions of Euler-Poisson-Darboux Cauchy problems.

Submodules:

* ``specfun``: 2F1, Appell F4, Bessel J/Y, Legendre P/Q, gamma helpers
* ``kernels``: the W, N, K and H solution kernels
* ``solver``: quadrature and series solvers over (t, x) grids
* ``verify``: oracles, residual checks and the verification suites
* ``cli``: the ``epd`` command
"""

from .errors import DomainError, EPDError, LightConeError, NoConvergence, PoleError
from .kernels import EPDParameters, KernelValue, Region

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "EPDError",
    "EPDParameters",
    "KernelValue",
    "LightConeError",
    "NoConvergence",
    "PoleError",
    "Region",
    "__version__",
]
