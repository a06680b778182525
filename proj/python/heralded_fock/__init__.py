"""Heralded photon-number state generation from a continuous-wave OPO.

Thin Python layer over the C++ core: correlation kernels, Gaussian covariance
assembly, conditional Wigner functions, temporal-mode optimization and the
low-intensity n-photon formalism.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
