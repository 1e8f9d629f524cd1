"""Exact deformation cohomology of Lie algebroids modelled as graded
Lie-Rinehart algebroids over polynomial rings with rational coefficients."""

from .algebroid import *  # noqa: F401,F403
from .defcomplex import *  # noqa: F401,F403
from .deformation import *  # noqa: F401,F403
from .derham import *  # noqa: F401,F403
from .poisson import *  # noqa: F401,F403
from .polybase import *  # noqa: F401,F403
from .ratlin import *  # noqa: F401,F403
from .sequences import *  # noqa: F401,F403

__version__ = "0.1.0"
