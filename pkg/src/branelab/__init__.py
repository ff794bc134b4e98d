"""Variational and covariant-phase-space toolkit for embedded worldvolumes.

Induced geometry from embeddings, normal deformation calculus,
curvature-dependent worldvolume actions, symplectic currents and canonical
variables for string systems with topological terms.
"""

from . import backgrounds  # noqa: F401
from . import conventions  # noqa: F401
from . import deformation  # noqa: F401
from . import embeddings  # noqa: F401
from . import errors  # noqa: F401
from . import jets  # noqa: F401
from . import models  # noqa: F401
from . import strings_gb  # noqa: F401
from . import symplectic  # noqa: F401

__all__ = [
    "backgrounds",
    "conventions",
    "deformation",
    "embeddings",
    "errors",
    "jets",
    "models",
    "strings_gb",
    "symplectic",
]
__version__ = "0.1.0"
