"""Exact flat-surface kernel: period coordinates, REL flow, saddle connections."""
from .errors import FlatRelError
from .scalar import Vec2, vec
from .surface import FlatSurface, validate, stratum

__all__ = ["FlatRelError", "FlatSurface", "Vec2", "stratum", "validate", "vec"]
__version__ = "0.1.0"
