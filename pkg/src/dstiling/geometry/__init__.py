"""Geometric realization of tilings: layouts, generators and development."""
from .space import EUCLIDEAN, HYPERBOLIC, SPHERICAL, GeometryError, Isometry
from .layout import (DomainLayout, LayoutError, compute_generators,
                     layout_fundamental_domain, subdivide)
from .develop import (Cover, DevelopmentError, Disc, Rect, WholeSurface, develop,
                      to_model)
from .corona import is_pseudo_convex
