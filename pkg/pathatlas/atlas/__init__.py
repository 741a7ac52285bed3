from .smooth import Region, SmoothMap
from .manifold import BundleAtlas, Manifold, Point
from .catalog import builtin, known
